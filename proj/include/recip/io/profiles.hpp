/*
 * profiles.hpp
 *
 * Profile file: user, statuses_count, favourites_count, followers_count,
 * friends_count, created_at (epoch seconds). An empty cell is a missing field.
 */

#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>

#include "recip/activity_metrics.hpp"
#include "recip/graph_core.hpp"
#include "recip/io/tsv.hpp"

namespace recip::io {

struct ProfileReadResult {
  std::map<UserId, ProfileFields> profiles;
  std::vector<RowError> errors;
};

inline ProfileReadResult read_profiles(std::istream& in, std::string_view source = "profiles",
                                       MalformedRowPolicy policy = MalformedRowPolicy::SkipAndLog) {
  ProfileReadResult out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = chomp(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto f = split_tabs(line);
    std::string reason;
    ProfileFields p;
    auto opt_u64 = [&](std::string_view cell, std::optional<std::uint64_t>& dst, const char* name) {
      if (cell.empty()) return;
      std::uint64_t v = 0;
      if (!parse_number(cell, v)) reason = std::string("bad ") + name;
      else dst = v;
    };
    std::uint64_t id = 0;
    if (f.size() != 6) {
      reason = "expected 6 tab-separated fields";
    } else if (!parse_number(f[0], id)) {
      reason = "bad user id";
    } else {
      p.user = UserId{id};
      opt_u64(f[1], p.statuses_count, "statuses_count");
      opt_u64(f[2], p.favourites_count, "favourites_count");
      opt_u64(f[3], p.followers_count, "followers_count");
      opt_u64(f[4], p.friends_count, "friends_count");
      if (!f[5].empty()) {
        std::int64_t t = 0;
        if (!parse_number(f[5], t)) reason = "bad created_at";
        else p.created_at = t;
      }
    }
    if (reason.empty() && out.profiles.contains(p.user)) reason = "duplicate profile";
    if (!reason.empty()) {
      if (policy == MalformedRowPolicy::Abort)
        throw DataError(std::string(source) + ": line " + std::to_string(line_no) + ": " + reason);
      out.errors.push_back({line_no, std::string(line), reason});
      continue;
    }
    out.profiles.emplace(p.user, p);
  }
  return out;
}

inline ProfileReadResult read_profile_file(const std::string& path,
                                           MalformedRowPolicy policy = MalformedRowPolicy::SkipAndLog) {
  auto in = open_input(path);
  return read_profiles(in, path, policy);
}

inline void write_profiles(std::ostream& os, const std::map<UserId, ProfileFields>& profiles) {
  os << "#user\tstatuses_count\tfavourites_count\tfollowers_count\tfriends_count\tcreated_at\n";
  auto cell = [&](const auto& v) {
    if (v) os << *v;
  };
  for (const auto& [id, p] : profiles) {
    os << id.value << '\t';
    cell(p.statuses_count);
    os << '\t';
    cell(p.favourites_count);
    os << '\t';
    cell(p.followers_count);
    os << '\t';
    cell(p.friends_count);
    os << '\t';
    cell(p.created_at);
    os << '\n';
  }
}

}  // namespace recip::io
