/*
 * timeline.hpp
 *
 * Post timelines in two interchangeable encodings.
 *
 * TSV, one post per line:
 *   author  created_at  kind  retweeted_count  liked_count  source_created_at  lang  text
 * `kind` is original / retweet / reply / quote, or several markers joined by
 * '+' (e.g. "retweet+reply") which resolve by precedence. Empty
 * source_created_at means absent. `text` uses the backslash escapes of tsv.hpp.
 *
 * JSONL, one object per line with the same keys; `kind` may be a string
 * (same syntax) or an array of markers, `source_created_at` may be null.
 */

#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "recip/activity_metrics.hpp"
#include "recip/graph_core.hpp"
#include "recip/io/tsv.hpp"

namespace recip::io {

struct TimelineOptions {
  MalformedRowPolicy policy{MalformedRowPolicy::SkipAndLog};
  KindPrecedence precedence{KindPrecedence::ReplyOverQuote};
};

struct TimelineReadResult {
  std::vector<PostRecord> posts;
  std::vector<RowError> errors;
};

namespace detail {

inline bool add_marker(std::string_view m, KindMarkers& k, bool& original) {
  if (m == "retweet") k.retweet = true;
  else if (m == "reply") k.reply = true;
  else if (m == "quote") k.quote = true;
  else if (m == "original") original = true;
  else return false;
  return true;
}

inline std::optional<PostKind> parse_kind(std::string_view s, KindPrecedence order) {
  KindMarkers k;
  bool original = false;
  if (s.empty()) return std::nullopt;
  std::size_t start = 0;
  while (true) {
    const auto plus = s.find('+', start);
    const auto part = s.substr(start, plus == std::string_view::npos ? std::string_view::npos : plus - start);
    if (!add_marker(part, k, original)) return std::nullopt;
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return resolve_kind(k, order);
}

template <typename LineParser>
TimelineReadResult read_lines(std::istream& in, const TimelineOptions& opts, LineParser&& parse) {
  TimelineReadResult out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = chomp(raw);
    if (line.empty() || line.front() == '#') continue;
    std::string reason;
    PostRecord post;
    try {
      post = parse(line);
      validate(post);
    } catch (const std::exception& e) {
      reason = e.what();
    }
    if (!reason.empty()) {
      if (opts.policy == MalformedRowPolicy::Abort)
        throw DataError("timeline line " + std::to_string(line_no) + ": " + reason);
      out.errors.push_back({line_no, std::string(line), reason});
      continue;
    }
    out.posts.push_back(std::move(post));
  }
  return out;
}

}  // namespace detail

inline TimelineReadResult read_timeline_tsv(std::istream& in, const TimelineOptions& opts = {}) {
  return detail::read_lines(in, opts, [&](std::string_view line) {
    const auto f = split_tabs(line);
    if (f.size() != 8) throw DataError("expected 8 tab-separated fields, got " + std::to_string(f.size()));
    PostRecord p;
    std::uint64_t author = 0;
    if (!parse_number(f[0], author)) throw DataError("bad author id");
    p.author = UserId{author};
    if (!parse_number(f[1], p.created_at)) throw DataError("bad created_at");
    const auto kind = detail::parse_kind(f[2], opts.precedence);
    if (!kind) throw DataError("bad kind '" + std::string(f[2]) + "'");
    p.kind = *kind;
    if (!parse_number(f[3], p.retweeted_count)) throw DataError("bad retweeted_count");
    if (!parse_number(f[4], p.liked_count)) throw DataError("bad liked_count");
    if (!f[5].empty()) {
      std::int64_t src = 0;
      if (!parse_number(f[5], src)) throw DataError("bad source_created_at");
      p.source_created_at = src;
    }
    p.lang = std::string(f[6]);
    auto text = unescape_field(f[7]);
    if (!text) throw DataError("bad escape in text");
    p.text = std::move(*text);
    return p;
  });
}

inline TimelineReadResult read_timeline_jsonl(std::istream& in, const TimelineOptions& opts = {}) {
  using nlohmann::json;
  return detail::read_lines(in, opts, [&](std::string_view line) {
    const json j = json::parse(line);
    if (!j.is_object()) throw DataError("line is not a JSON object");
    PostRecord p;
    p.author = UserId{j.at("author").get<std::uint64_t>()};
    p.created_at = j.at("created_at").get<std::int64_t>();
    const auto& kind = j.at("kind");
    std::optional<PostKind> resolved;
    if (kind.is_string()) {
      resolved = detail::parse_kind(kind.get<std::string>(), opts.precedence);
    } else if (kind.is_array()) {
      KindMarkers k;
      bool original = false, ok = !kind.empty();
      for (const auto& m : kind) ok = ok && m.is_string() && detail::add_marker(m.get<std::string>(), k, original);
      if (ok) resolved = resolve_kind(k, opts.precedence);
    }
    if (!resolved) throw DataError("bad kind " + kind.dump());
    p.kind = *resolved;
    p.retweeted_count = j.at("retweeted_count").get<std::uint64_t>();
    p.liked_count = j.at("liked_count").get<std::uint64_t>();
    if (auto it = j.find("source_created_at"); it != j.end() && !it->is_null())
      p.source_created_at = it->get<std::int64_t>();
    p.lang = j.value("lang", std::string{});
    p.text = j.value("text", std::string{});
    return p;
  });
}

/// Picks the reader from the extension: ".jsonl" / ".ndjson" or TSV.
inline TimelineReadResult read_timeline_file(const std::string& path, const TimelineOptions& opts = {}) {
  auto in = open_input(path);
  const auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  try {
    if (ends_with(".jsonl") || ends_with(".ndjson")) return read_timeline_jsonl(in, opts);
    return read_timeline_tsv(in, opts);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

inline void write_timeline_tsv(std::ostream& os, const std::vector<PostRecord>& posts) {
  os << "#author\tcreated_at\tkind\tretweeted_count\tliked_count\tsource_created_at\tlang\ttext\n";
  for (const auto& p : posts) {
    os << p.author.value << '\t' << p.created_at << '\t' << to_string(p.kind) << '\t' << p.retweeted_count << '\t'
       << p.liked_count << '\t';
    if (p.source_created_at) os << *p.source_created_at;
    os << '\t' << p.lang << '\t' << escape_field(p.text) << '\n';
  }
}

inline void write_timeline_jsonl(std::ostream& os, const std::vector<PostRecord>& posts) {
  using nlohmann::json;
  for (const auto& p : posts) {
    json j = {{"author", p.author.value},
              {"created_at", p.created_at},
              {"kind", std::string(to_string(p.kind))},
              {"retweeted_count", p.retweeted_count},
              {"liked_count", p.liked_count},
              {"source_created_at", p.source_created_at ? json(*p.source_created_at) : json(nullptr)},
              {"lang", p.lang},
              {"text", p.text}};
    os << j.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
}

}  // namespace recip::io
