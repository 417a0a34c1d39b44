/*
 * stages.hpp
 *
 * Pipeline stages shared by the individual CLI subcommands and the full
 * report run. Each stage takes already-loaded inputs and returns values; file
 * handling stays with the caller.
 */

#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "recip/activity_metrics.hpp"
#include "recip/flow_matrix.hpp"
#include "recip/graph_core.hpp"
#include "recip/io/edges.hpp"
#include "recip/io/profiles.hpp"
#include "recip/io/tables.hpp"
#include "recip/io/timeline.hpp"
#include "recip/reciprocity_map.hpp"
#include "recip/stats_tests.hpp"
#include "recip/text.hpp"
#include "recip/vocab_extract.hpp"

namespace recip::pipeline {

struct LoadedEdges {
  EdgeStore store;
  std::vector<std::pair<std::string, IngestReport>> reports;
};

inline LoadedEdges load_edges(std::span<const std::string> follows, std::span<const std::string> followed_by,
                              const std::string& focal_path, MalformedRowPolicy policy) {
  LoadedEdges out;
  std::vector<EdgeStore> parts;
  IngestOptions opts;
  opts.policy = policy;
  for (const auto& p : follows) {
    auto r = io::read_edge_file(p, EdgeDirection::Follows, opts);
    parts.push_back(std::move(r.store));
    out.reports.emplace_back(p, std::move(r.report));
  }
  for (const auto& p : followed_by) {
    auto r = io::read_edge_file(p, EdgeDirection::FollowedBy, opts);
    parts.push_back(std::move(r.store));
    out.reports.emplace_back(p, std::move(r.report));
  }
  out.store = parts.size() == 1 ? std::move(parts.front()) : merge_edge_sets(parts);
  if (!focal_path.empty()) out.store = std::move(out.store).with_focal(io::read_user_id_file(focal_path));
  return out;
}

/// Focal users when the store has any, otherwise every endpoint user.
inline std::vector<UserId> analysis_population(const EdgeStore& store) {
  if (!store.focal_users().empty()) return {store.focal_users().begin(), store.focal_users().end()};
  return store.endpoint_users();
}

/// Drops users whose k_in + k_out is below the minimum.
inline std::vector<DegreeSummary> filter_min_degree(std::vector<DegreeSummary> rows, std::uint64_t min_total) {
  if (min_total == 0) return rows;
  std::erase_if(rows, [&](const DegreeSummary& d) { return d.k_in + d.k_out < min_total; });
  return rows;
}

inline std::vector<io::ClassifiedUser> classify_points(std::span<const std::pair<UserId, ReciprocityPoint>> points,
                                                       const ClassifierConfig& cfg) {
  std::vector<io::ClassifiedUser> out;
  out.reserve(points.size());
  for (const auto& [user, p] : points) out.push_back({user, p, classify_archetype(p, cfg)});
  return out;
}

inline std::vector<io::ClassifiedUser> classify_summaries(std::span<const DegreeSummary> rows,
                                                          const ClassifierConfig& cfg) {
  std::vector<io::ClassifiedUser> out;
  out.reserve(rows.size());
  for (const auto& d : rows) {
    const auto p = compute_reciprocity(d);
    out.push_back({d.user, p, classify_archetype(p, cfg)});
  }
  return out;
}

inline std::unordered_map<UserId, Archetype> label_map(std::span<const io::ClassifiedUser> users) {
  std::unordered_map<UserId, Archetype> m;
  m.reserve(users.size());
  for (const auto& c : users) m.emplace(c.user, c.label);
  return m;
}

// ----------------------------------------------------------------- activity

struct ActivityInputs {
  std::map<UserId, ProfileFields> profiles;
  std::map<UserId, std::vector<PostRecord>> timelines;
  std::size_t profile_errors{0};
  std::size_t timeline_errors{0};
};

inline ActivityInputs load_activity(const std::string& profiles_path, const std::string& timeline_path,
                                    MalformedRowPolicy policy, KindPrecedence precedence, std::size_t cap) {
  ActivityInputs a;
  if (!profiles_path.empty()) {
    auto r = io::read_profile_file(profiles_path, policy);
    a.profiles = std::move(r.profiles);
    a.profile_errors = r.errors.size();
  }
  if (!timeline_path.empty()) {
    io::TimelineOptions opts;
    opts.policy = policy;
    opts.precedence = precedence;
    auto r = io::read_timeline_file(timeline_path, opts);
    a.timeline_errors = r.errors.size();
    a.timelines = group_timelines(std::move(r.posts), cap);
  }
  return a;
}

struct PropertyBuild {
  std::vector<UserPropertyRecord> records;  // ordered by user
  std::size_t without_profile{0};
  std::size_t incomplete_profile{0};
};

/// Records for users that have a complete profile.
inline PropertyBuild build_properties(std::span<const UserId> users, const ActivityInputs& in, std::int64_t cutoff) {
  PropertyBuild out;
  static const std::vector<PostRecord> kNoPosts;
  for (const auto& u : users) {
    const auto prof = in.profiles.find(u);
    if (prof == in.profiles.end()) {
      ++out.without_profile;
      continue;
    }
    const auto tl = in.timelines.find(u);
    const auto& posts = tl == in.timelines.end() ? kNoPosts : tl->second;
    try {
      out.records.push_back(build_property_record(prof->second, posts, cutoff));
    } catch (const MissingProfileFields&) {
      ++out.incomplete_profile;
    }
  }
  return out;
}

// --------------------------------------------------------------------- grid

inline GridSummary property_grid(std::span<const io::ClassifiedUser> users,
                                 const std::map<UserId, io::PropertyValues>& props, std::size_t property,
                                 std::size_t resolution) {
  std::vector<GridSample> samples;
  samples.reserve(users.size());
  for (const auto& c : users) {
    const auto it = props.find(c.user);
    samples.push_back({c.point, it == props.end() ? std::nullopt : it->second[property]});
  }
  return grid_aggregate(samples, resolution, GridStatistic::Median);
}

inline GridSummary density_grid(std::span<const io::ClassifiedUser> users, std::size_t resolution) {
  std::vector<ReciprocityPoint> pts;
  pts.reserve(users.size());
  for (const auto& c : users) pts.push_back(c.point);
  return density_map(pts, resolution);
}

inline std::map<UserId, io::PropertyValues> property_table(std::span<const UserPropertyRecord> records) {
  std::map<UserId, io::PropertyValues> out;
  for (const auto& r : records) out.emplace(r.user, io::property_values(r));
  return out;
}

// -------------------------------------------------------------------- stats

struct GroupLetterValues {
  std::string group;
  std::size_t n{0};
  LetterValueSummary summary;
};

struct PropertyAnalysis {
  io::PropertyTests tests;
  std::vector<GroupLetterValues> letter_values;
};

/// Groups users by archetype (all five labels, in fixed order) on one
/// property and runs the omnibus test, Conover pairs and Holm adjustment.
inline PropertyAnalysis analyze_property(std::span<const io::ClassifiedUser> users,
                                         const std::map<UserId, io::PropertyValues>& props, std::string_view property,
                                         std::size_t min_tail) {
  const auto idx = io::property_index(property);
  std::map<Archetype, std::vector<double>> by_label;
  for (const auto& c : users) {
    const auto it = props.find(c.user);
    if (it == props.end() || !it->second[idx]) continue;
    by_label[c.label].push_back(*it->second[idx]);
  }
  std::vector<SampleGroup> groups;
  for (auto a : kAllArchetypes)
    if (auto it = by_label.find(a); it != by_label.end() && !it->second.empty())
      groups.push_back({std::string(to_string(a)), it->second});

  PropertyAnalysis out;
  out.tests.property = std::string(property);
  LetterValueOptions lv;
  lv.min_tail = min_tail;
  for (const auto& g : groups) out.letter_values.push_back({g.label, g.values.size(), letter_values(g.values, lv)});

  std::size_t n = 0;
  for (const auto& g : groups) n += g.values.size();
  if (groups.size() < 2 || n < 3) {
    out.tests.note = "fewer than two groups or three observations";
    return out;
  }
  try {
    out.tests.omnibus = kruskal_wallis(groups);
  } catch (const DataError& e) {
    out.tests.note = e.what();
    return out;
  }
  if (n > groups.size()) {
    out.tests.pairwise = conover_pairwise(groups, *out.tests.omnibus);
    apply_holm(out.tests.pairwise);
  }
  return out;
}

// -------------------------------------------------------------------- vocab

struct VocabConfig {
  VocabOptions options;
  DocumentFilter filter;
  TextOptions text;
};

inline StopwordSet load_stopwords(const std::string& path) {
  if (path.empty()) return {};
  auto in = io::open_input(path);
  return read_stopwords(in);
}

inline std::map<Archetype, std::vector<ChiSquareResult>> characteristic_words(
    std::span<const io::ClassifiedUser> users, const std::map<UserId, std::vector<PostRecord>>& timelines,
    const StopwordSet& stopwords, const VocabConfig& cfg) {
  const auto roster = label_map(users);
  std::map<UserId, std::vector<PostRecord>> relevant;
  for (const auto& [u, posts] : timelines)
    if (roster.contains(u)) relevant.emplace(u, posts);
  const auto docs = build_user_documents(relevant, stopwords, cfg.filter, cfg.text);
  return top_k_words<Archetype>(docs, roster, kCornerArchetypes, cfg.options);
}

// -------------------------------------------------------------------- flows

inline FlowMatrix<Archetype> archetype_flows(const EdgeStore& store, std::span<const io::ClassifiedUser> users,
                                             bool corners_only) {
  const auto labels = label_map(users);
  if (corners_only) return archetype_flow_counts<Archetype>(store, labels, kCornerArchetypes);
  return archetype_flow_counts<Archetype>(store, labels, kAllArchetypes);
}

}  // namespace recip::pipeline
