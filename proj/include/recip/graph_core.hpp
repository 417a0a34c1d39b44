/*
 * graph_core.hpp
 *
 * Directed follow-graph storage: ingestion of flat edge rows, set union of
 * stores, per-user degree / mutual-edge counts and the global reciprocity
 * ratio.
 *
 * An EdgeStore keeps its edges as one sorted, duplicate-free vector keyed by
 * (src, dst). Membership is a binary search; out-neighbourhoods are
 * contiguous runs. Ingestion sorts bounded chunks and merges them, so peak
 * extra memory is one chunk plus the merge output.
 */

#pragma once

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstddef>
#include <functional>
#include <cstdint>
#include <istream>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "recip/parallel.hpp"
#include "recip/types.hpp"

namespace recip {

/// src follows dst.
struct DirectedEdge {
  UserId src;
  UserId dst;

  friend constexpr auto operator<=>(const DirectedEdge&, const DirectedEdge&) = default;
};

/// How rows of an edge file are to be read.
enum class EdgeDirection {
  Follows,     // row (user, peer): user follows peer
  FollowedBy,  // row (user, peer): peer follows user
};

enum class MalformedRowPolicy { SkipAndLog, Abort };

struct DegreeSummary {
  UserId user;
  std::uint64_t k_in{0};
  std::uint64_t k_out{0};
  std::uint64_t k_mutual{0};

  friend bool operator==(const DegreeSummary&, const DegreeSummary&) = default;
};

namespace detail {

inline void sort_unique(std::vector<DirectedEdge>& edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

inline void sort_unique(std::vector<UserId>& ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

inline std::vector<DirectedEdge> union_sorted(std::span<const DirectedEdge> a,
                                              std::span<const DirectedEdge> b) {
  std::vector<DirectedEdge> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Balanced pairwise union of sorted runs.
inline std::vector<DirectedEdge> union_all(std::vector<std::vector<DirectedEdge>> runs) {
  if (runs.empty()) return {};
  while (runs.size() > 1) {
    std::vector<std::vector<DirectedEdge>> next;
    next.reserve((runs.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < runs.size(); i += 2) {
      next.push_back(union_sorted(runs[i], runs[i + 1]));
      std::vector<DirectedEdge>().swap(runs[i]);
      std::vector<DirectedEdge>().swap(runs[i + 1]);
    }
    if (runs.size() % 2 == 1) next.push_back(std::move(runs.back()));
    runs = std::move(next);
  }
  return std::move(runs.front());
}

}  // namespace detail

/// Immutable, deduplicated set of directed edges plus the focal-user set.
class EdgeStore {
 public:
  EdgeStore() = default;

  /// Sorts and deduplicates. Self-edges are rejected with InvalidArgument.
  static EdgeStore from_edges(std::vector<DirectedEdge> edges, std::vector<UserId> focal = {}) {
    for (const auto& e : edges)
      if (e.src == e.dst)
        throw InvalidArgument("self-edge for user " + std::to_string(e.src.value));
    detail::sort_unique(edges);
    detail::sort_unique(focal);
    return EdgeStore(std::move(edges), std::move(focal));
  }

  /// Adopts an already sorted, duplicate-free edge vector in O(E).
  static EdgeStore from_sorted_unique(std::vector<DirectedEdge> edges, std::vector<UserId> focal = {}) {
    if (std::adjacent_find(edges.begin(), edges.end(), std::greater_equal<>{}) != edges.end())
      throw InvalidArgument("edges are not strictly sorted");
    for (const auto& e : edges)
      if (e.src == e.dst)
        throw InvalidArgument("self-edge for user " + std::to_string(e.src.value));
    detail::sort_unique(focal);
    return EdgeStore(std::move(edges), std::move(focal));
  }

  /// Same edges with the focal set replaced.
  EdgeStore with_focal(std::vector<UserId> focal) const& {
    detail::sort_unique(focal);
    return EdgeStore(edges_, std::move(focal));
  }
  EdgeStore with_focal(std::vector<UserId> focal) && {
    detail::sort_unique(focal);
    return EdgeStore(std::move(edges_), std::move(focal));
  }

  std::size_t size() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return edges_.empty(); }

  std::span<const DirectedEdge> edges() const noexcept { return edges_; }
  std::span<const UserId> focal_users() const noexcept { return focal_; }

  bool contains(UserId src, UserId dst) const {
    return std::binary_search(edges_.begin(), edges_.end(), DirectedEdge{src, dst});
  }

  bool is_focal(UserId u) const { return std::binary_search(focal_.begin(), focal_.end(), u); }

  /// Edges whose src is u, sorted by dst.
  std::span<const DirectedEdge> out_edges(UserId u) const {
    auto lo = std::lower_bound(edges_.begin(), edges_.end(), DirectedEdge{u, UserId{0}});
    auto hi = std::lower_bound(lo, edges_.end(), u,
                               [](const DirectedEdge& e, UserId v) { return e.src <= v; });
    return {lo, hi};
  }

  /// Every user appearing as src or dst, sorted.
  std::vector<UserId> endpoint_users() const {
    std::vector<UserId> ids;
    ids.reserve(edges_.size());
    for (const auto& e : edges_) {
      ids.push_back(e.src);
      ids.push_back(e.dst);
    }
    detail::sort_unique(ids);
    return ids;
  }

  /// Every edge reversed; focal set preserved.
  EdgeStore transposed() const {
    std::vector<DirectedEdge> rev;
    rev.reserve(edges_.size());
    for (const auto& e : edges_) rev.push_back({e.dst, e.src});
    std::sort(rev.begin(), rev.end());
    return EdgeStore(std::move(rev), focal_);
  }

  friend bool operator==(const EdgeStore&, const EdgeStore&) = default;

 private:
  EdgeStore(std::vector<DirectedEdge> edges, std::vector<UserId> focal)
      : edges_(std::move(edges)), focal_(std::move(focal)) {}

  friend EdgeStore merge_edge_sets(std::span<const EdgeStore> stores);

  std::vector<DirectedEdge> edges_;
  std::vector<UserId> focal_;
};

/// Union of edge sets and focal sets.
inline EdgeStore merge_edge_sets(std::span<const EdgeStore> stores) {
  std::vector<std::vector<DirectedEdge>> runs;
  std::vector<UserId> focal;
  runs.reserve(stores.size());
  for (const auto& s : stores) {
    runs.emplace_back(s.edges_.begin(), s.edges_.end());
    focal.insert(focal.end(), s.focal_.begin(), s.focal_.end());
  }
  detail::sort_unique(focal);
  return EdgeStore(detail::union_all(std::move(runs)), std::move(focal));
}

inline EdgeStore merge_edge_sets(const EdgeStore& a, const EdgeStore& b) {
  const EdgeStore both[] = {a, b};
  return merge_edge_sets(std::span<const EdgeStore>(both));
}

// ---------------------------------------------------------------- ingestion

struct RowError {
  std::size_t line{0};
  std::string text;
  std::string reason;
};

struct IngestOptions {
  MalformedRowPolicy policy{MalformedRowPolicy::SkipAndLog};
  /// Rows buffered before a chunk is sorted and deduplicated.
  std::size_t chunk_edges{std::size_t{1} << 22};
};

struct IngestReport {
  std::size_t rows{0};         // data rows seen (comments and blanks excluded)
  std::size_t accepted{0};     // rows that became an edge (before dedup)
  std::size_t self_edges{0};
  std::size_t duplicates{0};   // accepted rows collapsed by dedup
  std::vector<RowError> errors;
};

struct IngestResult {
  EdgeStore store;
  IngestReport report;
};

namespace detail {

inline bool parse_u64(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

inline std::string_view chomp(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
  return line;
}

}  // namespace detail

/// Reads `src<TAB>dst` rows (or `user<TAB>follower` when direction is
/// FollowedBy). Lines starting with '#' and blank lines are ignored.
inline IngestResult ingest_edges(std::istream& in, EdgeDirection direction,
                                 const IngestOptions& opts = {}) {
  IngestReport report;
  std::vector<std::vector<DirectedEdge>> runs;
  std::vector<DirectedEdge> buffer;
  const std::size_t chunk = std::max<std::size_t>(opts.chunk_edges, 1);
  buffer.reserve(std::min<std::size_t>(chunk, 1 << 16));

  auto flush = [&] {
    if (buffer.empty()) return;
    detail::sort_unique(buffer);
    runs.push_back(std::move(buffer));
    buffer = {};
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = detail::chomp(raw);
    if (line.empty() || line.front() == '#') continue;
    ++report.rows;

    const auto tab = line.find('\t');
    std::uint64_t a = 0, b = 0;
    const char* reason = nullptr;
    if (tab == std::string_view::npos)
      reason = "expected two tab-separated fields";
    else if (line.find('\t', tab + 1) != std::string_view::npos)
      reason = "too many fields";
    else if (!detail::parse_u64(line.substr(0, tab), a) || !detail::parse_u64(line.substr(tab + 1), b))
      reason = "id is not a decimal 64-bit integer";

    if (reason) {
      if (opts.policy == MalformedRowPolicy::Abort)
        throw DataError("line " + std::to_string(line_no) + ": " + reason);
      report.errors.push_back({line_no, std::string(line), reason});
      continue;
    }
    if (a == b) {
      ++report.self_edges;
      continue;
    }
    ++report.accepted;
    if (direction == EdgeDirection::Follows)
      buffer.push_back({UserId{a}, UserId{b}});
    else
      buffer.push_back({UserId{b}, UserId{a}});
    if (buffer.size() >= chunk) flush();
  }
  flush();

  auto edges = detail::union_all(std::move(runs));
  report.duplicates = report.accepted - edges.size();
  return {EdgeStore::from_sorted_unique(std::move(edges)), std::move(report)};
}

// ----------------------------------------------------------------- degrees

/// Forward and reverse sorted edge arrays for O(log E) degree queries.
class DegreeIndex {
 public:
  explicit DegreeIndex(const EdgeStore& store) : store_(&store) {
    reverse_.reserve(store.size());
    for (const auto& e : store.edges()) reverse_.push_back({e.dst, e.src});
    std::sort(reverse_.begin(), reverse_.end());
  }

  DegreeSummary summary(UserId u) const {
    const auto out = store_->out_edges(u);
    auto lo = std::lower_bound(reverse_.begin(), reverse_.end(), DirectedEdge{u, UserId{0}});
    auto hi = std::lower_bound(lo, reverse_.end(), u,
                               [](const DirectedEdge& e, UserId v) { return e.src <= v; });

    // Both runs are sorted by the peer id: merge-count the common peers.
    std::uint64_t mutual = 0;
    auto o = out.begin();
    auto i = lo;
    while (o != out.end() && i != hi) {
      if (o->dst < i->dst) {
        ++o;
      } else if (i->dst < o->dst) {
        ++i;
      } else {
        ++mutual;
        ++o;
        ++i;
      }
    }
    return {u, static_cast<std::uint64_t>(hi - lo), out.size(), mutual};
  }

 private:
  const EdgeStore* store_;
  std::vector<DirectedEdge> reverse_;  // (dst, src) pairs
};

/// One summary per requested user, in request order. Users without edges
/// get all-zero counts.
inline std::vector<DegreeSummary> compute_degree_summaries(const EdgeStore& store,
                                                           std::span<const UserId> users,
                                                           unsigned threads = 1) {
  const DegreeIndex index(store);
  std::vector<DegreeSummary> out(users.size());
  parallel_for(users.size(), threads, [&](std::size_t i) { out[i] = index.summary(users[i]); });
  return out;
}

// -------------------------------------------------------------- reciprocity

struct PairCounts {
  std::uint64_t mutual_pairs{0};     // unordered pairs linked both ways
  std::uint64_t connected_pairs{0};  // unordered pairs linked at least one way
};

inline PairCounts count_pairs(const EdgeStore& store, bool focal_only = false) {
  PairCounts c;
  std::uint64_t edges = 0;
  std::uint64_t mutual_edges = 0;
  for (const auto& e : store.edges()) {
    if (focal_only && !(store.is_focal(e.src) && store.is_focal(e.dst))) continue;
    ++edges;
    if (store.contains(e.dst, e.src)) ++mutual_edges;
  }
  c.mutual_pairs = mutual_edges / 2;
  c.connected_pairs = edges - c.mutual_pairs;
  return c;
}

/// Mutual pairs over connected pairs, across all endpoint users.
inline double overall_reciprocity(const EdgeStore& store) {
  if (store.empty()) throw EmptyInputError("reciprocity of an empty edge set is undefined");
  const auto c = count_pairs(store);
  return static_cast<double>(c.mutual_pairs) / static_cast<double>(c.connected_pairs);
}

/// Same ratio restricted to pairs whose endpoints are both focal users.
inline double overall_reciprocity_focal(const EdgeStore& store) {
  const auto c = count_pairs(store, true);
  if (c.connected_pairs == 0)
    throw EmptyInputError("no edges between focal users; reciprocity undefined");
  return static_cast<double>(c.mutual_pairs) / static_cast<double>(c.connected_pairs);
}

}  // namespace recip
