/*
 * planted_network.hpp
 *
 * Synthetic follow graphs with known reciprocity coordinates, used to check
 * that classification recovers planted archetypes.
 *
 * Each planted user u draws target counts (k_m, k_i, k_o) whose smoothed
 * ratios fall in its block's (r_in, r_out) box, then realizes them against a
 * shared pool of unlabeled alter accounts: k_m mutual pairs, k_i - k_m
 * one-way followers and k_o - k_m one-way followees, all with distinct
 * alters. Planted users never link to each other (except inside a mutual
 * clique block), so the realized coordinates equal the targets.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "recip/graph_core.hpp"
#include "recip/reciprocity_map.hpp"
#include "recip/types.hpp"

namespace recip {

struct RatioRange {
  double low{0.0};
  double high{1.0};

  bool contains(double v) const { return low <= v && v <= high; }
};

struct PlantedBlock {
  Archetype label{Archetype::Intermediate};
  std::size_t size{0};
  RatioRange r_in;
  RatioRange r_out;
  std::uint64_t min_mutual{0};
  std::uint64_t max_mutual{20};
  std::uint64_t min_in_degree{1};
  std::uint64_t min_out_degree{1};
  std::uint64_t max_degree{400};
  /// Block members follow each other pairwise and have no other edges.
  bool mutual_clique{false};
};

struct PlantedSpec {
  std::vector<PlantedBlock> blocks;
  std::uint64_t seed{1};
  /// Unlabeled alter accounts; 0 picks max_degree-based default.
  std::size_t alter_pool{0};
  /// First planted user id; alters follow the planted ids.
  std::uint64_t first_id{1};
};

struct PlantedNetwork {
  EdgeStore store;  // focal users = planted users
  std::vector<UserId> planted;
  std::unordered_map<UserId, Archetype> labels;
  std::vector<UserId> alters;
};

/// Four corner blocks sitting strictly inside the default threshold regions.
inline PlantedSpec corner_spec(std::size_t block_size, std::uint64_t seed) {
  PlantedSpec spec;
  spec.seed = seed;
  const RatioRange low{0.02, 0.22};
  const RatioRange high{0.80, 1.0};
  spec.blocks = {
      {Archetype::Feeding, block_size, low, high},
      {Archetype::Accumulating, block_size, high, low},
      {Archetype::Flowing, block_size, low, low},
      {Archetype::Circulating, block_size, high, high},
  };
  return spec;
}

namespace detail {

/// Uniform integer in [0, n) by rejection; stable across standard libraries.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Integer k with (m+1)/(k+1) in [lo, hi], k >= m, k >= min_k, k <= max_k.
inline bool degree_window(std::uint64_t m, const RatioRange& r, std::uint64_t min_k,
                          std::uint64_t max_k, std::uint64_t& lo, std::uint64_t& hi) {
  const double m1 = static_cast<double>(m) + 1.0;
  lo = std::max(m, min_k);
  hi = max_k;
  if (r.high <= 0.0) return false;
  const double from = std::ceil(m1 / r.high - 1e-9) - 1.0;
  if (from > static_cast<double>(lo)) lo = static_cast<std::uint64_t>(from);
  if (r.low > 0.0) {
    const double to = std::floor(m1 / r.low + 1e-9) - 1.0;
    if (to < 0.0) return false;
    if (to < static_cast<double>(hi)) hi = static_cast<std::uint64_t>(to);
  }
  // Guard the rounding slack against the exact ratio.
  while (lo <= hi && !r.contains(m1 / (static_cast<double>(lo) + 1.0))) ++lo;
  while (hi >= lo && hi > 0 && !r.contains(m1 / (static_cast<double>(hi) + 1.0))) --hi;
  return lo <= hi && r.contains(m1 / (static_cast<double>(lo) + 1.0));
}

inline std::vector<std::uint64_t> feasible_mutual_counts(const PlantedBlock& b) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t m = b.min_mutual; m <= b.max_mutual; ++m) {
    std::uint64_t lo, hi;
    if (degree_window(m, b.r_in, b.min_in_degree, b.max_degree, lo, hi) &&
        degree_window(m, b.r_out, b.min_out_degree, b.max_degree, lo, hi))
      out.push_back(m);
  }
  return out;
}

inline void validate_block(const PlantedBlock& b, std::size_t index) {
  const auto where = "block " + std::to_string(index) + ": ";
  for (const auto* r : {&b.r_in, &b.r_out})
    if (!(0.0 <= r->low && r->low <= r->high && r->high <= 1.0))
      throw InvalidArgument(where + "ratio range must satisfy 0 <= low <= high <= 1");
  if (b.min_mutual > b.max_mutual) throw InvalidArgument(where + "min_mutual > max_mutual");
  if (b.mutual_clique) {
    if (b.size < 2) throw InvalidArgument(where + "a mutual clique needs at least 2 users");
    const std::uint64_t d = b.size - 1;
    const bool ok = b.r_in.contains(1.0) && b.r_out.contains(1.0) && d >= b.min_mutual &&
                    d <= b.max_mutual && d >= b.min_in_degree && d >= b.min_out_degree;
    if (!ok) throw InvalidArgument(where + "mutual clique cannot meet the requested ranges");
    return;
  }
  if (feasible_mutual_counts(b).empty())
    throw InvalidArgument(where + "no degree combination satisfies the requested ratio ranges");
}

}  // namespace detail

/// Deterministic for a given spec (including seed).
inline PlantedNetwork generate_planted_network(const PlantedSpec& spec) {
  if (spec.blocks.empty()) throw InvalidArgument("planted spec has no blocks");
  std::uint64_t max_degree = 1;
  std::size_t planted_total = 0;
  for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
    detail::validate_block(spec.blocks[i], i);
    planted_total += spec.blocks[i].size;
    max_degree = std::max(max_degree, spec.blocks[i].max_degree);
  }
  const std::size_t pool_size =
      spec.alter_pool != 0 ? spec.alter_pool : static_cast<std::size_t>(std::max<std::uint64_t>(1000, 3 * max_degree));

  std::mt19937_64 rng(spec.seed);
  PlantedNetwork net;
  std::vector<DirectedEdge> edges;

  std::uint64_t next_id = spec.first_id;
  for (std::size_t a = 0; a < pool_size; ++a) net.alters.emplace_back(spec.first_id + planted_total + a);

  std::vector<std::size_t> perm(pool_size);
  for (const auto& block : spec.blocks) {
    std::vector<UserId> members;
    for (std::size_t i = 0; i < block.size; ++i) members.emplace_back(next_id++);

    if (block.mutual_clique) {
      for (const auto& u : members)
        for (const auto& v : members)
          if (u != v) edges.push_back({u, v});
    } else {
      const auto mutual_choices = detail::feasible_mutual_counts(block);
      for (const auto& u : members) {
        const std::uint64_t m = mutual_choices[detail::uniform_below(rng, mutual_choices.size())];
        std::uint64_t in_lo, in_hi, out_lo, out_hi;
        detail::degree_window(m, block.r_in, block.min_in_degree, block.max_degree, in_lo, in_hi);
        detail::degree_window(m, block.r_out, block.min_out_degree, block.max_degree, out_lo, out_hi);
        const std::uint64_t k_in = in_lo + detail::uniform_below(rng, in_hi - in_lo + 1);
        const std::uint64_t k_out = out_lo + detail::uniform_below(rng, out_hi - out_lo + 1);
        const std::uint64_t need = k_in + k_out - m;
        if (need > pool_size)
          throw InvalidArgument("alter pool of " + std::to_string(pool_size) + " is smaller than a planted ego network (" +
                                std::to_string(need) + ")");

        // Partial Fisher-Yates: the first `need` slots are distinct alters.
        for (std::size_t i = 0; i < pool_size; ++i) perm[i] = i;
        for (std::size_t i = 0; i < need; ++i) {
          const std::size_t j = i + detail::uniform_below(rng, pool_size - i);
          std::swap(perm[i], perm[j]);
        }
        std::size_t cursor = 0;
        for (std::uint64_t i = 0; i < m; ++i) {
          const auto alter = net.alters[perm[cursor++]];
          edges.push_back({u, alter});
          edges.push_back({alter, u});
        }
        for (std::uint64_t i = m; i < k_in; ++i) edges.push_back({net.alters[perm[cursor++]], u});
        for (std::uint64_t i = m; i < k_out; ++i) edges.push_back({u, net.alters[perm[cursor++]]});
      }
    }
    for (const auto& u : members) {
      net.labels.emplace(u, block.label);
      net.planted.push_back(u);
    }
  }

  net.store = EdgeStore::from_edges(std::move(edges), net.planted);
  return net;
}

}  // namespace recip
