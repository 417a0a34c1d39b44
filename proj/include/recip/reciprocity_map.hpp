/*
 * reciprocity_map.hpp
 *
 * Reciprocity coordinates (r_in, r_out), archetype classification and
 * aggregation of per-user values over a square grid of the unit square.
 *
 *   r_in  = (k_m + 1) / (k_i + 1)
 *   r_out = (k_m + 1) / (k_o + 1)
 *   r_f   = (k_o + 1) / (k_i + 1) = r_in / r_out
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "recip/graph_core.hpp"
#include "recip/types.hpp"

namespace recip {

struct ReciprocityPoint {
  double r_in{1.0};
  double r_out{1.0};

  friend bool operator==(const ReciprocityPoint&, const ReciprocityPoint&) = default;
};

inline ReciprocityPoint compute_reciprocity(const DegreeSummary& d) {
  const double m = static_cast<double>(d.k_mutual) + 1.0;
  return {m / (static_cast<double>(d.k_in) + 1.0), m / (static_cast<double>(d.k_out) + 1.0)};
}

/// Followee-to-follower ratio.
inline double followee_follower_ratio(const DegreeSummary& d) {
  return (static_cast<double>(d.k_out) + 1.0) / (static_cast<double>(d.k_in) + 1.0);
}

// --------------------------------------------------------------- archetypes

enum class Archetype : std::uint8_t {
  Flowing,
  Accumulating,
  Feeding,
  Circulating,
  Intermediate,
};

inline constexpr std::array<Archetype, 5> kAllArchetypes{
    Archetype::Flowing, Archetype::Accumulating, Archetype::Feeding, Archetype::Circulating,
    Archetype::Intermediate};

inline constexpr std::array<Archetype, 4> kCornerArchetypes{
    Archetype::Flowing, Archetype::Accumulating, Archetype::Feeding, Archetype::Circulating};

inline constexpr std::string_view to_string(Archetype a) {
  switch (a) {
    case Archetype::Flowing: return "Flowing";
    case Archetype::Accumulating: return "Accumulating";
    case Archetype::Feeding: return "Feeding";
    case Archetype::Circulating: return "Circulating";
    case Archetype::Intermediate: return "Intermediate";
  }
  return "?";
}

inline std::optional<Archetype> parse_archetype(std::string_view s) {
  for (auto a : kAllArchetypes)
    if (to_string(a) == s) return a;
  return std::nullopt;
}

struct ClassifierConfig {
  double low_threshold{0.25};
  double high_threshold{0.75};

  void validate() const {
    if (!(0.0 < low_threshold && low_threshold < high_threshold && high_threshold < 1.0))
      throw InvalidArgument("classifier thresholds must satisfy 0 < low < high < 1");
  }
};

/// Corner regions are closed: a coordinate equal to a threshold belongs to
/// the corner.
inline Archetype classify_archetype(const ReciprocityPoint& p, const ClassifierConfig& cfg = {}) {
  const bool in_low = p.r_in <= cfg.low_threshold;
  const bool in_high = p.r_in >= cfg.high_threshold;
  const bool out_low = p.r_out <= cfg.low_threshold;
  const bool out_high = p.r_out >= cfg.high_threshold;
  if (in_low && out_high) return Archetype::Feeding;
  if (in_high && out_low) return Archetype::Accumulating;
  if (in_low && out_low) return Archetype::Flowing;
  if (in_high && out_high) return Archetype::Circulating;
  return Archetype::Intermediate;
}

// --------------------------------------------------------------------- grid

struct GridCell {
  std::size_t row{0};  // r_out bin
  std::size_t col{0};  // r_in bin

  friend bool operator==(const GridCell&, const GridCell&) = default;
};

namespace detail {
inline std::size_t bin_index(double v, std::size_t resolution) {
  if (!(v > 0.0)) return 0;
  const double scaled = std::floor(v * static_cast<double>(resolution));
  if (scaled >= static_cast<double>(resolution)) return resolution - 1;
  return static_cast<std::size_t>(scaled);
}
}  // namespace detail

/// Half-open cells [k/res, (k+1)/res); the top cell also holds 1.0.
inline GridCell bin_to_grid(const ReciprocityPoint& p, std::size_t resolution) {
  if (resolution == 0) throw InvalidArgument("grid resolution must be >= 1");
  return {detail::bin_index(p.r_out, resolution), detail::bin_index(p.r_in, resolution)};
}

enum class GridStatistic { Median, Count };

struct GridCellSummary {
  std::size_t count{0};
  std::optional<double> value;  // nullopt = empty marker
};

class GridSummary {
 public:
  GridSummary() = default;
  GridSummary(std::size_t resolution, GridStatistic stat)
      : resolution_(resolution), statistic_(stat), cells_(resolution * resolution) {}

  std::size_t resolution() const noexcept { return resolution_; }
  GridStatistic statistic() const noexcept { return statistic_; }

  const GridCellSummary& at(std::size_t row, std::size_t col) const {
    return cells_.at(row * resolution_ + col);
  }
  GridCellSummary& at(std::size_t row, std::size_t col) { return cells_.at(row * resolution_ + col); }

  /// Row-major (row = r_out bin).
  std::span<const GridCellSummary> cells() const noexcept { return cells_; }

  std::size_t total_count() const {
    std::size_t n = 0;
    for (const auto& c : cells_) n += c.count;
    return n;
  }

 private:
  std::size_t resolution_{0};
  GridStatistic statistic_{GridStatistic::Count};
  std::vector<GridCellSummary> cells_;
};

struct GridSample {
  ReciprocityPoint point;
  std::optional<double> value;
};

/// Median of a non-empty range; even counts average the two middle values.
inline double median_inplace(std::span<double> values) {
  const std::size_t n = values.size();
  const std::size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return (lower + upper) / 2.0;
}

/// Every sample is counted in its cell. Median cells ignore missing values
/// and are empty when no value is present; count cells carry the count.
inline GridSummary grid_aggregate(std::span<const GridSample> samples, std::size_t resolution,
                                  GridStatistic stat) {
  if (resolution == 0) throw InvalidArgument("grid resolution must be >= 1");
  GridSummary grid(resolution, stat);
  std::vector<std::vector<double>> values(stat == GridStatistic::Median ? resolution * resolution : 0);
  for (const auto& s : samples) {
    const auto cell = bin_to_grid(s.point, resolution);
    ++grid.at(cell.row, cell.col).count;
    if (stat == GridStatistic::Median && s.value) values[cell.row * resolution + cell.col].push_back(*s.value);
  }
  for (std::size_t r = 0; r < resolution; ++r) {
    for (std::size_t c = 0; c < resolution; ++c) {
      auto& cell = grid.at(r, c);
      if (stat == GridStatistic::Count) {
        if (cell.count > 0) cell.value = static_cast<double>(cell.count);
      } else {
        auto& v = values[r * resolution + c];
        if (!v.empty()) cell.value = median_inplace(v);
      }
    }
  }
  return grid;
}

/// Population density surface: grid_aggregate with the count statistic.
inline GridSummary density_map(std::span<const ReciprocityPoint> points, std::size_t resolution) {
  std::vector<GridSample> samples;
  samples.reserve(points.size());
  for (const auto& p : points) samples.push_back({p, std::nullopt});
  return grid_aggregate(samples, resolution, GridStatistic::Count);
}

}  // namespace recip
