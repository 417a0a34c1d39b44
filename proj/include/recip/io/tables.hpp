/*
 * tables.hpp
 *
 * Result tables written by the CLI. Every writer emits the provenance line
 * and a header row; numeric cells use shortest round-trip formatting and
 * empty markers are written as NA.
 */

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "recip/activity_metrics.hpp"
#include "recip/flow_matrix.hpp"
#include "recip/graph_core.hpp"
#include "recip/io/tsv.hpp"
#include "recip/reciprocity_map.hpp"
#include "recip/stats_tests.hpp"
#include "recip/vocab_extract.hpp"

namespace recip::io {

struct Provenance {
  std::string producer;
  std::string config_hash;
};

inline void begin_table(std::ostream& os, const Provenance& prov, std::span<const std::string_view> columns) {
  write_provenance(os, prov.producer, prov.config_hash);
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "\t" : "") << columns[i];
  os << '\n';
}

// ------------------------------------------------------------ degree tables

inline void write_degrees(std::ostream& os, const Provenance& prov, std::span<const DegreeSummary> rows) {
  static constexpr std::array<std::string_view, 4> cols{"user", "k_in", "k_out", "k_mutual"};
  begin_table(os, prov, cols);
  for (const auto& d : rows) os << d.user.value << '\t' << d.k_in << '\t' << d.k_out << '\t' << d.k_mutual << '\n';
}

inline std::vector<DegreeSummary> read_degrees(const Table& t) {
  const auto cu = t.column("user"), ci = t.column("k_in"), co = t.column("k_out"), cm = t.column("k_mutual");
  std::vector<DegreeSummary> out;
  for (std::size_t r = 0; r < t.rows().size(); ++r) {
    DegreeSummary d{UserId{t.u64(r, cu)}, t.u64(r, ci), t.u64(r, co), t.u64(r, cm)};
    if (d.k_mutual > std::min(d.k_in, d.k_out))
      throw DataError(t.source() + ": row " + std::to_string(r + 1) + " has k_mutual > min(k_in, k_out)");
    out.push_back(d);
  }
  return out;
}

inline void write_reciprocity(std::ostream& os, const Provenance& prov, std::span<const DegreeSummary> rows) {
  static constexpr std::array<std::string_view, 7> cols{"user", "k_in", "k_out", "k_mutual", "r_in", "r_out", "r_f"};
  begin_table(os, prov, cols);
  for (const auto& d : rows) {
    const auto p = compute_reciprocity(d);
    os << d.user.value << '\t' << d.k_in << '\t' << d.k_out << '\t' << d.k_mutual << '\t' << format_double(p.r_in)
       << '\t' << format_double(p.r_out) << '\t' << format_double(followee_follower_ratio(d)) << '\n';
  }
}

// ----------------------------------------------------------- classification

struct ClassifiedUser {
  UserId user;
  ReciprocityPoint point;
  Archetype label{Archetype::Intermediate};
};

inline void write_classification(std::ostream& os, const Provenance& prov, std::span<const ClassifiedUser> rows) {
  static constexpr std::array<std::string_view, 4> cols{"user", "r_in", "r_out", "label"};
  begin_table(os, prov, cols);
  for (const auto& c : rows)
    os << c.user.value << '\t' << format_double(c.point.r_in) << '\t' << format_double(c.point.r_out) << '\t'
       << to_string(c.label) << '\n';
}

/// Points from a table with (user, r_in, r_out) columns, or degree columns
/// (user, k_in, k_out, k_mutual) from which the coordinates are computed.
inline std::vector<std::pair<UserId, ReciprocityPoint>> read_points(const Table& t) {
  std::vector<std::pair<UserId, ReciprocityPoint>> out;
  const auto cu = t.column("user");
  if (t.has_column("r_in") && t.has_column("r_out")) {
    const auto ci = t.column("r_in"), co = t.column("r_out");
    for (std::size_t r = 0; r < t.rows().size(); ++r) {
      const ReciprocityPoint p{t.real(r, ci), t.real(r, co)};
      if (!(p.r_in > 0 && p.r_in <= 1 && p.r_out > 0 && p.r_out <= 1))
        throw DataError(t.source() + ": row " + std::to_string(r + 1) + " has a coordinate outside (0, 1]");
      out.emplace_back(UserId{t.u64(r, cu)}, p);
    }
    return out;
  }
  for (const auto& d : read_degrees(t)) out.emplace_back(d.user, compute_reciprocity(d));
  return out;
}

inline std::vector<ClassifiedUser> read_classification(const Table& t) {
  const auto points = read_points(t);
  const auto cl = t.column("label");
  std::vector<ClassifiedUser> out;
  out.reserve(points.size());
  for (std::size_t r = 0; r < points.size(); ++r) {
    const auto label = parse_archetype(t.rows()[r][cl]);
    if (!label) throw DataError(t.source() + ": row " + std::to_string(r + 1) + " has an unknown label");
    out.push_back({points[r].first, points[r].second, *label});
  }
  return out;
}

// --------------------------------------------------------------------- grid

inline void write_grid(std::ostream& os, const Provenance& prov, const GridSummary& grid) {
  static constexpr std::array<std::string_view, 8> cols{"row",      "col",       "r_in_low", "r_in_high",
                                                        "r_out_low", "r_out_high", "count",    "value"};
  begin_table(os, prov, cols);
  const std::size_t res = grid.resolution();
  const double d = static_cast<double>(res);
  for (std::size_t r = 0; r < res; ++r) {
    for (std::size_t c = 0; c < res; ++c) {
      const auto& cell = grid.at(r, c);
      os << r << '\t' << c << '\t' << format_double(static_cast<double>(c) / d) << '\t'
         << format_double(static_cast<double>(c + 1) / d) << '\t' << format_double(static_cast<double>(r) / d) << '\t'
         << format_double(static_cast<double>(r + 1) / d) << '\t' << cell.count << '\t' << format_optional(cell.value)
         << '\n';
    }
  }
}

// --------------------------------------------------------------- properties

using PropertyValues = std::array<std::optional<double>, kPropertyNames.size()>;

inline std::size_t property_index(std::string_view name) {
  for (std::size_t i = 0; i < kPropertyNames.size(); ++i)
    if (kPropertyNames[i] == name) return i;
  throw InvalidArgument("unknown property: " + std::string(name));
}

inline PropertyValues property_values(const UserPropertyRecord& r) {
  PropertyValues v;
  for (std::size_t i = 0; i < kPropertyNames.size(); ++i) v[i] = property_value(r, kPropertyNames[i]);
  return v;
}

inline void write_properties(std::ostream& os, const Provenance& prov, std::span<const UserPropertyRecord> rows) {
  write_provenance(os, prov.producer, prov.config_hash);
  os << "user";
  for (auto name : kPropertyNames) os << '\t' << name;
  os << '\n';
  for (const auto& r : rows) {
    os << r.user.value;
    for (const auto& v : property_values(r)) os << '\t' << format_optional(v);
    os << '\n';
  }
}

inline std::map<UserId, PropertyValues> read_properties(const Table& t) {
  const auto cu = t.column("user");
  std::array<std::size_t, kPropertyNames.size()> cols{};
  for (std::size_t i = 0; i < kPropertyNames.size(); ++i) cols[i] = t.column(kPropertyNames[i]);
  std::map<UserId, PropertyValues> out;
  for (std::size_t r = 0; r < t.rows().size(); ++r) {
    PropertyValues v;
    for (std::size_t i = 0; i < cols.size(); ++i) v[i] = t.optional_real(r, cols[i]);
    out.emplace(UserId{t.u64(r, cu)}, v);
  }
  return out;
}

// -------------------------------------------------------------------- vocab

inline void write_vocab(std::ostream& os, const Provenance& prov,
                        const std::map<Archetype, std::vector<ChiSquareResult>>& ranked,
                        std::span<const Archetype> order, std::uint64_t min_support) {
  write_provenance(os, prov.producer, prov.config_hash);
  // Word filters that go beyond the plain chi-square ranking.
  os << "# filters: min_user_support=" << min_support << " positive_association=n11*n00>n10*n01\n";
  os << "category\trank\tword\tchi_square\tn11\tn10\tn01\tn00\n";
  for (auto cat : order) {
    const auto it = ranked.find(cat);
    if (it == ranked.end()) continue;
    std::size_t rank = 0;
    for (const auto& r : it->second)
      os << to_string(cat) << '\t' << ++rank << '\t' << escape_field(r.word) << '\t' << format_double(r.score) << '\t'
         << r.counts.n11 << '\t' << r.counts.n10 << '\t' << r.counts.n01 << '\t' << r.counts.n00 << '\n';
  }
}

// -------------------------------------------------------------------- stats

struct PropertyTests {
  std::string property;
  std::optional<OmnibusResult> omnibus;  // nullopt: degenerate data
  std::string note;
  std::vector<PairwiseResult> pairwise;
};

inline void begin_stats(std::ostream& os, const Provenance& prov) {
  static constexpr std::array<std::string_view, 6> cols{"property", "test", "group", "statistic", "p_raw", "p_adjusted"};
  begin_table(os, prov, cols);
}

inline void write_stats_rows(std::ostream& os, const PropertyTests& t) {
  if (t.omnibus) {
    os << t.property << "\tkruskal_wallis\tall\t" << format_double(t.omnibus->h_statistic) << '\t'
       << format_double(t.omnibus->p_value) << '\t' << kNA << '\n';
  } else {
    os << t.property << "\tkruskal_wallis\tall\t" << kNA << '\t' << kNA << '\t' << kNA << '\n';
  }
  for (const auto& p : t.pairwise)
    os << t.property << "\tconover\t" << p.first << ':' << p.second << '\t' << format_double(p.t_statistic) << '\t'
       << format_double(p.p_raw) << '\t' << format_optional(p.p_adjusted) << '\n';
}

inline void begin_letter_values(std::ostream& os, const Provenance& prov) {
  static constexpr std::array<std::string_view, 7> cols{"property", "group", "n", "level", "depth", "lower", "upper"};
  begin_table(os, prov, cols);
}

inline void write_letter_value_rows(std::ostream& os, std::string_view property, std::string_view group,
                                    std::size_t n, const LetterValueSummary& s) {
  for (const auto& lv : s.levels)
    os << property << '\t' << group << '\t' << n << '\t' << lv.label << '\t' << format_double(lv.depth) << '\t'
       << format_double(lv.lower) << '\t' << format_double(lv.upper) << '\n';
}

// --------------------------------------------------------------------- flows

template <typename Label>
void write_flow_counts(std::ostream& os, const Provenance& prov, const FlowMatrix<Label>& m) {
  write_provenance(os, prov.producer, prov.config_hash);
  os << "# skipped_edges=" << m.skipped_edges << '\n';
  os << "from\\to";
  for (const auto& l : m.labels) os << '\t' << to_string(l);
  os << '\n';
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    os << to_string(m.labels[i]);
    for (auto c : m.counts[i]) os << '\t' << c;
    os << '\n';
  }
}

template <typename Label>
void write_flow_normalized(std::ostream& os, const Provenance& prov, const FlowMatrix<Label>& m,
                           const NormalizedMatrix& norm, std::string_view axis) {
  write_provenance(os, prov.producer, prov.config_hash);
  os << "# normalized_by=" << axis << " empty=";
  bool first = true;
  for (std::size_t i = 0; i < norm.empty.size(); ++i)
    if (norm.empty[i]) {
      os << (first ? "" : ",") << to_string(m.labels[i]);
      first = false;
    }
  if (first) os << "none";
  os << '\n';
  os << "from\\to";
  for (const auto& l : m.labels) os << '\t' << to_string(l);
  os << '\n';
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    os << to_string(m.labels[i]);
    for (double v : norm.values[i]) os << '\t' << format_double(v);
    os << '\n';
  }
}

}  // namespace recip::io
