/*
 * flow_matrix.hpp
 *
 * Edge counts between user categories, with row normalization (where a
 * category's follows go) and column normalization (where its followers come
 * from).
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "recip/graph_core.hpp"

namespace recip {

template <typename Label>
struct FlowMatrix {
  std::vector<Label> labels;
  std::vector<std::vector<std::uint64_t>> counts;  // counts[i][j]: edges i -> j
  std::uint64_t skipped_edges{0};                  // an endpoint had no listed label

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& row : counts)
      for (auto c : row) t += c;
    return t;
  }
};

struct NormalizedMatrix {
  std::vector<std::vector<double>> values;
  /// Row (for row normalization) or column (for column normalization) whose
  /// sum was zero; its entries are left at 0.
  std::vector<bool> empty;
};

/// Edges whose endpoints are not both mapped to one of `labels` are skipped.
template <typename Label>
FlowMatrix<Label> archetype_flow_counts(const EdgeStore& store,
                                        const std::unordered_map<UserId, Label>& label_of,
                                        std::span<const Label> labels) {
  FlowMatrix<Label> m;
  m.labels.assign(labels.begin(), labels.end());
  const std::size_t n = labels.size();
  m.counts.assign(n, std::vector<std::uint64_t>(n, 0));

  std::unordered_map<UserId, std::size_t> slot;
  slot.reserve(label_of.size());
  for (const auto& [user, label] : label_of)
    for (std::size_t i = 0; i < n; ++i)
      if (labels[i] == label) {
        slot.emplace(user, i);
        break;
      }

  for (const auto& e : store.edges()) {
    const auto s = slot.find(e.src);
    const auto d = slot.find(e.dst);
    if (s == slot.end() || d == slot.end()) {
      ++m.skipped_edges;
      continue;
    }
    ++m.counts[s->second][d->second];
  }
  return m;
}

/// Following tendency: each row divided by its sum.
template <typename Label>
NormalizedMatrix normalize_rows(const FlowMatrix<Label>& m) {
  const std::size_t n = m.counts.size();
  NormalizedMatrix out{std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)), std::vector<bool>(n, false)};
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t sum = 0;
    for (auto c : m.counts[i]) sum += c;
    if (sum == 0) {
      out.empty[i] = true;
      continue;
    }
    for (std::size_t j = 0; j < n; ++j)
      out.values[i][j] = static_cast<double>(m.counts[i][j]) / static_cast<double>(sum);
  }
  return out;
}

/// Follower tendency: each column divided by its sum.
template <typename Label>
NormalizedMatrix normalize_cols(const FlowMatrix<Label>& m) {
  const std::size_t n = m.counts.size();
  NormalizedMatrix out{std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)), std::vector<bool>(n, false)};
  for (std::size_t j = 0; j < n; ++j) {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += m.counts[i][j];
    if (sum == 0) {
      out.empty[j] = true;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i)
      out.values[i][j] = static_cast<double>(m.counts[i][j]) / static_cast<double>(sum);
  }
  return out;
}

template <typename Label>
FlowMatrix<Label> transpose(const FlowMatrix<Label>& m) {
  FlowMatrix<Label> t = m;
  const std::size_t n = m.counts.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t.counts[i][j] = m.counts[j][i];
  return t;
}

}  // namespace recip
