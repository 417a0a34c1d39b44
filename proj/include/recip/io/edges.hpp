/*
 * edges.hpp  edge files and user-id lists.
 */

#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "recip/graph_core.hpp"
#include "recip/io/tsv.hpp"

namespace recip::io {

inline IngestResult read_edge_file(const std::string& path, EdgeDirection direction,
                                   const IngestOptions& opts = {}) {
  auto in = open_input(path);
  try {
    return ingest_edges(in, direction, opts);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

/// Normalized `src<TAB>dst` rows ("src follows dst"), sorted.
inline void write_edges(std::ostream& os, const EdgeStore& store) {
  os << "#src\tdst\n";
  for (const auto& e : store.edges()) os << e.src.value << '\t' << e.dst.value << '\n';
}

/// One decimal id per line; '#' lines and blanks ignored.
inline std::vector<UserId> read_user_ids(std::istream& in, std::string_view source = "user list") {
  std::vector<UserId> ids;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = chomp(raw);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    std::uint64_t v = 0;
    if (!parse_number(line, v))
      throw DataError(std::string(source) + ": line " + std::to_string(line_no) + " is not a user id");
    ids.emplace_back(v);
  }
  return ids;
}

inline std::vector<UserId> read_user_id_file(const std::string& path) {
  auto in = open_input(path);
  return read_user_ids(in, path);
}

inline void write_user_ids(std::ostream& os, const std::vector<UserId>& ids) {
  for (const auto& u : ids) os << u.value << '\n';
}

}  // namespace recip::io
