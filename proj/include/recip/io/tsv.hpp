/*
 * tsv.hpp
 *
 * Tab-separated text helpers shared by every file format.
 *
 * Output files start with one provenance comment line
 *   # producer=<subcommand> config_hash=<hex>
 * followed by a header row. Readers skip '#' lines and address columns by
 * header name.
 *
 * Free-text fields escape backslash, tab, newline and carriage return as
 * \\ \t \n \r.
 */

#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "recip/types.hpp"

namespace recip::io {

inline constexpr std::string_view kNA = "NA";

/// Shortest round-trip decimal form.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

inline std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string(kNA);
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

inline std::string escape_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

/// nullopt on a dangling or unknown escape.
inline std::optional<std::string> unescape_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out.push_back(s[i]);
      continue;
    }
    if (++i == s.size()) return std::nullopt;
    switch (s[i]) {
      case '\\': out.push_back('\\'); break;
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      default: return std::nullopt;
    }
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

inline std::string_view chomp(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
  return line;
}

inline void write_provenance(std::ostream& os, std::string_view producer, std::string_view config_hash) {
  os << "# producer=" << producer << " config_hash=" << config_hash << '\n';
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input file: " + path);
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open output file: " + path);
  return out;
}

/// Header-addressed table read from delimited text.
class Table {
 public:
  static Table read(std::istream& in, std::string_view source = "table") {
    Table t;
    t.source_ = source;
    std::string raw;
    bool have_header = false;
    while (std::getline(in, raw)) {
      const auto line = chomp(raw);
      if (line.empty() || line.front() == '#') continue;
      std::vector<std::string> cells;
      for (auto f : split_tabs(line)) cells.emplace_back(f);
      if (!have_header) {
        t.header_ = std::move(cells);
        have_header = true;
        continue;
      }
      if (cells.size() != t.header_.size())
        throw DataError(t.source_ + ": row " + std::to_string(t.rows_.size() + 1) + " has " +
                        std::to_string(cells.size()) + " fields, header has " + std::to_string(t.header_.size()));
      t.rows_.push_back(std::move(cells));
    }
    if (!have_header) throw DataError(t.source_ + ": missing header row");
    return t;
  }

  static Table read_file(const std::string& path) {
    auto in = open_input(path);
    return read(in, path);
  }

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i)
      if (header_[i] == name) return i;
    throw DataError(source_ + ": missing column '" + std::string(name) + "'");
  }

  bool has_column(std::string_view name) const {
    for (const auto& h : header_)
      if (h == name) return true;
    return false;
  }

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  const std::string& source() const { return source_; }

  std::uint64_t u64(std::size_t row, std::size_t col) const {
    std::uint64_t v = 0;
    if (!parse_number(rows_[row][col], v)) bad(row, col);
    return v;
  }

  double real(std::size_t row, std::size_t col) const {
    double v = 0;
    if (!parse_number(rows_[row][col], v)) bad(row, col);
    return v;
  }

  std::optional<double> optional_real(std::size_t row, std::size_t col) const {
    if (rows_[row][col] == kNA || rows_[row][col].empty()) return std::nullopt;
    return real(row, col);
  }

 private:
  [[noreturn]] void bad(std::size_t row, std::size_t col) const {
    throw DataError(source_ + ": row " + std::to_string(row + 1) + " column '" + header_[col] +
                    "': cannot parse '" + rows_[row][col] + "'");
  }

  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace recip::io
