/*
 * config.hpp
 *
 * Pipeline configuration as flat `key = value` text. '#' starts a comment
 * line; list keys (edges_follows, edges_followed_by) may repeat.
 *
 * The canonical echo (fixed key order, one `key=value` per line) feeds the
 * config hash. output_dir and threads are left out of the echo: they do not
 * change results.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "recip/activity_metrics.hpp"
#include "recip/io/tsv.hpp"
#include "recip/pipeline/checksum.hpp"
#include "recip/reciprocity_map.hpp"

namespace recip::pipeline {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct PipelineConfig {
  std::vector<std::string> edges_follows;
  std::vector<std::string> edges_followed_by;
  std::string focal;
  std::string profiles;
  std::string timeline;
  std::string stopwords;

  ClassifierConfig thresholds;
  std::size_t grid_resolution{10};
  std::uint64_t min_total_degree{0};
  std::int64_t cutoff{kDefaultEngagementCutoff};
  std::size_t timeline_cap{0};
  KindPrecedence kind_precedence{KindPrecedence::ReplyOverQuote};

  std::size_t vocab_k{20};
  std::uint64_t vocab_min_support{5};
  bool vocab_include_silent{true};
  bool keep_hashtags{true};
  std::string language{"en"};

  bool flows_corners_only{false};
  bool focal_only_reciprocity{false};
  std::size_t letter_value_min_tail{8};
  bool strict{false};
  std::uint64_t seed{1};

  std::string output_dir;
  unsigned threads{0};
};

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline bool parse_bool(std::string_view v, bool& out) {
  if (v == "true" || v == "1" || v == "yes") out = true;
  else if (v == "false" || v == "0" || v == "no") out = false;
  else return false;
  return true;
}

template <typename T>
void set_number(std::string_view key, std::string_view v, T& out) {
  if (!io::parse_number(v, out))
    throw DataError("config key '" + std::string(key) + "': cannot parse '" + std::string(v) + "'");
}

}  // namespace detail

/// Applies one key. Throws DataError for unknown keys or bad values.
inline void apply_config_key(PipelineConfig& c, std::string_view key, std::string_view value) {
  const std::string v(value);
  auto flag = [&](bool& out) {
    if (!detail::parse_bool(value, out))
      throw DataError("config key '" + std::string(key) + "': expected true/false, got '" + v + "'");
  };
  if (key == "edges_follows") c.edges_follows.push_back(v);
  else if (key == "edges_followed_by") c.edges_followed_by.push_back(v);
  else if (key == "focal") c.focal = v;
  else if (key == "profiles") c.profiles = v;
  else if (key == "timeline") c.timeline = v;
  else if (key == "stopwords") c.stopwords = v;
  else if (key == "low_threshold") detail::set_number(key, value, c.thresholds.low_threshold);
  else if (key == "high_threshold") detail::set_number(key, value, c.thresholds.high_threshold);
  else if (key == "grid_resolution") detail::set_number(key, value, c.grid_resolution);
  else if (key == "min_total_degree") detail::set_number(key, value, c.min_total_degree);
  else if (key == "cutoff") detail::set_number(key, value, c.cutoff);
  else if (key == "timeline_cap") detail::set_number(key, value, c.timeline_cap);
  else if (key == "kind_precedence") {
    if (value == "reply") c.kind_precedence = KindPrecedence::ReplyOverQuote;
    else if (value == "quote") c.kind_precedence = KindPrecedence::QuoteOverReply;
    else throw DataError("config key 'kind_precedence': expected reply or quote");
  } else if (key == "vocab_k") detail::set_number(key, value, c.vocab_k);
  else if (key == "vocab_min_support") detail::set_number(key, value, c.vocab_min_support);
  else if (key == "vocab_include_silent") flag(c.vocab_include_silent);
  else if (key == "keep_hashtags") flag(c.keep_hashtags);
  else if (key == "language") c.language = v;
  else if (key == "flows_corners_only") flag(c.flows_corners_only);
  else if (key == "focal_only_reciprocity") flag(c.focal_only_reciprocity);
  else if (key == "letter_value_min_tail") detail::set_number(key, value, c.letter_value_min_tail);
  else if (key == "strict") flag(c.strict);
  else if (key == "seed") detail::set_number(key, value, c.seed);
  else if (key == "output_dir") c.output_dir = v;
  else if (key == "threads") detail::set_number(key, value, c.threads);
  else throw DataError("unknown config key '" + std::string(key) + "'");
}

/// Relative paths in the file are resolved against `base_dir` when given.
inline PipelineConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {}) {
  PipelineConfig c;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw DataError("config line " + std::to_string(line_no) + ": expected key = value");
    const auto key = detail::trim(line.substr(0, eq));
    std::string value(detail::trim(line.substr(eq + 1)));
    static constexpr std::string_view kPathKeys[] = {"edges_follows", "edges_followed_by", "focal", "profiles",
                                                     "timeline",      "stopwords",         "output_dir"};
    if (!base_dir.empty() && !value.empty())
      for (auto pk : kPathKeys)
        if (key == pk && std::filesystem::path(value).is_relative()) value = (base_dir / value).lexically_normal().string();
    apply_config_key(c, key, value);
  }
  return c;
}

inline PipelineConfig read_config_file(const std::string& path) {
  auto in = io::open_input(path);
  return parse_config(in, std::filesystem::path(path).parent_path());
}

inline ConfigEcho config_echo(const PipelineConfig& c) {
  ConfigEcho e;
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  for (const auto& p : c.edges_follows) e.emplace_back("edges_follows", p);
  for (const auto& p : c.edges_followed_by) e.emplace_back("edges_followed_by", p);
  e.emplace_back("focal", c.focal);
  e.emplace_back("profiles", c.profiles);
  e.emplace_back("timeline", c.timeline);
  e.emplace_back("stopwords", c.stopwords);
  e.emplace_back("low_threshold", io::format_double(c.thresholds.low_threshold));
  e.emplace_back("high_threshold", io::format_double(c.thresholds.high_threshold));
  e.emplace_back("grid_resolution", std::to_string(c.grid_resolution));
  e.emplace_back("min_total_degree", std::to_string(c.min_total_degree));
  e.emplace_back("cutoff", std::to_string(c.cutoff));
  e.emplace_back("timeline_cap", std::to_string(c.timeline_cap));
  e.emplace_back("kind_precedence", c.kind_precedence == KindPrecedence::ReplyOverQuote ? "reply" : "quote");
  e.emplace_back("vocab_k", std::to_string(c.vocab_k));
  e.emplace_back("vocab_min_support", std::to_string(c.vocab_min_support));
  e.emplace_back("vocab_include_silent", b(c.vocab_include_silent));
  e.emplace_back("keep_hashtags", b(c.keep_hashtags));
  e.emplace_back("language", c.language);
  e.emplace_back("flows_corners_only", b(c.flows_corners_only));
  e.emplace_back("focal_only_reciprocity", b(c.focal_only_reciprocity));
  e.emplace_back("letter_value_min_tail", std::to_string(c.letter_value_min_tail));
  e.emplace_back("strict", b(c.strict));
  e.emplace_back("seed", std::to_string(c.seed));
  return e;
}

inline std::string echo_text(const ConfigEcho& echo) {
  std::string s;
  for (const auto& [k, v] : echo) s += k + "=" + v + "\n";
  return s;
}

/// Short config hash used in provenance lines.
inline std::string config_hash(const ConfigEcho& echo) { return sha256_hex(echo_text(echo)).substr(0, 16); }

/// Checks parameter ranges and that every referenced input exists.
inline void validate_config(const PipelineConfig& c) {
  if (c.edges_follows.empty() && c.edges_followed_by.empty())
    throw DataError("configuration names no edge file (edges_follows / edges_followed_by)");
  auto must_exist = [](const std::string& path, std::string_view what) {
    if (!std::filesystem::is_regular_file(path))
      throw DataError(std::string(what) + " file does not exist: " + path);
  };
  for (const auto& p : c.edges_follows) must_exist(p, "edge");
  for (const auto& p : c.edges_followed_by) must_exist(p, "edge");
  if (!c.focal.empty()) must_exist(c.focal, "focal-user");
  if (!c.profiles.empty()) must_exist(c.profiles, "profile");
  if (!c.timeline.empty()) must_exist(c.timeline, "timeline");
  if (!c.stopwords.empty()) must_exist(c.stopwords, "stopword");
  try {
    c.thresholds.validate();
  } catch (const InvalidArgument& e) {
    throw DataError(e.what());
  }
  if (c.grid_resolution == 0) throw DataError("grid_resolution must be >= 1");
  if (c.vocab_k == 0) throw DataError("vocab_k must be >= 1");
  if (c.vocab_min_support == 0) throw DataError("vocab_min_support must be >= 1");
}

}  // namespace recip::pipeline
