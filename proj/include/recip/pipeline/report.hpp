/*
 * report.hpp
 *
 * End-to-end run: ingestion, degrees, classification, grids, vocabulary,
 * flow matrices and statistical tables, written as one bundle plus a
 * manifest (manifest.tsv) with the config echo and SHA-256 of every input
 * and output. The bundle content depends only on the config echo and the
 * input bytes.
 *
 * Manifest rows are `kind<TAB>name<TAB>value` with kind in
 * {meta, config, input, output, count}.
 */

#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "recip/io/tables.hpp"
#include "recip/pipeline/checksum.hpp"
#include "recip/pipeline/config.hpp"
#include "recip/pipeline/stages.hpp"

namespace recip::pipeline {

inline constexpr std::string_view kManifestName = "manifest.tsv";

struct ReportBundle {
  std::filesystem::path directory;
  std::vector<std::string> files;  // relative names, in write order, manifest excluded
  std::map<std::string, std::string> counts;
};

/// Thrown after the manifest has been written with status=incomplete.
class StageError : public DataError {
 public:
  StageError(std::string stage, const std::string& what)
      : DataError("stage '" + stage + "' failed: " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

namespace detail {

class BundleWriter {
 public:
  BundleWriter(std::filesystem::path dir, io::Provenance prov) : dir_(std::move(dir)), prov_(std::move(prov)) {}

  template <typename Fn>
  void file(const std::string& name, Fn&& write) {
    auto out = io::open_output((dir_ / name).string());
    write(out, prov_);
    out.close();
    if (!out) throw DataError("write failed: " + (dir_ / name).string());
    files_.push_back(name);
  }

  const std::vector<std::string>& files() const { return files_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  io::Provenance prov_;
  std::vector<std::string> files_;
};

inline std::vector<std::string> input_paths(const PipelineConfig& c) {
  std::vector<std::string> paths;
  paths.insert(paths.end(), c.edges_follows.begin(), c.edges_follows.end());
  paths.insert(paths.end(), c.edges_followed_by.begin(), c.edges_followed_by.end());
  for (const auto* p : {&c.focal, &c.profiles, &c.timeline, &c.stopwords})
    if (!p->empty()) paths.push_back(*p);
  return paths;
}

inline void write_manifest(const std::filesystem::path& dir, const PipelineConfig& cfg, const ConfigEcho& echo,
                           const std::vector<std::string>& files, const std::map<std::string, std::string>& counts,
                           const std::string& status, const std::string& failed_stage, const std::string& error) {
  std::ostringstream os;
  io::write_provenance(os, "report", config_hash(echo));
  os << "kind\tname\tvalue\n";
  os << "meta\ttool_version\t" << kToolVersion << '\n';
  os << "meta\tstatus\t" << status << '\n';
  if (!failed_stage.empty()) {
    os << "meta\tfailed_stage\t" << failed_stage << '\n';
    os << "meta\terror\t" << io::escape_field(error) << '\n';
  }
  for (const auto& [k, v] : echo) os << "config\t" << k << '\t' << io::escape_field(v) << '\n';
  for (const auto& p : input_paths(cfg)) {
    std::string sum = "missing";
    if (std::filesystem::is_regular_file(p)) sum = sha256_file(p);
    os << "input\t" << p << '\t' << sum << '\n';
  }
  for (const auto& [k, v] : counts) os << "count\t" << k << '\t' << v << '\n';
  for (const auto& f : files) os << "output\t" << f << '\t' << sha256_file((dir / f).string()) << '\n';
  auto out = io::open_output((dir / kManifestName).string());
  out << os.str();
}

}  // namespace detail

inline ReportBundle run_pipeline(const PipelineConfig& cfg) {
  validate_config(cfg);
  if (cfg.output_dir.empty()) throw DataError("no output directory configured");
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);

  const auto echo = config_echo(cfg);
  const io::Provenance prov{"report", config_hash(echo)};
  detail::BundleWriter bundle(dir, prov);
  std::map<std::string, std::string> counts;
  const auto policy = cfg.strict ? MalformedRowPolicy::Abort : MalformedRowPolicy::SkipAndLog;
  std::string stage;

  auto fail = [&](const std::string& what) {
    detail::write_manifest(dir, cfg, echo, bundle.files(), counts, "incomplete", stage, what);
    throw StageError(stage, what);
  };

  try {
    stage = "ingest";
    const auto loaded = load_edges(cfg.edges_follows, cfg.edges_followed_by, cfg.focal, policy);
    const EdgeStore& store = loaded.store;
    std::size_t bad_rows = 0, self_edges = 0;
    for (const auto& [path, r] : loaded.reports) {
      bad_rows += r.errors.size();
      self_edges += r.self_edges;
    }
    counts["edges"] = std::to_string(store.size());
    counts["malformed_edge_rows"] = std::to_string(bad_rows);
    counts["self_edges_skipped"] = std::to_string(self_edges);
    counts["focal_users"] = std::to_string(store.focal_users().size());
    if (!store.empty()) counts["overall_reciprocity"] = io::format_double(overall_reciprocity(store));
    if (cfg.focal_only_reciprocity) {
      try {
        counts["overall_reciprocity_focal"] = io::format_double(overall_reciprocity_focal(store));
      } catch (const EmptyInputError&) {
        counts["overall_reciprocity_focal"] = "NA";
      }
    }

    stage = "degrees";
    const auto population = analysis_population(store);
    auto degrees = filter_min_degree(compute_degree_summaries(store, population, cfg.threads), cfg.min_total_degree);
    counts["population"] = std::to_string(population.size());
    counts["classified_users"] = std::to_string(degrees.size());
    bundle.file("degrees.tsv", [&](std::ostream& os, const io::Provenance& p) { io::write_reciprocity(os, p, degrees); });

    stage = "classify";
    const auto classified = classify_summaries(degrees, cfg.thresholds);
    std::map<Archetype, std::size_t> shares;
    for (const auto& c : classified) ++shares[c.label];
    for (auto a : kAllArchetypes) counts["label_" + std::string(to_string(a))] = std::to_string(shares[a]);
    bundle.file("classification.tsv",
                [&](std::ostream& os, const io::Provenance& p) { io::write_classification(os, p, classified); });

    stage = "grid";
    bundle.file("density_grid.tsv", [&](std::ostream& os, const io::Provenance& p) {
      io::write_grid(os, p, density_grid(classified, cfg.grid_resolution));
    });

    stage = "flows";
    const auto flows = archetype_flows(store, classified, cfg.flows_corners_only);
    counts["flow_labeled_edges"] = std::to_string(flows.total());
    bundle.file("flow_counts.tsv", [&](std::ostream& os, const io::Provenance& p) { io::write_flow_counts(os, p, flows); });
    bundle.file("flow_following.tsv", [&](std::ostream& os, const io::Provenance& p) {
      io::write_flow_normalized(os, p, flows, normalize_rows(flows), "row");
    });
    bundle.file("flow_follower.tsv", [&](std::ostream& os, const io::Provenance& p) {
      io::write_flow_normalized(os, p, flows, normalize_cols(flows), "column");
    });

    stage = "activity";
    const auto activity =
        load_activity(cfg.profiles, cfg.timeline, policy, cfg.kind_precedence, cfg.timeline_cap);
    counts["malformed_profile_rows"] = std::to_string(activity.profile_errors);
    counts["malformed_timeline_rows"] = std::to_string(activity.timeline_errors);

    if (!cfg.profiles.empty()) {
      std::vector<UserId> users;
      users.reserve(classified.size());
      for (const auto& c : classified) users.push_back(c.user);
      const auto built = build_properties(users, activity, cfg.cutoff);
      counts["users_without_profile"] = std::to_string(built.without_profile);
      counts["users_with_incomplete_profile"] = std::to_string(built.incomplete_profile);
      bundle.file("properties.tsv",
                  [&](std::ostream& os, const io::Provenance& p) { io::write_properties(os, p, built.records); });
      const auto table = property_table(built.records);

      stage = "property_grids";
      for (std::size_t i = 0; i < kPropertyNames.size(); ++i)
        bundle.file("grid_" + std::string(kPropertyNames[i]) + ".tsv", [&](std::ostream& os, const io::Provenance& p) {
          io::write_grid(os, p, property_grid(classified, table, i, cfg.grid_resolution));
        });

      stage = "stats";
      std::vector<PropertyAnalysis> analyses;
      for (auto name : kPropertyNames) analyses.push_back(analyze_property(classified, table, name, cfg.letter_value_min_tail));
      bundle.file("stats.tsv", [&](std::ostream& os, const io::Provenance& p) {
        io::begin_stats(os, p);
        for (const auto& a : analyses) io::write_stats_rows(os, a.tests);
      });
      bundle.file("letter_values.tsv", [&](std::ostream& os, const io::Provenance& p) {
        io::begin_letter_values(os, p);
        for (const auto& a : analyses)
          for (const auto& g : a.letter_values) io::write_letter_value_rows(os, a.tests.property, g.group, g.n, g.summary);
      });
    }

    if (!cfg.timeline.empty()) {
      stage = "vocab";
      VocabConfig vc;
      vc.options.k = cfg.vocab_k;
      vc.options.min_support = cfg.vocab_min_support;
      vc.options.include_silent_users = cfg.vocab_include_silent;
      vc.options.threads = cfg.threads;
      vc.filter.language = cfg.language;
      vc.text.keep_hashtags = cfg.keep_hashtags;
      const auto words = characteristic_words(classified, activity.timelines, load_stopwords(cfg.stopwords), vc);
      bundle.file("vocab.tsv", [&](std::ostream& os, const io::Provenance& p) {
        io::write_vocab(os, p, words, kCornerArchetypes, cfg.vocab_min_support);
      });
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    fail(e.what());
  }

  detail::write_manifest(dir, cfg, echo, bundle.files(), counts, "complete", "", "");
  return {dir, bundle.files(), counts};
}

/// Re-hashes the inputs and outputs listed in a manifest; returns one line
/// per mismatch (empty when everything matches).
inline std::vector<std::string> verify_manifest(const std::filesystem::path& manifest_path) {
  const auto table = io::Table::read_file(manifest_path.string());
  const auto ck = table.column("kind"), cn = table.column("name"), cv = table.column("value");
  const auto dir = manifest_path.parent_path();
  std::vector<std::string> problems;
  for (const auto& row : table.rows()) {
    std::filesystem::path target;
    if (row[ck] == "input") target = row[cn];
    else if (row[ck] == "output") target = dir / row[cn];
    else continue;
    if (!std::filesystem::is_regular_file(target)) {
      problems.push_back(row[ck] + " missing: " + target.string());
      continue;
    }
    if (sha256_file(target.string()) != row[cv]) problems.push_back(row[ck] + " checksum mismatch: " + target.string());
  }
  return problems;
}

}  // namespace recip::pipeline
