// recip: command-line front end. Each subcommand runs one stage on the
// shared file formats; `report` runs all of them from a config file.
//
// Exit codes: 0 success, 1 data or validation error, 2 usage error,
// 3 internal error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "recip/recip.hpp"

namespace fs = std::filesystem;
using namespace recip;
using recip::pipeline::PipelineConfig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path default_output_dir() {
  if (const char* env = std::getenv("RECIP_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

std::string output_path(const std::string& given, const std::string& fallback_name) {
  if (!given.empty()) return given;
  const auto dir = default_output_dir();
  fs::create_directories(dir);
  return (dir / fallback_name).string();
}

// Hash of the subcommand's effective options; the output flag is excluded.
std::string options_hash(const CLI::App& sub) {
  std::string echo = sub.get_name() + "\n";
  for (const auto* opt : sub.get_options()) {
    const auto name = opt->get_name(false, true);
    if (name.empty() || name == "--help" || name == "-o" || name == "--output" || name == "--threads") continue;
    echo += name + "=";
    for (const auto& r : opt->results()) echo += r + ",";
    echo += "\n";
  }
  return pipeline::sha256_hex(echo).substr(0, 16);
}

void log_row_errors(std::string_view source, const std::vector<RowError>& errors) {
  if (errors.empty()) return;
  std::cerr << source << ": skipped " << errors.size() << " malformed row(s)\n";
  for (std::size_t i = 0; i < errors.size() && i < 5; ++i)
    std::cerr << "  line " << errors[i].line << ": " << errors[i].reason << '\n';
}

MalformedRowPolicy policy_of(bool strict) { return strict ? MalformedRowPolicy::Abort : MalformedRowPolicy::SkipAndLog; }

std::vector<io::ClassifiedUser> read_classified(const std::string& path) {
  return io::read_classification(io::Table::read_file(path));
}

struct Common {
  unsigned threads{0};
};

// ------------------------------------------------------------------ ingest

struct EdgeArgs {
  std::vector<std::string> follows;
  std::vector<std::string> followed_by;
  std::string focal;
  bool strict{false};

  void add(CLI::App* sub) {
    sub->add_option("--follows", follows, "Edge file, rows read as src follows dst")->check(CLI::ExistingFile);
    sub->add_option("--followed-by", followed_by, "Edge file, rows read as src is followed by dst")
        ->check(CLI::ExistingFile);
    sub->add_option("--focal", focal, "Focal-user id file")->check(CLI::ExistingFile);
    sub->add_flag("--strict", strict, "Abort on the first malformed row");
  }

  pipeline::LoadedEdges load() const {
    if (follows.empty() && followed_by.empty()) throw UsageError("at least one of --follows / --followed-by is required");
    auto loaded = pipeline::load_edges(follows, followed_by, focal, policy_of(strict));
    for (const auto& [path, report] : loaded.reports) log_row_errors(path, report.errors);
    return loaded;
  }
};

void setup_ingest(CLI::App& app, Common&) {
  auto* sub = app.add_subcommand("ingest", "Normalize, deduplicate and merge edge files");
  auto args = std::make_shared<EdgeArgs>();
  auto out = std::make_shared<std::string>();
  auto focal_out = std::make_shared<std::string>();
  args->add(sub);
  sub->add_option("-o,--output", *out, "Merged edge file (src follows dst)");
  sub->add_option("--focal-output", *focal_out, "Write the merged focal-user list here");
  sub->callback([sub, args, out, focal_out] {
    const auto loaded = args->load();
    const auto path = output_path(*out, "edges.tsv");
    auto os = io::open_output(path);
    io::write_provenance(os, "ingest", options_hash(*sub));
    io::write_edges(os, loaded.store);
    if (!focal_out->empty()) {
      auto fs_out = io::open_output(*focal_out);
      io::write_user_ids(fs_out, {loaded.store.focal_users().begin(), loaded.store.focal_users().end()});
    }
    std::size_t rows = 0, dups = 0, self = 0;
    for (const auto& [p, r] : loaded.reports) {
      rows += r.rows;
      dups += r.duplicates;
      self += r.self_edges;
    }
    std::cout << "rows=" << rows << " edges=" << loaded.store.size() << " duplicates=" << dups
              << " self_edges=" << self << " focal=" << loaded.store.focal_users().size() << '\n';
  });
}

// ----------------------------------------------------------------- degrees

void setup_degrees(CLI::App& app, Common& common) {
  auto* sub = app.add_subcommand("degrees", "Per-user in, out and mutual degree");
  auto args = std::make_shared<EdgeArgs>();
  auto out = std::make_shared<std::string>();
  auto min_total = std::make_shared<std::uint64_t>(0);
  args->add(sub);
  sub->add_option("-o,--output", *out, "Degree table");
  sub->add_option("--min-total-degree", *min_total, "Drop users with k_in + k_out below this");
  sub->callback([sub, args, out, min_total, &common] {
    const auto loaded = args->load();
    const auto users = pipeline::analysis_population(loaded.store);
    const auto rows = pipeline::filter_min_degree(compute_degree_summaries(loaded.store, users, common.threads), *min_total);
    auto os = io::open_output(output_path(*out, "degrees.tsv"));
    io::write_degrees(os, {"degrees", options_hash(*sub)}, rows);
  });
}

// ------------------------------------------------------------- reciprocity

void setup_reciprocity(CLI::App& app, Common& common) {
  auto* sub = app.add_subcommand("reciprocity", "Reciprocity coordinates per user and the overall mutual-pair ratio");
  auto args = std::make_shared<EdgeArgs>();
  auto degrees = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto focal_only = std::make_shared<bool>(false);
  args->add(sub);
  sub->add_option("--degrees", *degrees, "Degree table instead of edge files")->check(CLI::ExistingFile);
  sub->add_option("-o,--output", *out, "Reciprocity table");
  sub->add_flag("--focal-only", *focal_only, "Overall ratio over pairs of focal users only");
  sub->callback([sub, args, degrees, out, focal_only, &common] {
    std::vector<DegreeSummary> rows;
    if (!degrees->empty()) {
      if (!args->follows.empty() || !args->followed_by.empty())
        throw UsageError("--degrees cannot be combined with edge files");
      rows = io::read_degrees(io::Table::read_file(*degrees));
    } else {
      const auto loaded = args->load();
      rows = compute_degree_summaries(loaded.store, pipeline::analysis_population(loaded.store), common.threads);
      const double overall =
          *focal_only ? overall_reciprocity_focal(loaded.store) : overall_reciprocity(loaded.store);
      std::cout << "overall_reciprocity=" << io::format_double(overall) << '\n';
    }
    auto os = io::open_output(output_path(*out, "reciprocity.tsv"));
    io::write_reciprocity(os, {"reciprocity", options_hash(*sub)}, rows);
  });
}

// ---------------------------------------------------------------- classify

void setup_classify(CLI::App& app, Common&) {
  auto* sub = app.add_subcommand("classify", "Assign archetype labels from reciprocity coordinates");
  auto input = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto cfg = std::make_shared<ClassifierConfig>();
  sub->add_option("input", *input, "Table with user, r_in, r_out (or user, k_in, k_out, k_mutual)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--low", cfg->low_threshold, "Low threshold (inclusive)")->capture_default_str();
  sub->add_option("--high", cfg->high_threshold, "High threshold (inclusive)")->capture_default_str();
  sub->add_option("-o,--output", *out, "Classification table");
  sub->callback([sub, input, out, cfg] {
    try {
      cfg->validate();
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    const auto points = io::read_points(io::Table::read_file(*input));
    const auto rows = pipeline::classify_points(points, *cfg);
    auto os = io::open_output(output_path(*out, "classification.tsv"));
    io::write_classification(os, {"classify", options_hash(*sub)}, rows);
  });
}

// -------------------------------------------------------------------- grid

struct PropertySource {
  std::string properties;
  std::string profiles;
  std::string timeline;
  std::int64_t cutoff{kDefaultEngagementCutoff};
  bool strict{false};

  void add(CLI::App* sub) {
    sub->add_option("--properties", properties, "Property table")->check(CLI::ExistingFile);
    sub->add_option("--profiles", profiles, "Profile file (properties computed on the fly)")->check(CLI::ExistingFile);
    sub->add_option("--timeline", timeline, "Timeline file (with --profiles)")->check(CLI::ExistingFile);
    sub->add_option("--cutoff", cutoff, "Engagement cutoff, UTC epoch seconds")->capture_default_str();
    sub->add_flag("--strict", strict, "Abort on the first malformed row");
  }

  std::map<UserId, io::PropertyValues> load(std::span<const io::ClassifiedUser> users) const {
    if (!properties.empty()) {
      if (!profiles.empty()) throw UsageError("--properties cannot be combined with --profiles");
      return io::read_properties(io::Table::read_file(properties));
    }
    if (profiles.empty()) throw UsageError("one of --properties / --profiles is required");
    const auto activity = pipeline::load_activity(profiles, timeline, policy_of(strict), KindPrecedence::ReplyOverQuote, 0);
    std::vector<UserId> ids;
    for (const auto& c : users) ids.push_back(c.user);
    const auto built = pipeline::build_properties(ids, activity, cutoff);
    if (built.without_profile || built.incomplete_profile)
      std::cerr << "users without profile: " << built.without_profile
                << ", with incomplete profile: " << built.incomplete_profile << '\n';
    return pipeline::property_table(built.records);
  }
};

void setup_grid(CLI::App& app, Common&) {
  auto* sub = app.add_subcommand("grid", "Aggregate users over the reciprocity grid");
  auto classification = std::make_shared<std::string>();
  auto src = std::make_shared<PropertySource>();
  auto property = std::make_shared<std::string>();
  auto resolution = std::make_shared<std::size_t>(10);
  auto stat = std::make_shared<std::string>("count");
  auto out = std::make_shared<std::string>();
  sub->add_option("--classification", *classification, "Classification table")->required()->check(CLI::ExistingFile);
  src->add(sub);
  sub->add_option("--property", *property, "Property for --stat median");
  sub->add_option("--resolution", *resolution, "Cells per axis")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--stat", *stat, "median or count")->capture_default_str()->check(CLI::IsMember({"median", "count"}));
  sub->add_option("-o,--output", *out, "Grid table");
  sub->callback([sub, classification, src, property, resolution, stat, out] {
    const auto users = read_classified(*classification);
    GridSummary grid = [&] {
      if (*stat == "count") return pipeline::density_grid(users, *resolution);
      if (property->empty()) throw UsageError("--stat median requires --property");
      if (!is_property_name(*property)) throw UsageError("unknown property: " + *property);
      const auto table = src->load(users);
      return pipeline::property_grid(users, table, io::property_index(*property), *resolution);
    }();
    auto os = io::open_output(output_path(*out, "grid.tsv"));
    io::write_grid(os, {"grid", options_hash(*sub)}, grid);
  });
}

// ------------------------------------------------------------------- vocab

void setup_vocab(CLI::App& app, Common& common) {
  auto* sub = app.add_subcommand("vocab", "Characteristic words per corner archetype");
  auto classification = std::make_shared<std::string>();
  auto timeline = std::make_shared<std::string>();
  auto stopwords = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto cfg = std::make_shared<pipeline::VocabConfig>();
  auto strict = std::make_shared<bool>(false);
  auto no_hashtags = std::make_shared<bool>(false);
  auto include_all_posts = std::make_shared<bool>(false);
  sub->add_option("--classification", *classification, "Classification table")->required()->check(CLI::ExistingFile);
  sub->add_option("--timeline", *timeline, "Timeline file")->required()->check(CLI::ExistingFile);
  sub->add_option("--stopwords", *stopwords, "Stopword list, one per line")->check(CLI::ExistingFile);
  sub->add_option("-k,--top", cfg->options.k, "Words per category")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--min-support", cfg->options.min_support, "Minimum number of users using a word")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub->add_option("--language", cfg->filter.language, "Language code kept (empty: all)")->capture_default_str();
  sub->add_flag("--all-posts", *include_all_posts, "Use retweets, replies and quotes as well as originals");
  sub->add_flag("--no-hashtags", *no_hashtags, "Drop hashtag tokens");
  sub->add_flag("--strict", *strict, "Abort on the first malformed row");
  sub->add_option("-o,--output", *out, "Vocabulary table");
  sub->callback([sub, classification, timeline, stopwords, out, cfg, strict, no_hashtags, include_all_posts, &common] {
    cfg->options.threads = common.threads;
    cfg->text.keep_hashtags = !*no_hashtags;
    cfg->filter.originals_only = !*include_all_posts;
    const auto users = read_classified(*classification);
    const auto activity = pipeline::load_activity("", *timeline, policy_of(*strict), KindPrecedence::ReplyOverQuote, 0);
    const auto words = pipeline::characteristic_words(users, activity.timelines, pipeline::load_stopwords(*stopwords), *cfg);
    auto os = io::open_output(output_path(*out, "vocab.tsv"));
    io::write_vocab(os, {"vocab", options_hash(*sub)}, words, kCornerArchetypes, cfg->options.min_support);
  });
}

// ------------------------------------------------------------------- stats

void setup_stats(CLI::App& app, Common&) {
  auto* sub = app.add_subcommand("stats", "Kruskal-Wallis, Conover-Holm and letter values per property");
  auto classification = std::make_shared<std::string>();
  auto src = std::make_shared<PropertySource>();
  auto props = std::make_shared<std::vector<std::string>>();
  auto groups = std::make_shared<std::string>("archetype");
  auto out = std::make_shared<std::string>();
  auto lv_out = std::make_shared<std::string>();
  auto min_tail = std::make_shared<std::size_t>(8);
  sub->add_option("--classification", *classification, "Classification table")->required()->check(CLI::ExistingFile);
  src->add(sub);
  sub->add_option("--property", *props, "Property to test (repeatable; default all)");
  sub->add_option("--groups", *groups, "Grouping")->capture_default_str()->check(CLI::IsMember({"archetype"}));
  sub->add_option("--min-tail", *min_tail, "Letter values stop when fewer points remain per tail")
      ->capture_default_str();
  sub->add_option("-o,--output", *out, "Test table");
  sub->add_option("--letter-values", *lv_out, "Letter-value table");
  // `groups` is captured so the option storage outlives setup; archetype is the only grouping.
  sub->callback([sub, classification, src, props, groups, out, lv_out, min_tail] {
    std::vector<std::string> names = *props;
    if (names.empty())
      for (auto n : kPropertyNames) names.emplace_back(n);
    for (const auto& n : names)
      if (!is_property_name(n)) throw UsageError("unknown property: " + n);
    const auto users = read_classified(*classification);
    const auto table = src->load(users);
    const io::Provenance prov{"stats", options_hash(*sub)};
    std::vector<pipeline::PropertyAnalysis> analyses;
    for (const auto& n : names) analyses.push_back(pipeline::analyze_property(users, table, n, *min_tail));
    auto os = io::open_output(output_path(*out, "stats.tsv"));
    io::begin_stats(os, prov);
    for (const auto& a : analyses) {
      io::write_stats_rows(os, a.tests);
      if (!a.tests.note.empty()) std::cerr << a.tests.property << ": " << a.tests.note << '\n';
    }
    if (!lv_out->empty()) {
      auto ls = io::open_output(*lv_out);
      io::begin_letter_values(ls, prov);
      for (const auto& a : analyses)
        for (const auto& g : a.letter_values) io::write_letter_value_rows(ls, a.tests.property, g.group, g.n, g.summary);
    }
  });
}

// ------------------------------------------------------------------- flows

void setup_flows(CLI::App& app, Common&) {
  auto* sub = app.add_subcommand("flows", "Inter-archetype edge counts and tendencies");
  auto args = std::make_shared<EdgeArgs>();
  auto classification = std::make_shared<std::string>();
  auto corners = std::make_shared<bool>(false);
  auto dir = std::make_shared<std::string>();
  args->add(sub);
  sub->add_option("--classification", *classification, "Classification table")->required()->check(CLI::ExistingFile);
  sub->add_flag("--corners-only", *corners, "Use the four corner archetypes only");
  sub->add_option("--output-dir", *dir, "Directory for flow_counts.tsv, flow_following.tsv, flow_follower.tsv");
  sub->callback([sub, args, classification, corners, dir] {
    const auto loaded = args->load();
    const auto users = read_classified(*classification);
    const auto m = pipeline::archetype_flows(loaded.store, users, *corners);
    const fs::path target = dir->empty() ? default_output_dir() : fs::path(*dir);
    fs::create_directories(target);
    const io::Provenance prov{"flows", options_hash(*sub)};
    auto c = io::open_output((target / "flow_counts.tsv").string());
    io::write_flow_counts(c, prov, m);
    auto r = io::open_output((target / "flow_following.tsv").string());
    io::write_flow_normalized(r, prov, m, normalize_rows(m), "row");
    auto f = io::open_output((target / "flow_follower.tsv").string());
    io::write_flow_normalized(f, prov, m, normalize_cols(m), "column");
    std::cout << "labeled_edges=" << m.total() << " skipped_edges=" << m.skipped_edges << '\n';
  });
}

// ------------------------------------------------------------------- synth

void setup_synth(CLI::App& app, Common&) {
  auto* sub = app.add_subcommand("synth", "Write a planted-archetype dataset with ground-truth labels");
  auto opts = std::make_shared<pipeline::SynthOptions>();
  auto dir = std::make_shared<std::string>();
  auto no_activity = std::make_shared<bool>(false);
  sub->add_option("--output-dir", *dir, "Dataset directory")->required();
  sub->add_option("--block-size", opts->block_size, "Users per corner block")->capture_default_str();
  sub->add_option("--seed", opts->seed, "Random seed")->capture_default_str();
  sub->add_option("--blocks", opts->blocks_file, "Block table (label, size, r_in_low, r_in_high, r_out_low, r_out_high)")
      ->check(CLI::ExistingFile);
  sub->add_option("--posts-per-user", opts->posts_per_user, "Timeline length per planted user")->capture_default_str();
  sub->add_flag("--no-activity", *no_activity, "Skip profiles and timelines");
  sub->callback([opts, dir, no_activity] {
    opts->with_activity = !*no_activity;
    const auto res = pipeline::write_synthetic_dataset(*dir, *opts);
    std::cout << "planted=" << res.network.planted.size() << " edges=" << res.network.store.size()
              << " config=" << res.config_path.string() << '\n';
  });
}

// ------------------------------------------------------------------ report

void setup_report(CLI::App& app, Common& common) {
  auto* sub = app.add_subcommand("report", "Run every stage from a config file into one bundle");
  auto config = std::make_shared<std::string>();
  auto dir = std::make_shared<std::string>();
  auto overrides = std::make_shared<std::vector<std::string>>();
  auto verify = std::make_shared<std::string>();
  sub->add_option("--config", *config, "Config file (key = value)")->check(CLI::ExistingFile);
  sub->add_option("--output-dir", *dir, "Bundle directory (overrides the config and RECIP_OUTPUT_DIR)");
  sub->add_option("--set", *overrides, "Override a config key: key=value (repeatable)");
  sub->add_option("--verify", *verify, "Check the checksums of an existing manifest instead of running")
      ->check(CLI::ExistingFile);
  sub->callback([config, dir, overrides, verify, &common] {
    if (!verify->empty()) {
      const auto problems = pipeline::verify_manifest(*verify);
      for (const auto& p : problems) std::cerr << p << '\n';
      if (!problems.empty()) throw DataError(std::to_string(problems.size()) + " checksum problem(s)");
      std::cout << "manifest ok\n";
      return;
    }
    if (config->empty()) throw UsageError("--config is required unless --verify is given");
    PipelineConfig cfg = pipeline::read_config_file(*config);
    for (const auto& kv : *overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
      pipeline::apply_config_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!dir->empty()) cfg.output_dir = *dir;
    if (cfg.output_dir.empty()) cfg.output_dir = (default_output_dir() / "report").string();
    if (common.threads) cfg.threads = common.threads;
    const auto bundle = pipeline::run_pipeline(cfg);
    std::cout << "wrote " << bundle.files.size() + 1 << " files to " << bundle.directory.string() << '\n';
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reciprocity-space analysis of follow graphs"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--threads", common.threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
  app.set_version_flag("--version", std::string(pipeline::kToolVersion));

  setup_ingest(app, common);
  setup_degrees(app, common);
  setup_reciprocity(app, common);
  setup_classify(app, common);
  setup_grid(app, common);
  setup_vocab(app, common);
  setup_stats(app, common);
  setup_flows(app, common);
  setup_synth(app, common);
  setup_report(app, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}
