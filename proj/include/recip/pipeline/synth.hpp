/*
 * synth.hpp
 *
 * Writes a planted network as a complete input dataset: edges, focal users,
 * ground-truth labels and (optionally) profiles plus timelines whose word
 * use depends on the planted archetype, and a report config pointing at
 * those files. Output is a pure function of the options.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "recip/activity_metrics.hpp"
#include "recip/io/edges.hpp"
#include "recip/io/profiles.hpp"
#include "recip/io/timeline.hpp"
#include "recip/io/tsv.hpp"
#include "recip/planted_network.hpp"

namespace recip::pipeline {

struct SynthOptions {
  std::size_t block_size{50};
  std::uint64_t seed{1};
  std::string blocks_file;  // empty: four corner blocks
  bool with_activity{true};
  std::size_t posts_per_user{12};
};

struct SynthResult {
  PlantedNetwork network;
  std::filesystem::path config_path;
};

/// Block table columns: label, size, r_in_low, r_in_high, r_out_low,
/// r_out_high; optional min_mutual, max_mutual, max_degree, clique.
inline std::vector<PlantedBlock> read_blocks(const io::Table& t) {
  const auto cl = t.column("label"), cs = t.column("size");
  const auto c1 = t.column("r_in_low"), c2 = t.column("r_in_high");
  const auto c3 = t.column("r_out_low"), c4 = t.column("r_out_high");
  std::vector<PlantedBlock> out;
  for (std::size_t r = 0; r < t.rows().size(); ++r) {
    PlantedBlock b;
    const auto label = parse_archetype(t.rows()[r][cl]);
    if (!label) throw DataError(t.source() + ": row " + std::to_string(r + 1) + " has an unknown label");
    b.label = *label;
    b.size = t.u64(r, cs);
    b.r_in = {t.real(r, c1), t.real(r, c2)};
    b.r_out = {t.real(r, c3), t.real(r, c4)};
    if (t.has_column("min_mutual")) b.min_mutual = t.u64(r, t.column("min_mutual"));
    if (t.has_column("max_mutual")) b.max_mutual = t.u64(r, t.column("max_mutual"));
    if (t.has_column("max_degree")) b.max_degree = t.u64(r, t.column("max_degree"));
    if (t.has_column("clique")) b.mutual_clique = t.rows()[r][t.column("clique")] == "true";
    out.push_back(b);
  }
  if (out.empty()) throw DataError(t.source() + ": no blocks");
  return out;
}

namespace detail {

// 2021-07-01T00:00:00Z; posts spread over the following four weeks so
// some fall after the default engagement cutoff.
inline constexpr std::int64_t kSynthEpoch = 1625097600;
inline constexpr std::int64_t kSynthSpan = 28 * 86400;

inline const std::vector<std::string>& common_words() {
  static const std::vector<std::string> w{"today", "people", "time", "good", "new", "week",
                                          "think", "really", "great", "thanks", "world", "news"};
  return w;
}

inline const std::vector<std::string>& flavor_words(Archetype a) {
  static const std::map<Archetype, std::vector<std::string>> w{
      {Archetype::Feeding, {"giveaway", "follow", "retweet", "win", "prize", "chance"}},
      {Archetype::Accumulating, {"breaking", "official", "announcement", "report", "update", "statement"}},
      {Archetype::Flowing, {"photo", "morning", "coffee", "walk", "sunset", "weekend"}},
      {Archetype::Circulating, {"friends", "chat", "lol", "miss", "haha", "tonight"}},
      {Archetype::Intermediate, {"music", "game", "movie", "book", "song", "show"}},
  };
  return w.at(a);
}

inline std::string stopword_list() {
  return "the\na\nan\nand\nor\nof\nto\nin\non\nfor\nis\nit\nthis\nthat\nwith\nat\nby\nfrom\nbe\nare\nwas\ni\nyou\n"
         "we\nmy\nyour\nour\n";
}

inline std::vector<PostRecord> synth_posts(UserId user, Archetype label, std::size_t count, std::mt19937_64& rng) {
  const auto& flavor = flavor_words(label);
  const auto& common = common_words();
  std::vector<PostRecord> posts;
  for (std::size_t i = 0; i < count; ++i) {
    PostRecord p;
    p.author = user;
    p.created_at = kSynthEpoch + static_cast<std::int64_t>(recip::detail::uniform_below(rng, kSynthSpan));
    const auto roll = recip::detail::uniform_below(rng, 10);
    p.kind = roll < 5 ? PostKind::Original : roll < 7 ? PostKind::Retweet : roll < 9 ? PostKind::Reply : PostKind::Quote;
    if (p.kind == PostKind::Retweet)
      p.source_created_at = p.created_at - static_cast<std::int64_t>(recip::detail::uniform_below(rng, 3 * 86400));
    p.retweeted_count = recip::detail::uniform_below(rng, label == Archetype::Accumulating ? 200 : 20);
    p.liked_count = recip::detail::uniform_below(rng, label == Archetype::Accumulating ? 800 : 60);
    p.lang = recip::detail::uniform_below(rng, 8) == 0 ? "ja" : "en";
    std::string text = "the " + common[recip::detail::uniform_below(rng, common.size())];
    text += " " + flavor[recip::detail::uniform_below(rng, flavor.size())];
    text += " and " + flavor[recip::detail::uniform_below(rng, flavor.size())];
    text += " " + common[recip::detail::uniform_below(rng, common.size())];
    if (recip::detail::uniform_below(rng, 4) == 0) text = "@someone " + text;
    if (recip::detail::uniform_below(rng, 5) == 0) text += " https://example.com/x";
    p.text = std::move(text);
    posts.push_back(std::move(p));
  }
  std::stable_sort(posts.begin(), posts.end(),
                   [](const PostRecord& a, const PostRecord& b) { return a.created_at < b.created_at; });
  return posts;
}

template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
  auto out = io::open_output(path.string());
  fn(out);
  out.close();
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace detail

/// Writes edges.tsv, focal.txt, labels.tsv, report.cfg and, with activity,
/// profiles.tsv, timeline.tsv and stopwords.txt into `dir`.
inline SynthResult write_synthetic_dataset(const std::filesystem::path& dir, const SynthOptions& opts) {
  PlantedSpec spec;
  spec.seed = opts.seed;
  if (opts.blocks_file.empty()) {
    spec = corner_spec(opts.block_size, opts.seed);
  } else {
    spec.blocks = read_blocks(io::Table::read_file(opts.blocks_file));
  }
  SynthResult res{generate_planted_network(spec), dir / "report.cfg"};
  const auto& net = res.network;
  std::filesystem::create_directories(dir);

  detail::write_file(dir / "edges.tsv", [&](std::ostream& os) { io::write_edges(os, net.store); });
  detail::write_file(dir / "focal.txt", [&](std::ostream& os) { io::write_user_ids(os, net.planted); });
  detail::write_file(dir / "labels.tsv", [&](std::ostream& os) {
    os << "user\tlabel\n";
    for (const auto& u : net.planted) os << u.value << '\t' << to_string(net.labels.at(u)) << '\n';
  });

  if (opts.with_activity) {
    std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
    const auto degrees = compute_degree_summaries(net.store, net.planted, 1);
    std::map<UserId, ProfileFields> profiles;
    std::vector<PostRecord> posts;
    for (const auto& d : degrees) {
      const auto label = net.labels.at(d.user);
      auto tl = detail::synth_posts(d.user, label, opts.posts_per_user, rng);
      ProfileFields pf;
      pf.user = d.user;
      pf.statuses_count = tl.size() + recip::detail::uniform_below(rng, 5000);
      pf.favourites_count = recip::detail::uniform_below(rng, 10000);
      pf.followers_count = d.k_in;
      pf.friends_count = d.k_out;
      pf.created_at = detail::kSynthEpoch - static_cast<std::int64_t>(recip::detail::uniform_below(rng, 10 * 365 * 86400ULL));
      profiles.emplace(d.user, pf);
      posts.insert(posts.end(), std::make_move_iterator(tl.begin()), std::make_move_iterator(tl.end()));
    }
    detail::write_file(dir / "profiles.tsv", [&](std::ostream& os) { io::write_profiles(os, profiles); });
    detail::write_file(dir / "timeline.tsv", [&](std::ostream& os) { io::write_timeline_tsv(os, posts); });
    detail::write_file(dir / "stopwords.txt", [&](std::ostream& os) { os << detail::stopword_list(); });
  }

  detail::write_file(res.config_path, [&](std::ostream& os) {
    os << "# synthetic dataset, seed " << opts.seed << "\n";
    os << "edges_follows = edges.tsv\n";
    os << "focal = focal.txt\n";
    if (opts.with_activity) {
      os << "profiles = profiles.tsv\n";
      os << "timeline = timeline.tsv\n";
      os << "stopwords = stopwords.txt\n";
      os << "vocab_min_support = 3\n";
    }
    os << "seed = " << opts.seed << '\n';
  });
  return res;
}

/// Share of planted users whose label in `classified` matches ground truth;
/// users missing from `classified` count as misses.
inline double recovery_rate(const io::Table& labels, const io::Table& classified) {
  std::map<std::string, std::string> truth;
  const auto tu = labels.column("user"), tl = labels.column("label");
  for (const auto& row : labels.rows()) truth[row[tu]] = row[tl];
  if (truth.empty()) throw EmptyInputError("no planted labels");
  const auto cu = classified.column("user"), cl = classified.column("label");
  std::size_t hits = 0;
  for (const auto& row : classified.rows()) {
    const auto it = truth.find(row[cu]);
    if (it != truth.end() && it->second == row[cl]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace recip::pipeline
