/*
 * vocab_extract.hpp
 *
 * Characteristic vocabulary per user category. Every user is one document
 * (the union of tokens over their qualifying posts), and each (word,
 * category) pair is scored by the 2x2 chi-square statistic over users:
 *
 *                   in category   not in category
 *   uses word           n11            n10
 *   does not use        n01            n00
 *
 *   E_wu = row_w * col_u / n_all,   chi2 = sum (E_wu - n_wu)^2 / E_wu
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "recip/activity_metrics.hpp"
#include "recip/parallel.hpp"
#include "recip/text.hpp"
#include "recip/types.hpp"

namespace recip {

struct UserDocument {
  UserId user;
  std::vector<std::string> vocabulary;  // sorted, distinct
};

/// Which posts feed a user's document.
struct DocumentFilter {
  bool originals_only{true};
  /// Required language tag; empty accepts any.
  std::string language{"en"};

  bool accepts(const PostRecord& p) const {
    if (originals_only && p.kind != PostKind::Original) return false;
    return language.empty() || p.lang == language;
  }
};

/// One document per user with at least one qualifying post, ordered by user.
inline std::vector<UserDocument> build_user_documents(const std::map<UserId, std::vector<PostRecord>>& timelines,
                                                      const StopwordSet& stopwords = {},
                                                      const DocumentFilter& filter = {},
                                                      const TextOptions& text = {}) {
  std::vector<UserDocument> docs;
  for (const auto& [user, posts] : timelines) {
    bool any = false;
    std::set<std::string> vocab;
    for (const auto& p : posts) {
      if (!filter.accepts(p)) continue;
      any = true;
      for (auto& tok : preprocess_text(p.text, stopwords, text)) vocab.insert(std::move(tok));
    }
    if (any) docs.push_back({user, std::vector<std::string>(vocab.begin(), vocab.end())});
  }
  return docs;
}

// ---------------------------------------------------------------- scoring

struct ContingencyCounts {
  std::uint64_t n11{0};  // uses word, in category
  std::uint64_t n10{0};  // uses word, outside category
  std::uint64_t n01{0};  // no word, in category
  std::uint64_t n00{0};  // no word, outside category

  std::uint64_t n_all() const { return n11 + n10 + n01 + n00; }

  /// Word is over-represented in the category.
  bool positively_associated() const {
    return static_cast<long double>(n11) * n00 > static_cast<long double>(n10) * n01;
  }

  friend bool operator==(const ContingencyCounts&, const ContingencyCounts&) = default;
};

/// Cells with zero expectation contribute nothing (their observed count is
/// necessarily zero as well).
inline double chi_square(const ContingencyCounts& c) {
  const double n = static_cast<double>(c.n_all());
  if (c.n_all() == 0) throw EmptyInputError("chi-square of an empty table is undefined");
  const double n00 = static_cast<double>(c.n00), n01 = static_cast<double>(c.n01);
  const double n10 = static_cast<double>(c.n10), n11 = static_cast<double>(c.n11);

  const double e00 = (n01 + n00) * (n10 + n00) / n;
  const double e01 = (n01 + n11) * (n00 + n01) / n;
  const double e10 = (n10 + n11) * (n00 + n10) / n;
  const double e11 = (n01 + n11) * (n10 + n11) / n;

  auto term = [](double expected, double observed) {
    if (expected == 0.0) return 0.0;
    const double d = expected - observed;
    return d * d / expected;
  };
  return term(e00, n00) + term(e01, n01) + term(e10, n10) + term(e11, n11);
}

struct ChiSquareResult {
  std::string word;
  double score{0};
  ContingencyCounts counts;
};

struct VocabOptions {
  std::size_t k{20};
  /// Minimum number of users (any category) using the word.
  std::uint64_t min_support{5};
  /// Count roster users without a document in n_all and the not-using cells.
  bool include_silent_users{true};
  unsigned threads{1};
};

/// Top-k positively associated words per category. `roster` maps every
/// analyzed user to a category; documents of users outside the roster are
/// ignored. Ranking: score descending, then word ascending.
template <typename Label>
std::map<Label, std::vector<ChiSquareResult>> top_k_words(std::span<const UserDocument> docs,
                                                          const std::unordered_map<UserId, Label>& roster,
                                                          std::span<const Label> categories,
                                                          const VocabOptions& opts = {}) {
  if (opts.k == 0) throw InvalidArgument("k must be >= 1");
  if (opts.min_support == 0) throw InvalidArgument("min_support must be >= 1");

  std::map<Label, std::size_t> slot;
  for (std::size_t i = 0; i < categories.size(); ++i) slot.emplace(categories[i], i);

  // Population and per-category sizes.
  std::vector<std::uint64_t> category_size(categories.size(), 0);
  std::uint64_t n_all = 0;
  auto tally_member = [&](const Label& label) {
    ++n_all;
    if (auto it = slot.find(label); it != slot.end()) ++category_size[it->second];
  };
  if (opts.include_silent_users) {
    for (const auto& [user, label] : roster) tally_member(label);
  } else {
    for (const auto& d : docs)
      if (auto it = roster.find(d.user); it != roster.end()) tally_member(it->second);
  }

  struct WordTally {
    std::uint64_t users{0};
    std::vector<std::uint64_t> in_category;
  };
  std::map<std::string, WordTally> index;
  for (const auto& d : docs) {
    const auto member = roster.find(d.user);
    if (member == roster.end()) continue;
    const auto cat = slot.find(member->second);
    for (const auto& w : d.vocabulary) {
      auto& t = index[w];
      if (t.in_category.empty()) t.in_category.assign(categories.size(), 0);
      ++t.users;
      if (cat != slot.end()) ++t.in_category[cat->second];
    }
  }

  std::vector<std::vector<ChiSquareResult>> ranked(categories.size());
  parallel_for(categories.size(), opts.threads, [&](std::size_t ci) {
    std::vector<ChiSquareResult> scored;
    for (const auto& [word, t] : index) {
      if (t.users < opts.min_support) continue;
      ContingencyCounts c;
      c.n11 = t.in_category[ci];
      c.n10 = t.users - c.n11;
      c.n01 = category_size[ci] - c.n11;
      c.n00 = n_all - c.n11 - c.n10 - c.n01;
      if (!c.positively_associated()) continue;
      scored.push_back({word, chi_square(c), c});
    }
    auto better = [](const ChiSquareResult& a, const ChiSquareResult& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.word < b.word;
    };
    const std::size_t keep = std::min(opts.k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(), better);
    scored.resize(keep);
    ranked[ci] = std::move(scored);
  });

  std::map<Label, std::vector<ChiSquareResult>> out;
  for (std::size_t i = 0; i < categories.size(); ++i) out.emplace(categories[i], std::move(ranked[i]));
  return out;
}

}  // namespace recip
