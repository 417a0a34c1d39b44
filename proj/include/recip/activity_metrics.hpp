/*
 * activity_metrics.hpp
 *
 * Per-user behavioural properties derived from a post timeline and the
 * account profile: post-kind composition, posting rate, and engagement
 * means restricted to posts old enough to have accumulated engagement.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recip/types.hpp"

namespace recip {

enum class PostKind : std::uint8_t { Original, Retweet, Reply, Quote };

inline constexpr std::string_view to_string(PostKind k) {
  switch (k) {
    case PostKind::Original: return "original";
    case PostKind::Retweet: return "retweet";
    case PostKind::Reply: return "reply";
    case PostKind::Quote: return "quote";
  }
  return "?";
}

/// Markers a raw post can carry at once; resolved to a single kind.
struct KindMarkers {
  bool retweet{false};
  bool reply{false};
  bool quote{false};
};

enum class KindPrecedence {
  ReplyOverQuote,  // retweet > reply > quote
  QuoteOverReply,  // retweet > quote > reply
};

inline PostKind resolve_kind(const KindMarkers& m, KindPrecedence order = KindPrecedence::ReplyOverQuote) {
  if (m.retweet) return PostKind::Retweet;
  if (order == KindPrecedence::ReplyOverQuote) {
    if (m.reply) return PostKind::Reply;
    if (m.quote) return PostKind::Quote;
  } else {
    if (m.quote) return PostKind::Quote;
    if (m.reply) return PostKind::Reply;
  }
  return PostKind::Original;
}

struct PostRecord {
  UserId author;
  std::int64_t created_at{0};  // UTC epoch seconds
  PostKind kind{PostKind::Original};
  std::uint64_t retweeted_count{0};
  std::uint64_t liked_count{0};
  std::optional<std::int64_t> source_created_at;  // retweets only
  std::string lang;
  std::string text;

  friend bool operator==(const PostRecord&, const PostRecord&) = default;
};

/// Throws DataError unless source_created_at is present exactly for retweets.
inline void validate(const PostRecord& p) {
  const bool is_rt = p.kind == PostKind::Retweet;
  if (is_rt && !p.source_created_at) throw DataError("retweet without source_created_at");
  if (!is_rt && p.source_created_at) throw DataError("source_created_at on a non-retweet post");
}

/// 2021-07-20T00:00:00Z.
inline constexpr std::int64_t kDefaultEngagementCutoff = 1626739200;

// ------------------------------------------------------------- composition

struct TweetComposition {
  double original{0}, retweet{0}, reply{0}, quote{0};
};

/// Share of each kind; nullopt for an empty timeline.
inline std::optional<TweetComposition> tweet_composition(std::span<const PostRecord> timeline) {
  if (timeline.empty()) return std::nullopt;
  std::array<std::size_t, 4> counts{};
  for (const auto& p : timeline) ++counts[static_cast<std::size_t>(p.kind)];
  const double n = static_cast<double>(timeline.size());
  return TweetComposition{counts[0] / n, counts[1] / n, counts[2] / n, counts[3] / n};
}

/// Posts per day over the oldest-to-newest span, with the span floored at
/// one second. Needs at least two posts.
inline std::optional<double> tweets_per_day(std::span<const PostRecord> timeline) {
  if (timeline.size() < 2) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(
      timeline.begin(), timeline.end(),
      [](const PostRecord& a, const PostRecord& b) { return a.created_at < b.created_at; });
  const double span_days = static_cast<double>(hi->created_at - lo->created_at) / 86400.0;
  return static_cast<double>(timeline.size()) / std::max(span_days, 1.0 / 86400.0);
}

// -------------------------------------------------------------- engagement

enum class EngagementScope { All, OriginalOnly };

/// Retweets are dated by the post they share.
inline std::int64_t effective_timestamp(const PostRecord& p) {
  if (p.kind == PostKind::Retweet && p.source_created_at) return *p.source_created_at;
  return p.created_at;
}

inline bool qualifies_for_engagement(const PostRecord& p, std::int64_t cutoff, EngagementScope scope) {
  if (scope == EngagementScope::OriginalOnly && p.kind != PostKind::Original) return false;
  return effective_timestamp(p) < cutoff;
}

struct EngagementMeans {
  double retweeted{0};
  double liked{0};
  std::size_t posts{0};
};

/// Means over qualifying posts (denominator = qualifying count).
inline std::optional<EngagementMeans> engagement_summary(std::span<const PostRecord> timeline,
                                                         std::int64_t cutoff, EngagementScope scope) {
  long double rt = 0, lk = 0;
  std::size_t n = 0;
  for (const auto& p : timeline) {
    if (!qualifies_for_engagement(p, cutoff, scope)) continue;
    rt += p.retweeted_count;
    lk += p.liked_count;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return EngagementMeans{static_cast<double>(rt / n), static_cast<double>(lk / n), n};
}

// ----------------------------------------------------------------- records

struct ProfileFields {
  UserId user;
  std::optional<std::uint64_t> statuses_count;
  std::optional<std::uint64_t> favourites_count;
  std::optional<std::uint64_t> followers_count;
  std::optional<std::uint64_t> friends_count;
  std::optional<std::int64_t> created_at;
};

class MissingProfileFields : public DataError {
 public:
  MissingProfileFields(UserId user, std::vector<std::string> fields)
      : DataError(message(user, fields)), user_(user), fields_(std::move(fields)) {}

  UserId user() const { return user_; }
  const std::vector<std::string>& fields() const { return fields_; }

 private:
  static std::string message(UserId user, const std::vector<std::string>& fields) {
    std::string m = "profile of user " + std::to_string(user.value) + " lacks";
    for (const auto& f : fields) m += " " + f;
    return m;
  }
  UserId user_;
  std::vector<std::string> fields_;
};

struct UserPropertyRecord {
  UserId user;
  std::optional<TweetComposition> composition;
  std::optional<double> tweets_per_day;
  std::uint64_t statuses_count{0};
  std::uint64_t favourites_count{0};
  std::uint64_t followers_count{0};
  std::uint64_t friends_count{0};
  std::int64_t created_at{0};
  std::optional<double> mean_retweeted;
  std::optional<double> mean_liked;
  std::optional<double> mean_original_retweeted;
  std::optional<double> mean_original_liked;
};

inline UserPropertyRecord build_property_record(const ProfileFields& profile,
                                                std::span<const PostRecord> timeline,
                                                std::int64_t cutoff = kDefaultEngagementCutoff) {
  std::vector<std::string> missing;
  if (!profile.statuses_count) missing.emplace_back("statuses_count");
  if (!profile.favourites_count) missing.emplace_back("favourites_count");
  if (!profile.followers_count) missing.emplace_back("followers_count");
  if (!profile.friends_count) missing.emplace_back("friends_count");
  if (!profile.created_at) missing.emplace_back("created_at");
  if (!missing.empty()) throw MissingProfileFields(profile.user, std::move(missing));

  UserPropertyRecord r;
  r.user = profile.user;
  r.composition = tweet_composition(timeline);
  r.tweets_per_day = recip::tweets_per_day(timeline);
  r.statuses_count = *profile.statuses_count;
  r.favourites_count = *profile.favourites_count;
  r.followers_count = *profile.followers_count;
  r.friends_count = *profile.friends_count;
  r.created_at = *profile.created_at;
  if (const auto all = engagement_summary(timeline, cutoff, EngagementScope::All)) {
    r.mean_retweeted = all->retweeted;
    r.mean_liked = all->liked;
  }
  if (const auto orig = engagement_summary(timeline, cutoff, EngagementScope::OriginalOnly)) {
    r.mean_original_retweeted = orig->retweeted;
    r.mean_original_liked = orig->liked;
  }
  return r;
}

/// Property names in reporting order.
inline constexpr std::array<std::string_view, 14> kPropertyNames{
    "p_original",     "p_retweets",      "p_replies",     "p_quotes",
    "statuses_count", "tweets_per_day",  "favourites_count", "created_at",
    "friends_count",  "followers_count", "mean_retweeted",   "mean_liked",
    "mean_original_retweeted", "mean_original_liked"};

inline bool is_property_name(std::string_view name) {
  return std::find(kPropertyNames.begin(), kPropertyNames.end(), name) != kPropertyNames.end();
}

/// Numeric value of a named property; nullopt for an empty marker.
inline std::optional<double> property_value(const UserPropertyRecord& r, std::string_view name) {
  auto comp = [&](double TweetComposition::*field) -> std::optional<double> {
    if (!r.composition) return std::nullopt;
    return (*r.composition).*field;
  };
  if (name == "p_original") return comp(&TweetComposition::original);
  if (name == "p_retweets") return comp(&TweetComposition::retweet);
  if (name == "p_replies") return comp(&TweetComposition::reply);
  if (name == "p_quotes") return comp(&TweetComposition::quote);
  if (name == "statuses_count") return static_cast<double>(r.statuses_count);
  if (name == "tweets_per_day") return r.tweets_per_day;
  if (name == "favourites_count") return static_cast<double>(r.favourites_count);
  if (name == "created_at") return static_cast<double>(r.created_at);
  if (name == "friends_count") return static_cast<double>(r.friends_count);
  if (name == "followers_count") return static_cast<double>(r.followers_count);
  if (name == "mean_retweeted") return r.mean_retweeted;
  if (name == "mean_liked") return r.mean_liked;
  if (name == "mean_original_retweeted") return r.mean_original_retweeted;
  if (name == "mean_original_liked") return r.mean_original_liked;
  throw InvalidArgument("unknown property: " + std::string(name));
}

/// Groups posts by author (ordered by id). A nonzero cap keeps only the
/// most recent `cap` posts of each author.
inline std::map<UserId, std::vector<PostRecord>> group_timelines(std::vector<PostRecord> posts,
                                                                 std::size_t cap = 0) {
  std::map<UserId, std::vector<PostRecord>> out;
  for (auto& p : posts) out[p.author].push_back(std::move(p));
  if (cap != 0) {
    for (auto& [user, tl] : out) {
      if (tl.size() <= cap) continue;
      std::stable_sort(tl.begin(), tl.end(),
                       [](const PostRecord& a, const PostRecord& b) { return a.created_at > b.created_at; });
      tl.resize(cap);
    }
  }
  return out;
}

}  // namespace recip
