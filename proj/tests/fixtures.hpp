// Hand-built timelines shared by the unit and acceptance suites.
#pragma once

#include <vector>

#include "recip/activity_metrics.hpp"

namespace recip::testkit {

inline constexpr std::int64_t kHour = 3600;
inline constexpr std::int64_t kDay = 86400;
inline constexpr std::int64_t kCutoff = kDefaultEngagementCutoff;

inline PostRecord post(PostKind kind, std::int64_t at, std::uint64_t rt, std::uint64_t liked,
                       std::optional<std::int64_t> source = std::nullopt) {
  PostRecord p;
  p.author = UserId{1};
  p.kind = kind;
  p.created_at = at;
  p.retweeted_count = rt;
  p.liked_count = liked;
  p.source_created_at = source;
  p.lang = "en";
  return p;
}

/// Six posts in three pairs:
///   [0,1] originals before the cutoff, retweeted 3 and 5;
///   [2,3] an original after the cutoff and one before with liked = 10;
///   [4,5] a retweet posted after the cutoff of a source from before it,
///         and a reply after the cutoff.
/// Qualifying (all kinds): 0, 1, 3, 4 -> retweeted (3+5+0+8)/4 = 4,
/// liked (1+3+10+0)/4 = 3.5. Originals only: 0, 1, 3 -> 8/3 and 14/3.
inline std::vector<PostRecord> six_post_fixture() {
  return {
      post(PostKind::Original, kCutoff - 3 * kDay, 3, 1),
      post(PostKind::Original, kCutoff - 2 * kDay, 5, 3),
      post(PostKind::Original, kCutoff + kHour, 40, 99),
      post(PostKind::Original, kCutoff - kDay, 0, 10),
      post(PostKind::Retweet, kCutoff + 2 * kHour, 8, 0, kCutoff - 6 * kHour),
      post(PostKind::Reply, kCutoff + 5 * kHour, 100, 100),
  };
}

}  // namespace recip::testkit
