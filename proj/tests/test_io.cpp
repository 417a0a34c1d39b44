#include <gtest/gtest.h>

#include <sstream>

#include "recip/io/edges.hpp"
#include "recip/io/profiles.hpp"
#include "recip/io/tables.hpp"
#include "recip/io/timeline.hpp"
#include "recip/pipeline/config.hpp"

using namespace recip;
using namespace recip::io;

namespace {

std::string data(const char* name) { return std::string(RECIP_TEST_DATA) + "/" + name; }

Table table(const std::string& text) {
  std::istringstream in(text);
  return Table::read(in);
}

}  // namespace

TEST(Tsv, EscapeRoundTrip) {
  const std::string raw = "a\tb\\c\nd\re";
  EXPECT_EQ(escape_field(raw), "a\\tb\\\\c\\nd\\re");
  EXPECT_EQ(unescape_field(escape_field(raw)), raw);
  EXPECT_FALSE(unescape_field("dangling\\"));
  EXPECT_FALSE(unescape_field("\\q"));
}

TEST(Tsv, NumberFormatting) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_optional(std::nullopt), "NA");
  double v = 0;
  EXPECT_TRUE(parse_number("1e-3", v));
  EXPECT_EQ(v, 1e-3);
  EXPECT_FALSE(parse_number("1.5x", v));
  EXPECT_FALSE(parse_number("", v));
}

TEST(Tsv, TableSkipsCommentsAndChecksWidth) {
  const auto t = table("# producer=x config_hash=0\nuser\tvalue\n1\t2.5\n2\tNA\n");
  EXPECT_EQ(t.rows().size(), 2u);
  EXPECT_EQ(t.real(0, t.column("value")), 2.5);
  EXPECT_FALSE(t.optional_real(1, 1));
  EXPECT_THROW(t.column("missing"), DataError);
  EXPECT_THROW(table("a\tb\n1\n"), DataError);
  EXPECT_THROW(table("# only a comment\n"), DataError);
  EXPECT_THROW(table("a\nx\n").u64(0, 0), DataError);
}

TEST(Edges, FileReportsMalformedRow) {
  const auto r = read_edge_file(data("follows.tsv"), EdgeDirection::Follows);
  EXPECT_EQ(r.store.size(), 3u);
  ASSERT_EQ(r.report.errors.size(), 1u);
  EXPECT_EQ(r.report.errors[0].line, 5u);
  EXPECT_EQ(r.report.self_edges, 1u);
  IngestOptions strict;
  strict.policy = MalformedRowPolicy::Abort;
  try {
    read_edge_file(data("follows.tsv"), EdgeDirection::Follows, strict);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("follows.tsv"), std::string::npos);
  }
  EXPECT_THROW(read_edge_file(data("no_such_file.tsv"), EdgeDirection::Follows), DataError);
}

TEST(Edges, UserIdList) {
  std::istringstream in("# focal\n5\n\n3 \n");
  EXPECT_EQ(read_user_ids(in), (std::vector<UserId>{UserId{5}, UserId{3}}));
  std::istringstream bad("5\nx\n");
  EXPECT_THROW(read_user_ids(bad), DataError);
}

TEST(Timeline, TsvAndJsonlAgree) {
  const auto tsv = read_timeline_file(data("timeline.tsv"));
  const auto jsonl = read_timeline_file(data("timeline.jsonl"));
  EXPECT_EQ(tsv.posts, jsonl.posts);
  ASSERT_EQ(tsv.posts.size(), 5u);
  ASSERT_EQ(tsv.errors.size(), 1u);
  ASSERT_EQ(jsonl.errors.size(), 1u);
  EXPECT_EQ(tsv.posts[0].text, "Good morning\tfriends");
  EXPECT_EQ(tsv.posts[2].kind, PostKind::Retweet);
  EXPECT_EQ(tsv.posts[3].kind, PostKind::Reply);
  EXPECT_EQ(tsv.posts[4].kind, PostKind::Quote);
}

TEST(Timeline, QuotePrecedenceOption) {
  TimelineOptions opts;
  opts.precedence = KindPrecedence::QuoteOverReply;
  EXPECT_EQ(read_timeline_file(data("timeline.tsv"), opts).posts[3].kind, PostKind::Quote);
}

TEST(Timeline, StrictModeAborts) {
  TimelineOptions opts;
  opts.policy = MalformedRowPolicy::Abort;
  EXPECT_THROW(read_timeline_file(data("timeline.tsv"), opts), DataError);
}

TEST(Timeline, RetweetWithoutSourceIsMalformed) {
  std::istringstream in("1\t10\tretweet\t0\t0\t\ten\tx\n");
  const auto r = read_timeline_tsv(in);
  EXPECT_TRUE(r.posts.empty());
  EXPECT_EQ(r.errors.size(), 1u);
}

TEST(Timeline, WritersRoundTrip) {
  const auto posts = read_timeline_file(data("timeline.tsv")).posts;
  std::stringstream tsv, jsonl;
  write_timeline_tsv(tsv, posts);
  write_timeline_jsonl(jsonl, posts);
  EXPECT_EQ(read_timeline_tsv(tsv).posts, posts);
  EXPECT_EQ(read_timeline_jsonl(jsonl).posts, posts);
}

TEST(Profiles, MissingCellsAndBadRows) {
  const auto r = read_profile_file(data("profiles.tsv"));
  ASSERT_EQ(r.profiles.size(), 2u);
  EXPECT_EQ(r.errors.size(), 2u);  // unparsable count, duplicate user
  const auto& two = r.profiles.at(UserId{2});
  EXPECT_FALSE(two.favourites_count);
  EXPECT_EQ(two.friends_count, 2u);
  std::stringstream out;
  write_profiles(out, r.profiles);
  EXPECT_EQ(read_profiles(out).profiles.size(), 2u);
  EXPECT_THROW(read_profile_file(data("profiles.tsv"), MalformedRowPolicy::Abort), DataError);
}

TEST(Tables, ClassificationRoundTrip) {
  const std::vector<ClassifiedUser> rows{{UserId{4}, {0.125, 1.0}, Archetype::Feeding},
                                         {UserId{9}, {1.0 / 3.0, 0.5}, Archetype::Intermediate}};
  std::stringstream out;
  write_classification(out, {"classify", "abc"}, rows);
  EXPECT_EQ(out.str().rfind("# producer=classify config_hash=abc\n", 0), 0u);
  const auto back = read_classification(Table::read(out));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].point, rows[1].point);
  EXPECT_EQ(back[0].label, Archetype::Feeding);
}

TEST(Tables, PointsFromDegreesOrCoordinates) {
  const auto from_deg = read_points(table("user\tk_in\tk_out\tk_mutual\n1\t7\t3\t3\n"));
  ASSERT_EQ(from_deg.size(), 1u);
  EXPECT_EQ(from_deg[0].second, (ReciprocityPoint{0.5, 1.0}));
  EXPECT_EQ(read_points(Table::read_file(data("three_points.tsv"))).size(), 3u);
  EXPECT_THROW(read_points(table("user\tr_in\tr_out\n1\t0\t0.5\n")), DataError);
  EXPECT_THROW(read_points(table("user\tk_in\tk_out\tk_mutual\n1\t1\t1\t5\n")), DataError);
}

TEST(Config, ParseEchoAndHash) {
  std::istringstream in(
      "# comment\nedges_follows = a.tsv\nedges_follows=b.tsv\ngrid_resolution = 20\nstrict = yes\n"
      "output_dir = out\nthreads = 4\n");
  const auto c = pipeline::parse_config(in, "/base");
  EXPECT_EQ(c.edges_follows, (std::vector<std::string>{"/base/a.tsv", "/base/b.tsv"}));
  EXPECT_EQ(c.grid_resolution, 20u);
  EXPECT_TRUE(c.strict);
  const auto echo = pipeline::config_echo(c);
  const auto hash = pipeline::config_hash(echo);
  EXPECT_EQ(hash.size(), 16u);

  // output_dir and threads do not influence the hash.
  auto moved = c;
  moved.output_dir = "/elsewhere";
  moved.threads = 1;
  EXPECT_EQ(pipeline::config_hash(pipeline::config_echo(moved)), hash);
  auto changed = c;
  changed.grid_resolution = 21;
  EXPECT_NE(pipeline::config_hash(pipeline::config_echo(changed)), hash);
}

TEST(Config, Errors) {
  std::istringstream unknown("colour = blue\n");
  EXPECT_THROW(pipeline::parse_config(unknown), DataError);
  std::istringstream no_eq("just words\n");
  EXPECT_THROW(pipeline::parse_config(no_eq), DataError);
  std::istringstream bad("grid_resolution = ten\n");
  EXPECT_THROW(pipeline::parse_config(bad), DataError);
  pipeline::PipelineConfig empty;
  EXPECT_THROW(pipeline::validate_config(empty), DataError);
}
