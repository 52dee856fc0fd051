#include <gtest/gtest.h>

#include "ury/json_io.hpp"

namespace ury {
namespace {

using Json = nlohmann::json;
namespace jio = ury::json;

TEST(JsonRational, AcceptsStringsAndIntegers) {
  EXPECT_EQ(jio::to_rational(Json("3/6")), Rational(1, 2));
  EXPECT_EQ(jio::to_rational(Json(4)), Rational(4));
  EXPECT_THROW(jio::to_rational(Json(0.5)), InvalidArgument);
  EXPECT_THROW(jio::to_rational(Json("0.5")), InvalidArgument);
  EXPECT_EQ(jio::from_rational(Rational(-2, 4)), Json("-1/2"));
}

TEST(JsonBallFamily, InlineMatrix) {
  const auto j = Json::parse(R"({"dmat": "3\n3\n4 5\n", "balls": [{"center": 0, "radius": "3/2"}, {"center": 1, "radius": 2}]})");
  const auto f = jio::parse_ball_family(j);
  EXPECT_EQ(f.base.size(), 3u);
  ASSERT_EQ(f.balls.size(), 2u);
  EXPECT_EQ(f.balls[0].radius, Rational(3, 2));
  EXPECT_EQ(f.balls[1].center, 1u);
}

TEST(JsonBallFamily, Errors) {
  EXPECT_THROW(jio::parse_ball_family(Json::parse(R"({"balls": []})")), InvalidArgument);
  EXPECT_THROW(jio::parse_ball_family(Json::parse(R"({"dmat": "2\n1\n", "balls": [{"center": -1, "radius": 1}]})")),
               InvalidArgument);
  EXPECT_THROW(jio::parse_ball_family(Json::parse(R"({"dmat": "no/such/file.dmat", "balls": []})")), InvalidArgument);
}

TEST(JsonWitness, Shape) {
  const auto f = jio::parse_ball_family(
      Json::parse(R"({"dmat": "3\n3\n4 5\n", "balls": [{"center": 0, "radius": 1}, {"center": 1, "radius": 2}]})"));
  const auto out = jio::witness_to_json(ball_intersection_witness(f));
  EXPECT_EQ(out["witness"], 3);
  EXPECT_EQ(out["witness_row"], Json::parse(R"(["1", "2", "5"])"));
  EXPECT_EQ(out["certificate"][0]["relation"], "sphere");
  EXPECT_TRUE(out["removals"].empty());
}

TEST(JsonEmbedding, Shape) {
  EXPECT_EQ(jio::embedding_to_json({EmbeddingStatus::found, {0, 2}, 5}).dump(),
            R"({"mapping":[0,2],"searched":5,"status":"found"})");
  EXPECT_EQ(jio::embedding_to_json({EmbeddingStatus::not_found_up_to, {}, 3}).dump(),
            R"({"mapping":[],"searched":3,"status":"not-found-up-to"})");
}

TEST(JsonBox, RoundTrip) {
  const Box b({{Rational(-1, 2), 1}, {0, 0}});
  EXPECT_EQ(jio::box_to_json(b).dump(), R"([["-1/2","1"],["0","0"]])");
  EXPECT_EQ(jio::box_from_json(jio::box_to_json(b)), b);
  EXPECT_THROW(jio::box_from_json(Json::parse(R"([["1"]])")), InvalidArgument);
}

TEST(JsonHull, RoundTripAndDefaults) {
  const auto c = bent_hull();
  const auto back = jio::hull_from_json(jio::hull_to_json(c));
  EXPECT_EQ(back.breakpoints, c.breakpoints);
  EXPECT_EQ(back.a, c.a);
  const auto bare = jio::hull_from_json(Json::parse(R"([[0, 0], ["1/2", "1/2"]])"));
  EXPECT_EQ(bare.a[1], (Point2{Rational(1, 2), Rational(1, 2)}));
  EXPECT_THROW(jio::hull_from_json(Json::parse("[]")), DegeneratePath);
}

}  // namespace
}  // namespace ury
