#include <gtest/gtest.h>

#include "ury/hull.hpp"

namespace ury {
namespace {

const Rational kStep(1, 64);

TEST(VerifyHullCandidate, DiagonalHull) {
  const auto r = verify_hull_candidate(diagonal_hull(), kStep);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.expected_distance, Rational(1));
  EXPECT_EQ(r.endpoint_distance, Rational(1));
  EXPECT_EQ(r.length, Rational(1));
  EXPECT_EQ(r.samples, 65u);
}

TEST(VerifyHullCandidate, BentHull) {
  const auto r = verify_hull_candidate(bent_hull(), kStep);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.length, Rational(1));
}

TEST(VerifyHullCandidate, StraightSegmentIsAlsoAHull) {
  const PathHullCandidate seg{{{0, 0}, {0, 1}}, {Point2{0, 0}, Point2{0, 1}}};
  EXPECT_TRUE(verify_hull_candidate(seg, kStep).ok());
}

TEST(VerifyHullCandidate, BacktrackingPathFails) {
  const auto r = verify_hull_candidate(backtracking_path(), kStep);
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.endpoints_ok);
  ASSERT_TRUE(r.first_isometry_failure);
  EXPECT_EQ(r.length, Rational(4));
}

TEST(VerifyHullCandidate, TooLongPathWithRightEndpointsFails) {
  // detour: endpoints at distance 1 but arclength 2
  const PathHullCandidate detour{{{0, 0}, {1, 0}, {0, 1}}, {Point2{0, 0}, Point2{0, 1}}};
  const auto r = verify_hull_candidate(detour, kStep);
  EXPECT_TRUE(r.endpoints_ok);
  EXPECT_TRUE(r.first_isometry_failure.has_value());
}

TEST(VerifyHullCandidate, Preconditions) {
  EXPECT_THROW(verify_hull_candidate({{{0, 0}}, {Point2{0, 0}, Point2{0, 1}}}, kStep), DegeneratePath);
  EXPECT_THROW(verify_hull_candidate({{{0, 0}, {0, 0}, {1, 1}}, {Point2{0, 0}, Point2{0, 1}}}, kStep), DegeneratePath);
  EXPECT_THROW(verify_hull_candidate(diagonal_hull(), Rational(2, 3)), InvalidArgument);
  EXPECT_THROW(verify_hull_candidate(diagonal_hull(), Rational(0)), InvalidArgument);
}

}  // namespace
}  // namespace ury
