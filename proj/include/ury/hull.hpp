#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ury/errors.hpp"
#include "ury/rational.hpp"

namespace ury {

struct Point2 {
  Rational x;
  Rational y;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Rational max_norm(const Point2& a, const Point2& b) { return max(abs(a.x - b.x), abs(a.y - b.y)); }

/// Polyline in the max-norm plane proposed as the hull of a two-point set.
/// The path's first and last breakpoints are the images of `a`.
struct PathHullCandidate {
  std::vector<Point2> breakpoints;
  std::array<Point2, 2> a;
};

class DegeneratePath : public Error {
 public:
  using Error::Error;
};

struct HullReport {
  Rational expected_distance;  ///< max-norm distance of the original pair
  Rational endpoint_distance;
  Rational length;             ///< max-norm arclength of the path
  std::size_t samples = 0;
  bool endpoints_ok = false;
  /// First sample pair (by parameter index) whose distance is not the
  /// difference of their arclength parameters.
  std::optional<std::pair<std::size_t, std::size_t>> first_isometry_failure;

  bool ok() const noexcept { return endpoints_ok && !first_isometry_failure; }
};

/// Samples the path at arclength multiples of `step` (plus the far end) and
/// checks that it is an isometric segment joining the images of `a`.
/// `step` must be 1/k for a positive integer k.
inline HullReport verify_hull_candidate(const PathHullCandidate& c, const Rational& step) {
  if (!step.is_positive() || step.numerator() != 1) throw InvalidArgument("sampling step must be 1/k");
  if (c.breakpoints.size() < 2) throw DegeneratePath("a path needs at least two breakpoints");
  for (std::size_t i = 1; i < c.breakpoints.size(); ++i)
    if (c.breakpoints[i] == c.breakpoints[i - 1]) throw DegeneratePath("consecutive breakpoints coincide");

  std::vector<Rational> seg_len;
  Rational length;
  for (std::size_t i = 1; i < c.breakpoints.size(); ++i) {
    seg_len.push_back(max_norm(c.breakpoints[i - 1], c.breakpoints[i]));
    length += seg_len.back();
  }

  auto point_at = [&](const Rational& t) {
    Rational rest = t;
    for (std::size_t i = 0; i < seg_len.size(); ++i) {
      if (rest <= seg_len[i] || i + 1 == seg_len.size()) {
        const Rational lambda = rest / seg_len[i];
        const Point2& p = c.breakpoints[i];
        const Point2& q = c.breakpoints[i + 1];
        return Point2{p.x + lambda * (q.x - p.x), p.y + lambda * (q.y - p.y)};
      }
      rest -= seg_len[i];
    }
    return c.breakpoints.back();
  };

  std::vector<Rational> params;
  for (Rational t; t < length; t += step) params.push_back(t);
  params.push_back(length);
  std::vector<Point2> pts;
  pts.reserve(params.size());
  for (const auto& t : params) pts.push_back(point_at(t));

  HullReport report;
  report.expected_distance = max_norm(c.a[0], c.a[1]);
  report.endpoint_distance = max_norm(c.breakpoints.front(), c.breakpoints.back());
  report.length = length;
  report.samples = pts.size();
  report.endpoints_ok = report.endpoint_distance == report.expected_distance;
  for (std::size_t i = 0; i < pts.size() && !report.first_isometry_failure; ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (max_norm(pts[i], pts[j]) != params[j] - params[i]) {
        report.first_isometry_failure = std::pair{i, j};
        break;
      }
  return report;
}

/// Both hulls of A = {(0,0), (0,1)} in the max-norm plane, and a path that
/// doubles back on itself.
inline PathHullCandidate diagonal_hull() {
  return {{{0, 0}, {1, 1}}, {Point2{0, 0}, Point2{0, 1}}};
}
inline PathHullCandidate bent_hull() {
  return {{{0, 0}, {Rational(1, 2), Rational(1, 2)}, {1, 0}}, {Point2{0, 0}, Point2{0, 1}}};
}
inline PathHullCandidate backtracking_path() {
  return {{{0, 0}, {2, 0}, {0, 0}}, {Point2{0, 0}, Point2{0, 1}}};
}

}  // namespace ury
