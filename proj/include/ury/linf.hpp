#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ury/errors.hpp"
#include "ury/rational.hpp"

namespace ury {

struct Interval {
  Rational lo;
  Rational hi;

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Axis-aligned box, i.e. a closed max-norm ball in k dimensions.
struct Box {
  std::vector<Interval> coords;

  Box() = default;
  explicit Box(std::vector<Interval> c) : coords(std::move(c)) {
    if (coords.empty()) throw InvalidArgument("boxes have dimension at least 1");
    for (const auto& iv : coords)
      if (iv.lo > iv.hi) throw InvalidArgument("box interval with lo > hi");
  }

  std::size_t dimension() const noexcept { return coords.size(); }

  bool contains(std::span<const Rational> p) const {
    if (p.size() != coords.size()) return false;
    for (std::size_t k = 0; k < coords.size(); ++k)
      if (p[k] < coords[k].lo || p[k] > coords[k].hi) return false;
    return true;
  }

  friend bool operator==(const Box&, const Box&) = default;
};

/// B(center, radius) under the max norm.
inline Box ball_box(std::span<const Rational> center, const Rational& radius) {
  if (radius.sign() < 0) throw InvalidArgument("negative radius");
  std::vector<Interval> c;
  c.reserve(center.size());
  for (const auto& x : center) c.push_back({x - radius, x + radius});
  return Box(std::move(c));
}

inline Rational max_norm(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw InvalidArgument("vectors of different dimension");
  Rational best;
  for (std::size_t k = 0; k < a.size(); ++k) best = max(best, abs(a[k] - b[k]));
  return best;
}

class DimensionMismatch : public Error {
 public:
  DimensionMismatch() : Error("boxes have different dimensions") {}
};

struct BoxIntersection {
  std::optional<Box> box;                        ///< empty when the boxes miss
  std::optional<std::vector<Rational>> witness;  ///< lower corner of `box`
  std::optional<std::size_t> empty_coordinate;   ///< first crossing coordinate

  bool empty() const noexcept { return !box; }
};

/// Coordinatewise [max lo, min hi].
inline BoxIntersection box_intersection(std::span<const Box> boxes) {
  if (boxes.empty()) throw InvalidArgument("need at least one box");
  const std::size_t dim = boxes[0].dimension();
  for (const auto& b : boxes)
    if (b.dimension() != dim) throw DimensionMismatch();

  std::vector<Interval> out = boxes[0].coords;
  for (const auto& b : boxes.subspan(1)) {
    for (std::size_t k = 0; k < dim; ++k) {
      out[k].lo = max(out[k].lo, b.coords[k].lo);
      out[k].hi = min(out[k].hi, b.coords[k].hi);
    }
  }
  BoxIntersection r;
  for (std::size_t k = 0; k < dim; ++k) {
    if (out[k].lo > out[k].hi) {
      r.empty_coordinate = k;
      return r;
    }
  }
  std::vector<Rational> corner;
  corner.reserve(dim);
  for (const auto& iv : out) corner.push_back(iv.lo);
  r.witness = std::move(corner);
  r.box = Box(std::move(out));
  return r;
}

inline bool boxes_meet(const Box& a, const Box& b) {
  const Box pair[] = {a, b};
  return !box_intersection(pair).empty();
}

enum class C0Conclusion { unique_linf_witness, none };

inline std::string_view to_string(C0Conclusion c) {
  return c == C0Conclusion::unique_linf_witness ? "unique-linf-witness" : "none";
}

/// The balls B(e_k, radius), k = 1..N, in the max-norm space of dimension N.
struct C0Report {
  std::size_t n = 0;
  Rational radius;
  Rational pairwise_distance;  ///< max over pairs of |e_i - e_j|
  bool pairwise_uniform = false;  ///< every pair is at pairwise_distance
  bool pairwise_feasible = false;
  std::optional<std::vector<Rational>> witness;
  std::optional<Rational> witness_tail_value;  ///< last coordinate of the witness
  std::optional<Rational> witness_norm;        ///< sup-norm distance from the origin
  bool single_point = false;
  C0Conclusion conclusion = C0Conclusion::none;
};

/// Truncated version of the standard-basis ball family. With radius 1/2 the
/// only common point is the constant sequence 1/2, which never decays to
/// zero, so no null sequence lies in every ball.
inline C0Report c0_counterexample(std::size_t n, const Rational& radius = Rational(1, 2)) {
  if (n < 2) throw InvalidArgument("truncation size must be at least 2");
  if (!radius.is_positive()) throw InvalidArgument("radius must be positive");

  std::vector<std::vector<Rational>> basis(n, std::vector<Rational>(n));
  for (std::size_t k = 0; k < n; ++k) basis[k][k] = 1;

  C0Report rep;
  rep.n = n;
  rep.radius = radius;
  bool all_equal = true;
  std::optional<Rational> first;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Rational d = max_norm(basis[i], basis[j]);
      if (!first) first = d;
      all_equal = all_equal && d == *first;
      rep.pairwise_distance = max(rep.pairwise_distance, d);
    }
  }
  rep.pairwise_uniform = all_equal;
  rep.pairwise_feasible = rep.pairwise_distance <= radius + radius;

  std::vector<Box> balls;
  balls.reserve(n);
  for (const auto& e : basis) balls.push_back(ball_box(e, radius));
  auto meet = box_intersection(balls);
  if (!meet.empty()) {
    rep.single_point = true;
    for (const auto& iv : meet.box->coords) rep.single_point = rep.single_point && iv.lo == iv.hi;
    rep.witness_tail_value = meet.witness->back();
    rep.witness_norm = max_norm(*meet.witness, std::vector<Rational>(n));
    rep.witness = std::move(meet.witness);
    if (rep.single_point) rep.conclusion = C0Conclusion::unique_linf_witness;
  }
  return rep;
}

}  // namespace ury
