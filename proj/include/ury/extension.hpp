#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ury/errors.hpp"
#include "ury/metric.hpp"
#include "ury/rational.hpp"

namespace ury {

/// Ask for a new point y with d(y, support[i]) = radii[i].
struct ExtensionRequest {
  FiniteMetricSpace base;
  std::vector<std::size_t> support;
  std::vector<Rational> radii;
};

enum class Side { lower, upper };

inline std::string_view to_string(Side s) { return s == Side::lower ? "lower" : "upper"; }

/// Pair (first, second) are positions in the support list.
///   lower: lhs |a_i - a_j| > rhs d(x_i,x_j)
///   upper: lhs d(x_i,x_j)  > rhs a_i + a_j
struct AdmissibilityFailure {
  std::size_t first;
  std::size_t second;
  Side side;
  Rational lhs;
  Rational rhs;
};

struct Admissibility {
  std::optional<AdmissibilityFailure> failure;

  bool ok() const noexcept { return !failure; }
  explicit operator bool() const noexcept { return ok(); }
};

class Inadmissible : public Error {
 public:
  explicit Inadmissible(AdmissibilityFailure f)
      : Error("radii violate the " + std::string(to_string(f.side)) + " bound at support pair (" +
              std::to_string(f.first) + "," + std::to_string(f.second) + ")"),
        failure_(std::move(f)) {}
  const AdmissibilityFailure& failure() const noexcept { return failure_; }

 private:
  AdmissibilityFailure failure_;
};

class EmptySupport : public Error {
 public:
  EmptySupport() : Error("extension support is empty") {}
};

namespace detail {

inline void check_request(const ExtensionRequest& req) {
  if (req.support.size() != req.radii.size()) throw InvalidArgument("support and radii differ in length");
  for (std::size_t i = 0; i < req.support.size(); ++i) {
    if (req.support[i] >= req.base.size())
      throw InvalidArgument("support index " + std::to_string(req.support[i]) + " out of range");
    if (!req.radii[i].is_positive()) throw InvalidArgument("radii must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (req.support[j] == req.support[i]) throw InvalidArgument("support indices must be distinct");
  }
}

}  // namespace detail

/// |a_i - a_j| <= d(x_i,x_j) <= a_i + a_j for every support pair. Pairs are
/// scanned in lexicographic order, lower side before upper.
inline Admissibility admissible(const ExtensionRequest& req) {
  detail::check_request(req);
  const auto& d = req.base;
  for (std::size_t i = 0; i < req.support.size(); ++i) {
    for (std::size_t j = i + 1; j < req.support.size(); ++j) {
      const Rational& dist = d(req.support[i], req.support[j]);
      Rational gap = abs(req.radii[i] - req.radii[j]);
      if (gap > dist) return {AdmissibilityFailure{i, j, Side::lower, std::move(gap), dist}};
      Rational sum = req.radii[i] + req.radii[j];
      if (dist > sum) return {AdmissibilityFailure{i, j, Side::upper, dist, std::move(sum)}};
    }
  }
  return {};
}

/// Distances from the new point: the radius on the support and
/// min_i (a_i + d(x_i, z)) elsewhere. Does not check admissibility.
inline std::vector<Rational> extension_row(const ExtensionRequest& req) {
  const std::size_t n = req.base.size();
  std::vector<Rational> row(n);
  std::vector<bool> on_support(n, false);
  for (std::size_t i = 0; i < req.support.size(); ++i) {
    row[req.support[i]] = req.radii[i];
    on_support[req.support[i]] = true;
  }
  for (std::size_t z = 0; z < n; ++z) {
    if (on_support[z]) continue;
    Rational best = req.radii[0] + req.base(req.support[0], z);
    for (std::size_t i = 1; i < req.support.size(); ++i) {
      Rational c = req.radii[i] + req.base(req.support[i], z);
      if (c < best) best = std::move(c);
    }
    row[z] = std::move(best);
  }
  return row;
}

/// One-point extension; the new point has index base.size(). The result is
/// re-validated before it is returned.
inline FiniteMetricSpace extend_one_point(const ExtensionRequest& req) {
  detail::check_request(req);
  if (req.support.empty()) throw EmptySupport();
  if (auto a = admissible(req); !a) throw Inadmissible(*a.failure);
  const auto row = extension_row(req);
  return FiniteMetricSpace::from_matrix(req.base.matrix().with_point(row));
}

// ---------------------------------------------------------------------------
// Ball families
// ---------------------------------------------------------------------------

struct Ball {
  std::size_t center;
  Rational radius;
};

struct BallFamily {
  FiniteMetricSpace base;
  std::vector<Ball> balls;
};

/// Ball `removed` was dropped because it strictly contains ball `kept`:
/// r_removed > d(x_removed, x_kept) + r_kept, with `distance` = d(x_removed, x_kept).
struct Removal {
  std::size_t removed;
  std::size_t kept;
  Rational distance;
};

struct ReductionTrace {
  std::vector<std::size_t> survivors;
  std::vector<Removal> removals;
};

class PairwiseInfeasible : public Error {
 public:
  PairwiseInfeasible(std::size_t i, std::size_t j, Rational distance, Rational radius_sum)
      : Error("balls " + std::to_string(i) + " and " + std::to_string(j) + " are disjoint: " + distance.str() +
              " > " + radius_sum.str()),
        first(i),
        second(j),
        distance(std::move(distance)),
        radius_sum(std::move(radius_sum)) {}

  std::size_t first;
  std::size_t second;
  Rational distance;
  Rational radius_sum;
};

class EmptyFamily : public Error {
 public:
  EmptyFamily() : Error("ball family is empty") {}
};

namespace detail {

inline void check_family(const BallFamily& f) {
  if (f.balls.empty()) throw EmptyFamily();
  for (const auto& b : f.balls) {
    if (b.center >= f.base.size()) throw InvalidArgument("ball center " + std::to_string(b.center) + " out of range");
    if (!b.radius.is_positive()) throw InvalidArgument("ball radii must be positive");
  }
  for (std::size_t i = 0; i < f.balls.size(); ++i) {
    for (std::size_t j = i + 1; j < f.balls.size(); ++j) {
      const Rational& d = f.base(f.balls[i].center, f.balls[j].center);
      Rational sum = f.balls[i].radius + f.balls[j].radius;
      if (d > sum) throw PairwiseInfeasible(i, j, d, std::move(sum));
    }
  }
}

}  // namespace detail

/// Drops containing balls until no survivor strictly contains another.
/// Each pass removes the lowest-index removable survivor, paired with the
/// lowest-index survivor it contains, then rescans from the start.
inline ReductionTrace reduce_ball_family(const BallFamily& family) {
  detail::check_family(family);
  ReductionTrace trace;
  for (std::size_t i = 0; i < family.balls.size(); ++i) trace.survivors.push_back(i);

  for (bool removed = true; removed;) {
    removed = false;
    for (std::size_t si = 0; si < trace.survivors.size() && !removed; ++si) {
      const Ball& big = family.balls[trace.survivors[si]];
      for (std::size_t sj = 0; sj < trace.survivors.size(); ++sj) {
        if (sj == si) continue;
        const Ball& small = family.balls[trace.survivors[sj]];
        const Rational& d = family.base(big.center, small.center);
        if (big.radius > d + small.radius) {
          trace.removals.push_back({trace.survivors[si], trace.survivors[sj], d});
          trace.survivors.erase(trace.survivors.begin() + static_cast<std::ptrdiff_t>(si));
          removed = true;
          break;
        }
      }
    }
  }
  return trace;
}

/// Per-ball evidence that the witness lies in the ball.
struct BallMembership {
  std::size_t ball;
  Rational distance;  ///< d(witness, center), exact
  bool on_sphere;     ///< survivor: distance == radius
  /// Removed balls only: d(x_i,x_kept) + bound(kept), following the removal
  /// chain down to a survivor. Always <= radius.
  std::optional<Rational> chain_bound;
};

struct IntersectionWitness {
  FiniteMetricSpace space;  ///< base plus the witness point
  std::size_t witness;
  ReductionTrace trace;
  std::vector<BallMembership> certificate;
};

/// Finds a common point of a pairwise-intersecting ball family: it lies on
/// the sphere of every surviving ball and inside every removed one. All
/// claims are re-checked exactly before returning.
inline IntersectionWitness ball_intersection_witness(const BallFamily& family) {
  ReductionTrace trace = reduce_ball_family(family);

  ExtensionRequest req{family.base, {}, {}};
  for (std::size_t s : trace.survivors) {
    const Ball& b = family.balls[s];
    bool seen = false;
    for (std::size_t c : req.support) seen = seen || c == b.center;
    // Survivors sharing a center have equal radii (|r_i - r_j| <= 0).
    if (seen) continue;
    req.support.push_back(b.center);
    req.radii.push_back(b.radius);
  }
  FiniteMetricSpace extended = extend_one_point(req);
  const std::size_t y = family.base.size();

  std::vector<std::optional<Rational>> bound(family.balls.size());
  for (std::size_t s : trace.survivors) bound[s] = family.balls[s].radius;
  for (auto it = trace.removals.rbegin(); it != trace.removals.rend(); ++it) bound[it->removed] = it->distance + *bound[it->kept];

  std::vector<BallMembership> cert;
  std::vector<bool> survivor(family.balls.size(), false);
  for (std::size_t s : trace.survivors) survivor[s] = true;
  for (std::size_t i = 0; i < family.balls.size(); ++i) {
    const Ball& b = family.balls[i];
    const Rational& dist = extended(y, b.center);
    if (survivor[i]) {
      if (dist != b.radius) throw std::logic_error("witness missed a survivor sphere");
      cert.push_back({i, dist, true, std::nullopt});
    } else {
      if (dist > *bound[i] || *bound[i] > b.radius) throw std::logic_error("witness outside a removed ball");
      cert.push_back({i, dist, dist == b.radius, bound[i]});
    }
  }
  return {std::move(extended), y, std::move(trace), std::move(cert)};
}

}  // namespace ury
