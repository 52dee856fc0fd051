#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ury/errors.hpp"
#include "ury/metric.hpp"
#include "ury/rational.hpp"

namespace ury {

/// Nonnegative function on the points of a finite metric space.
struct KatetovFunction {
  FiniteMetricSpace space;
  std::vector<Rational> values;

  KatetovFunction(FiniteMetricSpace s, std::vector<Rational> v) : space(std::move(s)), values(std::move(v)) {
    if (values.size() != space.size()) throw InvalidArgument("function needs one value per point");
    for (const auto& x : values)
      if (x.sign() < 0) throw InvalidArgument("function values must be nonnegative");
  }

  const Rational& operator()(std::size_t x) const { return values[x]; }

  friend bool operator==(const KatetovFunction& a, const KatetovFunction& b) {
    return a.values == b.values && a.space == b.space;
  }
};

class NotAdmissible : public Error {
 public:
  using Error::Error;
};

class SpaceMismatch : public Error {
 public:
  SpaceMismatch() : Error("functions live on different spaces") {}
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

struct PairCheck {
  std::optional<std::pair<std::size_t, std::size_t>> failure;

  bool ok() const noexcept { return !failure; }
  explicit operator bool() const noexcept { return ok(); }
};

/// d(x,y) <= f(x) + f(y) for all x < y; reports the first failing pair.
inline PairCheck is_admissible_function(const KatetovFunction& f) {
  const std::size_t n = f.space.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      if (f.space(x, y) > f(x) + f(y)) return {std::pair{x, y}};
  return {};
}

/// Admissible and every positive coordinate is pinned: f(x) + f(y) = d(x,y)
/// for some y != x. Lowering a pinned coordinate breaks its pinning pair, so
/// this is the same as pointwise minimality.
inline bool is_extremal(const KatetovFunction& f) {
  if (!is_admissible_function(f)) return false;
  const std::size_t n = f.space.size();
  for (std::size_t x = 0; x < n; ++x) {
    if (f(x).is_zero()) continue;
    bool pinned = false;
    for (std::size_t y = 0; y < n && !pinned; ++y) pinned = y != x && f(x) + f(y) == f.space(x, y);
    if (!pinned) return false;
  }
  return true;
}

/// Cyclic coordinate descent f(x) <- max(0, max_{y != x} d(x,y) - f(y)) in
/// point order until a full pass changes nothing. Output is extremal and
/// pointwise <= g.
inline KatetovFunction extremal_below(const KatetovFunction& g) {
  if (auto c = is_admissible_function(g); !c)
    throw NotAdmissible("function is not admissible at pair (" + std::to_string(c.failure->first) + "," +
                        std::to_string(c.failure->second) + ")");
  KatetovFunction f = g;
  const std::size_t n = f.space.size();
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t x = 0; x < n; ++x) {
      Rational need;
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x) continue;
        Rational c = f.space(x, y) - f(y);
        if (c > need) need = std::move(c);
      }
      if (need != f.values[x]) {
        f.values[x] = std::move(need);
        changed = true;
      }
    }
  }
  return f;
}

/// f_a = d(a, .)
inline KatetovFunction kuratowski(const FiniteMetricSpace& space, std::size_t a) {
  if (a >= space.size()) throw InvalidArgument("point index out of range");
  std::vector<Rational> v(space.size());
  for (std::size_t x = 0; x < space.size(); ++x) v[x] = space(a, x);
  return {space, std::move(v)};
}

inline Rational sup_distance(const KatetovFunction& f, const KatetovFunction& g) {
  if (!(f.space == g.space)) throw SpaceMismatch();
  Rational best;
  for (std::size_t x = 0; x < f.values.size(); ++x) {
    Rational c = abs(f(x) - g(x));
    if (c > best) best = std::move(c);
  }
  return best;
}

class NotAdmissibleOnSubset : public Error {
 public:
  using Error::Error;
};

/// Extends r from `subset` to the whole space by R(z) = min_a r(a) + d(z,a).
inline KatetovFunction extend_radius_function(const FiniteMetricSpace& space, std::span<const std::size_t> subset,
                                               std::span<const Rational> r) {
  if (subset.empty() || subset.size() != r.size()) throw InvalidArgument("subset and radii must be nonempty and aligned");
  std::vector<std::optional<Rational>> given(space.size());
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] >= space.size()) throw InvalidArgument("subset index out of range");
    if (given[subset[i]]) throw InvalidArgument("subset indices must be distinct");
    if (!r[i].is_positive()) throw InvalidArgument("radii must be positive");
    given[subset[i]] = r[i];
  }
  for (std::size_t i = 0; i < subset.size(); ++i)
    for (std::size_t j = i + 1; j < subset.size(); ++j)
      if (space(subset[i], subset[j]) > r[i] + r[j])
        throw NotAdmissibleOnSubset("d > r + r at subset pair (" + std::to_string(subset[i]) + "," +
                                    std::to_string(subset[j]) + ")");

  std::vector<Rational> values(space.size());
  for (std::size_t z = 0; z < space.size(); ++z) {
    if (given[z]) {
      values[z] = *given[z];
      continue;
    }
    Rational best = r[0] + space(z, subset[0]);
    for (std::size_t i = 1; i < subset.size(); ++i) {
      Rational c = r[i] + space(z, subset[i]);
      if (c < best) best = std::move(c);
    }
    values[z] = std::move(best);
  }
  return {space, std::move(values)};
}

inline constexpr std::size_t kMaxTightSpanPoints = 6;

/// Extremal vertices of {f >= 0 : f(x) + f(y) >= d(x,y)}, sorted
/// lexicographically, without duplicates.
struct TightSpanVertexSet {
  FiniteMetricSpace space;
  std::vector<KatetovFunction> vertices;
};

namespace detail {

/// Solves A f = b exactly; nullopt when A is singular.
inline std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col].is_zero()) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      const Rational factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

}  // namespace detail

/// Enumerates every n-subset of the constraints {f(x)+f(y) = d(x,y)} and
/// {f(x) = 0}, solves each nonsingular system exactly and keeps the
/// nonnegative, admissible, extremal solutions. n is capped at 6.
inline TightSpanVertexSet tight_span_vertices(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  if (n > kMaxTightSpanPoints)
    throw TooLarge("tight span vertex enumeration is limited to " + std::to_string(kMaxTightSpanPoints) + " points");

  struct Constraint {
    std::size_t x, y;  // x == y encodes f(x) = 0
  };
  std::vector<Constraint> cons;
  for (std::size_t x = 0; x < n; ++x) cons.push_back({x, x});
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) cons.push_back({x, y});

  std::set<std::vector<Rational>> found;
  std::vector<std::size_t> pick(n);
  for (std::size_t i = 0; i < n; ++i) pick[i] = i;
  const std::size_t m = cons.size();
  while (true) {
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    std::vector<Rational> b(n);
    for (std::size_t r = 0; r < n; ++r) {
      const auto& c = cons[pick[r]];
      if (c.x == c.y) {
        a[r][c.x] = 1;
      } else {
        a[r][c.x] = 1;
        a[r][c.y] = 1;
        b[r] = space(c.x, c.y);
      }
    }
    if (auto sol = detail::solve_exact(std::move(a), std::move(b))) {
      bool nonneg = true;
      for (const auto& v : *sol) nonneg = nonneg && v.sign() >= 0;
      if (nonneg) {
        KatetovFunction f(space, *sol);
        if (is_extremal(f)) found.insert(std::move(*sol));
      }
    }
    // next combination in lexicographic order
    std::size_t i = n;
    while (i > 0 && pick[i - 1] == m - n + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }

  TightSpanVertexSet out{space, {}};
  for (const auto& v : found) out.vertices.emplace_back(space, v);
  return out;
}

// Text form: one line of space-separated canonical rationals.

inline std::string format_function(const KatetovFunction& f) {
  std::string out;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (i > 0) out += ' ';
    out += f.values[i].str();
  }
  return out;
}

inline KatetovFunction parse_function(const FiniteMetricSpace& space, std::string_view line) {
  std::vector<Rational> values;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t end = line.find(' ', pos);
    if (end == std::string_view::npos) end = line.size();
    auto r = Rational::try_parse(line.substr(pos, end - pos));
    if (!r) throw ParseError(1, pos + 1, "not an exact rational");
    values.push_back(*std::move(r));
    pos = end + 1;
  }
  return {space, std::move(values)};
}

inline std::string format_vertex_set(const TightSpanVertexSet& s) {
  std::string out;
  for (const auto& v : s.vertices) out += format_function(v) + "\n";
  return out;
}

}  // namespace ury
