#pragma once

// Random instance generators shared by the unit and acceptance suites.

#include <cstddef>
#include <random>
#include <vector>

#include "ury/metric.hpp"
#include "ury/rational.hpp"

namespace ury::testing {

inline Rational random_positive_rational(std::mt19937_64& rng, long max_num = 12, long max_den = 4) {
  std::uniform_int_distribution<long> num(1, max_num);
  std::uniform_int_distribution<long> den(1, max_den);
  return Rational(num(rng), den(rng));
}

/// Random positive edge weights closed under shortest paths, so the result
/// is always a metric with positive off-diagonal entries.
inline DistanceMatrix random_metric_matrix(std::mt19937_64& rng, std::size_t n, long max_num = 12, long max_den = 4) {
  DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d.set_symmetric(i, j, random_positive_rational(rng, max_num, max_den));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d(i, k) + d(k, j) < d(i, j)) d(i, j) = d(i, k) + d(k, j);
  return d;
}

inline FiniteMetricSpace random_metric(std::mt19937_64& rng, std::size_t n, long max_num = 12, long max_den = 4) {
  return FiniteMetricSpace::from_matrix(random_metric_matrix(rng, n, max_num, max_den));
}

inline std::size_t random_size(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace ury::testing
