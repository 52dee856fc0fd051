#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ury/errors.hpp"
#include "ury/rational.hpp"

namespace ury {

using LabelIndex = std::uint64_t;

/// A labelled finite set of positive rationals: index n and the elements
/// r_1 < ... < r_p of the set it names.
struct QLabel {
  LabelIndex index = 0;
  std::vector<Rational> elements;

  std::size_t cardinality() const noexcept { return elements.size(); }

  friend bool operator==(const QLabel&, const QLabel&) = default;
};

/// Number of elements in the set labelled n: 1 when 4 does not divide n,
/// otherwise the exponent p with 2^p | n and 2^(p+1) not dividing n.
inline std::size_t cardinality_of_index(LabelIndex n) {
  if (n == 0) throw InvalidArgument("label indices start at 1");
  if (n % 4 != 0) return 1;
  return static_cast<std::size_t>(std::countr_zero(n));
}

/// k-th term (k >= 1) of the Calkin-Wilf sequence 1, 1/2, 2, 1/3, 3/2, 2/3, 3, ...
/// Bits of k below the leading one select left (a/(a+b)) or right ((a+b)/b)
/// children in the Calkin-Wilf tree.
inline Rational calkin_wilf(LabelIndex k) {
  if (k == 0) throw InvalidArgument("Calkin-Wilf positions start at 1");
  mpz_class a = 1, b = 1;
  for (int bit = std::bit_width(k) - 2; bit >= 0; --bit) {
    if ((k >> bit) & 1U)
      a += b;
    else
      b += a;
  }
  return Rational(mpq_class(a, b));
}

/// Inverse of calkin_wilf; unbounded because 1/m sits at position 2^(m-1).
inline mpz_class calkin_wilf_position(const Rational& q) {
  if (!q.is_positive()) throw InvalidArgument("Calkin-Wilf positions exist only for positive rationals");
  mpz_class a = q.numerator(), b = q.denominator();
  std::vector<bool> bits;
  while (a != b) {
    if (a < b) {
      b -= a;
      bits.push_back(false);
    } else {
      a -= b;
      bits.push_back(true);
    }
  }
  mpz_class k = 1;
  for (auto it = bits.rbegin(); it != bits.rend(); ++it) {
    k <<= 1;
    if (*it) k += 1;
  }
  return k;
}

namespace detail {

inline mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

/// Combinatorial number system: the rank-th p-subset of {0,1,2,...} in colex
/// order, returned increasing.
inline std::vector<unsigned long> colex_unrank(mpz_class rank, std::size_t p) {
  std::vector<unsigned long> out(p);
  for (std::size_t i = p; i >= 1; --i) {
    // largest c >= i-1 with C(c, i) <= rank
    unsigned long lo = i - 1, hi = i;
    while (binomial(hi, i) <= rank) {
      lo = hi;
      hi *= 2;
    }
    while (hi - lo > 1) {
      const unsigned long mid = lo + (hi - lo) / 2;
      if (binomial(mid, i) <= rank)
        lo = mid;
      else
        hi = mid;
    }
    out[i - 1] = lo;
    rank -= binomial(lo, i);
  }
  return out;
}

inline mpz_class colex_rank(std::span<const mpz_class> increasing) {
  mpz_class rank = 0;
  for (std::size_t i = 0; i < increasing.size(); ++i) {
    mpz_class c;
    mpz_bin_ui(c.get_mpz_t(), increasing[i].get_mpz_t(), i + 1);
    rank += c;
  }
  return rank;
}

/// 0-based position of n among the labels sharing its cardinality.
inline LabelIndex rank_within_class(LabelIndex n, std::size_t p) {
  if (p == 1) return n - 1 - n / 4;
  return ((n >> p) - 1) / 2;
}

}  // namespace detail

/// The set labelled n. Within a cardinality class, p-sets are identified with
/// increasing tuples of Calkin-Wilf positions and ordered by colex rank.
inline QLabel subset_of_index(LabelIndex n) {
  const std::size_t p = cardinality_of_index(n);
  const auto positions = detail::colex_unrank(mpz_class(static_cast<unsigned long>(detail::rank_within_class(n, p))), p);
  QLabel label{n, {}};
  label.elements.reserve(p);
  for (unsigned long c : positions) label.elements.push_back(calkin_wilf(c + 1));
  std::sort(label.elements.begin(), label.elements.end());
  return label;
}

/// Inverse of subset_of_index. `set` must hold distinct positive rationals in
/// any order. The result can exceed 64 bits.
inline mpz_class index_of_subset(std::span<const Rational> set) {
  if (set.empty()) throw InvalidArgument("label sets are nonempty");
  std::vector<mpz_class> positions;
  positions.reserve(set.size());
  for (const auto& q : set) positions.push_back(calkin_wilf_position(q) - 1);
  std::sort(positions.begin(), positions.end());
  if (std::adjacent_find(positions.begin(), positions.end()) != positions.end())
    throw InvalidArgument("label sets have distinct elements");
  const mpz_class rank = detail::colex_rank(positions);
  const std::size_t p = set.size();
  if (p == 1) return rank + 1 + rank / 3;
  mpz_class n = 2 * rank + 1;
  n <<= static_cast<mp_bitcnt_t>(p);
  return n;
}

}  // namespace ury
