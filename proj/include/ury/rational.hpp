#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ury/errors.hpp"

namespace ury {

/// Exact rational number, always kept in lowest terms with a positive
/// denominator. Backed by GMP.
///
/// The canonical text form is "p/q", or just "p" when q = 1. Parsing accepts
/// an optional leading '-', a run of decimal digits and an optional "/digits"
/// part; decimal points and exponents are rejected.
class Rational {
 public:
  Rational() = default;

  template <std::signed_integral I>
  Rational(I v) : value_(static_cast<long>(v)) {}  // NOLINT(implicit)

  template <std::unsigned_integral I>
  Rational(I v) : value_(static_cast<unsigned long>(v)) {}  // NOLINT(implicit)

  Rational(long num, long den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
  }

  explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

  static std::optional<Rational> try_parse(std::string_view text) {
    std::size_t pos = 0;
    const bool negative = !text.empty() && text[0] == '-';
    if (negative) ++pos;
    const std::size_t num_begin = pos;
    while (pos < text.size() && is_digit(text[pos])) ++pos;
    if (pos == num_begin) return std::nullopt;
    std::string_view num = text.substr(num_begin, pos - num_begin);
    std::string_view den = "1";
    if (pos < text.size()) {
      if (text[pos] != '/') return std::nullopt;
      const std::size_t den_begin = ++pos;
      while (pos < text.size() && is_digit(text[pos])) ++pos;
      if (pos == den_begin || pos != text.size()) return std::nullopt;
      den = text.substr(den_begin);
    }
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) return std::nullopt;
    if (negative) n = -n;
    return Rational(mpq_class(n, d));
  }

  /// Throws std::invalid_argument on anything that is not a canonical-grammar
  /// rational.
  static Rational parse(std::string_view text) {
    auto r = try_parse(text);
    if (!r) throw std::invalid_argument("not an exact rational: '" + std::string(text) + "'");
    return *std::move(r);
  }

  std::string str() const { return value_.get_str(10); }

  const mpq_class& mpq() const noexcept { return value_; }
  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }

  int sign() const noexcept { return sgn(value_); }
  bool is_zero() const noexcept { return sign() == 0; }
  bool is_positive() const noexcept { return sign() > 0; }
  bool is_integer() const { return value_.get_den() == 1; }

  Rational operator-() const { return Rational(canonical_tag{}, -value_); }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("rational division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(canonical_tag{}, a.value_ + b.value_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(canonical_tag{}, a.value_ - b.value_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(canonical_tag{}, a.value_ * b.value_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("rational division by zero");
    return Rational(canonical_tag{}, a.value_ / b.value_);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return mpq_equal(a.value_.get_mpq_t(), b.value_.get_mpq_t()) != 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend Rational abs(const Rational& a) { return a.sign() < 0 ? -a : a; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  std::size_t hash() const noexcept {
    auto limb_hash = [](mpz_srcptr z) {
      std::size_t h = static_cast<std::size_t>(mpz_size(z)) * 0x9e3779b97f4a7c15ULL;
      h ^= static_cast<std::size_t>(mpz_getlimbn(z, 0)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      return h ^ static_cast<std::size_t>(mpz_sgn(z) + 1);
    };
    const std::size_t a = limb_hash(mpq_numref(value_.get_mpq_t()));
    const std::size_t b = limb_hash(mpq_denref(value_.get_mpq_t()));
    return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  }

 private:
  struct canonical_tag {};
  // GMP arithmetic results are already canonical.
  template <class E>
  Rational(canonical_tag, E&& expr) : value_(std::forward<E>(expr)) {}

  static constexpr bool is_digit(char c) { return c >= '0' && c <= '9'; }

  mpq_class value_;
};

inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace ury

template <>
struct std::hash<ury::Rational> {
  std::size_t operator()(const ury::Rational& r) const noexcept { return r.hash(); }
};
