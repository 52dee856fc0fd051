#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ury/errors.hpp"
#include "ury/rational.hpp"

namespace ury {

class NonSquareInput : public Error {
 public:
  using Error::Error;
};

/// Dense square matrix of exact distances. No metric guarantee: this is the
/// raw input to validation and the working form of partially built spaces.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), data_(n * n) {}

  /// Rows must all have the same length as the number of rows.
  static DistanceMatrix from_rows(const std::vector<std::vector<Rational>>& rows) {
    DistanceMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) {
        throw NonSquareInput("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                             " entries, expected " + std::to_string(rows.size()));
      }
      std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(i * m.n_));
    }
    return m;
  }

  /// Row i holds d(i,0)..d(i,i-1); the matrix is mirrored and the diagonal
  /// set to zero.
  static DistanceMatrix from_lower_triangle(const std::vector<std::vector<Rational>>& rows) {
    DistanceMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != i) throw NonSquareInput("lower-triangle row " + std::to_string(i) + " has wrong length");
      for (std::size_t j = 0; j < i; ++j) m.set_symmetric(i, j, rows[i][j]);
    }
    return m;
  }

  std::size_t size() const noexcept { return n_; }

  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

  void set_symmetric(std::size_t i, std::size_t j, const Rational& v) {
    (*this)(i, j) = v;
    (*this)(j, i) = v;
  }

  /// Copy with one extra point appended; `row[j]` is its distance to point j.
  DistanceMatrix with_point(std::span<const Rational> row) const {
    if (row.size() != n_) throw InvalidArgument("new row must have one entry per existing point");
    DistanceMatrix m(n_ + 1);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
    for (std::size_t j = 0; j < n_; ++j) m.set_symmetric(n_, j, row[j]);
    return m;
  }

  /// Top-left k×k block.
  DistanceMatrix leading(std::size_t k) const {
    if (k > n_) throw InvalidArgument("leading block larger than matrix");
    DistanceMatrix m(k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Rational> data_;
};

enum class ViolationKind { diagonal, symmetry, positivity, triangle };

inline std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::diagonal: return "diagonal";
    case ViolationKind::symmetry: return "symmetry";
    case ViolationKind::positivity: return "positivity";
    case ViolationKind::triangle: return "triangle";
  }
  return "?";
}

/// One failed axiom with an exact witness.
///
///   diagonal    witness (i),      lhs d(i,i), rhs 0
///   symmetry    witness (i,j),    lhs d(i,j), rhs d(j,i)
///   positivity  witness (i,j),    lhs d(i,j), rhs 0
///   triangle    witness (i,j,k),  lhs d(i,k), rhs d(i,j)+d(j,k)
struct Violation {
  ViolationKind kind;
  std::vector<std::size_t> witness;
  Rational lhs;
  Rational rhs;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/// Checks every metric axiom exhaustively, exact. Violations are listed by
/// kind (diagonal, symmetry, positivity, triangle) and then by witness.
/// Triangle triples are reported once per unordered outer pair i < k.
inline ValidationReport validate_metric(const DistanceMatrix& d,
                                        std::size_t max_violations = std::numeric_limits<std::size_t>::max()) {
  ValidationReport report;
  const std::size_t n = d.size();
  auto push = [&](Violation v) {
    if (report.violations.size() < max_violations) report.violations.push_back(std::move(v));
  };
  auto full = [&] { return report.violations.size() >= max_violations; };

  for (std::size_t i = 0; i < n && !full(); ++i)
    if (!d(i, i).is_zero()) push({ViolationKind::diagonal, {i}, d(i, i), 0});

  for (std::size_t i = 0; i < n && !full(); ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (d(i, j) != d(j, i)) push({ViolationKind::symmetry, {i, j}, d(i, j), d(j, i)});

  for (std::size_t i = 0; i < n && !full(); ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!d(i, j).is_positive()) push({ViolationKind::positivity, {i, j}, d(i, j), 0});
      if (d(j, i) != d(i, j) && !d(j, i).is_positive()) push({ViolationKind::positivity, {j, i}, d(j, i), 0});
    }
  }

  mpq_class sum;
  for (std::size_t i = 0; i < n && !full(); ++i) {
    for (std::size_t k = i + 1; k < n && !full(); ++k) {
      const mpq_class& lhs = d(i, k).mpq();
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        mpq_add(sum.get_mpq_t(), d(i, j).mpq().get_mpq_t(), d(j, k).mpq().get_mpq_t());
        if (cmp(lhs, sum) > 0) push({ViolationKind::triangle, {i, j, k}, d(i, k), Rational(sum)});
      }
    }
  }
  return report;
}

inline ValidationReport validate_metric(const std::vector<std::vector<Rational>>& rows) {
  return validate_metric(DistanceMatrix::from_rows(rows));
}

class MetricViolation : public Error {
 public:
  explicit MetricViolation(ValidationReport report)
      : Error("matrix is not a metric (" + std::to_string(report.violations.size()) + " violation(s))"),
        report_(std::move(report)) {}

  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// A validated finite metric space. Immutable; copies share storage.
class FiniteMetricSpace {
 public:
  /// Throws MetricViolation when the matrix fails any axiom.
  static FiniteMetricSpace from_matrix(DistanceMatrix m) {
    if (m.size() == 0) throw InvalidArgument("a metric space needs at least one point");
    auto report = validate_metric(m);
    if (!report.ok()) throw MetricViolation(std::move(report));
    return FiniteMetricSpace(std::make_shared<const DistanceMatrix>(std::move(m)));
  }

  static FiniteMetricSpace from_rows(const std::vector<std::vector<Rational>>& rows) {
    return from_matrix(DistanceMatrix::from_rows(rows));
  }

  static FiniteMetricSpace single_point() { return from_matrix(DistanceMatrix(1)); }

  std::size_t size() const noexcept { return d_->size(); }
  const Rational& operator()(std::size_t i, std::size_t j) const { return (*d_)(i, j); }
  const DistanceMatrix& matrix() const noexcept { return *d_; }

  friend bool operator==(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
    return a.d_ == b.d_ || *a.d_ == *b.d_;
  }

 private:
  explicit FiniteMetricSpace(std::shared_ptr<const DistanceMatrix> d) : d_(std::move(d)) {}

  std::shared_ptr<const DistanceMatrix> d_;
};

// ---------------------------------------------------------------------------
// .dmat text format
//
//   line 1      n
//   line i+1    d(i,0) .. d(i,i-1)      for i = 1..n-1
//
// LF line endings, single spaces between entries, no trailing spaces.
// ---------------------------------------------------------------------------

/// Parses the layout and the rationals but does not check the metric axioms.
/// Negative entries are rejected here since the format only carries distances.
inline DistanceMatrix parse_dmat_matrix(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  if (lines.empty()) throw ParseError(1, 1, "empty input");

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const auto cr = lines[li].find('\r');
    if (cr != std::string_view::npos) throw ParseError(li + 1, cr + 1, "carriage return not allowed");
  }

  const std::string_view header = lines[0];
  if (header.empty() || !std::all_of(header.begin(), header.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw ParseError(1, 1, "expected point count");
  if (header.size() > 9) throw ParseError(1, 1, "point count too large");
  const std::size_t n = std::stoul(std::string(header));
  if (n == 0) throw ParseError(1, 1, "point count must be at least 1");
  if (lines.size() < n) throw ParseError(lines.size() + 1, 1, "expected " + std::to_string(n - 1) + " distance rows");
  if (lines.size() > n) throw ParseError(n + 1, 1, "unexpected content after last row");

  std::vector<std::vector<Rational>> rows(n);
  for (std::size_t i = 1; i < n; ++i) {
    const std::string_view line = lines[i];
    const std::size_t line_no = i + 1;
    std::size_t pos = 0;
    for (std::size_t j = 0; j < i; ++j) {
      if (j > 0) {
        if (pos >= line.size() || line[pos] != ' ') throw ParseError(line_no, pos + 1, "expected single space");
        ++pos;
      }
      std::size_t end = line.find(' ', pos);
      if (end == std::string_view::npos) end = line.size();
      const std::string_view token = line.substr(pos, end - pos);
      if (token.empty()) {
        throw ParseError(line_no, pos + 1, pos >= line.size() ? "expected " + std::to_string(i) + " entries"
                                                              : "empty entry");
      }
      if (token[0] == '-') throw ParseError(line_no, pos + 1, "negative distance");
      auto value = Rational::try_parse(token);
      if (!value) throw ParseError(line_no, pos + 1, "not an exact rational: '" + std::string(token) + "'");
      rows[i].push_back(*std::move(value));
      pos = end;
    }
    if (pos != line.size()) {
      throw ParseError(line_no, pos + 1, line[pos] == ' ' && pos + 1 == line.size() ? "trailing space"
                                                                                     : "too many entries");
    }
  }
  return DistanceMatrix::from_lower_triangle(rows);
}

/// Parses and validates. Throws ParseError or MetricViolation.
inline FiniteMetricSpace parse_distance_matrix(std::string_view text) {
  return FiniteMetricSpace::from_matrix(parse_dmat_matrix(text));
}

/// Canonical lower-triangle rendering of any matrix (upper half ignored).
inline std::string serialize_dmat_matrix(const DistanceMatrix& d) {
  std::string out = std::to_string(d.size());
  out += '\n';
  for (std::size_t i = 1; i < d.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (j > 0) out += ' ';
      out += d(i, j).str();
    }
    out += '\n';
  }
  return out;
}

inline std::string serialize_distance_matrix(const FiniteMetricSpace& space) {
  return serialize_dmat_matrix(space.matrix());
}

}  // namespace ury
