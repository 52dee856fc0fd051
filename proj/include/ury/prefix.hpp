#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ury/errors.hpp"
#include "ury/labels.hpp"
#include "ury/metric.hpp"
#include "ury/rational.hpp"

namespace ury {

enum class DuplicateHandling { set_collapse, legacy_multiset };
enum class Case1Scope { all_prior, labels_only };

class InvalidMode : public Error {
 public:
  using Error::Error;
};

class PrefixTooShort : public Error {
 public:
  using Error::Error;
};

/// Cache text does not match the requested settings or fails re-derivation.
class CacheMismatch : public Error {
 public:
  using Error::Error;
};

inline constexpr std::string_view kEnumerationVersion = "cw-colex-1";

struct ConstructionMode {
  DuplicateHandling duplicates = DuplicateHandling::set_collapse;
  /// Case 1 distance: diameter of all prior points, or of the first p_n only.
  Case1Scope case1 = Case1Scope::all_prior;
  /// Replaces the first sets of the enumeration; later steps fall back to the
  /// canonical labels.
  std::optional<std::vector<std::vector<Rational>>> q_override;

  friend bool operator==(const ConstructionMode&, const ConstructionMode&) = default;
};

inline std::string_view to_string(DuplicateHandling d) {
  return d == DuplicateHandling::set_collapse ? "set-collapse" : "legacy-multiset";
}
inline std::string_view to_string(Case1Scope s) { return s == Case1Scope::all_prior ? "all-prior" : "labels-only"; }

inline DuplicateHandling parse_duplicate_handling(std::string_view s) {
  if (s == "set-collapse") return DuplicateHandling::set_collapse;
  if (s == "legacy-multiset") return DuplicateHandling::legacy_multiset;
  throw InvalidMode("unknown duplicate handling '" + std::string(s) + "'");
}
inline Case1Scope parse_case1_scope(std::string_view s) {
  if (s == "all-prior") return Case1Scope::all_prior;
  if (s == "labels-only") return Case1Scope::labels_only;
  throw InvalidMode("unknown case-1 scope '" + std::string(s) + "'");
}

namespace detail {

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string join_rationals(const std::vector<Rational>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ' ';
    out += xs[i].str();
  }
  return out;
}

}  // namespace detail

/// Checks the mode and returns the override sets in the form the
/// construction consumes: positive, sorted, and deduplicated under
/// set-collapse. Throws InvalidMode.
inline std::vector<std::vector<Rational>> normalized_override(const ConstructionMode& mode) {
  if (mode.duplicates == DuplicateHandling::legacy_multiset && !mode.q_override)
    throw InvalidMode("legacy-multiset duplicate handling requires an explicit set override");
  std::vector<std::vector<Rational>> sets;
  if (!mode.q_override) return sets;
  for (std::size_t s = 0; s < mode.q_override->size(); ++s) {
    auto set = (*mode.q_override)[s];
    if (set.empty()) throw InvalidMode("override set " + std::to_string(s + 1) + " is empty");
    for (const auto& r : set)
      if (!r.is_positive()) throw InvalidMode("override set " + std::to_string(s + 1) + " has a non-positive element");
    std::sort(set.begin(), set.end());
    if (mode.duplicates == DuplicateHandling::set_collapse) set.erase(std::unique(set.begin(), set.end()), set.end());
    sets.push_back(std::move(set));
  }
  return sets;
}

/// Header tag of the cache format. Override contents enter through a hash.
inline std::string mode_tag(const ConstructionMode& mode) {
  std::string tag = std::string(to_string(mode.duplicates)) + ":" + std::string(to_string(mode.case1)) + ":" +
                    std::string(kEnumerationVersion);
  if (mode.q_override) {
    std::string text;
    for (const auto& set : *mode.q_override) text += detail::join_rationals(set) + "\n";
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(detail::fnv1a(text)));
    tag += ":override-" + std::to_string(mode.q_override->size()) + "-" + hex;
  }
  return tag;
}

struct StepRecord {
  LabelIndex step = 0;
  QLabel label;
  bool correctly_defined = false;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

/// Points a_1..a_m of the rational universal space under construction.
/// Indices are 0-based: point i is a_{i+1}, and step n appends point n.
class PrefixState {
 public:
  explicit PrefixState(ConstructionMode mode = {})
      : mode_(std::move(mode)), override_(normalized_override(mode_)), tag_(mode_tag(mode_)), rows_(1) {}

  std::size_t size() const noexcept { return rows_.size(); }

  const Rational& rho(std::size_t i, std::size_t j) const {
    static const Rational zero;
    if (i == j) return zero;
    return i > j ? rows_[i][j] : rows_[j][i];
  }

  /// Distances from point i to points 0..i-1.
  const std::vector<Rational>& row(std::size_t i) const { return rows_[i]; }

  const std::vector<StepRecord>& log() const noexcept { return log_; }
  const ConstructionMode& mode() const noexcept { return mode_; }
  const std::string& tag() const noexcept { return tag_; }

  /// Largest distance seen so far.
  const Rational& diameter() const noexcept { return diameter_; }

  DistanceMatrix matrix() const { return DistanceMatrix::from_lower_triangle(rows_); }

  /// The first m points; equal to building m points directly.
  PrefixState truncated(std::size_t m) const {
    if (m == 0 || m > size()) throw InvalidArgument("truncation length out of range");
    PrefixState out = *this;
    out.rows_.resize(m);
    out.log_.resize(m - 1);
    out.diameter_ = 0;
    for (const auto& r : out.rows_)
      for (const auto& v : r) out.diameter_ = max(out.diameter_, v);
    return out;
  }

  /// Label consumed at step n (n >= 1).
  QLabel label_for_step(LabelIndex n) const {
    if (n >= 1 && n <= override_.size()) return QLabel{n, override_[n - 1]};
    return subset_of_index(n);
  }

  friend bool operator==(const PrefixState& a, const PrefixState& b) {
    return a.tag_ == b.tag_ && a.rows_ == b.rows_ && a.log_ == b.log_;
  }

 private:
  friend PrefixState& extend_prefix(PrefixState&, std::size_t);
  friend PrefixState load_prefix(std::string_view, const ConstructionMode*);
  struct opaque_tag {};
  PrefixState(opaque_tag, std::string tag, DuplicateHandling dup, Case1Scope scope)
      : tag_(std::move(tag)), rows_(1) {
    mode_.duplicates = dup;
    mode_.case1 = scope;
  }

  void append(StepRecord rec, std::vector<Rational> row) {
    for (const auto& v : row) diameter_ = max(diameter_, v);
    rows_.push_back(std::move(row));
    log_.push_back(std::move(rec));
  }

  ConstructionMode mode_;
  std::vector<std::vector<Rational>> override_;
  std::string tag_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<StepRecord> log_;
  Rational diameter_;
  bool opaque_override_ = false;
};

struct CorrectnessCheck {
  bool correctly_defined = true;
  /// First (i,k), i <= k, 0-based positions in the label, violating either side.
  std::optional<std::pair<std::size_t, std::size_t>> first_failure;

  explicit operator bool() const noexcept { return correctly_defined; }
};

/// Whether every pair i,k <= p satisfies |r_i - r_k| <= rho(a_i,a_k) <= r_i + r_k.
inline CorrectnessCheck is_correctly_defined(const PrefixState& prefix, const QLabel& q) {
  const std::size_t p = q.cardinality();
  if (p > prefix.size())
    throw PrefixTooShort("label of cardinality " + std::to_string(p) + " needs " + std::to_string(p) +
                         " points, prefix has " + std::to_string(prefix.size()));
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t k = i; k < p; ++k) {
      const Rational& d = prefix.rho(i, k);
      const auto& ri = q.elements[i];
      const auto& rk = q.elements[k];
      if (abs(ri - rk) > d || d > ri + rk) return {false, std::pair{i, k}};
    }
  }
  return {};
}

namespace detail {

inline std::vector<Rational> next_row(const PrefixState& s, const QLabel& q, bool correct) {
  const std::size_t n = s.size();
  std::vector<Rational> row(n);
  if (!correct) {
    Rational far;
    if (s.mode().case1 == Case1Scope::all_prior) {
      far = s.diameter();
    } else {
      for (std::size_t i = 0; i < q.cardinality(); ++i)
        for (std::size_t k = 0; k < i; ++k) far = max(far, s.rho(i, k));
    }
    std::fill(row.begin(), row.end(), far);
    return row;
  }
  for (std::size_t j = 0; j < n; ++j) {
    Rational best = s.rho(j, 0) + q.elements[0];
    for (std::size_t l = 1; l < q.cardinality(); ++l) {
      Rational c = s.rho(j, l) + q.elements[l];
      if (c < best) best = std::move(c);
    }
    row[j] = std::move(best);
  }
  return row;
}

}  // namespace detail

/// Appends points until the prefix has m points. No-op if it already does.
inline PrefixState& extend_prefix(PrefixState& s, std::size_t m) {
  if (s.opaque_override_ && m > s.size())
    throw InvalidMode("prefix was loaded without its override sets and cannot be extended");
  while (s.size() < m) {
    const LabelIndex n = s.size();
    QLabel q = s.label_for_step(n);
    const bool correct = is_correctly_defined(s, q).correctly_defined;
    auto row = detail::next_row(s, q, correct);
    s.append(StepRecord{n, std::move(q), correct}, std::move(row));
  }
  return s;
}

/// Deterministic prefix a_1..a_m. Throws InvalidMode for legacy-multiset
/// without an override.
inline PrefixState build_prefix(std::size_t m, const ConstructionMode& mode = {}) {
  if (m == 0) throw InvalidArgument("a prefix has at least one point");
  PrefixState s(mode);
  extend_prefix(s, m);
  return s;
}

// ---------------------------------------------------------------------------
// Cache format
//
//   URY0 v1 <mode-tag>
//   <n> | <label elements> | C|I | <rho(a_{n+1},a_1) .. rho(a_{n+1},a_n)>
// ---------------------------------------------------------------------------

inline std::string serialize_prefix(const PrefixState& s) {
  std::string out = "URY0 v1 " + s.tag() + "\n";
  for (std::size_t n = 1; n < s.size(); ++n) {
    const auto& rec = s.log()[n - 1];
    out += std::to_string(rec.step);
    out += " | ";
    out += detail::join_rationals(rec.label.elements);
    out += rec.correctly_defined ? " | C | " : " | I | ";
    out += detail::join_rationals(s.row(n));
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::vector<Rational> parse_rational_list(std::string_view field, std::size_t line) {
  std::vector<Rational> out;
  std::size_t pos = 0;
  while (pos <= field.size()) {
    std::size_t end = field.find(' ', pos);
    if (end == std::string_view::npos) end = field.size();
    auto r = Rational::try_parse(field.substr(pos, end - pos));
    if (!r) throw ParseError(line, pos + 1, "bad rational in cache record");
    out.push_back(*std::move(r));
    pos = end + 1;
  }
  return out;
}

}  // namespace detail

/// Reloads a cache. With `expected`, the header must carry exactly that mode
/// (else CacheMismatch) and the result can be extended further. Without it,
/// the tag's duplicate/scope fields are honoured and override labels are
/// taken from the records as written.
///
/// Every record is re-derived from its predecessors: label (when known),
/// C/I flag and distance row must agree, so the loaded state is the state a
/// fresh build would produce.
inline PrefixState load_prefix(std::string_view text, const ConstructionMode* expected = nullptr) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) throw ParseError(lines.size() + 1, 1, "cache lines must end with LF");
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  if (lines.empty()) throw ParseError(1, 1, "empty cache");
  constexpr std::string_view magic = "URY0 v1 ";
  if (!lines[0].starts_with(magic)) throw ParseError(1, 1, "missing 'URY0 v1' header");
  const std::string tag(lines[0].substr(magic.size()));

  std::optional<PrefixState> state;
  if (expected) {
    if (mode_tag(*expected) != tag)
      throw CacheMismatch("cache built with '" + tag + "', requested '" + mode_tag(*expected) + "'");
    state.emplace(*expected);
  } else {
    std::vector<std::string_view> parts;
    for (std::size_t start = 0;;) {
      const std::size_t c = tag.find(':', start);
      parts.push_back(std::string_view(tag).substr(start, c == std::string::npos ? std::string::npos : c - start));
      if (c == std::string::npos) break;
      start = c + 1;
    }
    if (parts.size() < 3 || parts.size() > 4) throw ParseError(1, magic.size() + 1, "malformed mode tag");
    if (parts[2] != kEnumerationVersion) throw CacheMismatch("unsupported enumeration '" + std::string(parts[2]) + "'");
    const auto dup = parse_duplicate_handling(parts[0]);
    const auto scope = parse_case1_scope(parts[1]);
    if (parts.size() == 4) {
      if (!parts[3].starts_with("override-")) throw ParseError(1, magic.size() + 1, "malformed mode tag");
      state.emplace(PrefixState(PrefixState::opaque_tag{}, tag, dup, scope));
      state->opaque_override_ = true;
    } else {
      ConstructionMode mode;
      mode.duplicates = dup;
      mode.case1 = scope;
      if (dup == DuplicateHandling::legacy_multiset) throw CacheMismatch("legacy-multiset cache without override");
      state.emplace(mode);
    }
  }

  PrefixState& s = *state;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::string_view line = lines[li];
    const std::size_t line_no = li + 1;
    std::vector<std::string_view> fields;
    for (std::size_t start = 0;;) {
      const std::size_t bar = line.find(" | ", start);
      fields.push_back(line.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start));
      if (bar == std::string_view::npos) break;
      start = bar + 3;
    }
    if (fields.size() != 4) throw ParseError(line_no, 1, "expected 4 '|'-separated fields");
    const LabelIndex n = s.size();
    if (fields[0] != std::to_string(n)) throw ParseError(line_no, 1, "expected step " + std::to_string(n));
    QLabel label{n, detail::parse_rational_list(fields[1], line_no)};
    if (fields[2] != "C" && fields[2] != "I") throw ParseError(line_no, 1, "correctness flag must be C or I");
    const bool flag = fields[2] == "C";
    auto row = detail::parse_rational_list(fields[3], line_no);

    if (!s.opaque_override_ && s.label_for_step(n) != label)
      throw CacheMismatch("step " + std::to_string(n) + " label differs from the enumeration");
    for (const auto& r : label.elements)
      if (!r.is_positive()) throw CacheMismatch("step " + std::to_string(n) + " label has a non-positive element");
    if (label.cardinality() > s.size())
      throw CacheMismatch("step " + std::to_string(n) + " label larger than the prefix");
    const bool correct = is_correctly_defined(s, label).correctly_defined;
    if (correct != flag) throw CacheMismatch("step " + std::to_string(n) + " correctness flag disagrees");
    if (detail::next_row(s, label, correct) != row)
      throw CacheMismatch("step " + std::to_string(n) + " distances disagree with the construction");
    s.append(StepRecord{n, std::move(label), correct}, std::move(row));
  }
  return std::move(*state);
}

inline PrefixState load_prefix(std::string_view text, const ConstructionMode& expected) {
  return load_prefix(text, &expected);
}

}  // namespace ury
