#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ury/errors.hpp"
#include "ury/metric.hpp"
#include "ury/prefix.hpp"
#include "ury/rational.hpp"

namespace ury {

enum class EmbeddingStatus { found, not_found_up_to };

inline std::string_view to_string(EmbeddingStatus s) {
  return s == EmbeddingStatus::found ? "found" : "not-found-up-to";
}

/// A `not_found_up_to` result only says the first `searched_prefix_length`
/// points contain no copy of the target.
struct EmbeddingResult {
  EmbeddingStatus status = EmbeddingStatus::not_found_up_to;
  std::vector<std::size_t> mapping;  ///< target point -> prefix point
  std::size_t searched_prefix_length = 0;

  bool found() const noexcept { return status == EmbeddingStatus::found; }
  friend bool operator==(const EmbeddingResult&, const EmbeddingResult&) = default;
};

namespace detail {

/// For each anchor point, the points at each distance from it, ascending.
class DistanceBuckets {
 public:
  explicit DistanceBuckets(const DistanceMatrix& d) : d_(d), rows_(d.size()) {}

  const std::vector<std::size_t>& at(std::size_t anchor, const Rational& dist) {
    auto& row = rows_[anchor];
    if (!row) {
      row.emplace();
      for (std::size_t t = 0; t < d_.size(); ++t)
        if (t != anchor) (*row)[d_(anchor, t)].push_back(t);
    }
    static const std::vector<std::size_t> none;
    auto it = row->find(dist);
    return it == row->end() ? none : it->second;
  }

 private:
  const DistanceMatrix& d_;
  std::vector<std::optional<std::unordered_map<Rational, std::vector<std::size_t>>>> rows_;
};

}  // namespace detail

/// Lexicographically smallest injective map m with
/// prefix(m(i), m(j)) == target(i, j) for all i, j.
///
/// Depth-first in target order with candidates in ascending prefix order, so
/// the first complete map is the smallest. Candidates for point k > 0 come
/// from the bucket of prefix points at distance target(k, 0) from m(0) and
/// must match every earlier image before the search descends.
inline EmbeddingResult find_isometric_embedding(const FiniteMetricSpace& target, const DistanceMatrix& prefix) {
  const std::size_t n = target.size();
  const std::size_t len = prefix.size();
  EmbeddingResult res;
  res.searched_prefix_length = len;
  if (n > len) return res;

  detail::DistanceBuckets buckets(prefix);
  std::vector<std::size_t> map(n);
  std::vector<bool> used(len, false);

  auto fits = [&](std::size_t k, std::size_t t) {
    if (used[t]) return false;
    for (std::size_t i = 1; i < k; ++i)
      if (prefix(map[i], t) != target(i, k)) return false;
    return true;
  };

  // explicit stack of candidate cursors
  std::vector<const std::vector<std::size_t>*> lists(n);
  std::vector<std::size_t> cursor(n, 0);
  std::vector<std::size_t> all(len);
  for (std::size_t t = 0; t < len; ++t) all[t] = t;

  std::size_t k = 0;
  lists[0] = &all;
  while (true) {
    bool placed = false;
    while (cursor[k] < lists[k]->size()) {
      const std::size_t t = (*lists[k])[cursor[k]++];
      if (k == 0 ? !used[t] : fits(k, t)) {
        map[k] = t;
        used[t] = true;
        placed = true;
        break;
      }
    }
    if (placed) {
      if (k + 1 == n) {
        res.status = EmbeddingStatus::found;
        res.mapping = map;
        return res;
      }
      ++k;
      lists[k] = &buckets.at(map[0], target(k, 0));
      cursor[k] = 0;
      continue;
    }
    if (k == 0) return res;
    --k;
    used[map[k]] = false;
  }
}

inline EmbeddingResult find_isometric_embedding(const FiniteMetricSpace& target, const PrefixState& prefix) {
  return find_isometric_embedding(target, prefix.matrix());
}

/// Matched pairs (source, image) inside one prefix.
struct PartialIsometry {
  std::shared_ptr<const DistanceMatrix> prefix;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

class InvalidPartialIsometry : public Error {
 public:
  InvalidPartialIsometry(std::string what, std::size_t a, std::size_t b)
      : Error(std::move(what)), first(a), second(b) {}
  std::size_t first;
  std::size_t second;
};

/// Throws InvalidPartialIsometry with the offending pair positions.
inline void check_partial_isometry(const PartialIsometry& p) {
  if (!p.prefix) throw InvalidArgument("partial isometry without a prefix");
  const auto& d = *p.prefix;
  for (std::size_t i = 0; i < p.pairs.size(); ++i) {
    const auto [s, t] = p.pairs[i];
    if (s >= d.size() || t >= d.size()) throw InvalidPartialIsometry("pair index out of range", i, i);
    for (std::size_t j = 0; j < i; ++j) {
      const auto [s2, t2] = p.pairs[j];
      if (s == s2) throw InvalidPartialIsometry("source listed twice", j, i);
      if (t == t2) throw InvalidPartialIsometry("image listed twice", j, i);
      if (d(s, s2) != d(t, t2)) throw InvalidPartialIsometry("pair distances differ", j, i);
    }
  }
}

/// Adds new_source with the smallest unused image t such that
/// d(new_source, s_i) == d(t, t_i) for every existing pair; nullopt when the
/// prefix has no such point.
inline std::optional<PartialIsometry> extend_partial_isometry(const PartialIsometry& p, std::size_t new_source) {
  check_partial_isometry(p);
  const auto& d = *p.prefix;
  if (new_source >= d.size()) throw InvalidArgument("new source out of range");
  std::vector<bool> used(d.size(), false);
  for (std::size_t i = 0; i < p.pairs.size(); ++i) {
    if (p.pairs[i].first == new_source) throw InvalidPartialIsometry("new source already mapped", i, i);
    used[p.pairs[i].second] = true;
  }
  for (std::size_t t = 0; t < d.size(); ++t) {
    if (used[t]) continue;
    bool ok = true;
    for (const auto& [s, img] : p.pairs) {
      if (d(new_source, s) != d(t, img)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      PartialIsometry out = p;
      out.pairs.emplace_back(new_source, t);
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace ury
