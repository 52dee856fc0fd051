// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Each criterion also carries a wall-clock budget.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "support.hpp"
#include "ury/ury.hpp"

using namespace ury;

namespace {

/// A criterion returns an empty string on success, otherwise the reason.
struct Criterion {
  const char* name;
  double budget_seconds;  // 0 = no time bound
  std::function<std::string(std::string&)> run;
};

std::string labeling(std::string& note) {
  const std::pair<LabelIndex, std::size_t> expect[] = {{1, 1}, {2, 1}, {3, 1}, {4, 2}, {12, 2}, {20, 2}, {8, 3}, {24, 3}, {40, 3}};
  for (auto [n, p] : expect) {
    const auto got = cardinality_of_index(n);
    if (got != p) return "cardinality_of_index(" + std::to_string(n) + ") = " + std::to_string(got);
    if (subset_of_index(n).elements.size() != p) return "subset_of_index(" + std::to_string(n) + ") has the wrong size";
  }
  note = "9 indices";
  return {};
}

ConstructionMode collapse_mode(DuplicateHandling dup, Case1Scope scope) {
  ConstructionMode m;
  m.duplicates = dup;
  m.case1 = scope;
  m.q_override = std::vector<std::vector<Rational>>{{2}, {3}, {4}, {Rational(1, 2), Rational(1, 2)}};
  return m;
}

std::string duplicate_collapse(std::string& note) {
  const auto s = build_prefix(5, collapse_mode(DuplicateHandling::legacy_multiset, Case1Scope::labels_only));
  if (s.rho(3, 2) != Rational(7)) return "rho(a4,a3) = " + s.rho(3, 2).str();
  for (std::size_t j = 0; j < 4; ++j)
    if (s.rho(4, j) != Rational(2)) return "rho(a5,a" + std::to_string(j + 1) + ") = " + s.rho(4, j).str();
  const auto report = validate_metric(s.matrix());
  bool flagged = false;
  for (const auto& v : report.violations)
    flagged = flagged || (v.kind == ViolationKind::triangle && v.witness == std::vector<std::size_t>{2, 4, 3} &&
                          v.lhs == Rational(7) && v.rhs == Rational(4));
  if (!flagged) return "triangle (a3,a5,a4) 7 > 4 not reported";
  if (oracle::is_metric(s.matrix())) return "oracle disagrees: legacy build looks like a metric";
  for (auto scope : {Case1Scope::all_prior, Case1Scope::labels_only}) {
    const auto fixed = build_prefix(5, collapse_mode(DuplicateHandling::set_collapse, scope));
    if (!validate_metric(fixed.matrix()).ok() || !oracle::is_metric(fixed.matrix()))
      return "set-collapse build is not a metric (" + std::string(to_string(scope)) + ")";
  }
  note = std::to_string(report.violations.size()) + " violation(s) in legacy mode, set-collapse clean";
  return {};
}

std::string prefix_validity(std::string& note) {
  const auto big = build_prefix(300);
  const auto report = validate_metric(big.matrix());
  if (!report.ok()) return std::to_string(report.violations.size()) + " violation(s) in build_prefix(300)";
  for (std::size_t m = 1; m <= 300; ++m) {
    const auto direct = build_prefix(m);
    if (!(direct == big.truncated(m))) return "build_prefix(" + std::to_string(m) + ") differs from the first points of 300";
  }
  std::size_t case2 = 0;
  for (const auto& r : big.log()) case2 += r.correctly_defined;
  note = "diameter " + big.diameter().str() + ", " + std::to_string(case2) + " correctly defined steps of 299";
  return {};
}

std::string extension_equivalence(std::string& note) {
  std::mt19937_64 rng(1001);
  std::size_t yes = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = testing::random_metric(rng, testing::random_size(rng, 1, 6));
    ExtensionRequest req{s, {}, {}};
    for (std::size_t i = 0; i < s.size(); ++i)
      if (rng() % 3 != 0 || (req.support.empty() && i + 1 == s.size())) {
        req.support.push_back(i);
        req.radii.push_back(testing::random_positive_rational(rng));
      }
    const bool adm = admissible(req).ok();
    const bool metric = oracle::is_metric(s.matrix().with_point(extension_row(req)));
    if (adm != metric) return "trial " + std::to_string(trial) + ": admissible=" + std::to_string(adm);
    if (adm) {
      const auto ext = extend_one_point(req);
      for (std::size_t i = 0; i < req.support.size(); ++i)
        if (ext(s.size(), req.support[i]) != req.radii[i]) return "extension misses a prescribed distance";
    }
    yes += adm;
  }
  note = std::to_string(yes) + " admissible / " + std::to_string(1000 - yes) + " inadmissible";
  return {};
}

std::string ball_intersection(std::string& note) {
  std::mt19937_64 rng(1002);
  std::size_t removed = 0;
  for (int fam = 0; fam < 500;) {
    const auto s = testing::random_metric(rng, testing::random_size(rng, 1, 6));
    BallFamily f{s, {}};
    const std::size_t k = testing::random_size(rng, 1, 6);
    for (std::size_t b = 0; b < k; ++b)
      f.balls.push_back({testing::random_size(rng, 0, s.size() - 1), testing::random_positive_rational(rng, 16, 3)});
    bool feasible = true;
    for (const auto& a : f.balls)
      for (const auto& b : f.balls) feasible = feasible && s(a.center, b.center) <= a.radius + b.radius;
    if (!feasible) continue;
    ++fam;
    const auto w = ball_intersection_witness(f);
    if (!oracle::is_metric(w.space.matrix())) return "witness space is not a metric";
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = 0; j < s.size(); ++j)
        if (w.space(i, j) != s(i, j)) return "witness space changes the base";
    std::vector<bool> survivor(f.balls.size(), false);
    for (auto i : w.trace.survivors) survivor[i] = true;
    for (std::size_t i = 0; i < f.balls.size(); ++i) {
      const Rational& dist = w.space(w.witness, f.balls[i].center);
      if (survivor[i] ? dist != f.balls[i].radius : dist > f.balls[i].radius)
        return "family " + std::to_string(fam) + ": ball " + std::to_string(i) + " not satisfied";
    }
    removed += w.trace.removals.size();
  }
  note = "500 families, " + std::to_string(removed) + " containment removals";
  return {};
}

std::string midpoint(std::string& note) {
  std::mt19937_64 rng(1003);
  std::size_t pairs = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = testing::random_metric(rng, testing::random_size(rng, 2, 8));
    for (std::size_t x = 0; x < s.size(); ++x)
      for (std::size_t y = x + 1; y < s.size(); ++y) {
        const Rational h = s(x, y) / 2;
        const ExtensionRequest req{s, {x, y}, {h, h}};
        if (!admissible(req)) return "midpoint radii rejected";
        if (!oracle::is_metric(extend_one_point(req).matrix())) return "midpoint extension is not a metric";
        ++pairs;
      }
  }
  note = std::to_string(pairs) + " pairs";
  return {};
}

std::string kuratowski_isometry(std::string& note) {
  std::mt19937_64 rng(1004);
  std::size_t pairs = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = testing::random_metric(rng, testing::random_size(rng, 1, 8));
    for (std::size_t a = 0; a < s.size(); ++a) {
      const auto fa = kuratowski(s, a);
      if (!is_extremal(fa)) return "f_a is not extremal";
      for (std::size_t b = 0; b < s.size(); ++b, ++pairs)
        if (sup_distance(fa, kuratowski(s, b)) != s(a, b)) return "sup distance differs from d";
    }
  }
  note = std::to_string(pairs) + " ordered pairs";
  return {};
}

std::string extremality_oracle(std::string& note) {
  std::mt19937_64 rng(1005);
  std::size_t extremal = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto s = testing::random_metric(rng, testing::random_size(rng, 1, 5));
    std::vector<Rational> v(s.size());
    switch (trial % 4) {
      case 0: {
        // extremal point, possibly nudged up
        v = extremal_below(KatetovFunction(s, std::vector<Rational>(s.size(), Rational(20)))).values;
        if (rng() % 2) v[testing::random_size(rng, 0, v.size() - 1)] += Rational(1, 4);
        break;
      }
      case 1:
        v = kuratowski(s, testing::random_size(rng, 0, s.size() - 1)).values;
        break;
      case 2:
        for (auto& x : v) x = testing::random_positive_rational(rng);
        break;
      default:
        for (auto& x : v) x = Rational(static_cast<long>(rng() % 15), 2);
    }
    const bool got = is_extremal(KatetovFunction(s, v));
    if (got != oracle::is_pointwise_minimal(s.matrix(), v)) return "disagreement on trial " + std::to_string(trial);
    extremal += got;
  }
  note = std::to_string(extremal) + " extremal / " + std::to_string(500 - extremal) + " not";
  return {};
}

std::string tight_span(std::string& note) {
  const auto pair = tight_span_vertices(parse_distance_matrix("2\n1\n"));
  if (pair.vertices.size() != 2 || pair.vertices[0].values != std::vector<Rational>{0, 1} ||
      pair.vertices[1].values != std::vector<Rational>{1, 0})
    return "2-point tight span is not {(0,1),(1,0)}";

  std::mt19937_64 rng(1006);
  for (int trial = 0; trial < 200;) {
    const auto d = testing::random_metric_matrix(rng, 3);
    const Rational a = d(0, 1), b = d(0, 2), c = d(1, 2);
    if (!(a < b + c && b < a + c && c < a + b)) continue;
    ++trial;
    const auto s = FiniteMetricSpace::from_matrix(d);
    const auto got = tight_span_vertices(s);
    if (got.vertices.size() != 4) return "3-point space with " + std::to_string(got.vertices.size()) + " vertices";
    const std::vector<Rational> legs{(a + b - c) / 2, (a + c - b) / 2, (b + c - a) / 2};
    bool center = false;
    for (const auto& v : got.vertices) center = center || v.values == legs;
    if (!center) return "tripod center missing";
    const auto brute = oracle::tight_span_vertices(d);
    std::set<std::vector<Rational>> mine;
    for (const auto& v : got.vertices) mine.insert(v.values);
    if (mine != brute) return "constraint-subset brute force disagrees";
  }
  note = "2-point case + 200 strict triangles";
  return {};
}

std::string example_hulls(std::string& note) {
  const Rational step(1, 64);
  for (const auto& [name, c] : {std::pair{"h1", diagonal_hull()}, std::pair{"h2", bent_hull()}}) {
    const auto r = verify_hull_candidate(c, step);
    if (!r.ok() || r.endpoint_distance != Rational(1) || r.expected_distance != Rational(1))
      return std::string(name) + " rejected";
  }
  const auto back = verify_hull_candidate(backtracking_path(), step);
  if (back.ok() || !back.first_isometry_failure) return "backtracking path accepted";
  note = "h1, h2 pass at 65 samples; backtracking path fails";
  return {};
}

std::string c0_demo(std::string& note) {
  const auto r = c0_counterexample(100);
  if (r.pairwise_distance != Rational(1) || !r.pairwise_uniform) return "pairwise distance is not 1";
  if (!r.witness || !r.single_point) return "no unique witness";
  for (const auto& x : *r.witness)
    if (x != Rational(1, 2)) return "witness coordinate " + x.str();

  std::mt19937_64 rng(1007);
  std::uniform_int_distribution<long> coord(-6, 6);
  std::size_t pairwise = 0, sampled = 0;
  for (std::size_t trial = 0; pairwise < 1000; ++trial) {
    ++sampled;
    const std::size_t dim = testing::random_size(rng, 1, 6), count = testing::random_size(rng, 2, 8);
    std::vector<Box> boxes;
    for (std::size_t b = 0; b < count; ++b) {
      std::vector<Interval> iv;
      for (std::size_t k = 0; k < dim; ++k) {
        const Rational lo(coord(rng), 2);
        iv.push_back({lo, lo + Rational(static_cast<long>(rng() % 12 + 1), 2)});
      }
      boxes.emplace_back(std::move(iv));
    }
    bool all_pairs = true;
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = i + 1; j < count; ++j)
        for (std::size_t k = 0; k < dim; ++k)
          all_pairs = all_pairs && boxes[i].coords[k].lo <= boxes[j].coords[k].hi && boxes[j].coords[k].lo <= boxes[i].coords[k].hi;
    if (!all_pairs) continue;
    ++pairwise;
    const auto meet = box_intersection(boxes);
    if (meet.empty()) return "Helly failure on trial " + std::to_string(trial);
    for (const auto& b : boxes)
      if (!b.contains(*meet.witness)) return "witness outside a box";
  }
  note = "c0(100) ok; 1000 pairwise-meeting families (of " + std::to_string(sampled) + " sampled), all with a common point";
  return {};
}

std::string embedding_oracle(std::string& note) {
  const auto big = build_prefix(200).matrix();
  std::vector<DistanceMatrix> prefixes;
  for (std::size_t len = 1; len <= 200; ++len) prefixes.push_back(big.leading(len));
  const Rational vals[] = {Rational(1, 2), Rational(1), Rational(3, 2), Rational(2)};
  std::size_t spaces = 0, checks = 0, found = 0, moved = 0;
  for (const auto& x : vals)
    for (const auto& y : vals)
      for (const auto& z : vals) {
        DistanceMatrix d(3);
        d.set_symmetric(0, 1, x);
        d.set_symmetric(0, 2, y);
        d.set_symmetric(1, 2, z);
        if (!oracle::is_metric(d)) continue;
        ++spaces;
        const auto target = FiniteMetricSpace::from_matrix(d);
        // every copy inside the 200-point prefix; the answer for length L is
        // the first copy that avoids points L and beyond
        const auto all = oracle::all_embeddings(d, big);
        std::optional<std::vector<std::size_t>> previous;
        for (const auto& p : prefixes) {
          const auto got = find_isometric_embedding(target, p);
          const auto want = oracle::smallest_within(all, p.size());
          ++checks;
          if (got.found() != want.has_value() || (want && got.mapping != *want) || got.searched_prefix_length != p.size())
            return "disagreement at prefix length " + std::to_string(p.size());
          if (previous && got.mapping != *previous) ++moved;
          if (got.found()) previous = got.mapping;
          found += got.found();
        }
      }
  note = std::to_string(spaces) + " spaces x 200 prefix lengths, " + std::to_string(found) + " of " +
         std::to_string(checks) + " found, " + std::to_string(moved) + " canonical-mapping changes as L grows";
  return {};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"labeling reproduction", 1, labeling},
      {"duplicate-collapse contradiction", 1, duplicate_collapse},
      {"prefix metric validity (300) + incrementality", 60, prefix_validity},
      {"extension equivalence (1000)", 10, extension_equivalence},
      {"finite ball intersection (500)", 10, ball_intersection},
      {"midpoint admissibility (100)", 0, midpoint},
      {"kuratowski isometry (100)", 5, kuratowski_isometry},
      {"extremality oracle agreement (500)", 0, extremality_oracle},
      {"tight-span vertices", 30, tight_span},
      {"max-norm hulls of a two-point set", 1, example_hulls},
      {"c0 truncation + box Helly (1000)", 5, c0_demo},
      {"embedding search oracle", 60, embedding_oracle},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    std::string note, why;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      why = c.run(note);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (why.empty() && c.budget_seconds > 0 && secs > c.budget_seconds)
      why = "over the " + std::to_string(static_cast<int>(c.budget_seconds)) + " s budget";
    failures += !why.empty();
    std::printf("[%s] %-48s %8.3f s  %s\n", why.empty() ? "PASS" : "FAIL", c.name, secs, why.empty() ? note.c_str() : why.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
