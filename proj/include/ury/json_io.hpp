#pragma once

// JSON forms of ball families, witnesses, boxes, hull candidates and search
// results. Rationals always travel as canonical strings.

#include <nlohmann/json.hpp>

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ury/embed.hpp"
#include "ury/errors.hpp"
#include "ury/extension.hpp"
#include "ury/hull.hpp"
#include "ury/linf.hpp"
#include "ury/metric.hpp"
#include "ury/rational.hpp"

namespace ury::json {

using nlohmann::json;

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Accepts a rational string or a JSON integer; floats are refused.
inline Rational to_rational(const json& j) {
  if (j.is_string()) {
    auto r = Rational::try_parse(j.get<std::string>());
    if (!r) throw InvalidArgument("not an exact rational: '" + j.get<std::string>() + "'");
    return *std::move(r);
  }
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw InvalidArgument("expected a rational string, got " + j.dump());
}

inline json from_rational(const Rational& r) { return r.str(); }

inline json from_rationals(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& r : v) a.push_back(r.str());
  return a;
}

inline std::size_t to_index(const json& j) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long>() >= 0))
    throw InvalidArgument("expected a point index, got " + j.dump());
  return j.get<std::size_t>();
}

/// {"dmat": "<path or inline text>", "balls": [{"center": i, "radius": "p/q"}, ...]}
/// The dmat string is inline text when it contains a newline, otherwise a
/// path relative to `base_dir`.
inline BallFamily parse_ball_family(const json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object() || !j.contains("dmat") || !j.contains("balls")) throw InvalidArgument("ball family needs 'dmat' and 'balls'");
  const std::string dmat = j.at("dmat").get<std::string>();
  std::string text;
  if (dmat.find('\n') != std::string::npos) {
    text = dmat;
  } else {
    std::filesystem::path p(dmat);
    if (p.is_relative()) p = base_dir / p;
    text = read_file(p);
  }
  BallFamily f{parse_distance_matrix(text), {}};
  if (!j.at("balls").is_array()) throw InvalidArgument("'balls' must be an array");
  for (const auto& b : j.at("balls")) f.balls.push_back({to_index(b.at("center")), to_rational(b.at("radius"))});
  return f;
}

inline json witness_to_json(const IntersectionWitness& w) {
  json out;
  out["witness"] = w.witness;
  out["survivors"] = w.trace.survivors;
  json removals = json::array();
  for (const auto& r : w.trace.removals)
    removals.push_back({{"removed", r.removed}, {"kept", r.kept}, {"distance", r.distance.str()}});
  out["removals"] = removals;
  json balls = json::array();
  for (const auto& m : w.certificate) {
    json b{{"ball", m.ball}, {"distance", m.distance.str()}, {"relation", m.on_sphere ? "sphere" : "inside"}};
    if (m.chain_bound) b["chain_bound"] = m.chain_bound->str();
    balls.push_back(b);
  }
  out["certificate"] = balls;
  std::vector<Rational> row;
  for (std::size_t j = 0; j < w.witness; ++j) row.push_back(w.space(w.witness, j));
  out["witness_row"] = from_rationals(row);
  return out;
}

inline json embedding_to_json(const EmbeddingResult& r) {
  json out;
  out["status"] = std::string(to_string(r.status));
  out["mapping"] = r.found() ? json(r.mapping) : json::array();
  out["searched"] = r.searched_prefix_length;
  return out;
}

/// [["lo","hi"], ...]
inline json box_to_json(const Box& b) {
  json a = json::array();
  for (const auto& iv : b.coords) a.push_back({iv.lo.str(), iv.hi.str()});
  return a;
}

inline Box box_from_json(const json& j) {
  if (!j.is_array()) throw InvalidArgument("a box is a list of [lo, hi] pairs");
  std::vector<Interval> c;
  for (const auto& iv : j) {
    if (!iv.is_array() || iv.size() != 2) throw InvalidArgument("a box coordinate is a [lo, hi] pair");
    c.push_back({to_rational(iv[0]), to_rational(iv[1])});
  }
  return Box(std::move(c));
}

inline Point2 point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidArgument("a point is an [x, y] pair");
  return {to_rational(j[0]), to_rational(j[1])};
}

/// Either a bare list of [x, y] breakpoints or {"path": [...], "a": [p, q]}.
/// Without "a", the path's own endpoints are taken as the original pair.
inline PathHullCandidate hull_from_json(const json& j) {
  const json& path = j.is_object() ? j.at("path") : j;
  if (!path.is_array()) throw InvalidArgument("hull path must be a list of points");
  PathHullCandidate c;
  for (const auto& p : path) c.breakpoints.push_back(point_from_json(p));
  if (c.breakpoints.empty()) throw DegeneratePath("empty path");
  if (j.is_object() && j.contains("a")) {
    const json& a = j.at("a");
    if (!a.is_array() || a.size() != 2) throw InvalidArgument("'a' must hold two points");
    c.a = {point_from_json(a[0]), point_from_json(a[1])};
  } else {
    c.a = {c.breakpoints.front(), c.breakpoints.back()};
  }
  return c;
}

inline json hull_to_json(const PathHullCandidate& c) {
  json path = json::array();
  for (const auto& p : c.breakpoints) path.push_back({p.x.str(), p.y.str()});
  json a = json::array();
  for (const auto& p : c.a) a.push_back(json::array({p.x.str(), p.y.str()}));
  return {{"path", path}, {"a", a}};
}

}  // namespace ury::json
