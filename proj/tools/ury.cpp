// ury: command-line front end for the exact Urysohn toolkit.
//
// Exit codes: 0 success, 1 domain failure (JSON reason on stderr),
// 2 usage or input errors.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ury/json_io.hpp"
#include "ury/ury.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;
namespace jio = ury::json;

namespace {

/// Domain failure: exit 1 with a JSON reason on stderr.
struct Failure {
  Json reason;
};

/// Usage or input problem: exit 2.
struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ury::Rational rational_flag(const std::string& name, const std::string& text) {
  auto r = ury::Rational::try_parse(text);
  if (!r) throw Usage(name + ": not an exact rational: '" + text + "'");
  return *r;
}

std::size_t count_flag(const std::string& name, const std::string& text, std::size_t min = 1) {
  const auto r = rational_flag(name, text);
  if (!r.is_integer() || r < ury::Rational(static_cast<long>(min)) || r > ury::Rational(1'000'000'000L))
    throw Usage(name + ": expected an integer >= " + std::to_string(min) + ", got '" + text + "'");
  return static_cast<std::size_t>(std::stoull(r.str()));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<ury::Rational> rational_list(const std::string& name, const std::string& text) {
  std::vector<ury::Rational> out;
  for (const auto& t : split_list(text)) out.push_back(rational_flag(name, t));
  return out;
}

std::vector<std::size_t> index_list(const std::string& name, const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& t : split_list(text)) out.push_back(count_flag(name, t, 0));
  return out;
}

std::string read_text(const std::string& path) {
  try {
    return jio::read_file(path);
  } catch (const ury::InvalidArgument& e) {
    throw Usage(e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) throw Usage("cannot write '" + path + "'");
}

/// Writes to `path`, or stdout when the path is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text;
  else
    write_text(path, text);
}

ury::FiniteMetricSpace load_space(const std::string& path) { return ury::parse_distance_matrix(read_text(path)); }

Json load_json(const std::string& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw Usage(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Prefix cache
// ---------------------------------------------------------------------------

fs::path cache_dir() {
  if (const char* env = std::getenv("URY_CACHE_DIR"); env && *env) return env;
  return ".ury-cache";
}

fs::path cache_file(const ury::ConstructionMode& mode) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(ury::detail::fnv1a(ury::mode_tag(mode))));
  return cache_dir() / (std::string("u0-") + hex + ".ury");
}

/// First m points, reusing and growing the on-disk cache for this mode. A
/// stale or unreadable cache is rebuilt; a cache that cannot be written is
/// skipped.
ury::PrefixState obtain_prefix(std::size_t m, const ury::ConstructionMode& mode) {
  const fs::path file = cache_file(mode);
  std::optional<ury::PrefixState> state;
  std::error_code ec;
  if (fs::exists(file, ec)) {
    try {
      state = ury::load_prefix(jio::read_file(file), mode);
    } catch (const ury::Error&) {
      state.reset();
    }
  }
  if (!state) state.emplace(mode);
  if (state->size() < m) {
    ury::extend_prefix(*state, m);
    fs::create_directories(file.parent_path(), ec);
    const fs::path tmp = file.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (out) out << ury::serialize_prefix(*state);
    }
    fs::rename(tmp, file, ec);
    if (ec) fs::remove(tmp, ec);
  }
  return state->size() == m ? *state : state->truncated(m);
}

std::vector<std::vector<ury::Rational>> parse_override_file(const std::string& path) {
  const std::string text = read_text(path);
  std::vector<std::vector<ury::Rational>> sets;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<ury::Rational> set;
    for (const auto& t : split_list(line)) {
      auto r = ury::Rational::try_parse(t);
      if (!r) throw ury::ParseError(line_no, 1, "not an exact rational: '" + t + "'");
      set.push_back(*r);
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

ury::PrefixState prefix_from_flags(const std::string& cache, const std::string& limit) {
  if (!cache.empty()) return ury::load_prefix(read_text(cache));
  return obtain_prefix(count_flag("--limit", limit), {});
}

Json violation_json(const ury::Violation& v) {
  return {{"kind", std::string(ury::to_string(v.kind))}, {"witness", v.witness}, {"lhs", v.lhs.str()}, {"rhs", v.rhs.str()}};
}

std::string violation_line(const ury::Violation& v) {
  std::string out(ury::to_string(v.kind));
  for (auto i : v.witness) out += " " + std::to_string(i);
  return out + ": " + v.lhs.str() + (v.kind == ury::ViolationKind::symmetry ? " != " : " > ") + v.rhs.str() + "\n";
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct BuildArgs {
  std::string points, out, dup = "set-collapse", case1 = "all-prior", override_file;
};

void run_build(const BuildArgs& a) {
  ury::ConstructionMode mode;
  mode.duplicates = ury::parse_duplicate_handling(a.dup);
  mode.case1 = ury::parse_case1_scope(a.case1);
  if (!a.override_file.empty()) mode.q_override = parse_override_file(a.override_file);
  const auto s = obtain_prefix(count_flag("--points", a.points), mode);
  if (!a.out.empty()) write_text(a.out, ury::serialize_prefix(s));
  std::size_t correct = 0;
  for (const auto& rec : s.log()) correct += rec.correctly_defined;
  std::cout << "points " << s.size() << "\nmode " << s.tag() << "\ndiameter " << s.diameter() << "\ncase2 " << correct
            << "\ncase1 " << s.log().size() - correct << "\n";
}

void run_export(const std::string& cache, const std::string& out) {
  emit(out, ury::serialize_dmat_matrix(ury::load_prefix(read_text(cache)).matrix()));
}

void run_verify(const std::string& dmat, const std::string& cache, const std::string& max) {
  const ury::DistanceMatrix d =
      dmat.empty() ? ury::load_prefix(read_text(cache)).matrix() : ury::parse_dmat_matrix(read_text(dmat));
  const std::size_t cap = max.empty() ? std::numeric_limits<std::size_t>::max() : count_flag("--max", max);
  const auto report = ury::validate_metric(d, cap);
  if (report.ok()) {
    std::cout << "ok " << d.size() << " points\n";
    return;
  }
  Json vs = Json::array();
  for (const auto& v : report.violations) {
    std::cout << violation_line(v);
    vs.push_back(violation_json(v));
  }
  throw Failure{{{"error", "metric-violation"}, {"violations", vs}}};
}

void run_extend(const std::string& dmat, const std::string& radii, const std::string& support, const std::string& out) {
  ury::ExtensionRequest req{load_space(dmat), {}, rational_list("--radii", radii)};
  if (support.empty()) {
    for (std::size_t i = 0; i < req.base.size(); ++i) req.support.push_back(i);
  } else {
    req.support = index_list("--support", support);
  }
  if (req.support.size() != req.radii.size()) throw Usage("--radii and --support differ in length");
  if (req.support.empty()) throw Usage("--radii is empty");
  emit(out, ury::serialize_distance_matrix(ury::extend_one_point(req)));
}

void run_balls(const std::string& family) {
  const auto f = jio::parse_ball_family(load_json(family), fs::path(family).parent_path());
  std::cout << jio::witness_to_json(ury::ball_intersection_witness(f)).dump(2) << "\n";
}

void run_tightspan(const std::string& dmat, bool vertices, const std::string& project, bool kuratowski) {
  const auto space = load_space(dmat);
  if (vertices) {
    std::cout << ury::format_vertex_set(ury::tight_span_vertices(space));
  } else if (kuratowski) {
    for (std::size_t a = 0; a < space.size(); ++a) std::cout << ury::format_function(ury::kuratowski(space, a)) << "\n";
  } else {
    const ury::KatetovFunction g(space, rational_list("--project", project));
    std::cout << ury::format_function(ury::extremal_below(g)) << "\n";
  }
}

void run_hull(const std::string& candidate, const std::string& builtin, const std::string& step) {
  ury::PathHullCandidate c;
  if (!candidate.empty())
    c = jio::hull_from_json(load_json(candidate));
  else if (builtin == "diagonal")
    c = ury::diagonal_hull();
  else if (builtin == "bent")
    c = ury::bent_hull();
  else
    c = ury::backtracking_path();
  const auto r = ury::verify_hull_candidate(c, rational_flag("--step", step));
  Json out{{"expected_distance", r.expected_distance.str()},
           {"endpoint_distance", r.endpoint_distance.str()},
           {"length", r.length.str()},
           {"samples", r.samples},
           {"endpoints_ok", r.endpoints_ok},
           {"isometric", !r.first_isometry_failure}};
  if (r.first_isometry_failure) out["first_failure"] = {r.first_isometry_failure->first, r.first_isometry_failure->second};
  std::cout << out.dump(2) << "\n";
  if (!r.ok()) throw Failure{{{"error", "not-a-hull"}, {"report", out}}};
}

void run_c0(const std::string& n, const std::string& radius) {
  const auto r = ury::c0_counterexample(count_flag("--n", n, 2), rational_flag("--radius", radius));
  Json out{{"n", r.n},
           {"radius", r.radius.str()},
           {"pairwise_distance", r.pairwise_distance.str()},
           {"pairwise_uniform", r.pairwise_uniform},
           {"pairwise_feasible", r.pairwise_feasible},
           {"single_point", r.single_point},
           {"conclusion", std::string(ury::to_string(r.conclusion))}};
  if (r.witness) {
    out["witness_value"] = r.witness->front().str();
    out["witness_tail_value"] = r.witness_tail_value->str();
    out["witness_norm"] = r.witness_norm->str();
    bool constant = true;
    for (const auto& x : *r.witness) constant = constant && x == r.witness->front();
    out["witness_constant"] = constant;
  }
  std::cout << out.dump(2) << "\n";
}

void run_embed(const std::string& target, const std::string& prefix, const std::string& limit) {
  const auto t = load_space(target);
  const auto p = prefix_from_flags(prefix, limit);
  const auto r = ury::find_isometric_embedding(t, p.matrix());
  const Json out = jio::embedding_to_json(r);
  std::cout << out.dump() << "\n";
  if (!r.found()) throw Failure{{{"error", "not-found"}, {"searched", r.searched_prefix_length}}};
}

void run_isom_extend(const std::string& prefix, const std::string& limit, const std::string& pairs,
                     const std::string& source) {
  const auto p = prefix_from_flags(prefix, limit);
  ury::PartialIsometry iso{std::make_shared<const ury::DistanceMatrix>(p.matrix()), {}};
  for (const auto& t : split_list(pairs)) {
    const auto colon = t.find(':');
    if (colon == std::string::npos) throw Usage("--pairs: expected source:image, got '" + t + "'");
    iso.pairs.emplace_back(count_flag("--pairs", t.substr(0, colon), 0), count_flag("--pairs", t.substr(colon + 1), 0));
  }
  const auto r = ury::extend_partial_isometry(iso, count_flag("--source", source, 0));
  if (!r) throw Failure{{{"error", "not-found"}, {"searched", p.size()}}};
  Json out = Json::array();
  for (const auto& [s, img] : r->pairs) out.push_back({s, img});
  std::cout << Json{{"pairs", out}, {"searched", p.size()}}.dump() << "\n";
}

int fail(int code, const Json& reason) {
  std::cerr << reason.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact rational metric-space toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  BuildArgs build;
  auto* c_build = app.add_subcommand("build", "Build (or reuse) a prefix of the rational universal space");
  c_build->add_option("--points", build.points, "Number of points")->required();
  c_build->add_option("--out", build.out, "Write the prefix in cache format");
  c_build->add_option("--dup", build.dup, "set-collapse | legacy-multiset");
  c_build->add_option("--case1", build.case1, "all-prior | labels-only");
  c_build->add_option("--override", build.override_file, "File of override sets, one per line");

  std::string cache, out, dmat, radii, support, family, project, candidate, builtin, step = "1/64", n, radius = "1/2",
                                                                                     target, prefix, limit, pairs, source,
                                                                                     max;
  bool vertices = false, kuratowski = false;

  auto* c_export = app.add_subcommand("export", "Write a cached prefix as .dmat");
  c_export->add_option("--cache", cache)->required();
  c_export->add_option("--out", out);

  auto* c_verify = app.add_subcommand("verify", "Check the metric axioms");
  auto* v_dmat = c_verify->add_option("--dmat", dmat);
  auto* v_cache = c_verify->add_option("--cache", cache);
  v_dmat->excludes(v_cache);
  c_verify->add_option("--max", max, "Stop after this many violations");

  auto* c_extend = app.add_subcommand("extend", "One-point extension with prescribed distances");
  c_extend->add_option("--dmat", dmat)->required();
  c_extend->add_option("--radii", radii, "Comma-separated rationals")->required();
  c_extend->add_option("--support", support, "Comma-separated 0-based indices (default: all points)");
  c_extend->add_option("--out", out);

  auto* c_balls = app.add_subcommand("balls", "Common point of a pairwise-intersecting ball family");
  c_balls->add_option("--family", family, "JSON ball family")->required();

  auto* c_ts = app.add_subcommand("tightspan", "Extremal functions of a finite space");
  c_ts->add_option("--dmat", dmat)->required();
  auto* t_vert = c_ts->add_flag("--vertices", vertices);
  auto* t_proj = c_ts->add_option("--project", project, "Admissible function to lower");
  auto* t_kur = c_ts->add_flag("--kuratowski", kuratowski);
  t_vert->excludes(t_proj)->excludes(t_kur);
  t_proj->excludes(t_kur);

  auto* c_hull = app.add_subcommand("hull-check", "Check a max-norm path hull of a two-point set");
  auto* h_cand = c_hull->add_option("--candidate", candidate, "JSON path");
  auto* h_built = c_hull->add_option("--builtin", builtin)->check(CLI::IsMember({"diagonal", "bent", "backtracking"}));
  h_cand->excludes(h_built);
  c_hull->add_option("--step", step, "Sampling step 1/k");

  auto* c_c0 = app.add_subcommand("c0-demo", "Basis balls in a truncated max-norm space");
  c_c0->add_option("--n", n)->required();
  c_c0->add_option("--radius", radius);

  auto* c_embed = app.add_subcommand("embed", "Smallest isometric copy of a space inside a prefix");
  c_embed->add_option("--target", target)->required();
  auto* e_pre = c_embed->add_option("--prefix", prefix, "Prefix cache file");
  auto* e_lim = c_embed->add_option("--limit", limit, "Use the first L points of the default prefix");
  e_pre->excludes(e_lim);

  auto* c_iso = app.add_subcommand("isom-extend", "Extend a partial isometry of a prefix by one point");
  auto* i_pre = c_iso->add_option("--prefix", prefix, "Prefix cache file");
  auto* i_lim = c_iso->add_option("--limit", limit, "Use the first L points of the default prefix");
  i_pre->excludes(i_lim);
  c_iso->add_option("--pairs", pairs, "Comma-separated source:image pairs");
  c_iso->add_option("--source", source)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (*c_build) {
      run_build(build);
    } else if (*c_export) {
      run_export(cache, out);
    } else if (*c_verify) {
      if (dmat.empty() && cache.empty()) throw Usage("verify needs --dmat or --cache");
      run_verify(dmat, cache, max);
    } else if (*c_extend) {
      run_extend(dmat, radii, support, out);
    } else if (*c_balls) {
      run_balls(family);
    } else if (*c_ts) {
      if (!vertices && !kuratowski && project.empty()) throw Usage("tightspan needs --vertices, --project or --kuratowski");
      run_tightspan(dmat, vertices, project, kuratowski);
    } else if (*c_hull) {
      if (candidate.empty() && builtin.empty()) throw Usage("hull-check needs --candidate or --builtin");
      run_hull(candidate, builtin, step);
    } else if (*c_c0) {
      run_c0(n, radius);
    } else if (*c_embed) {
      if (prefix.empty() && limit.empty()) throw Usage("embed needs --prefix or --limit");
      run_embed(target, prefix, limit);
    } else if (*c_iso) {
      if (prefix.empty() && limit.empty()) throw Usage("isom-extend needs --prefix or --limit");
      run_isom_extend(prefix, limit, pairs, source);
    }
  } catch (const Failure& f) {
    return fail(1, f.reason);
  } catch (const Usage& e) {
    return fail(2, {{"error", "usage"}, {"message", e.what()}});
  } catch (const ury::ParseError& e) {
    return fail(2, {{"error", "parse"}, {"line", e.line()}, {"column", e.column()}, {"message", e.reason()}});
  } catch (const ury::MetricViolation& e) {
    Json vs = Json::array();
    for (const auto& v : e.report().violations) vs.push_back(violation_json(v));
    return fail(1, {{"error", "metric-violation"}, {"violations", vs}});
  } catch (const ury::Inadmissible& e) {
    const auto& f = e.failure();
    return fail(1, {{"error", "inadmissible"},
                    {"first", f.first},
                    {"second", f.second},
                    {"side", std::string(ury::to_string(f.side))},
                    {"lhs", f.lhs.str()},
                    {"rhs", f.rhs.str()}});
  } catch (const ury::PairwiseInfeasible& e) {
    return fail(1, {{"error", "pairwise-infeasible"},
                    {"first", e.first},
                    {"second", e.second},
                    {"distance", e.distance.str()},
                    {"radius_sum", e.radius_sum.str()}});
  } catch (const ury::NotAdmissible& e) {
    return fail(1, {{"error", "not-admissible"}, {"message", e.what()}});
  } catch (const ury::InvalidPartialIsometry& e) {
    return fail(1, {{"error", "invalid-partial-isometry"}, {"message", e.what()}, {"pair", {e.first, e.second}}});
  } catch (const ury::TooLarge& e) {
    return fail(1, {{"error", "too-large"}, {"message", e.what()}});
  } catch (const ury::Error& e) {
    return fail(2, {{"error", "input"}, {"message", e.what()}});
  } catch (const std::exception& e) {
    return fail(2, {{"error", "input"}, {"message", e.what()}});
  }
  return 0;
}
