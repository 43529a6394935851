#include "orbitbench/cli/commands.hpp"

// gcc 11 false positive on map<vector<uint8_t>, ...> key comparison.
#pragma GCC diagnostic ignored "-Wstringop-overread"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <memory>
#include <set>
#include <unordered_set>

#include "orbitbench/cocycle.hpp"
#include "orbitbench/derandomize.hpp"
#include "orbitbench/entropy.hpp"
#include "orbitbench/errors.hpp"
#include "orbitbench/graphing.hpp"
#include "orbitbench/orbit.hpp"
#include "orbitbench/rng.hpp"
#include "orbitbench/skeleton.hpp"
#include "orbitbench/soe.hpp"

namespace orbitbench::cli {

using nlohmann::json;

namespace {

std::vector<std::int64_t> range(std::int64_t a, std::int64_t b) {
  std::vector<std::int64_t> v;
  for (auto i = a; i <= b; ++i) v.push_back(i);
  return v;
}

std::uint64_t seed_of(const Config& cfg) { return static_cast<std::uint64_t>(cfg.integer("seed")); }

Report start(const std::string& name, const Config& cfg) {
  Report r;
  r.command = name;
  r.config = cfg;
  r.seed = seed_of(cfg);
  return r;
}

// law = bernoulli (p = ...) or markov (transition = rows of reals).
SymbolicSystem system_of(const Config& cfg, int rank) {
  const std::string law = cfg.str("law");
  SymbolicSystem sys;
  if (law == "bernoulli") {
    try {
      sys = SymbolicSystem::bernoulli(rank, cfg.reals("p"));
    } catch (const DomainError& e) {
      throw ConfigError(std::string("p: ") + e.what());
    }
  } else if (law == "markov") {
    if (rank != 1) throw ConfigError("markov law needs a Z^1 system");
    std::vector<std::vector<double>> t;
    for (const auto& row : split(cfg.str("transition"), ';')) {
      std::vector<double> r;
      for (const auto& v : split(row, ',')) {
        Config one{{"x", v}};
        r.push_back(one.real("x"));
      }
      t.push_back(std::move(r));
    }
    try {
      sys = SymbolicSystem::markov(std::move(t));
    } catch (const DomainError& e) {
      throw ConfigError(std::string("transition: ") + e.what());
    }
  } else {
    throw ConfigError("law must be bernoulli or markov, got '" + law + "'");
  }
  try {
    sys.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("law: ") + e.what());
  }
  return sys;
}

// full | symbol:a | cylinder:a,b,... (consecutive cells along the first axis)
struct EventSpec {
  LocalEvent event;
  std::vector<std::uint8_t> word;
  bool full = false;
};

EventSpec event_of(const Config& cfg, const std::string& key, int alphabet) {
  const std::string v = cfg.str(key);
  EventSpec spec;
  if (v == "full") {
    spec.full = true;
    spec.event = LocalEvent::always();
    return spec;
  }
  const auto colon = v.find(':');
  if (colon == std::string::npos) throw ConfigError(key + ": expected full, symbol:a or cylinder:a,b,...");
  const std::string kind = v.substr(0, colon);
  Config list{{key, v.substr(colon + 1)}};
  const auto syms = list.integers(key);
  if (kind == "symbol" && syms.size() != 1) throw ConfigError(key + ": symbol takes one value");
  if (kind != "symbol" && kind != "cylinder") throw ConfigError(key + ": unknown event kind '" + kind + "'");
  for (std::size_t j = 0; j < syms.size(); ++j) {
    if (syms[j] < 0 || syms[j] >= alphabet) throw ConfigError(key + ": symbol out of alphabet");
    const auto a = static_cast<std::uint8_t>(syms[j]);
    spec.word.push_back(a);
    spec.event.constraints.push_back({Element{static_cast<std::int64_t>(j)}, {a}});
  }
  return spec;
}

double event_probability(const SymbolicSystem& sys, const EventSpec& u) {
  if (u.full) return 1.0;
  if (const auto* prod = std::get_if<ProductLaw>(&sys.law)) {
    double p = 1;
    for (auto a : u.word) p *= prod->p[a];
    return p;
  }
  const auto& mk = std::get<MarkovLaw>(sys.law);
  double p = mk.stationary[u.word[0]];
  for (std::size_t j = 1; j < u.word.size(); ++j) p *= mk.transition[u.word[j - 1]][u.word[j]];
  return p;
}

// Twist per symbol: rows of target coordinates, one per symbol.
LocalFunction twist_of(const Config& cfg, const std::string& key, int rank, int alphabet) {
  const auto rows = cfg.rows(key);
  if (static_cast<int>(rows.size()) != alphabet) throw ConfigError(key + ": need one row per symbol");
  LocalFunction f;
  f.offsets = {Element{}};
  for (std::size_t a = 0; a < rows.size(); ++a) {
    if (static_cast<int>(rows[a].size()) != rank) throw ConfigError(key + ": row length must equal the rank");
    Element e;
    for (int i = 0; i < rank; ++i) e[i] = rows[a][static_cast<std::size_t>(i)];
    f.table.emplace(std::vector<std::uint8_t>(1, static_cast<std::uint8_t>(a)), e);
  }
  return f;
}

std::vector<std::int64_t> sides_of(const Config& cfg, const std::string& key, std::vector<std::int64_t> fallback) {
  if (cfg.str(key) == "auto") return fallback;
  auto v = cfg.integers(key);
  for (auto s : v) {
    if (s < 1) throw ConfigError(key + ": sides must be positive");
  }
  return v;
}

json curve_json(const EntropyEstimate& est) {
  json j;
  j["value"] = est.value;
  j["method"] = est.method;
  j["side_used"] = est.side_used;
  j["monotone"] = est.monotone;
  j["window_size"] = est.window_size;
  auto& c = j["curve"] = json::array();
  for (const auto& b : est.curve) {
    c.push_back({{"side", b.side},
                 {"cells", b.cells},
                 {"samples", b.samples},
                 {"patterns", b.patterns},
                 {"entropy", b.entropy},
                 {"normalized", b.normalized},
                 {"reliable", b.reliable}});
  }
  return j;
}

void curve_csv(Report& r, const std::string& series, const EntropyEstimate& est) {
  if (r.csv.header.empty()) {
    r.csv.header = {"series", "side", "cells", "samples", "patterns", "entropy", "normalized", "reliable"};
  }
  for (const auto& b : est.curve) {
    r.csv.add({series, std::to_string(b.side), std::to_string(b.cells), std::to_string(b.samples),
               std::to_string(b.patterns), fmt(b.entropy), fmt(b.normalized), b.reliable ? "1" : "0"});
  }
}

double positive(const Config& cfg, const std::string& key) {
  const double v = cfg.real(key);
  if (!(v > 0)) throw ConfigError(key + " must be positive");
  return v;
}

std::int64_t at_least(const Config& cfg, const std::string& key, std::int64_t lo) {
  const auto v = cfg.integer(key);
  if (v < lo) throw ConfigError(key + " must be >= " + std::to_string(lo));
  return v;
}

SamplePtr share(OrbitSample s) { return std::make_shared<const OrbitSample>(std::move(s)); }

}  // namespace

Report cmd_abramov(const Config& cfg) {
  Report r = start("abramov", cfg);
  const SymbolicSystem sys = system_of(cfg, 1);
  const EventSpec u = event_of(cfg, "u", sys.alphabet);
  const auto n = at_least(cfg, "n", 1000);
  const auto pad = at_least(cfg, "pad", 0);
  const double tol = positive(cfg, "entropy_tolerance");
  const double rtol = positive(cfg, "ratio_tolerance");
  const double ktol = positive(cfg, "kac_tolerance");

  const OrbitSample s = sample_window(sys, n, pad, r.seed);
  const double mu = event_probability(sys, u);
  const double mu_hat = empirical_measure(s, u.event);
  const double h = sys.entropy_rate();
  const InducedSequence ind = induced_system(s, u.event);
  if (ind.codes.empty()) throw DegenerateInputError("U has fewer than two visits in the window");

  const double spp = positive(cfg, "min_samples_per_pattern");
  const auto orig = block_entropy(to_field(s), sides_of(cfg, "sides", range(1, 10)), spp);
  const auto induced = block_entropy(sequence_field(ind.codes), sides_of(cfg, "induced_sides", range(1, 6)), spp);
  const double ratio = induced.value / orig.value;

  r.data["entropy_rate"] = h;
  r.data["measure"] = mu;
  r.data["empirical_measure"] = mu_hat;
  r.data["comp"] = 1 / mu;
  r.data["ratio"] = ratio;
  r.data["visits"] = ind.visits.size();
  r.data["distinct_codes"] = ind.distinct_codes;
  r.data["mean_return_time"] = ind.mean_return_time;
  r.data["original"] = curve_json(orig);
  r.data["induced"] = curve_json(induced);
  curve_csv(r, "original", orig);
  curve_csv(r, "induced", induced);

  r.relative("entropy_original", h, orig.value, tol);
  r.relative("entropy_induced", h / mu, induced.value, tol);
  r.relative("ratio_vs_comp", 1 / mu, ratio, rtol);
  r.relative("kac_mean_return_time", 1 / mu, ind.mean_return_time, ktol);
  return r;
}

Report cmd_theorem_a(const Config& cfg) {
  Report r = start("theorem_a", cfg);
  const std::string kind = cfg.str("kind");
  const double tol = positive(cfg, "entropy_tolerance");
  const double rtol = positive(cfg, "ratio_tolerance");
  const auto pairs = static_cast<std::size_t>(at_least(cfg, "pairs", 1));
  const auto g_radius = at_least(cfg, "g_radius", 1);
  const double spp = positive(cfg, "min_samples_per_pattern");

  SoeConstruction soe;
  EntropyEstimate src, dst;
  double h_target_expected = 0;
  const SymbolicSystem* sys_used = nullptr;
  SymbolicSystem sys;
  if (kind == "induced") {
    sys = system_of(cfg, 1);
    const EventSpec u = event_of(cfg, "u", sys.alphabet);
    auto s = share(sample_window(sys, at_least(cfg, "n", 1000), at_least(cfg, "pad", 0), r.seed));
    soe = induced_soe(s, u.event);
    const InducedSequence ind = induced_system(*s, u.event);
    if (ind.codes.empty()) throw DegenerateInputError("U has fewer than two visits in the window");
    src = block_entropy(to_field(*s), sides_of(cfg, "sides", range(1, 10)), spp);
    dst = block_entropy(sequence_field(ind.codes), sides_of(cfg, "target_sides", range(1, 6)), spp);
    h_target_expected = sys.entropy_rate() / event_probability(sys, u);
    r.data["measure"] = event_probability(sys, u);
  } else if (kind == "reparam" || kind == "sublattice") {
    const IntMatrix m = cfg.matrix("matrix");
    sys = system_of(cfg, m.dim());
    const auto core = at_least(cfg, "core", 8);
    auto s = share(sample_window(sys, core, at_least(cfg, "pad", 0), r.seed));
    try {
      soe = kind == "reparam" ? reparam_soe(s, m) : sublattice_soe(s, m);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("matrix: ") + e.what());
    }
    const auto fallback = m.dim() == 1 ? range(1, 10) : range(1, 4);
    src = block_entropy(to_field(*s), sides_of(cfg, "sides", fallback), spp);
    dst = block_entropy(to_field(*soe.target), sides_of(cfg, "target_sides", fallback), spp);
    h_target_expected = sys.entropy_rate() * soe.comp.to_double();
    r.data["matrix"] = m.str();
    const double beta_c = boundedness_constant(*soe.beta, g_radius);
    r.data["beta_boundedness"] = beta_c;
    r.exact("beta_boundedness_constant", static_cast<double>(m.l1_operator_norm()), beta_c);
    if (kind == "reparam") {
      const double alpha_c = boundedness_constant(*soe.alpha, g_radius);
      r.data["alpha_boundedness"] = alpha_c;
      r.exact("alpha_boundedness_constant", static_cast<double>(m.unimodular_inverse().l1_operator_norm()),
              alpha_c);
    }
  } else {
    throw ConfigError("kind must be induced, reparam or sublattice, got '" + kind + "'");
  }
  sys_used = &sys;

  const double comp = soe.comp.to_double();
  const double ratio = dst.value / src.value;
  r.data["kind"] = to_string(soe.kind);
  r.data["comp"] = comp;
  r.data["comp_exact"] = soe.comp.str();
  r.data["ratio"] = ratio;
  r.data["entropy_rate"] = sys_used->entropy_rate();
  r.data["source"] = curve_json(src);
  r.data["target"] = curve_json(dst);
  curve_csv(r, "source", src);
  curve_csv(r, "target", dst);

  r.relative("entropy_source", sys_used->entropy_rate(), src.value, tol);
  r.relative("entropy_target", h_target_expected, dst.value, tol);
  r.relative("ratio_vs_comp", comp, ratio, rtol);

  const InversionReport inv = check_inversion(soe, pairs, g_radius, r.seed);
  r.data["inversion"] = {{"checked", inv.checked},
                         {"inversion_failures", inv.inversion_failures},
                         {"orbit_failures", inv.orbit_failures}};
  r.exact("inversion_pairs_checked", pairs, inv.checked);
  r.exact("inversion_failures", 0, inv.inversion_failures);
  r.exact("orbit_failures", 0, inv.orbit_failures);
  return r;
}

Report cmd_derandomize(const Config& cfg) {
  Report r = start("derandomize", cfg);
  const IntMatrix m = cfg.matrix("matrix");
  if (m.dim() != 2) throw ConfigError("matrix: derandomization runs on Z^2");
  const SymbolicSystem sys = system_of(cfg, 2);
  auto s = share(sample_window(sys, at_least(cfg, "core", 8), at_least(cfg, "pad", 1), r.seed));
  const EventSpec u = event_of(cfg, "u", sys.alphabet);

  auto base = std::make_shared<ConstantCocycle>(s, m);
  auto tw = std::make_shared<TwistedCocycle>(base, twist_of(cfg, "twist", 2, sys.alphabet));
  tw->declared = Declared{CocycleClass::kIntegrable, 0};
  const auto sup = tw->twist().sup_norm(tw->target());

  DerandomizeConfig dc;
  dc.eps = positive(cfg, "eps");
  dc.pairs = static_cast<std::size_t>(at_least(cfg, "pairs", 1));
  dc.g_radius = at_least(cfg, "g_radius", 1);
  dc.max_halvings = static_cast<int>(at_least(cfg, "max_halvings", 0));
  dc.seed = r.seed;
  const DerandomizeResult d = derandomize(tw, event_mask(*s, u.event), dc);

  json scales = json::array();
  r.csv.header = {"r", "side", "cost", "vertices"};
  for (const auto& sc : d.multiscale.scales) {
    scales.push_back({{"r", sc.r}, {"side", sc.side}, {"cost", sc.cost}, {"vertices", sc.vertices}});
    r.csv.add({std::to_string(sc.r), std::to_string(sc.side), fmt(sc.cost), std::to_string(sc.vertices)});
  }
  r.data["twist_sup_norm"] = sup;
  r.data["delta"] = d.delta;
  r.data["halvings"] = d.halvings;
  r.data["c_impl"] = d.multiscale.c_impl;
  r.data["m"] = d.multiscale.m;
  r.data["scales"] = scales;
  r.data["cost"] = d.multiscale.cost;
  r.data["vertex_measure"] = d.multiscale.vertex_measure;
  r.data["vertices"] = d.vertices;
  r.data["cost_gamma"] = d.encoding.cost_gamma;
  r.data["cost_theta"] = d.encoding.cost_theta;
  r.data["entropy"] = {{"estimate", d.entropy.estimate},
                       {"estimated", d.entropy.estimated},
                       {"side_used", d.entropy.side_used},
                       {"alphabet", d.entropy.alphabet},
                       {"bound_sets", d.entropy.bound_sets},
                       {"bound_cost", d.entropy.bound_cost},
                       {"furman_c", d.entropy.furman_c}};
  r.data["search_radius"] = d.search_radius;
  r.data["extension"] = {{"agreement_checked", d.extension.agreement_checked},
                         {"agreement_failures", d.extension.agreement_failures},
                         {"identity_checked", d.extension.identity.checked},
                         {"identity_violations", d.extension.identity.violations},
                         {"witness_checked", d.extension.witness_checked},
                         {"witness_failures", d.extension.witness_failures}};

  r.at_most("twist_sup_norm", static_cast<double>(at_least(cfg, "twist_bound", 0)), static_cast<double>(sup));
  r.flag("orbit_wise_connected", d.multiscale.connectivity.connected);
  r.flag("vert_in_u", d.multiscale.vert_in_u);
  r.at_most("cost_theta_le_cost_gamma", d.encoding.cost_gamma, d.encoding.cost_theta);
  r.flag("generated_entropy_estimated", d.entropy.estimated);
  r.at_most("generated_entropy", dc.eps, d.entropy.estimate, true);
  r.flag("entropy_within_bounds", d.entropy.within_bounds);
  r.flag("v_pairs_checked", d.v_pairs_checked > 0);
  r.exact("v_pair_failures", 0, d.v_pair_failures);
  r.exact("extension_agreement_failures", 0, d.extension.agreement_failures);
  r.exact("extension_identity_violations", 0, d.extension.identity.violations);
  r.exact("cohomology_witness_checked", dc.pairs, d.extension.witness_checked);
  r.exact("cohomology_witness_failures", 0, d.extension.witness_failures);
  return r;
}

Report cmd_geometry(const Config& cfg) {
  Report r = start("geometry", cfg);
  Group g = [&] {
    try {
      return Group::from_id(cfg.str("group"));
    } catch (const DomainError& e) {
      throw ConfigError(std::string("group: ") + e.what());
    }
  }();
  const auto radius = at_least(cfg, "radius", 0);

  // Oracle: plain BFS over the Cayley graph, independent of the memo.
  std::set<Element> seen{g.identity()};
  std::vector<Element> frontier{g.identity()};
  std::vector<std::size_t> oracle{1};
  for (std::int64_t n = 1; n <= radius; ++n) {
    std::vector<Element> next;
    for (const auto& x : frontier) {
      for (const auto& s : g.generators()) {
        const Element y = g.multiply(x, s);
        if (seen.insert(y).second) next.push_back(y);
      }
    }
    oracle.push_back(oracle.back() + next.size());
    frontier = std::move(next);
  }

  r.csv.header = {"n", "ball_size", "oracle"};
  json balls = json::array();
  std::size_t mismatches = 0;
  for (std::int64_t n = 0; n <= radius; ++n) {
    const auto got = g.ball_size(n);
    const auto want = oracle[static_cast<std::size_t>(n)];
    if (got != want) ++mismatches;
    balls.push_back({{"n", n}, {"ball_size", got}, {"oracle", want}});
    r.csv.add({std::to_string(n), std::to_string(got), std::to_string(want)});
  }
  r.data["balls"] = balls;
  r.exact("ball_size_mismatches", 0, mismatches);

  // Word lengths on the ball: symmetric and at most the radius.
  const FiniteSet ball = g.ball(radius);
  std::size_t bad = 0;
  for (const auto& x : ball) {
    const auto l = g.word_length(x);
    if (l > radius || l != g.word_length(g.inverse(x))) ++bad;
  }
  r.exact("ball_elements_match_oracle", oracle.back(), ball.size());
  r.exact("word_length_violations", 0, bad);

  const double eps = cfg.real("folner_eps");
  if (eps > 0) {
    const auto fr = at_least(cfg, "folner_r", 1);
    const FiniteSet f = connected_folner(g, eps, fr);
    const double defect = folner_defect(g, f, fr).to_double();
    r.data["folner"] = {{"size", f.size()}, {"defect", defect}, {"r", fr}};
    r.at_most("folner_defect", eps, defect);
    r.flag("folner_r_connected", is_r_connected(g, f, fr));
  }
  r.data["log_growth_constant"] = log_growth_constant(g);
  return r;
}

Report cmd_skeleton(const Config& cfg) {
  Report r = start("skeleton", cfg);
  const std::string gid = cfg.str("group");
  Group g = Group::lattice(1);
  try {
    g = Group::from_id(gid);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("group: ") + e.what());
  }
  const auto sides = cfg.integers("sides");
  const auto radii = cfg.integers("radii");
  const double factor = positive(cfg, "factor");
  const double density = cfg.real("subset_density");
  if (density < 0 || density > 1) throw ConfigError("subset_density must lie in [0, 1]");
  const Philox4x32 rng(r.seed, 7);

  r.csv.header = {"side", "r", "size", "vertices", "weight", "weight_r_over_size", "subset_weight", "subset_bound"};
  json rows = json::array();
  std::size_t invalid = 0, sparse = 0, bound_failures = 0, subset_invalid = 0;
  std::uint64_t draw = 0;
  for (auto n : sides) {
    if (n < 1) throw ConfigError("sides must be positive");
    FiniteSet f;
    if (g.kind() == Group::Kind::kHeisenberg) {
      f = heisenberg_box(n);
    } else {
      std::vector<std::int64_t> box(static_cast<std::size_t>(g.rank()), n);
      f = lattice_box(g, box);
    }
    double lo = 1e300, hi = 0;
    for (auto rad : radii) {
      if (rad < 1) throw ConfigError("radii must be positive");
      const SkeletonGraph sk = build_skeleton(g, f, rad);
      const auto w = skeleton_weight(g, sk);
      if (!is_valid_skeleton(sk)) ++invalid;
      if (!is_r_dense(g, sk.vertices, f, 2 * rad)) ++sparse;
      const double law = static_cast<double>(w) * static_cast<double>(rad) / static_cast<double>(f.size());
      lo = std::min(lo, law);
      hi = std::max(hi, law);

      std::vector<Element> ys;
      for (const auto& x : f) {
        if (rng.uniform(draw++) < density) ys.push_back(x);
      }
      const FiniteSet y(std::move(ys));
      const auto bound = 2 * w + 2 * (2 * rad) * static_cast<std::int64_t>(sk.vertices.size());
      std::int64_t sw = 0;
      if (!y.empty()) {
        try {
          const SkeletonGraph sub = subset_skeleton(g, sk, y, 2 * rad);
          sw = skeleton_weight(g, sub);
          if (!is_valid_skeleton(sub) || !is_r_dense(g, sub.vertices, y, 4 * rad)) ++subset_invalid;
        } catch (const InvariantViolation&) {
          sw = -1;
        }
        if (sw < 0 || sw > bound) ++bound_failures;
      }
      rows.push_back({{"side", n},
                      {"r", rad},
                      {"size", f.size()},
                      {"vertices", sk.vertices.size()},
                      {"edges", sk.edges.size()},
                      {"weight", w},
                      {"weight_r_over_size", law},
                      {"subset_size", y.size()},
                      {"subset_weight", sw},
                      {"subset_bound", bound}});
      r.csv.add({std::to_string(n), std::to_string(rad), std::to_string(f.size()), std::to_string(sk.vertices.size()),
                 std::to_string(w), fmt(law), std::to_string(sw), std::to_string(bound)});
    }
    r.at_most("weight_law_spread_side_" + std::to_string(n), factor, hi / lo);
  }
  r.data["table"] = rows;
  r.exact("invalid_skeletons", 0, invalid);
  r.exact("density_failures", 0, sparse);
  r.exact("subset_weight_bound_failures", 0, bound_failures);
  r.exact("subset_skeleton_failures", 0, subset_invalid);
  return r;
}

Report cmd_furman(const Config& cfg) {
  Report r = start("furman", cfg);
  Group g = Group::lattice(1);
  try {
    g = Group::from_id(cfg.str("group"));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("group: ") + e.what());
  }
  const auto trials = at_least(cfg, "trials", 1);
  const auto radius = at_least(cfg, "radius", 1);
  const auto max_support = at_least(cfg, "max_support", 1);
  const double eps = positive(cfg, "eps");
  const double c = cfg.str("c") == "auto" ? 1.1 * log_growth_constant(g) : positive(cfg, "c");
  const double constant = furman_constant(c, eps);
  r.data["c"] = c;
  r.data["k"] = furman_k(eps);
  r.data["constant"] = constant;
  if (!cfg.str("expected_constant").empty()) {
    r.absolute("furman_constant", cfg.real("expected_constant"), constant, positive(cfg, "constant_tolerance"));
  }

  auto ball = g.ball(radius).elements();
  ball.erase(std::find(ball.begin(), ball.end(), g.identity()));
  const Philox4x32 rng(r.seed, 11);
  std::uint64_t draw = 0;
  std::size_t violations = 0, distribution_checks = 0;
  double worst_slack = 1e300;
  r.csv.header = {"trial", "support", "lhs", "rhs", "holds"};
  for (std::int64_t t = 0; t < trials; ++t) {
    std::map<Element, double> p;
    const auto k = 1 + static_cast<std::int64_t>(rng.bits64(draw++) % static_cast<std::uint64_t>(max_support));
    const double scale = std::pow(10.0, -3.0 * rng.uniform(draw++));
    for (std::int64_t j = 0; j < k; ++j) {
      const Element& e = ball[rng.bits64(draw++) % ball.size()];
      p[e] = scale * rng.uniform(draw++);
    }
    const FurmanCheck fb = furman_bound_check(g, p, eps, c);
    if (!fb.holds) ++violations;
    worst_slack = std::min(worst_slack, fb.rhs - fb.lhs);
    r.csv.add({std::to_string(t), std::to_string(p.size()), fmt(fb.lhs), fmt(fb.rhs), fb.holds ? "1" : "0"});

    double total = 0;
    for (auto& [e, v] : p) total += v;
    if (!(total > 0)) continue;
    for (auto& [e, v] : p) v /= total;
    double sum = 0;
    for (auto& [e, v] : p) sum += v;
    if (std::abs(sum - 1.0) > 1e-12) continue;
    const FurmanCheck fd = furman_distribution_check(g, p, eps, c);
    ++distribution_checks;
    if (!fd.holds) ++violations;
  }
  r.data["trials"] = trials;
  r.data["distribution_checks"] = distribution_checks;
  r.data["min_slack"] = worst_slack;
  r.exact("violations", 0, violations);
  return r;
}

Report cmd_graphing(const Config& cfg) {
  Report r = start("graphing", cfg);
  const SymbolicSystem sys = system_of(cfg, 2);
  auto s = share(sample_window(sys, at_least(cfg, "core", 8), at_least(cfg, "pad", 1), r.seed));
  const EventSpec u = event_of(cfg, "u", sys.alphabet);
  const PositionMask mask = event_mask(*s, u.event);
  const double u_measure = mask_measure(s->window, mask);
  r.data["u_measure"] = u_measure;

  const auto radii = cfg.integers("radii");
  const double factor = positive(cfg, "factor");
  r.csv.header = {"r", "tile_side", "cost", "cost_r", "vertices", "density_radius"};
  json table = json::array();
  double lo = 1e300, hi = 0;
  for (auto rad : radii) {
    if (rad < 1) throw ConfigError("radii must be positive");
    const RokhlinTiling tiling = rokhlin_tiling(s->window, 1.0, rad);
    const LowCostResult lc = low_cost_graphing(tiling, s, mask);
    const GraphingReport v = validate(lc.graphing);
    const std::string tag = "_r" + std::to_string(rad);
    r.flag("low_cost_valid" + tag, v.valid);
    r.flag("low_cost_vert_in_u" + tag, lc.vert_in_u);
    r.flag("low_cost_classes_match" + tag, lc.classes_match);
    r.flag("low_cost_dense" + tag, lc.dense);
    const double cr = lc.cost * static_cast<double>(rad);
    lo = std::min(lo, cr);
    hi = std::max(hi, cr);
    table.push_back({{"r", rad},
                     {"tile_side", tiling.side},
                     {"cost", lc.cost},
                     {"cost_r", cr},
                     {"vertices", v.vertex_count},
                     {"vertex_measure", v.vertex_measure},
                     {"tiles_used", lc.tiles_used},
                     {"density_radius", lc.density_radius}});
    r.csv.add({std::to_string(rad), std::to_string(tiling.side), fmt(lc.cost), fmt(cr), std::to_string(v.vertex_count),
               std::to_string(lc.density_radius)});
  }
  r.data["low_cost"] = table;
  if (!radii.empty()) r.at_most("cost_r_spread", factor, hi / lo);

  const double eps = positive(cfg, "eps");
  const MultiscaleResult ms = multiscale_graphing(s, mask, eps);
  json scales = json::array();
  for (const auto& sc : ms.scales) {
    scales.push_back({{"r", sc.r}, {"side", sc.side}, {"cost", sc.cost}, {"vertices", sc.vertices}});
  }
  r.data["multiscale"] = {{"c_impl", ms.c_impl},
                          {"m", ms.m},
                          {"attempts", ms.attempts},
                          {"cost", ms.cost},
                          {"vertex_measure", ms.vertex_measure},
                          {"classes", ms.connectivity.classes},
                          {"checked", ms.connectivity.checked},
                          {"scales", scales}};
  r.flag("multiscale_valid", validate(ms.graphing).valid);
  r.flag("multiscale_vert_in_u", ms.vert_in_u);
  r.at_most("multiscale_vertex_measure", eps, ms.vertex_measure, true);
  r.at_most("multiscale_cost", eps, ms.cost, true);
  r.flag("multiscale_connected", ms.connectivity.connected);

  // Reconstruction of a twisted cocycle from its edge values.
  const auto pairs = at_least(cfg, "pairs", 0);
  if (pairs > 0) {
    const IntMatrix m = cfg.matrix("matrix");
    if (m.dim() != 2) throw ConfigError("matrix must be 2x2");
    auto base = std::make_shared<ConstantCocycle>(s, m);
    TwistedCocycle tw(base, twist_of(cfg, "twist", 2, sys.alphabet));
    const EdgeValues vals = edge_values(ms.graphing, tw);
    const EdgeIndex index(ms.graphing, vals, tw.target());
    const auto verts = ms.graphing.vertices();
    if (verts.size() < 2) throw DegenerateInputError("multiscale graphing has fewer than two vertices");
    const Philox4x32 rng(r.seed, 13);
    std::size_t checked = 0, failures = 0, unreachable = 0;
    for (std::int64_t t = 0; t < pairs; ++t) {
      const auto ut = static_cast<std::uint64_t>(t);
      const Element x = s->window.position(verts[rng.bits64(2 * ut) % verts.size()]);
      const Element y = s->window.position(verts[rng.bits64(2 * ut + 1) % verts.size()]);
      const Element g = sub(y, x);
      const auto direct = tw.evaluate(g, x);
      const auto fwd = index.reconstruct(x, g, BfsOrder::kForward);
      const auto rev = index.reconstruct(x, g, BfsOrder::kReverse);
      ++checked;
      if (!fwd || !rev) {
        ++unreachable;
        ++failures;
      } else if (!direct || *fwd != *direct || *rev != *direct) {
        ++failures;
      }
    }
    r.data["reconstruction"] = {{"checked", checked}, {"failures", failures}, {"unreachable", unreachable}};
    r.exact("reconstruction_checked", pairs, checked);
    r.exact("reconstruction_failures", 0, failures);
  }
  return r;
}

const std::vector<Command>& commands() {
  static const std::vector<Command> table = {
      {"abramov",
       "induced-system entropy against the original over U",
       {{"law", "bernoulli", "bernoulli or markov"},
        {"p", "0.5,0.5", "symbol probabilities (bernoulli)"},
        {"transition", "0.7,0.3;0.3,0.7", "row-stochastic matrix (markov)"},
        {"n", "1000000", "core length"},
        {"pad", "64", "padding"},
        {"u", "symbol:0", "full, symbol:a or cylinder:a,b,..."},
        {"sides", "auto", "block sides for the original process"},
        {"induced_sides", "auto", "block sides for the induced process"},
        {"min_samples_per_pattern", "100", "block reliability threshold"},
        {"entropy_tolerance", "0.05", "relative"},
        {"ratio_tolerance", "0.05", "relative"},
        {"kac_tolerance", "0.02", "relative"},
        {"seed", "1", "sampling seed"}},
       cmd_abramov},
      {"theorem_a",
       "entropy ratio of an explicit stable orbit equivalence against its compression",
       {{"kind", "reparam", "induced, reparam or sublattice"},
        {"law", "bernoulli", "bernoulli or markov (Z^1 only)"},
        {"p", "0.5,0.5", "symbol probabilities"},
        {"transition", "0.7,0.3;0.3,0.7", "row-stochastic matrix (markov)"},
        {"n", "1000000", "core length (induced)"},
        {"core", "1024", "core side (reparam, sublattice)"},
        {"pad", "0", "padding"},
        {"matrix", "1,1;0,1", "integer matrix (reparam, sublattice)"},
        {"u", "symbol:0", "event (induced)"},
        {"sides", "auto", "block sides for the source"},
        {"target_sides", "auto", "block sides for the target"},
        {"min_samples_per_pattern", "100", "block reliability threshold"},
        {"entropy_tolerance", "0.05", "relative"},
        {"ratio_tolerance", "0.05", "relative"},
        {"pairs", "100", "inversion pairs"},
        {"g_radius", "4", "radius for sampled g"},
        {"seed", "1", "sampling seed"}},
       cmd_theorem_a},
      {"derandomize",
       "low-entropy re-description of a twisted constant cocycle on Z^2",
       {{"law", "bernoulli", "bernoulli"},
        {"p", "0.5,0.5", "symbol probabilities"},
        {"transition", "", "unused on Z^2"},
        {"core", "512", "core side"},
        {"pad", "4", "padding"},
        {"matrix", "1,1;0,1", "constant cocycle matrix"},
        {"twist", "1,-1;0,2", "twist value per symbol"},
        {"twist_bound", "2", "required bound on the twist sup norm"},
        {"u", "full", "event carrying the graphing"},
        {"eps", "0.1", "entropy target"},
        {"pairs", "500", "cohomology witness pairs"},
        {"g_radius", "4", "radius for sampled g"},
        {"max_halvings", "6", "graphing target halvings"},
        {"seed", "1", "sampling seed"}},
       cmd_derandomize},
      {"geometry",
       "ball sizes against a BFS oracle, word lengths, Folner sets",
       {{"group", "heis", "z1..z4 or heis"},
        {"radius", "6", "largest ball radius"},
        {"folner_eps", "0.5", "Folner defect target (0 skips)"},
        {"folner_r", "1", "Folner radius"},
        {"seed", "1", "unused"}},
       cmd_geometry},
      {"skeleton",
       "skeleton weight table and subset bound",
       {{"group", "z2", "z1..z4 or heis"},
        {"sides", "64", "box sides"},
        {"radii", "2,4,8", "skeleton radii"},
        {"factor", "4", "allowed spread of weight * r / |F|"},
        {"subset_density", "0.3", "density of random subsets"},
        {"seed", "1", "subset seed"}},
       cmd_skeleton},
      {"furman",
       "binary-entropy cost inequality on random sparse vectors",
       {{"group", "z2", "z1..z4 or heis"},
        {"trials", "1000", "random vectors"},
        {"radius", "10", "support ball radius"},
        {"max_support", "30", "largest support size"},
        {"eps", "0.01", "additive slack"},
        {"c", "auto", "growth constant (auto: 1.1 * fitted)"},
        {"expected_constant", "", "expected C_eps (empty skips)"},
        {"constant_tolerance", "0.005", "absolute"},
        {"seed", "2025", "vector seed"}},
       cmd_furman},
      {"graphing",
       "low-cost and multiscale graphings with cocycle reconstruction",
       {{"law", "bernoulli", "bernoulli"},
        {"p", "0.2,0.8", "symbol probabilities"},
        {"transition", "", "unused on Z^2"},
        {"core", "512", "core side"},
        {"pad", "4", "padding"},
        {"u", "symbol:0", "event carrying the graphings"},
        {"radii", "2,4,8", "low-cost radii"},
        {"factor", "4", "allowed spread of cost * r"},
        {"eps", "0.2", "multiscale target"},
        {"matrix", "1,1;0,1", "reconstruction cocycle matrix"},
        {"twist", "2,0;-1,1", "reconstruction twist per symbol"},
        {"pairs", "500", "reconstruction pairs (0 skips)"},
        {"seed", "1", "sampling seed"}},
       cmd_graphing},
  };
  return table;
}

const Command* find_command(const std::string& name) {
  for (const auto& c : commands()) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Report run_command(const std::string& name, Config cfg, std::optional<std::uint64_t> seed) {
  const Command* cmd = find_command(name);
  if (!cmd) throw ConfigError("unknown command '" + name + "'");
  if (seed) cfg.set("seed", std::to_string(*seed));
  const Config resolved = cfg.resolve(cmd->schema);
  const auto t0 = std::chrono::steady_clock::now();
  Report r = cmd->run(resolved);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace orbitbench::cli
