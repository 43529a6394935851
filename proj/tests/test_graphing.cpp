#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "orbitbench/derandomize.hpp"
#include "orbitbench/errors.hpp"
#include "orbitbench/graphing.hpp"
#include "orbitbench/rng.hpp"

using namespace orbitbench;

// gcc 11 false positive on vector<uint8_t> comparison inside std::map.
#pragma GCC diagnostic ignored "-Wstringop-overread"

namespace {

SamplePtr bern(int rank, std::int64_t core, std::int64_t pad, std::uint64_t seed, double p0 = 0.5) {
  return std::make_shared<const OrbitSample>(
      sample_window(SymbolicSystem::bernoulli(rank, {p0, 1 - p0}), core, pad, seed));
}

LocalFunction twist(std::vector<Element> per_symbol) {
  LocalFunction f;
  f.offsets = {Element{}};
  for (std::size_t a = 0; a < per_symbol.size(); ++a)
    f.table.emplace(std::vector<std::uint8_t>(1, static_cast<std::uint8_t>(a)), per_symbol[a]);
  return f;
}

// A_s = whole core for s = +-1 on Z^1 (edges into the padding included).
Graphing chain(SamplePtr s) {
  Graphing g(s);
  for (const auto& p : s->window.core_positions()) {
    g.add_edge(p, Element{1});
    g.add_edge(p, Element{-1});
  }
  g.normalize();
  return g;
}

}  // namespace

TEST_CASE("validate examples") {
  auto s = bern(1, 32, 2, 1);
  Graphing empty(s);
  auto r0 = validate(empty);
  CHECK(r0.valid);
  CHECK(r0.vertex_count == 0);

  auto c = chain(s);
  auto r1 = validate(c);
  CHECK(r1.valid);
  CHECK(r1.vertex_count == 32);
  CHECK(r1.vertex_measure == 1.0);
  CHECK(r1.max_length == 1);

  Graphing bad(s);
  bad.support[Element{1}] = {s->window.index(Element{5})};
  auto r2 = validate(bad);
  CHECK_FALSE(r2.valid);
  REQUIRE(r2.violations.size() == 1);
  CHECK(r2.violations[0].g == Element{1});
  CHECK(r2.violations[0].position == Element{5});
  CHECK_THROWS_AS(require_valid(bad), InvariantViolation);

  Graphing far(s);
  CHECK_THROWS_AS(far.add_edge(Element{30}, Element{5}), DomainError);
  CHECK_THROWS_AS(far.add_vertex(Element{-1}), DomainError);
}

TEST_CASE("cost examples and union bound") {
  auto s = bern(1, 64, 2, 2);
  CHECK(cost(Graphing(s)) == 0.0);
  CHECK(cost(chain(s)) == 2.0);

  auto s2 = bern(2, 16, 4, 3);
  Graphing a(s2), b(s2), overlap(s2);
  a.add_edge(Element{0, 0}, Element{2, 1});
  a.add_vertex(Element{5, 5});
  b.add_edge(Element{8, 8}, Element{0, 3});
  overlap.add_edge(Element{0, 0}, Element{2, 1});
  for (auto* g : {&a, &b, &overlap}) g->normalize();
  CHECK(cost(a) == doctest::Approx(6.0 / 256));
  Graphing ab = a;
  ab.merge(b);
  ab.normalize();
  CHECK(cost(ab) == doctest::Approx(cost(a) + cost(b)));
  Graphing aa = a;
  aa.merge(overlap);
  aa.normalize();
  CHECK(cost(aa) < cost(a) + cost(overlap));
  CHECK(cost(aa) == doctest::Approx(cost(a)));
}

TEST_CASE("generated relation examples") {
  auto s = bern(1, 20, 2, 4);
  auto rel0 = generated_relation(Graphing(s));
  CHECK(rel0.classes_among([&] {
    std::vector<std::size_t> all;
    for (std::size_t i = 0; i < s->window.size(); ++i) all.push_back(i);
    return all;
  }()) == s->window.size());

  Graphing right(s);
  for (const auto& p : s->window.core_positions()) right.add_edge(p, Element{1});
  right.normalize();
  auto rel = generated_relation(right);
  std::vector<std::size_t> core;
  for (const auto& p : s->window.core_positions()) core.push_back(s->window.index(p));
  CHECK(rel.classes_among(core) == 1);
  CHECK(rel.labels[s->window.index(Element{20})] == rel.labels[s->window.index(Element{0})]);
  CHECK(rel.labels[s->window.index(Element{-1})] != rel.labels[s->window.index(Element{0})]);
}

TEST_CASE("orbit-wise connectivity examples") {
  auto s = bern(2, 16, 2, 5);
  CHECK(orbit_wise_connected(Graphing(s)));
  Graphing two(s);
  two.add_edge(Element{0, 0}, Element{1, 0});
  two.add_edge(Element{10, 10}, Element{0, 1});
  two.normalize();
  auto rep = orbit_wise_connectivity(two);
  CHECK_FALSE(rep.connected);
  CHECK(rep.classes == 2);
  CHECK(rep.checked == 4);
  auto inner = orbit_wise_connectivity(two, 2);
  CHECK(inner.connected);
  CHECK(inner.excluded == 2);
}

TEST_CASE("rokhlin tiling") {
  CHECK(rokhlin_side(1, 1.0, 1) == 2);
  CHECK(rokhlin_side(2, 0.5, 1) == 9);
  CHECK(rokhlin_side(2, 1.0, 2) == 10);
  const Window w = Window::cube(2, 50, 0);
  auto t = rokhlin_tiling(w, 0.5, 1);
  CHECK(t.side == 9);
  CHECK(t.tiles.size() == 36);
  CHECK(t.full_tiles() == 25);
  std::vector<int> covered(w.core_size(), 0);
  for (std::size_t k = 0; k < t.tiles.size(); ++k) {
    const auto& tile = t.tiles[k];
    for (std::int64_t a = 0; a < tile.sides[0]; ++a)
      for (std::int64_t b = 0; b < tile.sides[1]; ++b) {
        const Element p = add(tile.lo, Element{a, b});
        ++covered[static_cast<std::size_t>(p[0] * 50 + p[1])];
        CHECK(t.tile_at(p) == k);
      }
  }
  CHECK(std::all_of(covered.begin(), covered.end(), [](int c) { return c == 1; }));
  CHECK(t.tiles.front().folner);
  CHECK(t.tiles.back().folner);  // 5x5 corner: defect 20/25
  auto sliver = cube_tiling(Window::cube(2, 46, 0), 9, 1);
  CHECK(sliver.tiles.back().sides[0] == 1);
  CHECK_FALSE(sliver.tiles.back().folner);
  CHECK_THROWS_AS(rokhlin_tiling(Window::cube(2, 8, 0), 0.5, 1), CapacityError);
}

TEST_CASE("low-cost graphing examples") {
  auto s = bern(1, 64, 8, 6);
  PositionMask none(s->window.size(), 0);
  auto t = cube_tiling(s->window, 8, 2);
  auto empty = low_cost_graphing(t, s, none);
  CHECK(empty.graphing.support.empty());
  CHECK(empty.cost == 0.0);
  CHECK(empty.tiles_skipped == 8);

  auto all = event_mask(*s, LocalEvent::always());
  auto full = low_cost_graphing(t, s, all);
  CHECK(full.vert_in_u);
  CHECK(full.classes_match);
  CHECK(full.dense);
  CHECK(full.density_radius <= 8);
  CHECK(generated_relation(full.graphing).classes_among(full.graphing.vertices()) == 8);
}

TEST_CASE("low-cost graphing on Z^2 scales like 1/r") {
  auto s = bern(2, 256, 4, 7, 0.2);
  auto u = event_mask(*s, LocalEvent::symbol_at_origin(0));
  std::vector<double> costs;
  for (std::int64_t r : {2, 8}) {
    auto t = rokhlin_tiling(s->window, 1.0, r);
    auto lc = low_cost_graphing(t, s, u);
    CHECK(lc.vert_in_u);
    CHECK(lc.classes_match);
    CHECK(lc.dense);
    CHECK(lc.density_radius <= 4 * r);
    costs.push_back(lc.cost);
  }
  CHECK(costs[0] / costs[1] >= 2.0);
}

TEST_CASE("multiscale graphing") {
  auto tiny = bern(2, 32, 2, 8);
  auto all = event_mask(*tiny, LocalEvent::always());
  auto weak = multiscale_graphing(tiny, all, 3.0);
  CHECK(weak.cost < 3.0);
  CHECK(weak.vertex_measure < 3.0);
  CHECK(weak.connectivity.connected);

  auto s = bern(2, 512, 4, 9, 0.05);
  auto u = event_mask(*s, LocalEvent::symbol_at_origin(0));
  double prev = 1;
  for (double eps : {0.2, 0.1}) {
    auto ms = multiscale_graphing(s, u, eps);
    CHECK(ms.vert_in_u);
    CHECK(ms.vertex_measure < eps);
    CHECK(ms.cost < eps);
    CHECK(ms.connectivity.connected);
    CHECK(ms.connectivity.checked > 1);
    CHECK(ms.cost < prev);
    prev = ms.cost;
  }
  CHECK(multiscale_graphing(s, PositionMask(s->window.size(), 0), 0.1).graphing.support.empty());
}

TEST_CASE("geodesic words") {
  const Group z2 = Group::lattice(2);
  const auto w = geodesic_word(z2, Element{2, -1});
  REQUIRE(w.size() == 3);
  CHECK(w[0] == Element{0, -1});
  CHECK(w[1] == Element{1, 0});
  CHECK(w[2] == Element{1, 0});
  CHECK(geodesic_word(z2, Element{}).empty());
  const Group h = Group::heisenberg();
  const Element g{1, 1, 3};
  const auto hw = geodesic_word(h, g);
  CHECK(static_cast<std::int64_t>(hw.size()) == h.word_length(g));
  Element acc;
  for (const auto& s : hw) acc = h.multiply(s, acc);
  CHECK(acc == g);
}

TEST_CASE("nearest-neighbour encoding") {
  auto s = bern(2, 16, 2, 10);
  auto id = std::make_shared<ConstantCocycle>(s, IntMatrix(2));

  Graphing gens(s);
  for (const auto& p : s->window.core_positions())
    if (p[0] + 1 < 16) gens.add_edge(p, Element{1, 0});
  gens.normalize();
  auto e0 = nn_encode(gens, *id);
  CHECK(e0.theta.support == gens.support);
  CHECK(e0.cost_theta == e0.cost_gamma);

  Graphing one(s);
  one.add_edge(Element{3, 3}, Element{2, 0});
  one.normalize();
  auto e1 = nn_encode(one, *id);
  const auto& b = e1.theta.support.at(Element{1, 0});
  CHECK(b == std::vector<std::size_t>{s->window.index(Element{3, 3}), s->window.index(Element{4, 3})});
  CHECK(e1.cost_theta == e1.cost_gamma);
  CHECK(e1.reconstructed == 2);
  CHECK(reconstruct_cocycle(e1.theta, e1.values, id->target(), Element{3, 3}, Element{2, 0}) == Element{2, 0});

  Graphing mixed(s);
  mixed.add_edge(Element{0, 0}, Element{3, 2});
  mixed.add_edge(Element{0, 0}, Element{3, 0});
  mixed.add_edge(Element{1, 1}, Element{-1, 1});
  mixed.normalize();
  auto tw = std::make_shared<TwistedCocycle>(id, twist({Element{1, 0}, Element{0, -1}}));
  auto e2 = nn_encode(mixed, *tw);
  CHECK(e2.cost_theta < e2.cost_gamma);
  CHECK(e2.reconstructed == 6);
}

TEST_CASE("cocycle reconstruction") {
  auto s = bern(2, 8, 2, 11);
  auto id = std::make_shared<ConstantCocycle>(s, IntMatrix(2));
  Graphing path(s);
  path.add_edge(Element{1, 1}, Element{1, 0});
  path.add_edge(Element{2, 1}, Element{0, 2});
  path.add_vertex(Element{6, 6});
  path.normalize();
  auto vals = edge_values(path, *id);
  CHECK(reconstruct_cocycle(path, vals, id->target(), Element{1, 1}, Element{}) == Element{});
  CHECK(reconstruct_cocycle(path, vals, id->target(), Element{6, 6}, Element{}) == Element{});
  CHECK(reconstruct_cocycle(path, vals, id->target(), Element{1, 1}, Element{1, 2}) == Element{1, 2});
  CHECK(reconstruct_cocycle(path, vals, id->target(), Element{2, 3}, Element{-1, -2}) == Element{-1, -2});
  CHECK_FALSE(reconstruct_cocycle(path, vals, id->target(), Element{1, 1}, Element{5, 5}));
  CHECK_FALSE(reconstruct_cocycle(path, vals, id->target(), Element{0, 0}, Element{}));
}

TEST_CASE("reconstruction over a multiscale graphing is path independent") {
  auto s = bern(2, 128, 4, 12, 0.2);
  auto u = event_mask(*s, LocalEvent::symbol_at_origin(0));
  auto ms = multiscale_graphing(s, u, 0.3);
  REQUIRE(ms.connectivity.connected);
  auto base = std::make_shared<ConstantCocycle>(s, IntMatrix{{1, 1}, {0, 1}});
  TwistedCocycle tw(base, twist({Element{2, 0}, Element{-1, 1}}));
  const auto vals = edge_values(ms.graphing, tw);
  EdgeIndex index(ms.graphing, vals, tw.target());
  const auto verts = ms.graphing.vertices();
  REQUIRE(verts.size() > 2);
  Philox4x32 rng(3);
  std::size_t agree = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const Element x = s->window.position(verts[rng.bits64(2 * t) % verts.size()]);
    const Element y = s->window.position(verts[rng.bits64(2 * t + 1) % verts.size()]);
    const Element g = sub(y, x);
    const auto f = index.reconstruct(x, g, BfsOrder::kForward);
    const auto r = index.reconstruct(x, g, BfsOrder::kReverse);
    REQUIRE(f);
    REQUIRE(r);
    if (*f == *r && *f == *tw.evaluate(g, x)) ++agree;
  }
  CHECK(agree == 100);
}

TEST_CASE("graphing entropy bound") {
  auto s = bern(2, 64, 2, 13);
  auto id = std::make_shared<ConstantCocycle>(s, IntMatrix(2));
  Graphing empty(s);
  auto b0 = graphing_entropy_bound(empty, edge_values(empty, *id), 0.1);
  CHECK(b0.bound_sets == 0.0);
  CHECK(b0.bound_cost == doctest::Approx(0.1));
  CHECK(b0.estimated);
  CHECK(b0.estimate == 0.0);

  Graphing gens(s);
  for (const auto& p : s->window.core_positions())
    if (p[0] % 4 == 0) gens.add_edge(p, Element{1, 0});
  gens.normalize();
  auto b1 = graphing_entropy_bound(gens, edge_values(gens, *id), 0.1);
  const double mu = 0.25;
  CHECK(b1.bound_sets == doctest::Approx(2 * binary_entropy(mu)));
  CHECK(b1.estimated);
  CHECK(b1.within_bounds);
  CHECK(b1.estimate < 0.05);
}

TEST_CASE("derandomization at reduced scale") {
  auto s = bern(2, 256, 4, 14);
  auto base = std::make_shared<ConstantCocycle>(s, IntMatrix{{1, 1}, {0, 1}});
  auto tau = std::make_shared<TwistedCocycle>(base, twist({Element{1, -1}, Element{0, 2}}));
  CHECK(tau->twist().sup_norm(tau->target()) <= 2);
  DerandomizeConfig cfg;
  cfg.eps = 0.1;
  cfg.pairs = 200;
  auto r = derandomize(tau, event_mask(*s, LocalEvent::always()), cfg);
  CHECK(r.entropy_ok);
  CHECK(r.entropy.estimate < 0.1);
  CHECK(r.entropy.within_bounds);
  CHECK(r.multiscale.connectivity.connected);
  CHECK(r.encoding.cost_theta <= r.encoding.cost_gamma);
  CHECK(r.v_pairs_checked > 0);
  CHECK(r.v_pair_failures == 0);
  CHECK(r.extension.witness_checked == 200);
  CHECK(r.extension.witness_failures == 0);
  CHECK(r.extension.identity.violations == 0);
}
