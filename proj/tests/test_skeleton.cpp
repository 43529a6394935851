#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "orbitbench/errors.hpp"
#include "orbitbench/skeleton.hpp"
#include "orbitbench/union_find.hpp"

using namespace orbitbench;

namespace {

FiniteSet box(const Group& g, std::int64_t n) {
  std::vector<std::int64_t> sides(static_cast<std::size_t>(g.rank()), n);
  return lattice_box(g, sides);
}

bool pairwise_separated(const Group& g, const FiniteSet& s, std::int64_t sep) {
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (g.distance(s[i], s[j]) <= sep) return false;
  return true;
}

bool dense_by_scan(const Group& g, const FiniteSet& v, const FiniteSet& x, std::int64_t r) {
  for (const auto& q : x) {
    bool hit = false;
    for (const auto& p : v) hit = hit || g.distance(p, q) <= r;
    if (!hit) return false;
  }
  return true;
}

FiniteSet random_connected(const Group& g, std::mt19937_64& rng, std::size_t steps) {
  // Random walk trace: always 1-connected.
  std::vector<Element> pts{Element{}};
  Element cur;
  std::uniform_int_distribution<std::size_t> pick(0, g.generators().size() - 1);
  for (std::size_t i = 0; i < steps; ++i) {
    cur = g.multiply(g.generators()[pick(rng)], cur);
    pts.push_back(cur);
  }
  return FiniteSet(pts);
}

}  // namespace

TEST_CASE("separated net examples") {
  Group z2 = Group::lattice(2);
  CHECK(separated_net(z2, box(z2, 4), 0).size() == 16);
  Group z1 = Group::lattice(1);
  FiniteSet net = separated_net(z1, box(z1, 10), 2);
  CHECK(net == FiniteSet({Element{0}, Element{3}, Element{6}, Element{9}}));
  FiniteSet one({Element{4, 4}});
  CHECK(separated_net(z2, one, 7) == one);
  CHECK_THROWS_AS(separated_net(z2, FiniteSet{}, 1), DomainError);
}

TEST_CASE("separated net contains the identity when present") {
  Group z1 = Group::lattice(1);
  std::vector<std::int64_t> s{9};
  FiniteSet pts = lattice_box(z1, s, Element{-4});
  CHECK(separated_net(z1, pts, 3).contains(Element{0}));
}

TEST_CASE("separated net is separated and dense on random inputs") {
  std::mt19937_64 rng(5);
  for (const char* id : {"z1", "z2", "z3", "heis"}) {
    Group g = Group::from_id(id);
    for (int trial = 0; trial < 50; ++trial) {
      FiniteSet pts = random_connected(g, rng, 60);
      const std::int64_t s = 1 + trial % 4;
      FiniteSet net = separated_net(g, pts, s);
      CAPTURE(id);
      CHECK(pairwise_separated(g, net, s));
      CHECK(dense_by_scan(g, net, pts, s));
    }
  }
}

TEST_CASE("skeleton weight examples") {
  Group z2 = Group::lattice(2);
  SkeletonGraph empty{FiniteSet({Element{1, 1}}), {}};
  CHECK(skeleton_weight(z2, empty) == 0);
  SkeletonGraph one{FiniteSet({Element{0, 0}, Element{3, 4}}), {{0, 1}}};
  CHECK(skeleton_weight(z2, one) == 7);
}

TEST_CASE("is_r_dense examples") {
  Group z1 = Group::lattice(1);
  FiniteSet x = box(z1, 10);
  CHECK(is_r_dense(z1, x, x, 0));
  CHECK_FALSE(is_r_dense(z1, FiniteSet({Element{0}}), x, 5));
  CHECK(is_r_dense(z1, FiniteSet({Element{0}, Element{9}}), x, 5));
}

TEST_CASE("is_r_dense agrees with a scan") {
  std::mt19937_64 rng(11);
  for (const char* id : {"z2", "heis"}) {
    Group g = Group::from_id(id);
    for (int trial = 0; trial < 40; ++trial) {
      FiniteSet x = random_connected(g, rng, 40);
      std::vector<Element> sub;
      for (const auto& p : x)
        if (rng() % 5 == 0) sub.push_back(p);
      if (sub.empty()) sub.push_back(x[0]);
      FiniteSet v(sub);
      for (std::int64_t r : {1, 2, 3}) CHECK(is_r_dense(g, v, x, r) == dense_by_scan(g, v, x, r));
    }
  }
}

TEST_CASE("build skeleton examples") {
  Group z1 = Group::lattice(1);
  SkeletonGraph sk = build_skeleton(z1, box(z1, 9), 2);
  CHECK(sk.vertices == FiniteSet({Element{0}, Element{5}}));
  CHECK(sk.edges.size() == 1);
  CHECK(skeleton_weight(z1, sk) <= 5);

  Group z2 = Group::lattice(2);
  SkeletonGraph single = build_skeleton(z2, z2.ball(0), 3);
  CHECK(single.vertices.size() == 1);
  CHECK(single.edges.empty());
  CHECK(skeleton_weight(z2, single) == 0);

  CHECK_THROWS_AS(build_skeleton(z2, FiniteSet({Element{0, 0}, Element{5, 0}}), 1), DomainError);
}

TEST_CASE("build skeleton is a dense spanning tree") {
  std::mt19937_64 rng(23);
  for (const char* id : {"z1", "z2", "z3", "heis"}) {
    Group g = Group::from_id(id);
    for (int trial = 0; trial < 10; ++trial) {
      FiniteSet f = random_connected(g, rng, 150);
      for (std::int64_t r : {1, 2, 3}) {
        SkeletonGraph sk = build_skeleton(g, f, r);
        CAPTURE(id);
        CAPTURE(r);
        CHECK(is_valid_skeleton(sk));
        CHECK(sk.edges.size() + 1 == sk.vertices.size());
        CHECK(is_r_dense(g, sk.vertices, f, 2 * r));
      }
    }
  }
}

TEST_CASE("minimum spanning tree beats random spanning trees of the proximity graph") {
  Group z2 = Group::lattice(2);
  FiniteSet f = box(z2, 24);
  const std::int64_t r = 2;
  SkeletonGraph sk = build_skeleton(z2, f, r);
  const auto w = skeleton_weight(z2, sk);
  auto prox = proximity_edges(z2, sk.vertices, 5 * r);
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    std::shuffle(prox.begin(), prox.end(), rng);
    UnionFind uf(sk.vertices.size());
    std::int64_t total = 0;
    std::size_t count = 0;
    for (const auto& e : prox)
      if (uf.unite(e.u, e.v)) {
        total += e.w;
        ++count;
      }
    REQUIRE(count + 1 == sk.vertices.size());
    CHECK(w <= total);
  }
}

TEST_CASE("metric mst matches kruskal on the complete graph") {
  std::mt19937_64 rng(8);
  Group h = Group::heisenberg();
  for (int trial = 0; trial < 10; ++trial) {
    FiniteSet v = random_connected(h, rng, 30);
    std::vector<WeightedEdge> all;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j) all.push_back({i, j, h.distance(v[i], v[j])});
    std::int64_t a = 0, b = 0;
    for (const auto& e : metric_mst(h, v)) a += e.w;
    for (const auto& e : kruskal(v.size(), all)) b += e.w;
    CHECK(a == b);
  }
}

TEST_CASE("subset skeleton examples and bound") {
  Group z2 = Group::lattice(2);
  FiniteSet f = box(z2, 16);
  const std::int64_t r = 2;
  SkeletonGraph parent = build_skeleton(z2, f, r);
  // parent vertices are 2r-dense; as an r'-skeleton use r' = 2r.
  const std::int64_t rp = 2 * r;
  const auto bound = [&](const SkeletonGraph& p) {
    return 2 * skeleton_weight(z2, p) + 2 * rp * static_cast<std::int64_t>(p.vertices.size());
  };

  SkeletonGraph full = subset_skeleton(z2, parent, f, rp);
  CHECK(is_valid_skeleton(full));
  CHECK(skeleton_weight(z2, full) <= bound(parent));
  CHECK(is_r_dense(z2, full.vertices, f, 2 * rp));

  SkeletonGraph single = subset_skeleton(z2, parent, FiniteSet({Element{7, 7}}), rp);
  CHECK(single.vertices == FiniteSet({Element{7, 7}}));
  CHECK(skeleton_weight(z2, single) == 0);

  std::vector<Element> even;
  for (const auto& p : f)
    if (p[0] % 2 == 0 && p[1] % 2 == 0) even.push_back(p);
  FiniteSet y(even);
  SkeletonGraph sub = subset_skeleton(z2, parent, y, rp);
  CHECK(is_valid_skeleton(sub));
  CHECK(skeleton_weight(z2, sub) <= bound(parent));
  CHECK(is_r_dense(z2, sub.vertices, y, 2 * rp));
  CHECK(std::all_of(sub.vertices.begin(), sub.vertices.end(), [&](const Element& e) { return y.contains(e); }));

  CHECK_THROWS_AS(subset_skeleton(z2, parent, FiniteSet{}, rp), DomainError);
  CHECK_THROWS_AS(subset_skeleton(z2, parent, FiniteSet({Element{100, 100}}), rp), DomainError);
}

TEST_CASE("subset skeleton bound holds on random subsets") {
  std::mt19937_64 rng(41);
  for (const char* id : {"z2", "z3", "heis"}) {
    Group g = Group::from_id(id);
    for (int trial = 0; trial < 15; ++trial) {
      FiniteSet f = random_connected(g, rng, 200);
      const std::int64_t r = 1 + trial % 2;
      SkeletonGraph parent = build_skeleton(g, f, r);
      std::vector<Element> sub;
      for (const auto& p : f)
        if (rng() % 3 == 0) sub.push_back(p);
      if (sub.empty()) sub.push_back(f[0]);
      FiniteSet y(sub);
      // subset_skeleton throws if the bound fails.
      SkeletonGraph s = subset_skeleton(g, parent, y, 2 * r);
      CAPTURE(id);
      CHECK(is_valid_skeleton(s));
      CHECK(is_r_dense(g, s.vertices, y, 4 * r));
    }
  }
}

TEST_CASE("skeleton weight scales like |F|/r on Z^2 boxes") {
  Group z2 = Group::lattice(2);
  for (std::int64_t n : {32, 64}) {
    FiniteSet f = box(z2, n);
    std::vector<double> c;
    for (std::int64_t r : {2, 4, 8}) {
      SkeletonGraph sk = build_skeleton(z2, f, r);
      c.push_back(static_cast<double>(skeleton_weight(z2, sk)) * r / static_cast<double>(f.size()));
    }
    const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    CAPTURE(n);
    CHECK(*hi <= 4.0 * *lo);
  }
}
