#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "orbitbench/entropy.hpp"
#include "orbitbench/errors.hpp"

using namespace orbitbench;

namespace {

bool within(double got, double want, double rel) { return std::abs(got - want) <= rel * std::abs(want); }

std::vector<std::int64_t> range(std::int64_t a, std::int64_t b) {
  std::vector<std::int64_t> v;
  for (auto i = a; i <= b; ++i) v.push_back(i);
  return v;
}

}  // namespace

TEST_CASE("shannon examples") {
  std::vector<double> point{1.0, 0.0};
  CHECK(shannon(point) == 0.0);
  std::vector<double> fair{0.5, 0.5};
  CHECK(shannon(fair) == doctest::Approx(0.693147).epsilon(1e-6));
  std::vector<double> q{0.25, 0.75};
  CHECK(shannon(q) == doctest::Approx(0.25 * std::log(4.0) + 0.75 * std::log(4.0 / 3.0)));
  std::vector<double> bad{0.5, 0.6};
  CHECK_THROWS_AS(shannon(bad), DomainError);
}

TEST_CASE("shannon is concave on random pairs") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + trial % 6;
    std::vector<double> a(k), b(k);
    double sa = 0, sb = 0;
    for (std::size_t i = 0; i < k; ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
      sa += a[i];
      sb += b[i];
    }
    for (std::size_t i = 0; i < k; ++i) {
      a[i] /= sa;
      b[i] /= sb;
    }
    const double t = u(rng);
    std::vector<double> mix(k);
    for (std::size_t i = 0; i < k; ++i) mix[i] = t * a[i] + (1 - t) * b[i];
    // Renormalize away rounding so validation stays exact-ish.
    double sm = 0;
    for (double v : mix) sm += v;
    for (double& v : mix) v /= sm;
    CHECK(shannon(mix) >= t * shannon(a) + (1 - t) * shannon(b) - 1e-12);
  }
}

TEST_CASE("partial entropy equals the star-extended entropy") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::optional<std::uint32_t>> labels(1000);
    for (auto& l : labels)
      if (rng() % 3 != 0) l = static_cast<std::uint32_t>(rng() % (1 + trial % 5));
    auto pe = partial_entropy(labels);
    CHECK(pe.value == doctest::Approx(pe.star_value).epsilon(1e-12));
  }
  std::vector<std::optional<std::uint32_t>> none(10);
  CHECK(partial_entropy(none).value == 0.0);
  std::vector<std::optional<std::uint32_t>> constant(8);
  for (std::size_t i = 0; i < 8; i += 2) constant[i] = 7;
  CHECK(partial_entropy(constant).value == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("partial entropy of the origin symbol on the full space") {
  auto s = sample_window(SymbolicSystem::bernoulli(1, {0.5, 0.5}), 100000, 0, 8);
  std::vector<std::optional<std::uint32_t>> labels;
  for (auto v : s.symbols) labels.push_back(v);
  CHECK(within(partial_entropy(labels).value, std::log(2.0), 0.01));
}

TEST_CASE("block entropy examples") {
  auto bern = sample_window(SymbolicSystem::bernoulli(1, {0.5, 0.5}), 1'000'000, 0, 31);
  auto est = block_entropy(to_field(bern), range(1, 10));
  CHECK(est.method == "difference");
  CHECK(within(est.value, std::log(2.0), 0.05));
  CHECK(est.monotone);

  auto zero = sample_window(SymbolicSystem::bernoulli(1, {1.0, 0.0}), 10000, 0, 1);
  CHECK(block_entropy(to_field(zero), range(1, 5)).value == 0.0);

  const double q = 0.3;
  auto mk = sample_window(SymbolicSystem::symmetric_markov(q), 1'000'000, 0, 32);
  auto em = block_entropy(to_field(mk), range(1, 12));
  CHECK(within(em.value, -(q * std::log(q) + (1 - q) * std::log(1 - q)), 0.05));
}

TEST_CASE("block entropy excludes overfull boxes") {
  auto s = sample_window(SymbolicSystem::bernoulli(1, {0.5, 0.5}), 1000, 0, 3);
  auto est = block_entropy(to_field(s), range(1, 12));
  for (const auto& bp : est.curve) CHECK(bp.reliable == (bp.patterns * 100 <= bp.samples));
  CHECK(est.side_used <= 4);
  LabelField wild = sequence_field({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  CHECK_THROWS_AS(block_entropy(wild, {1}), DegenerateInputError);
}

TEST_CASE("block entropy on i.i.d. laws") {
  const std::vector<std::vector<double>> laws = {{0.5, 0.5}, {0.2, 0.8}, {0.1, 0.2, 0.7}, {0.25, 0.25, 0.25, 0.25}};
  std::uint64_t seed = 100;
  for (const auto& p : laws) {
    auto s1 = sample_window(SymbolicSystem::bernoulli(1, p), 1'000'000, 0, seed++);
    const double h = s1.system->entropy_rate();
    CHECK(within(block_entropy(to_field(s1), range(1, 8)).value, h, 0.05));
    auto s2 = sample_window(SymbolicSystem::bernoulli(2, p), 1000, 0, seed++);
    CHECK(within(block_entropy(to_field(s2), range(1, 4)).value, h, 0.05));
  }
}

TEST_CASE("induced process entropy follows the Abramov relation") {
  auto s = sample_window(SymbolicSystem::bernoulli(1, {0.5, 0.5}), 1'000'000, 64, 77);
  auto ind = induced_system(s, LocalEvent::symbol_at_origin(0));
  auto est = block_entropy(sequence_field(ind.codes), range(1, 6));
  CHECK(within(est.value, 2 * std::log(2.0), 0.05));
}

TEST_CASE("reparam and sublattice views scale entropy by the index") {
  auto sys = SymbolicSystem::bernoulli(2, {0.5, 0.5});
  auto s = sample_window(sys, 1024, 0, 5);
  const double h = block_entropy(to_field(s), range(1, 4)).value;
  auto v = reparam_system(s, IntMatrix{{1, 1}, {0, 1}});
  CHECK(within(block_entropy(to_field(v), range(1, 4)).value, h, 0.05));

  auto z1 = sample_window(SymbolicSystem::bernoulli(1, {0.5, 0.5}), 1'000'000, 0, 6);
  auto r1 = sublattice_system(z1, IntMatrix{{2}});
  CHECK(within(block_entropy(to_field(r1), range(1, 6)).value, 2 * std::log(2.0), 0.05));

  const double p = 0.3;
  auto sp = sample_window(SymbolicSystem::bernoulli(2, {p, 1 - p}), 1024, 0, 7);
  auto r2 = sublattice_system(sp, IntMatrix{{2, 0}, {0, 1}});
  CHECK(within(block_entropy(to_field(r2), range(1, 3)).value, 2 * binary_entropy(p), 0.05));
}

TEST_CASE("furman constant") {
  const double c = 2 * std::log(3.0);
  CHECK(furman_k(0.01) == 5);
  CHECK(furman_constant(c, 0.01) == doctest::Approx(2 * (c + 5) + 2 * std::log(2.0)));
  CHECK(furman_constant(c, 0.01) == doctest::Approx(15.78).epsilon(0.001));
  const double k1 = 2 * std::exp(-1.0) * std::exp(-1.0) / (1 - std::exp(-1.0));
  CHECK(furman_k(k1) == 1);
  CHECK(furman_k(k1 * 0.999) == 2);
  double prev = 1e9;
  for (double eps = 1e-6; eps < 1.0; eps *= 1.7) {
    const double v = furman_constant(c, eps);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("furman inequality examples") {
  Group z2 = Group::lattice(2);
  const double c = 2 * std::log(3.0);
  auto zero = furman_bound_check(z2, {{Element{1, 0}, 0.0}}, 0.01, c);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.holds);
  auto half = furman_bound_check(z2, {{Element{1, 0}, 0.5}}, 0.01, c);
  CHECK(half.lhs == doctest::Approx(std::log(2.0)));
  CHECK(half.holds);
  CHECK_THROWS_AS(furman_bound_check(z2, {{Element{0, 0}, 0.5}}, 0.01, c), DomainError);
}

TEST_CASE("furman inequality on random sparse vectors") {
  Group z2 = Group::lattice(2);
  const double c = 2 * std::log(3.0);
  auto ball = z2.ball(10).elements();
  ball.erase(std::find(ball.begin(), ball.end(), z2.identity()));
  std::mt19937_64 rng(2025);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::map<Element, double> p;
    const int k = 1 + static_cast<int>(rng() % 30);
    const double scale = std::pow(10.0, -3.0 * u(rng));
    for (int j = 0; j < k; ++j) p[ball[rng() % ball.size()]] = scale * u(rng);
    if (!furman_bound_check(z2, p, 0.01, c).holds) ++violations;

    double total = 0;
    for (auto& [g, v] : p) total += v;
    for (auto& [g, v] : p) v /= total;
    double s = 0;
    for (auto& [g, v] : p) s += v;
    if (std::abs(s - 1.0) > 1e-12) continue;
    if (!furman_distribution_check(z2, p, 0.01, c).holds) ++violations;
  }
  CHECK(violations == 0);
}
