#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "orbitbench/errors.hpp"
#include "orbitbench/orbit.hpp"
#include "orbitbench/rng.hpp"

using namespace orbitbench;

TEST_CASE("philox known-answer vectors") {
  auto a = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  CHECK(a == Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  auto b = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  CHECK(b == Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  auto c = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  CHECK(c == Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("integer matrices") {
  IntMatrix shear{{1, 1}, {0, 1}};
  CHECK(shear.det() == 1);
  CHECK(shear.apply(Element{2, 3}) == Element{5, 3});
  CHECK(shear * shear.unimodular_inverse() == IntMatrix(2));
  CHECK(shear.l1_operator_norm() == 2);
  IntMatrix m3{{2, 1, 0}, {1, 1, 0}, {0, 0, -1}};
  CHECK(m3.det() == -1);
  CHECK(m3 * m3.unimodular_inverse() == IntMatrix(3));
  CHECK_THROWS_AS(IntMatrix({{2, 0}, {0, 1}}).unimodular_inverse(), DomainError);
}

TEST_CASE("system validation") {
  CHECK_THROWS_AS(SymbolicSystem::bernoulli(1, {0.5, 0.6}), DomainError);
  CHECK_THROWS_AS(SymbolicSystem::bernoulli(1, {-0.1, 1.1}), DomainError);
  auto mk = SymbolicSystem::symmetric_markov(0.3);
  const auto& law = std::get<MarkovLaw>(mk.law);
  CHECK(law.stationary[0] == doctest::Approx(0.5).epsilon(1e-12));
  MarkovLaw bad = law;
  bad.stationary = {0.9, 0.1};
  SymbolicSystem s = mk;
  s.law = bad;
  CHECK_THROWS_AS(s.validate(), DomainError);
  CHECK(mk.entropy_rate() == doctest::Approx(-(0.3 * std::log(0.3) + 0.7 * std::log(0.7))));
}

TEST_CASE("window indexing round trip") {
  Window w;
  w.rank = 2;
  w.core = {5, 3, 0, 0};
  w.pad = {2, 1, 0, 0};
  CHECK(w.size() == 9 * 5);
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(w.index(w.position(i)) == i);
  CHECK(w.core_positions().size() == 15);
  CHECK(w.in_window(Element{-2, -1}));
  CHECK_FALSE(w.in_window(Element{-3, 0}));
  CHECK_FALSE(w.in_core(Element{5, 0}));
}

TEST_CASE("sample window examples") {
  auto zero = sample_window(SymbolicSystem::bernoulli(2, {1.0, 0.0}), 16, 2, 1);
  CHECK(std::all_of(zero.symbols.begin(), zero.symbols.end(), [](std::uint8_t v) { return v == 0; }));

  auto sys = SymbolicSystem::bernoulli(2, {0.5, 0.5});
  auto big = sample_window(sys, 1024, 0, 7);
  const double f = empirical_measure(big, LocalEvent::symbol_at_origin(0));
  CHECK(std::abs(f - 0.5) < 0.01);

  auto a = sample_window(sys, 64, 3, 42);
  auto b = sample_window(sys, 64, 3, 42);
  auto c = sample_window(sys, 64, 3, 43);
  CHECK(a.symbols == b.symbols);
  CHECK(a.symbols != c.symbols);
  CHECK_THROWS_AS(sample_window(sys, 1 << 15, 0, 1), CapacityError);
}

TEST_CASE("empirical measure examples") {
  auto sys = SymbolicSystem::bernoulli(1, {0.25, 0.75});
  auto s = sample_window(sys, 200000, 4, 3);
  CHECK(empirical_measure(s, LocalEvent::always()) == 1.0);
  CHECK(empirical_measure(s, LocalEvent::empty()) == 0.0);
  const double n = 200000;
  const double p0 = empirical_measure(s, LocalEvent::symbol_at_origin(0));
  CHECK(std::abs(p0 - 0.25) < 3 * std::sqrt(0.25 / n) * 2);

  LocalEvent both{{{Element{0}, {0}}, {Element{3}, {1}}}, false};
  const double pb = empirical_measure(s, both);
  const double sd = std::sqrt(0.25 * 0.75 * (1 - 0.1875) / n);
  CHECK(std::abs(pb - 0.25 * 0.75) < 6 * sd);

  LocalEvent far{{{Element{9}, {0}}}, false};
  CHECK_THROWS_AS(empirical_measure(s, far), DomainError);
}

TEST_CASE("cylinders with up to three sites match their probabilities") {
  auto sys = SymbolicSystem::bernoulli(2, {0.2, 0.3, 0.5});
  auto s = sample_window(sys, 400, 2, 11);
  const double n = 400.0 * 400.0;
  const std::vector<std::vector<LocalEvent::Constraint>> events = {
      {{Element{0, 0}, {0}}},
      {{Element{0, 0}, {1, 2}}, {Element{1, 0}, {0}}},
      {{Element{0, 0}, {2}}, {Element{0, 2}, {2}}, {Element{-1, 1}, {1}}},
  };
  for (const auto& cs : events) {
    double p = 1;
    for (const auto& c : cs) {
      double q = 0;
      for (auto a : c.allowed) q += sys.marginal(a);
      p *= q;
    }
    const double got = empirical_measure(s, LocalEvent{cs, false});
    // Overlapping translates are weakly dependent; the 6 sigma band uses the
    // independent variance times the number of sites per event.
    const double sd = std::sqrt(p * (1 - p) * static_cast<double>(cs.size()) / n);
    CHECK(std::abs(got - p) < 6 * sd);
  }
}

TEST_CASE("induced system: Kac oracle and codes") {
  auto sys = SymbolicSystem::bernoulli(1, {0.5, 0.5});
  auto s = sample_window(sys, 1'000'000, 64, 2024);
  auto ind = induced_system(s, LocalEvent::symbol_at_origin(0));
  CHECK(std::abs(ind.mean_return_time - 2.0) < 0.05);
  CHECK(std::abs(ind.mean_return_time - 2.0) / 2.0 < 0.02);

  // Codes are determined by the return time for U = {x_0 = 0}.
  for (std::size_t i = 0; i + 1 < ind.codes.size() && i < 1000; ++i)
    for (std::size_t j = i + 1; j < i + 20 && j < ind.codes.size(); ++j)
      CHECK((ind.codes[i] == ind.codes[j]) == (ind.return_times[i] == ind.return_times[j]));

  auto q = sample_window(SymbolicSystem::bernoulli(1, {0.25, 0.75}), 1'000'000, 64, 5);
  auto ind4 = induced_system(q, LocalEvent::symbol_at_origin(0));
  CHECK(std::abs(ind4.mean_return_time - 4.0) / 4.0 < 0.02);

  auto full = induced_system(s, LocalEvent::always());
  CHECK(full.mean_return_time == 1.0);
  CHECK(full.return_times.size() == 1'000'000);

  auto ones = sample_window(SymbolicSystem::bernoulli(1, {0.0, 1.0}), 100, 4, 1);
  CHECK_THROWS_AS(induced_system(ones, LocalEvent::symbol_at_origin(0)), DegenerateInputError);
}

TEST_CASE("reparam view") {
  auto sys = SymbolicSystem::bernoulli(2, {0.5, 0.5});
  auto s = sample_window(sys, 64, 0, 9);
  auto id = reparam_system(s, IntMatrix(2));
  CHECK(id.symbols == s.symbols);

  IntMatrix shear{{1, 1}, {0, 1}};
  auto v = reparam_system(s, shear);
  CHECK(v.window.core[0] >= 32);
  // Symbol multiset of the view is a sub-multiset of the source; spot-check
  // the re-indexing directly.
  CHECK_THROWS_AS(reparam_system(s, IntMatrix{{2, 0}, {0, 1}}), DomainError);

  auto big = sample_window(sys, 512, 0, 10);
  auto vb = reparam_system(big, shear);
  const double f = empirical_measure(vb, LocalEvent::symbol_at_origin(1));
  CHECK(std::abs(f - 0.5) < 6 * std::sqrt(0.25 / static_cast<double>(vb.window.core_size())));
}

TEST_CASE("reparam view reads the configuration at M v") {
  auto sys = SymbolicSystem::bernoulli(2, {0.3, 0.7});
  auto s = sample_window(sys, 40, 5, 12);
  IntMatrix shear{{1, 1}, {0, 1}};
  auto v = reparam_system(s, shear);
  // Find the offset lo: the view at u equals x at M(lo+u); lo is determined
  // by matching, so check that some lo reproduces every site.
  bool matched = false;
  for (std::int64_t a = -20; a <= 40 && !matched; ++a)
    for (std::int64_t b = -20; b <= 40 && !matched; ++b) {
      bool ok = true;
      for (const auto& u : v.window.core_positions()) {
        Element src = shear.apply(Element{a + u[0], b + u[1]});
        if (!s.window.in_window(src) || s.at(src) != v.at(u)) {
          ok = false;
          break;
        }
      }
      matched = ok;
    }
  CHECK(matched);
}

TEST_CASE("sublattice recoding") {
  auto sys = SymbolicSystem::bernoulli(1, {0.5, 0.5});
  auto s = sample_window(sys, 100, 0, 4);
  auto id = sublattice_system(s, IntMatrix(1));
  CHECK(id.symbols == s.symbols);
  auto two = sublattice_system(s, IntMatrix{{2}});
  CHECK(two.alphabet == 4);
  REQUIRE(two.window.core[0] == 50);
  for (std::int64_t w = 0; w < 50; ++w)
    CHECK(two.at(Element{w}) == 2 * s.at(Element{2 * w}) + s.at(Element{2 * w + 1}));

  auto z2 = sample_window(SymbolicSystem::bernoulli(2, {0.5, 0.5}), 32, 0, 4);
  auto r = sublattice_system(z2, IntMatrix{{2, 0}, {0, 1}});
  CHECK(r.window.core[0] == 16);
  CHECK(r.window.core[1] == 32);
  CHECK(r.at(Element{3, 5}) == 2 * z2.at(Element{6, 5}) + z2.at(Element{7, 5}));

  auto tri = sublattice_system(z2, IntMatrix{{2, 1}, {0, 1}});
  CHECK(tri.alphabet == 4);
  CHECK_THROWS_AS(sublattice_system(z2, IntMatrix{{2, 0}, {1, 1}}), DomainError);
  CHECK_THROWS_AS(sublattice_system(z2, IntMatrix{{3, 0}, {0, 3}}), CapacityError);
}

TEST_CASE("binary export round trip") {
  auto s = sample_window(SymbolicSystem::bernoulli(2, {0.1, 0.2, 0.7}), 20, 3, 77);
  std::stringstream buf;
  export_binary(s, buf);
  CHECK(buf.str().size() == 4 + 12 + 8 + 16 + 16 + s.symbols.size());
  auto back = import_binary(buf);
  CHECK(back.symbols == s.symbols);
  CHECK(back.window.core == s.window.core);
  CHECK(back.window.pad == s.window.pad);
  CHECK(back.seed == 77);
  std::stringstream junk("nope");
  CHECK_THROWS_AS(import_binary(junk), DomainError);
}
