#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "orbitbench/errors.hpp"
#include "orbitbench/soe.hpp"

using namespace orbitbench;

namespace {

SamplePtr bern(int rank, std::int64_t core, std::int64_t pad, std::uint64_t seed) {
  return std::make_shared<const OrbitSample>(sample_window(SymbolicSystem::bernoulli(rank, {0.5, 0.5}), core, pad, seed));
}

}  // namespace

TEST_CASE("induced construction") {
  auto x = bern(1, 100000, 16, 1);
  auto soe = induced_soe(x, LocalEvent::symbol_at_origin(0));
  CHECK(soe.kind == SoeKind::kInduced);
  CHECK(std::abs(soe.comp.to_double() - 2.0) < 0.03);
  CHECK(soe.comp.to_double() == doctest::Approx(1.0 / empirical_measure(*x, LocalEvent::symbol_at_origin(0))));
  auto rep = check_inversion(soe, 100, 20);
  CHECK(rep.checked == 100);
  CHECK(rep.inversion_failures == 0);
  CHECK(rep.orbit_failures == 0);

  auto full = induced_soe(x, LocalEvent::always());
  CHECK(full.comp == Rational(1));
  CHECK(check_inversion(full, 100, 5).inversion_failures == 0);
  CHECK_THROWS_AS(induced_soe(bern(2, 8, 1, 1), LocalEvent::always()), DomainError);
}

TEST_CASE("reparam construction") {
  auto x = bern(2, 64, 32, 2);
  IntMatrix shear{{1, 1}, {0, 1}};
  auto soe = reparam_soe(x, shear);
  CHECK(soe.comp == Rational(1));
  auto rep = check_inversion(soe, 100, 4);
  CHECK(rep.checked == 100);
  CHECK(rep.inversion_failures == 0);
  CHECK(rep.orbit_failures == 0);
  // phi preserves symbols.
  for (const auto& p : x->window.core_positions())
    if (auto y = soe.phi(p)) CHECK(soe.target->at(*y) == x->at(p));
  CHECK_THROWS_AS(reparam_soe(x, IntMatrix{{2, 0}, {0, 1}}), DomainError);
}

TEST_CASE("sublattice construction") {
  auto x = bern(2, 64, 8, 3);
  IntMatrix m{{2, 1}, {0, 3}};
  auto soe = sublattice_soe(x, m);
  CHECK(soe.comp == Rational(6));
  auto rep = check_inversion(soe, 100, 8);
  CHECK(rep.checked == 100);
  CHECK(rep.inversion_failures == 0);
  CHECK(rep.orbit_failures == 0);
  CHECK_FALSE(soe.phi(Element{1, 0}));
  CHECK_FALSE(soe.alpha->evaluate(Element{1, 0}, Element{0, 0}));

  auto d = sublattice_soe(x, IntMatrix{{2, 0}, {0, 1}});
  CHECK(d.comp == Rational(2));
  CHECK(check_inversion(d, 100, 4).inversion_failures == 0);
  CHECK_THROWS_AS(sublattice_soe(x, IntMatrix(2)), DomainError);
}

TEST_CASE("inversion check catches a mismatched pair") {
  auto x = bern(2, 32, 16, 4);
  auto soe = reparam_soe(x, IntMatrix{{1, 1}, {0, 1}});
  soe.beta = std::make_shared<ConstantCocycle>(soe.target, IntMatrix(2));
  auto rep = check_inversion(soe, 100, 4);
  CHECK(rep.checked == 100);
  CHECK(rep.inversion_failures > 0);
  CHECK(rep.orbit_failures == 0);

  auto wrong_alpha = reparam_soe(x, IntMatrix{{1, 1}, {0, 1}});
  wrong_alpha.alpha = std::make_shared<ConstantCocycle>(x, IntMatrix(2));
  auto r2 = check_inversion(wrong_alpha, 100, 4);
  CHECK(r2.checked == 100);
  CHECK(r2.inversion_failures > 0);
  CHECK(r2.orbit_failures > 0);
}
