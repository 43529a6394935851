#include "orbitbench/soe.hpp"

#include <cmath>
#include <cstdlib>
#include <memory>

#include "orbitbench/errors.hpp"
#include "orbitbench/rng.hpp"

namespace orbitbench {

std::string to_string(SoeKind k) {
  switch (k) {
    case SoeKind::kInduced: return "induced";
    case SoeKind::kReparam: return "reparam";
    case SoeKind::kSublattice: return "sublattice";
  }
  return "?";
}

SoeConstruction induced_soe(SamplePtr x, const LocalEvent& u) {
  if (x->rank() != 1) throw DomainError("induced_soe: Z^1 samples only");
  const double mu = empirical_measure(*x, u);
  if (mu <= 0) throw DegenerateInputError("induced_soe: U has no visit in the core");
  SoeConstruction soe;
  soe.kind = SoeKind::kInduced;
  // Exact ratio of integer counts.
  const auto n = static_cast<std::int64_t>(x->window.core_size());
  const auto hits = static_cast<std::int64_t>(std::llround(mu * static_cast<double>(n)));
  soe.comp = Rational(n, hits);
  soe.source = x;
  soe.target = x;
  soe.alpha = std::make_shared<VisitCountCocycle>(x, u);
  soe.beta = std::make_shared<ReturnTimeCocycle>(x, u);
  auto beta = soe.beta;
  soe.phi = [beta](const Element& p) -> std::optional<Element> {
    if (!beta->in_domain(p)) return std::nullopt;
    return p;
  };
  return soe;
}

namespace {

// p = M (lo + w) solved for w, nullopt if p is off the lattice or the view.
std::optional<Element> to_view(const IntMatrix& m, const Element& lo, const Window& view, const Element& p) {
  const int d = m.dim();
  const std::int64_t det = m.det();
  Element w;
  for (int i = 0; i < d; ++i) {
    IntMatrix mi = m;
    for (int r = 0; r < d; ++r) mi.at(r, i) = p[r];
    const std::int64_t num = mi.det();
    if (num % det != 0) return std::nullopt;
    w[i] = num / det - lo[i];
  }
  if (!view.in_core(w)) return std::nullopt;
  return w;
}

SoeConstruction linear_soe(SamplePtr x, const IntMatrix& m, SoeKind kind, OrbitSample view) {
  SoeConstruction soe;
  soe.kind = kind;
  soe.comp = Rational(std::llabs(m.det()));
  soe.source = x;
  soe.target = std::make_shared<const OrbitSample>(std::move(view));
  auto inv = std::make_shared<ConstantCocycle>(x, m, true);
  if (kind == SoeKind::kSublattice)
    soe.alpha = std::make_shared<RestrictedCocycle>(inv, Domain::lattice(m));
  else
    soe.alpha = inv;
  soe.beta = std::make_shared<ConstantCocycle>(soe.target, m);
  const Element lo = recoded_origin(*x, m);
  const Window vw = soe.target->window;
  soe.phi = [m, lo, vw](const Element& p) { return to_view(m, lo, vw, p); };
  return soe;
}

}  // namespace

SoeConstruction reparam_soe(SamplePtr x, const IntMatrix& m) {
  return linear_soe(x, m, SoeKind::kReparam, reparam_system(*x, m));
}

SoeConstruction sublattice_soe(SamplePtr x, const IntMatrix& m) {
  if (std::llabs(m.det()) <= 1) throw DomainError("sublattice_soe: |det M| must exceed 1");
  return linear_soe(x, m, SoeKind::kSublattice, sublattice_system(*x, m));
}

InversionReport check_inversion(const SoeConstruction& soe, std::size_t pairs, std::int64_t g_radius,
                                std::uint64_t seed) {
  InversionReport rep;
  const auto xs = domain_positions(*soe.alpha);
  if (xs.empty()) return rep;
  const auto ball = soe.alpha->source().ball(g_radius).elements();
  const Group& h = soe.beta->source();
  Philox4x32 rng(seed, 7);
  const std::size_t budget = 200 * pairs;
  for (std::size_t t = 0; t < budget && rep.checked < pairs; ++t) {
    const Element& x = xs[rng.bits64(2 * t) % xs.size()];
    const Element& g = ball[rng.bits64(2 * t + 1) % ball.size()];
    const auto a = soe.alpha->evaluate(g, x);
    const auto y = soe.phi(x);
    if (!a || !y) continue;
    const auto gx = soe.alpha->act(x, g);
    const auto ygx = gx ? soe.phi(*gx) : std::nullopt;
    const auto b = soe.beta->evaluate(*a, *y);
    const auto sy = soe.beta->act(*y, *a);
    if (!ygx || !b || !sy) continue;
    ++rep.checked;
    if (*b != g) ++rep.inversion_failures;
    if (*sy != *ygx || !h.is_valid(*a)) ++rep.orbit_failures;
  }
  return rep;
}

}  // namespace orbitbench
