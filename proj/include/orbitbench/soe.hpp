#pragma once

// Explicit stable orbit equivalences between a source sample X and a target
// system Y, described by the cocycle pair (alpha, beta) and the point map
// phi: U -> V.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "orbitbench/cocycle.hpp"
#include "orbitbench/rational.hpp"

namespace orbitbench {

enum class SoeKind { kInduced, kReparam, kSublattice };

std::string to_string(SoeKind k);

struct SoeConstruction {
  SoeKind kind = SoeKind::kInduced;
  Rational comp{1};
  SamplePtr source;
  SamplePtr target;  // Y as a window sample; equals source for induced
  CocyclePtr alpha;  // over X, values in the group acting on Y
  CocyclePtr beta;   // over Y, values in the group acting on X
  // Position of phi(x) in the target window, nullopt outside U or the view.
  std::function<std::optional<Element>(const Element&)> phi;
};

// Y = (U, T_U) on a Z^1 sample; alpha counts visits, beta is the return time.
// comp = 1 / mu(U) with mu(U) the empirical measure.
SoeConstruction induced_soe(SamplePtr x, const LocalEvent& u);

// Y = X with S^v = T^{Mv}; alpha(g, x) = M^-1 g, beta(h, y) = M h, comp = 1.
SoeConstruction reparam_soe(SamplePtr x, const IntMatrix& m);

// Y = recoding over MZ^d; U = MZ^d, alpha(g, x) = M^-1 g on U-pairs,
// beta(h, y) = M h, phi(x) = M^-1 x, comp = |det M|.
SoeConstruction sublattice_soe(SamplePtr x, const IntMatrix& m);

struct InversionReport {
  std::size_t checked = 0;
  std::size_t inversion_failures = 0;  // beta(alpha(g,x), phi x) != g
  std::size_t orbit_failures = 0;      // phi(T^g x) != S^{alpha(g,x)} phi(x)
};

// Samples (g, x) with x in U, |g| <= g_radius and alpha(g, x) defined until
// `pairs` are checked or the attempt budget runs out.
InversionReport check_inversion(const SoeConstruction& soe, std::size_t pairs, std::int64_t g_radius,
                                std::uint64_t seed = 1);

}  // namespace orbitbench
