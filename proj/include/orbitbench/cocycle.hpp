#pragma once

// Cocycles over window models. A cocycle is a rule object bound to one
// sample; positions are window coordinates and T^g x sits at act(x, g).
// Evaluation returns nullopt outside the domain or when the rule would need
// symbols beyond the window.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orbitbench/group.hpp"
#include "orbitbench/matrix.hpp"
#include "orbitbench/orbit.hpp"
#include "orbitbench/rational.hpp"

namespace orbitbench {

using SamplePtr = std::shared_ptr<const OrbitSample>;

enum class CocycleClass { kUnclassified, kBounded, kIntegrable };

struct Declared {
  CocycleClass cls = CocycleClass::kUnclassified;
  double bound = 0;  // C for kBounded
};

// Where a partial cocycle is defined.
class Domain {
 public:
  static Domain full() { return Domain(); }
  static Domain event(LocalEvent e);
  // Points of origin + M Z^d.
  static Domain lattice(IntMatrix m, Element origin = Element{});
  // Arbitrary window positions; mask indexed by Window::index.
  static Domain positions(std::shared_ptr<const std::vector<std::uint8_t>> mask);

  bool contains(const OrbitSample& s, const Element& p) const;
  std::string str(int rank) const;

 private:
  enum class Kind { kFull, kEvent, kLattice, kMask } kind_ = Kind::kFull;
  LocalEvent event_;
  IntMatrix lattice_;
  Element origin_;
  std::shared_ptr<const std::vector<std::uint8_t>> mask_;
};

class Cocycle {
 public:
  Cocycle(SamplePtr sample, Group source, Group target);
  virtual ~Cocycle() = default;

  const OrbitSample& sample() const { return *sample_; }
  const SamplePtr& sample_ptr() const { return sample_; }
  const Group& source() const { return source_; }
  const Group& target() const { return target_; }

  // Position of T^g x, or nullopt if it leaves the window.
  virtual std::optional<Element> act(const Element& x, const Element& g) const;
  virtual bool in_domain(const Element& x) const;
  virtual std::optional<Element> evaluate(const Element& g, const Element& x) const = 0;
  virtual std::string kind() const = 0;

  Declared declared;

 protected:
  SamplePtr sample_;
  Group source_;
  Group target_;
};

using CocyclePtr = std::shared_ptr<const Cocycle>;

// alpha(g, x) = M g, or the exact solution of M h = g when inverse is set
// (nullopt if M h = g has no integer solution). The source acts by
// x -> x + A g with A = action (identity by default).
class ConstantCocycle : public Cocycle {
 public:
  ConstantCocycle(SamplePtr sample, IntMatrix m, bool inverse = false, std::optional<IntMatrix> action = {});
  std::optional<Element> act(const Element& x, const Element& g) const override;
  std::optional<Element> evaluate(const Element& g, const Element& x) const override;
  std::string kind() const override { return inverse_ ? "constant-inverse" : "constant"; }
  const IntMatrix& matrix() const { return m_; }

 private:
  IntMatrix m_;
  bool inverse_;
  std::optional<IntMatrix> action_;
};

// f(x) read from the symbols at fixed offsets through a lookup table.
struct LocalFunction {
  std::vector<Element> offsets;
  std::map<std::vector<std::uint8_t>, Element> table;
  Element fallback;  // for patterns missing from the table

  std::optional<Element> eval(const OrbitSample& s, const Element& p) const;
  std::int64_t sup_norm(const Group& target) const;
  std::int64_t reach() const;
};

// alpha(g, x) = f(T^g x)^-1 base(g, x) f(x)
class TwistedCocycle : public Cocycle {
 public:
  TwistedCocycle(CocyclePtr base, LocalFunction f);
  std::optional<Element> act(const Element& x, const Element& g) const override { return base_->act(x, g); }
  bool in_domain(const Element& x) const override { return base_->in_domain(x); }
  std::optional<Element> evaluate(const Element& g, const Element& x) const override;
  std::string kind() const override { return "twisted(" + base_->kind() + ")"; }
  const LocalFunction& twist() const { return f_; }

 private:
  CocyclePtr base_;
  LocalFunction f_;
};

// base restricted to pairs x, T^g x in the domain.
class RestrictedCocycle : public Cocycle {
 public:
  RestrictedCocycle(CocyclePtr base, Domain domain);
  std::optional<Element> act(const Element& x, const Element& g) const override { return base_->act(x, g); }
  bool in_domain(const Element& x) const override;
  std::optional<Element> evaluate(const Element& g, const Element& x) const override;
  std::string kind() const override { return "restricted(" + base_->kind() + ")"; }

 private:
  CocyclePtr base_;
  Domain domain_;
};

// Visits to U on a Z^1 sample: positions of U inside the window where the
// event is decidable, with a prefix count for O(1) evaluation.
class VisitTable {
 public:
  VisitTable(const OrbitSample& s, const LocalEvent& u);
  bool visited(std::int64_t p) const;
  // Number of visits in [a, b) (a <= b).
  std::int64_t count(std::int64_t a, std::int64_t b) const;
  const std::vector<std::int64_t>& visits() const { return visits_; }
  std::optional<std::size_t> rank_of(std::int64_t p) const;
  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return hi_; }

 private:
  std::int64_t lo_ = 0, hi_ = 0;  // decidable range [lo, hi)
  std::vector<std::int64_t> prefix_;
  std::vector<std::int64_t> visits_;
};

// Induced-system cocycle X -> Y = (U, T_U): alpha(g, x) = signed number of
// visits to U strictly after x up to and including T^g x.
class VisitCountCocycle : public Cocycle {
 public:
  VisitCountCocycle(SamplePtr sample, LocalEvent u);
  bool in_domain(const Element& x) const override;
  std::optional<Element> evaluate(const Element& g, const Element& x) const override;
  std::string kind() const override { return "visit-count"; }

 private:
  LocalEvent u_;
  VisitTable table_;
};

// Return-time cocycle Y -> X of the induced system: Z acts on U by T_U and
// beta(n, y) is the displacement of T_U^n y.
class ReturnTimeCocycle : public Cocycle {
 public:
  ReturnTimeCocycle(SamplePtr sample, LocalEvent u);
  std::optional<Element> act(const Element& y, const Element& n) const override;
  bool in_domain(const Element& y) const override;
  std::optional<Element> evaluate(const Element& n, const Element& y) const override;
  std::string kind() const override { return "return-time"; }

 private:
  LocalEvent u_;
  VisitTable table_;
};

// sigma(g, x) = alpha(gamma(T^g x) g gamma(x)^-1, T^gamma(x) x), gamma the
// U-return map over ball_by_length(search_radius) (identity first).
class ReturnMapExtension : public Cocycle {
 public:
  ReturnMapExtension(CocyclePtr alpha, std::int64_t search_radius);
  std::optional<Element> act(const Element& x, const Element& g) const override { return alpha_->act(x, g); }
  bool in_domain(const Element& x) const override { return sample().window.in_window(x); }
  // Throws DomainError naming x if U is not reached within the radius.
  std::optional<Element> evaluate(const Element& g, const Element& x) const override;
  std::string kind() const override { return "return-map(" + alpha_->kind() + ")"; }

  Element gamma(const Element& x) const;
  const CocyclePtr& base() const { return alpha_; }

 private:
  CocyclePtr alpha_;
  std::vector<Element> order_;
};

// eta(x) = tau(gamma(x), x)^-1
class TransferFunction {
 public:
  TransferFunction(std::shared_ptr<const ReturnMapExtension> sigma, CocyclePtr tau);
  std::optional<Element> eval(const Element& x) const;

 private:
  std::shared_ptr<const ReturnMapExtension> sigma_;
  CocyclePtr tau_;
};

// Z^d -> Z^D extension of a bounded partial cocycle via the rounded
// McShane extension, coordinatewise, with D_x = U-positions of the window.
class LipschitzExtensionCocycle : public Cocycle {
 public:
  LipschitzExtensionCocycle(CocyclePtr alpha, std::int64_t c);
  bool in_domain(const Element& x) const override { return sample().window.in_window(x); }
  std::optional<Element> evaluate(const Element& g, const Element& x) const override;
  std::string kind() const override { return "lipschitz(" + alpha_->kind() + ")"; }

  // sigma^0_x(u) for x in U.
  std::optional<Element> sigma0(const Element& x, const Element& u) const;

 private:
  CocyclePtr alpha_;
  std::int64_t c_;
  std::vector<Element> u_points_;
};

// Core positions x with a.in_domain(x), row-major.
std::vector<Element> domain_positions(const Cocycle& a);

struct IdentityReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::size_t skipped = 0;  // some evaluation out of domain
};

IdentityReport check_cocycle_identity(const Cocycle& a, std::size_t trials, std::int64_t g_radius,
                                      std::uint64_t seed = 1);

// max |alpha(g,x)| / |g| over in-domain (g, x) with 0 < |g| <= g_radius.
// Positions are subsampled down to at most max_positions, evenly strided.
double boundedness_constant(const Cocycle& a, std::int64_t g_radius, std::size_t max_positions = 4096);

// Average of |alpha(g, x)| over in-domain core positions.
double integral_norm(const Cocycle& a, const Element& g);

std::shared_ptr<const ReturnMapExtension> extend_by_return_map(CocyclePtr alpha, std::int64_t search_radius);

struct ExtensionReport {
  std::size_t agreement_checked = 0;
  std::size_t agreement_failures = 0;  // sigma != alpha on U-pairs
  IdentityReport identity;
  std::size_t witness_checked = 0;
  std::size_t witness_failures = 0;  // sigma != eta(T^g x)^-1 tau eta(x)
};

// Agreement with alpha on U-pairs, the cocycle identity for sigma, and the
// cohomology witness against tau when given.
ExtensionReport check_extension(const ReturnMapExtension& sigma, const Cocycle* tau, std::size_t trials,
                                std::int64_t g_radius, std::uint64_t seed = 1);

// floor(min_{v in D} values(v) + C |u - v|_1). Throws DomainError with a
// witness pair unless values is C-Lipschitz on D.
std::int64_t lipschitz_extend(const std::vector<Element>& d, const std::vector<std::int64_t>& values, double c,
                              const Element& query);
void check_lipschitz(const std::vector<Element>& d, const std::vector<std::int64_t>& values, double c);

// Columns v_i = window average of alpha(e_i, x).
std::vector<std::vector<Rational>> drift_matrix(const Cocycle& a);

struct KakutaniReport {
  std::size_t positions = 0;
  std::size_t good = 0;
  double fraction_good = 0;
};

// Fraction of core positions x with |alpha(n e_i, x) - n M e_i|_1 < eps n for
// every axis i and N <= n <= n_max.
KakutaniReport kakutani_check(const Cocycle& a, const std::vector<std::vector<double>>& m, double eps,
                              std::int64_t n, std::int64_t n_max);
std::vector<std::vector<double>> to_doubles(const IntMatrix& m);

// H_mu(alpha^g; U) over core positions, U = positions where alpha(g, .)
// is defined and in_u holds.
double small_set_entropy(const Cocycle& a, const Element& g, const Domain& u);

}  // namespace orbitbench
