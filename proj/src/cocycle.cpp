#include "orbitbench/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "orbitbench/entropy.hpp"
#include "orbitbench/errors.hpp"
#include "orbitbench/rng.hpp"

namespace orbitbench {

namespace {

// Exact integer solution of M h = g via the adjugate, if one exists.
std::optional<Element> solve_exact(const IntMatrix& m, const Element& g) {
  const int d = m.dim();
  const std::int64_t det = m.det();
  if (det == 0) throw DomainError("singular matrix " + m.str());
  Element h;
  for (int i = 0; i < d; ++i) {
    // Cramer: replace column i by g.
    IntMatrix mi = m;
    for (int r = 0; r < d; ++r) mi.at(r, i) = g[r];
    const std::int64_t num = mi.det();
    if (num % det != 0) return std::nullopt;
    h[i] = num / det;
  }
  return h;
}

}  // namespace

Domain Domain::event(LocalEvent e) {
  Domain d;
  d.kind_ = Kind::kEvent;
  d.event_ = std::move(e);
  return d;
}

Domain Domain::lattice(IntMatrix m, Element origin) {
  if (m.det() == 0) throw DomainError("Domain::lattice: singular matrix");
  Domain d;
  d.kind_ = Kind::kLattice;
  d.lattice_ = std::move(m);
  d.origin_ = origin;
  return d;
}

Domain Domain::positions(std::shared_ptr<const std::vector<std::uint8_t>> mask) {
  Domain d;
  d.kind_ = Kind::kMask;
  d.mask_ = std::move(mask);
  return d;
}

bool Domain::contains(const OrbitSample& s, const Element& p) const {
  if (!s.window.in_window(p)) return false;
  switch (kind_) {
    case Kind::kFull:
      return true;
    case Kind::kEvent: {
      const std::int64_t r = event_.reach();
      for (int i = 0; i < s.rank(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        if (p[i] - r < -s.window.pad[k] || p[i] + r >= s.window.core[k] + s.window.pad[k]) return false;
      }
      return event_.holds(s, p);
    }
    case Kind::kLattice:
      return solve_exact(lattice_, sub(p, origin_)).has_value();
    case Kind::kMask:
      return (*mask_)[s.window.index(p)] != 0;
  }
  return false;
}

std::string Domain::str(int rank) const {
  switch (kind_) {
    case Kind::kFull:
      return "full";
    case Kind::kEvent:
      return "event " + event_.str(rank);
    case Kind::kLattice:
      return "lattice " + lattice_.str();
    case Kind::kMask:
      return "position set";
  }
  return "?";
}

Cocycle::Cocycle(SamplePtr sample, Group source, Group target)
    : sample_(std::move(sample)), source_(std::move(source)), target_(std::move(target)) {
  if (!sample_) throw DomainError("cocycle: null sample");
}

std::optional<Element> Cocycle::act(const Element& x, const Element& g) const {
  Element y = add(x, g);
  if (!sample_->window.in_window(y)) return std::nullopt;
  return y;
}

bool Cocycle::in_domain(const Element& x) const { return sample_->window.in_window(x); }

ConstantCocycle::ConstantCocycle(SamplePtr sample, IntMatrix m, bool inverse, std::optional<IntMatrix> action)
    : Cocycle(sample, Group::lattice(m.dim()), Group::lattice(m.dim())),
      m_(std::move(m)),
      inverse_(inverse),
      action_(std::move(action)) {
  if (m_.dim() != sample_->rank() && !action_) throw DomainError("constant cocycle: dimension mismatch");
  if (m_.det() == 0 && inverse_) throw DomainError("constant cocycle: singular matrix cannot be inverted");
  declared = {CocycleClass::kBounded, static_cast<double>(m_.l1_operator_norm())};
  if (inverse_) declared = {CocycleClass::kUnclassified, 0};
}

std::optional<Element> ConstantCocycle::act(const Element& x, const Element& g) const {
  if (!action_) return Cocycle::act(x, g);
  Element y = add(x, action_->apply(g));
  if (!sample_->window.in_window(y)) return std::nullopt;
  return y;
}

std::optional<Element> ConstantCocycle::evaluate(const Element& g, const Element& x) const {
  if (!in_domain(x) || !act(x, g)) return std::nullopt;
  if (inverse_) return solve_exact(m_, g);
  return m_.apply(g);
}

std::optional<Element> LocalFunction::eval(const OrbitSample& s, const Element& p) const {
  std::vector<std::uint8_t> key;
  key.reserve(offsets.size());
  for (const auto& o : offsets) {
    Element q = add(p, o);
    if (!s.window.in_window(q)) return std::nullopt;
    key.push_back(s.at(q));
  }
  auto it = table.find(key);
  return it == table.end() ? fallback : it->second;
}

std::int64_t LocalFunction::sup_norm(const Group& target) const {
  std::int64_t m = target.word_length(fallback);
  for (const auto& kv : table) m = std::max(m, target.word_length(kv.second));
  return m;
}

std::int64_t LocalFunction::reach() const {
  std::int64_t r = 0;
  for (const auto& o : offsets)
    for (auto v : o.c) r = std::max(r, v < 0 ? -v : v);
  return r;
}

TwistedCocycle::TwistedCocycle(CocyclePtr base, LocalFunction f)
    : Cocycle(base->sample_ptr(), base->source(), base->target()), base_(std::move(base)), f_(std::move(f)) {
  declared = base_->declared;
  // |f(y)^-1 b f(x)| <= C|g| + 2|f| <= (C + 2|f|)|g| for g != e, abelian targets.
  if (declared.cls == CocycleClass::kBounded) {
    if (target_.is_abelian())
      declared.bound += 2.0 * static_cast<double>(f_.sup_norm(target_));
    else
      declared.cls = CocycleClass::kIntegrable;
  }
}

std::optional<Element> TwistedCocycle::evaluate(const Element& g, const Element& x) const {
  auto b = base_->evaluate(g, x);
  if (!b) return std::nullopt;
  auto y = base_->act(x, g);
  if (!y) return std::nullopt;
  auto fx = f_.eval(sample(), x);
  auto fy = f_.eval(sample(), *y);
  if (!fx || !fy) return std::nullopt;
  return target_.multiply(target_.inverse(*fy), target_.multiply(*b, *fx));
}

RestrictedCocycle::RestrictedCocycle(CocyclePtr base, Domain domain)
    : Cocycle(base->sample_ptr(), base->source(), base->target()), base_(std::move(base)), domain_(std::move(domain)) {
  declared = base_->declared;
}

bool RestrictedCocycle::in_domain(const Element& x) const {
  return domain_.contains(sample(), x) && base_->in_domain(x);
}

std::optional<Element> RestrictedCocycle::evaluate(const Element& g, const Element& x) const {
  if (!in_domain(x)) return std::nullopt;
  auto y = base_->act(x, g);
  if (!y || !in_domain(*y)) return std::nullopt;
  return base_->evaluate(g, x);
}

VisitTable::VisitTable(const OrbitSample& s, const LocalEvent& u) {
  if (s.rank() != 1) throw DomainError("visit table: Z^1 samples only");
  const std::int64_t r = u.reach();
  lo_ = -s.window.pad[0] + r;
  hi_ = s.window.core[0] + s.window.pad[0] - r;
  if (hi_ <= lo_) throw DomainError("visit table: event support exceeds the window");
  prefix_.assign(static_cast<std::size_t>(hi_ - lo_ + 1), 0);
  for (std::int64_t p = lo_; p < hi_; ++p) {
    const bool v = u.holds(s, Element{p});
    prefix_[static_cast<std::size_t>(p - lo_ + 1)] = prefix_[static_cast<std::size_t>(p - lo_)] + (v ? 1 : 0);
    if (v) visits_.push_back(p);
  }
}

bool VisitTable::visited(std::int64_t p) const {
  if (p < lo_ || p >= hi_) return false;
  return prefix_[static_cast<std::size_t>(p - lo_ + 1)] != prefix_[static_cast<std::size_t>(p - lo_)];
}

std::int64_t VisitTable::count(std::int64_t a, std::int64_t b) const {
  a = std::clamp(a, lo_, hi_);
  b = std::clamp(b, lo_, hi_);
  return prefix_[static_cast<std::size_t>(b - lo_)] - prefix_[static_cast<std::size_t>(a - lo_)];
}

std::optional<std::size_t> VisitTable::rank_of(std::int64_t p) const {
  auto it = std::lower_bound(visits_.begin(), visits_.end(), p);
  if (it == visits_.end() || *it != p) return std::nullopt;
  return static_cast<std::size_t>(it - visits_.begin());
}

VisitCountCocycle::VisitCountCocycle(SamplePtr sample, LocalEvent u)
    : Cocycle(sample, Group::lattice(1), Group::lattice(1)), u_(std::move(u)), table_(*sample_, u_) {
  declared = {CocycleClass::kBounded, 1.0};
}

bool VisitCountCocycle::in_domain(const Element& x) const { return table_.visited(x[0]); }

std::optional<Element> VisitCountCocycle::evaluate(const Element& g, const Element& x) const {
  const std::int64_t a = x[0], b = x[0] + g[0];
  if (!table_.visited(a) || !table_.visited(b)) return std::nullopt;
  if (b >= a) return Element{table_.count(a + 1, b + 1)};
  return Element{-table_.count(b + 1, a + 1)};
}

ReturnTimeCocycle::ReturnTimeCocycle(SamplePtr sample, LocalEvent u)
    : Cocycle(sample, Group::lattice(1), Group::lattice(1)), u_(std::move(u)), table_(*sample_, u_) {
  declared = {CocycleClass::kIntegrable, 0};
}

std::optional<Element> ReturnTimeCocycle::act(const Element& y, const Element& n) const {
  auto r = table_.rank_of(y[0]);
  if (!r) return std::nullopt;
  const std::int64_t t = static_cast<std::int64_t>(*r) + n[0];
  if (t < 0 || t >= static_cast<std::int64_t>(table_.visits().size())) return std::nullopt;
  return Element{table_.visits()[static_cast<std::size_t>(t)]};
}

bool ReturnTimeCocycle::in_domain(const Element& y) const { return table_.visited(y[0]); }

std::optional<Element> ReturnTimeCocycle::evaluate(const Element& n, const Element& y) const {
  auto z = act(y, n);
  if (!z) return std::nullopt;
  return Element{(*z)[0] - y[0]};
}

ReturnMapExtension::ReturnMapExtension(CocyclePtr alpha, std::int64_t search_radius)
    : Cocycle(alpha->sample_ptr(), alpha->source(), alpha->target()),
      alpha_(std::move(alpha)),
      order_(alpha_->source().ball_by_length(search_radius)) {
  declared = {CocycleClass::kUnclassified, 0};
}

Element ReturnMapExtension::gamma(const Element& x) const {
  for (const auto& g : order_) {
    auto y = alpha_->act(x, g);
    if (y && alpha_->in_domain(*y)) return g;
  }
  throw DomainError("return map: U is not reached from position " + to_string(x, sample().rank()) +
                    " within the search radius");
}

std::optional<Element> ReturnMapExtension::evaluate(const Element& g, const Element& x) const {
  if (!in_domain(x)) return std::nullopt;
  auto y = act(x, g);
  if (!y) return std::nullopt;
  const Element gx = gamma(x);
  const Element gy = gamma(*y);
  auto base_point = alpha_->act(x, gx);
  if (!base_point) return std::nullopt;
  const Group& s = source();
  const Element h = s.multiply(gy, s.multiply(g, s.inverse(gx)));
  return alpha_->evaluate(h, *base_point);
}

TransferFunction::TransferFunction(std::shared_ptr<const ReturnMapExtension> sigma, CocyclePtr tau)
    : sigma_(std::move(sigma)), tau_(std::move(tau)) {}

std::optional<Element> TransferFunction::eval(const Element& x) const {
  auto v = tau_->evaluate(sigma_->gamma(x), x);
  if (!v) return std::nullopt;
  return tau_->target().inverse(*v);
}

LipschitzExtensionCocycle::LipschitzExtensionCocycle(CocyclePtr alpha, std::int64_t c)
    : Cocycle(alpha->sample_ptr(), alpha->source(), alpha->target()), alpha_(std::move(alpha)), c_(c) {
  if (!source_.is_abelian() || !target_.is_abelian())
    throw DomainError("lipschitz extension: Z^d-valued cocycles over Z^d only");
  for (std::size_t i = 0; i < sample().window.size(); ++i) {
    Element p = sample().window.position(i);
    if (alpha_->in_domain(p)) u_points_.push_back(p);
  }
  if (u_points_.empty()) throw DegenerateInputError("lipschitz extension: U has no point in the window");
  declared = {CocycleClass::kBounded, static_cast<double>(target_.rank() * (c_ + 2))};
}

std::optional<Element> LipschitzExtensionCocycle::sigma0(const Element& x, const Element& u) const {
  const int dt = target_.rank();
  Element out;
  for (int j = 0; j < dt; ++j) out[j] = std::numeric_limits<std::int64_t>::max();
  for (const auto& p : u_points_) {
    const Element v = sub(p, x);
    auto a = alpha_->evaluate(v, x);
    if (!a) return std::nullopt;
    const std::int64_t dist = l1_norm(sub(u, v));
    for (int j = 0; j < dt; ++j) out[j] = std::min(out[j], (*a)[j] + c_ * dist);
  }
  return out;
}

std::optional<Element> LipschitzExtensionCocycle::evaluate(const Element& g, const Element& x) const {
  if (!in_domain(x) || !act(x, g)) return std::nullopt;
  // Any v in D_x gives the same value; take the first U point.
  const Element v = sub(u_points_.front(), x);
  const Element base = u_points_.front();
  auto a = sigma0(base, sub(g, v));
  auto b = sigma0(base, negate(v));
  if (!a || !b) return std::nullopt;
  return sub(*a, *b);
}

std::vector<Element> domain_positions(const Cocycle& a) {
  std::vector<Element> out;
  for (const auto& p : a.sample().window.core_positions())
    if (a.in_domain(p)) out.push_back(p);
  return out;
}

namespace {

struct TrialDraw {
  const Philox4x32& rng;
  std::uint64_t counter = 0;
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng.bits64(counter++) % n); }
};

}  // namespace

IdentityReport check_cocycle_identity(const Cocycle& a, std::size_t trials, std::int64_t g_radius,
                                      std::uint64_t seed) {
  IdentityReport rep;
  const auto positions = domain_positions(a);
  if (positions.empty()) return rep;
  const auto ball = a.source().ball(g_radius).elements();
  Philox4x32 rng(seed, 1);
  TrialDraw draw{rng};
  const Group& h = a.target();
  const Group& s = a.source();
  for (std::size_t attempt = 0; attempt < 50 * trials && rep.checked < trials; ++attempt) {
    const Element& x = positions[draw.below(positions.size())];
    const Element& g = ball[draw.below(ball.size())];
    const Element& k = ball[draw.below(ball.size())];
    auto ak = a.evaluate(k, x);
    auto kx = a.act(x, k);
    std::optional<Element> agk, ag;
    if (ak && kx) {
      ag = a.evaluate(g, *kx);
      agk = a.evaluate(s.multiply(g, k), x);
    }
    if (!ak || !ag || !agk) {
      ++rep.skipped;
      continue;
    }
    ++rep.checked;
    if (*agk != h.multiply(*ag, *ak)) ++rep.violations;
  }
  return rep;
}

double boundedness_constant(const Cocycle& a, std::int64_t g_radius, std::size_t max_positions) {
  auto positions = domain_positions(a);
  if (positions.size() > max_positions) {
    std::vector<Element> thin;
    const double step = static_cast<double>(positions.size()) / static_cast<double>(max_positions);
    for (std::size_t i = 0; i < max_positions; ++i)
      thin.push_back(positions[static_cast<std::size_t>(static_cast<double>(i) * step)]);
    positions = std::move(thin);
  }
  const auto ball = a.source().ball(g_radius).elements();
  double best = 0;
  bool any = false;
  for (const auto& x : positions)
    for (const auto& g : ball) {
      if (g == a.source().identity()) continue;
      auto v = a.evaluate(g, x);
      if (!v) continue;
      any = true;
      best = std::max(best, static_cast<double>(a.target().word_length(*v)) /
                                static_cast<double>(a.source().word_length(g)));
    }
  if (!any) throw DegenerateInputError("boundedness_constant: no in-domain pair found");
  return best;
}

double integral_norm(const Cocycle& a, const Element& g) {
  std::int64_t total = 0;
  std::size_t n = 0;
  for (const auto& x : domain_positions(a)) {
    auto v = a.evaluate(g, x);
    if (!v) continue;
    total += a.target().word_length(*v);
    ++n;
  }
  if (n == 0) throw DegenerateInputError("integral_norm: no in-domain position");
  return static_cast<double>(total) / static_cast<double>(n);
}

std::shared_ptr<const ReturnMapExtension> extend_by_return_map(CocyclePtr alpha, std::int64_t search_radius) {
  return std::make_shared<const ReturnMapExtension>(std::move(alpha), search_radius);
}

ExtensionReport check_extension(const ReturnMapExtension& sigma, const Cocycle* tau, std::size_t trials,
                                std::int64_t g_radius, std::uint64_t seed) {
  ExtensionReport rep;
  const Cocycle& alpha = *sigma.base();
  const auto ball = sigma.source().ball(g_radius).elements();
  Philox4x32 rng(seed, 2);
  TrialDraw draw{rng};

  // sigma = alpha on U-pairs.
  const auto upos = domain_positions(alpha);
  for (std::size_t attempt = 0; !upos.empty() && attempt < 50 * trials && rep.agreement_checked < trials; ++attempt) {
    const Element& x = upos[draw.below(upos.size())];
    const Element& g = ball[draw.below(ball.size())];
    auto av = alpha.evaluate(g, x);
    if (!av) continue;
    ++rep.agreement_checked;
    auto sv = sigma.evaluate(g, x);
    if (!sv || *sv != *av) ++rep.agreement_failures;
  }

  rep.identity = check_cocycle_identity(sigma, trials, g_radius, seed + 1);

  if (tau != nullptr) {
    const Group& h = sigma.target();
    const auto core = sigma.sample().window.core_positions();
    auto gamma_eta = [&](const Element& x) -> std::optional<Element> {
      auto v = tau->evaluate(sigma.gamma(x), x);
      if (!v) return std::nullopt;
      return h.inverse(*v);
    };
    for (std::size_t attempt = 0; attempt < 50 * trials && rep.witness_checked < trials; ++attempt) {
      const Element& x = core[draw.below(core.size())];
      const Element& g = ball[draw.below(ball.size())];
      auto y = sigma.act(x, g);
      if (!y) continue;
      auto sv = sigma.evaluate(g, x);
      auto tv = tau->evaluate(g, x);
      auto ex = gamma_eta(x);
      auto ey = gamma_eta(*y);
      if (!sv || !tv || !ex || !ey) continue;
      ++rep.witness_checked;
      if (*sv != h.multiply(h.inverse(*ey), h.multiply(*tv, *ex))) ++rep.witness_failures;
    }
  }
  return rep;
}

void check_lipschitz(const std::vector<Element>& d, const std::vector<std::int64_t>& values, double c) {
  if (d.size() != values.size()) throw DomainError("lipschitz: value count differs from point count");
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      const double lhs = std::abs(static_cast<double>(values[i] - values[j]));
      if (lhs > c * static_cast<double>(l1_norm(sub(d[i], d[j]))) + 1e-12) {
        std::ostringstream os;
        os << "lipschitz: values are not " << c << "-Lipschitz, witness pair " << to_string(d[i], kMaxRank) << " / "
           << to_string(d[j], kMaxRank);
        throw DomainError(os.str());
      }
    }
}

std::int64_t lipschitz_extend(const std::vector<Element>& d, const std::vector<std::int64_t>& values, double c,
                              const Element& query) {
  if (d.empty()) throw DomainError("lipschitz_extend: empty domain");
  check_lipschitz(d, values, c);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.size(); ++i)
    best = std::min(best, static_cast<double>(values[i]) + c * static_cast<double>(l1_norm(sub(query, d[i]))));
  return static_cast<std::int64_t>(std::floor(best));
}

std::vector<std::vector<Rational>> drift_matrix(const Cocycle& a) {
  const int d = a.source().rank();
  const int dt = a.target().rank();
  std::vector<std::vector<std::int64_t>> sums(static_cast<std::size_t>(dt), std::vector<std::int64_t>(static_cast<std::size_t>(d), 0));
  std::int64_t n = 0;
  const auto core = a.sample().window.core_positions();
  for (int i = 0; i < d; ++i) {
    Element e;
    e[i] = 1;
    std::int64_t count = 0;
    for (const auto& x : core) {
      auto v = a.evaluate(e, x);
      if (!v) throw DomainError("drift_matrix: cocycle undefined at a core position");
      for (int r = 0; r < dt; ++r) sums[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] += (*v)[r];
      ++count;
    }
    n = count;
  }
  std::vector<std::vector<Rational>> m(static_cast<std::size_t>(dt), std::vector<Rational>(static_cast<std::size_t>(d)));
  for (int r = 0; r < dt; ++r)
    for (int i = 0; i < d; ++i) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] = Rational(sums[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)], n);
  return m;
}

std::vector<std::vector<double>> to_doubles(const IntMatrix& m) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(m.dim()), std::vector<double>(static_cast<std::size_t>(m.dim())));
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = static_cast<double>(m.at(i, j));
  return out;
}

KakutaniReport kakutani_check(const Cocycle& a, const std::vector<std::vector<double>>& m, double eps,
                              std::int64_t n, std::int64_t n_max) {
  if (n < 1 || n_max < n) throw DomainError("kakutani_check: need 1 <= N <= N_max");
  const int d = a.source().rank();
  const int dt = a.target().rank();
  for (int i = 0; i < d; ++i)
    if (a.sample().window.pad[static_cast<std::size_t>(i)] < n_max)
      throw CapacityError("kakutani_check: padding " + std::to_string(a.sample().window.pad[static_cast<std::size_t>(i)]) +
                          " is below N_max = " + std::to_string(n_max));
  KakutaniReport rep;
  for (const auto& x : a.sample().window.core_positions()) {
    ++rep.positions;
    bool good = true;
    for (int i = 0; i < d && good; ++i)
      for (std::int64_t k = n; k <= n_max && good; ++k) {
        Element g;
        g[i] = k;
        auto v = a.evaluate(g, x);
        if (!v) {
          good = false;
          break;
        }
        double dev = 0;
        for (int r = 0; r < dt; ++r)
          dev += std::abs(static_cast<double>((*v)[r]) - static_cast<double>(k) * m[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)]);
        if (!(dev < eps * static_cast<double>(k))) good = false;
      }
    if (good) ++rep.good;
  }
  rep.fraction_good = rep.positions ? static_cast<double>(rep.good) / static_cast<double>(rep.positions) : 0.0;
  return rep;
}

double small_set_entropy(const Cocycle& a, const Element& g, const Domain& u) {
  std::map<Element, std::uint32_t> ids;
  std::vector<std::optional<std::uint32_t>> labels;
  for (const auto& x : a.sample().window.core_positions()) {
    std::optional<std::uint32_t> l;
    if (u.contains(a.sample(), x)) {
      auto v = a.evaluate(g, x);
      if (v) l = ids.emplace(*v, static_cast<std::uint32_t>(ids.size())).first->second;
    }
    labels.push_back(l);
  }
  return partial_entropy(labels).value;
}

}  // namespace orbitbench
