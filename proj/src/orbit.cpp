#include "orbitbench/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "orbitbench/errors.hpp"
#include "orbitbench/rng.hpp"

namespace orbitbench {

namespace {

constexpr std::size_t kMaxWindowSites = std::size_t{1} << 28;

void check_probability_vector(const std::vector<double>& p, const char* what) {
  double s = 0;
  for (double v : p) {
    if (!(v >= 0.0)) throw DomainError(std::string(what) + ": negative or NaN probability");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-12) throw DomainError(std::string(what) + ": probabilities do not sum to 1");
}

int draw(const std::vector<double>& p, double u) {
  double acc = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return static_cast<int>(i);
  }
  // u lands in the rounding gap at the top; take the last positive weight.
  for (std::size_t i = p.size(); i-- > 0;)
    if (p[i] > 0) return static_cast<int>(i);
  return 0;
}

double xlogx(double p) { return p > 0 ? p * std::log(p) : 0.0; }

}  // namespace

SymbolicSystem SymbolicSystem::bernoulli(int rank, std::vector<double> p) {
  SymbolicSystem s;
  s.rank = rank;
  s.alphabet = static_cast<int>(p.size());
  s.law = ProductLaw{std::move(p)};
  s.validate();
  return s;
}

SymbolicSystem SymbolicSystem::symmetric_markov(double q) {
  return markov({{1.0 - q, q}, {q, 1.0 - q}});
}

SymbolicSystem SymbolicSystem::markov(std::vector<std::vector<double>> transition) {
  const std::size_t k = transition.size();
  if (k == 0) throw DomainError("markov: empty transition matrix");
  // Stationary vector by power iteration from uniform, then a linear solve
  // check below in validate().
  std::vector<double> pi(k, 1.0 / static_cast<double>(k));
  for (int it = 0; it < 100000; ++it) {
    std::vector<double> next(k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) next[j] += pi[i] * transition[i][j];
    double diff = 0;
    for (std::size_t j = 0; j < k; ++j) diff = std::max(diff, std::abs(next[j] - pi[j]));
    pi = next;
    if (diff < 1e-15) break;
  }
  const double s = std::accumulate(pi.begin(), pi.end(), 0.0);
  for (double& v : pi) v /= s;
  SymbolicSystem sys;
  sys.rank = 1;
  sys.alphabet = static_cast<int>(k);
  sys.law = MarkovLaw{std::move(transition), std::move(pi)};
  sys.validate();
  return sys;
}

void SymbolicSystem::validate() const {
  if (rank < 1 || rank > kMaxRank) throw DomainError("symbolic system: rank out of range");
  if (alphabet < 1 || alphabet > 256) throw DomainError("symbolic system: alphabet must have 1..256 symbols");
  if (const auto* prod = std::get_if<ProductLaw>(&law)) {
    if (static_cast<int>(prod->p.size()) != alphabet) throw DomainError("product law: wrong vector length");
    check_probability_vector(prod->p, "product law");
    return;
  }
  const auto& mk = std::get<MarkovLaw>(law);
  if (rank != 1) throw DomainError("markov law is supported on Z^1 only");
  if (static_cast<int>(mk.transition.size()) != alphabet || static_cast<int>(mk.stationary.size()) != alphabet)
    throw DomainError("markov law: wrong dimensions");
  for (const auto& row : mk.transition) {
    if (static_cast<int>(row.size()) != alphabet) throw DomainError("markov law: transition matrix not square");
    check_probability_vector(row, "markov transition row");
  }
  check_probability_vector(mk.stationary, "markov stationary vector");
  for (int j = 0; j < alphabet; ++j) {
    double v = 0;
    for (int i = 0; i < alphabet; ++i) v += mk.stationary[static_cast<std::size_t>(i)] * mk.transition[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    if (std::abs(v - mk.stationary[static_cast<std::size_t>(j)]) > 1e-10)
      throw DomainError("markov law: stationary vector is not invariant");
  }
}

double SymbolicSystem::entropy_rate() const {
  if (const auto* prod = std::get_if<ProductLaw>(&law)) {
    double h = 0;
    for (double v : prod->p) h -= xlogx(v);
    return h;
  }
  const auto& mk = std::get<MarkovLaw>(law);
  double h = 0;
  for (std::size_t i = 0; i < mk.transition.size(); ++i)
    for (double v : mk.transition[i]) h -= mk.stationary[i] * xlogx(v);
  return h;
}

double SymbolicSystem::marginal(int symbol) const {
  if (const auto* prod = std::get_if<ProductLaw>(&law)) return prod->p.at(static_cast<std::size_t>(symbol));
  return std::get<MarkovLaw>(law).stationary.at(static_cast<std::size_t>(symbol));
}

Window Window::cube(int rank, std::int64_t core_side, std::int64_t pad) {
  if (rank < 1 || rank > kMaxRank) throw DomainError("window: rank out of range");
  if (core_side < 1 || pad < 0) throw DomainError("window: core side must be positive and padding nonnegative");
  Window w;
  w.rank = rank;
  for (int i = 0; i < rank; ++i) {
    w.core[static_cast<std::size_t>(i)] = core_side;
    w.pad[static_cast<std::size_t>(i)] = pad;
  }
  return w;
}

std::size_t Window::size() const {
  std::size_t n = 1;
  for (int i = 0; i < rank; ++i) n *= static_cast<std::size_t>(extent(i));
  return n;
}

std::size_t Window::core_size() const {
  std::size_t n = 1;
  for (int i = 0; i < rank; ++i) n *= static_cast<std::size_t>(core[static_cast<std::size_t>(i)]);
  return n;
}

bool Window::in_window(const Element& p) const {
  for (int i = 0; i < rank; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (p[i] < -pad[k] || p[i] >= core[k] + pad[k]) return false;
  }
  for (int i = rank; i < kMaxRank; ++i)
    if (p[i] != 0) return false;
  return true;
}

bool Window::in_core(const Element& p) const {
  for (int i = 0; i < rank; ++i)
    if (p[i] < 0 || p[i] >= core[static_cast<std::size_t>(i)]) return false;
  for (int i = rank; i < kMaxRank; ++i)
    if (p[i] != 0) return false;
  return true;
}

std::size_t Window::index(const Element& p) const {
  std::size_t idx = 0;
  for (int i = 0; i < rank; ++i) {
    const auto k = static_cast<std::size_t>(i);
    idx = idx * static_cast<std::size_t>(extent(i)) + static_cast<std::size_t>(p[i] + pad[k]);
  }
  return idx;
}

Element Window::position(std::size_t index) const {
  Element p;
  for (int i = rank - 1; i >= 0; --i) {
    const auto e = static_cast<std::size_t>(extent(i));
    p[i] = static_cast<std::int64_t>(index % e) - pad[static_cast<std::size_t>(i)];
    index /= e;
  }
  return p;
}

std::vector<Element> Window::core_positions() const {
  std::vector<Element> out;
  out.reserve(core_size());
  Element p;
  while (true) {
    out.push_back(p);
    int i = rank - 1;
    while (i >= 0) {
      if (++p[i] < core[static_cast<std::size_t>(i)]) break;
      p[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

std::int64_t Window::min_pad() const {
  std::int64_t m = pad[0];
  for (int i = 1; i < rank; ++i) m = std::min(m, pad[static_cast<std::size_t>(i)]);
  return m;
}

bool LocalEvent::holds(const OrbitSample& s, const Element& p) const {
  if (never) return false;
  for (const auto& c : constraints) {
    const std::uint8_t v = s.at(add(p, c.offset));
    if (std::find(c.allowed.begin(), c.allowed.end(), v) == c.allowed.end()) return false;
  }
  return true;
}

std::int64_t LocalEvent::reach() const {
  std::int64_t r = 0;
  for (const auto& c : constraints)
    for (std::int64_t v : c.offset.c) r = std::max(r, v < 0 ? -v : v);
  return r;
}

std::string LocalEvent::str(int rank) const {
  if (never) return "empty";
  if (constraints.empty()) return "always";
  std::ostringstream os;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    os << (i ? " & " : "") << "x" << to_string(constraints[i].offset, rank) << " in {";
    for (std::size_t j = 0; j < constraints[i].allowed.size(); ++j)
      os << (j ? "," : "") << static_cast<int>(constraints[i].allowed[j]);
    os << "}";
  }
  return os.str();
}

OrbitSample sample_window(const SymbolicSystem& system, const Window& window, std::uint64_t seed) {
  system.validate();
  if (window.rank != system.rank) throw DomainError("sample_window: window rank differs from system rank");
  if (window.size() > kMaxWindowSites)
    throw CapacityError("sample_window: window of " + std::to_string(window.size()) + " sites exceeds budget");
  OrbitSample s;
  s.system = system;
  s.alphabet = system.alphabet;
  s.window = window;
  s.seed = seed;
  s.symbols.resize(window.size());
  Philox4x32 rng(seed);
  if (const auto* prod = std::get_if<ProductLaw>(&system.law)) {
    for (std::size_t i = 0; i < s.symbols.size(); ++i)
      s.symbols[i] = static_cast<std::uint8_t>(draw(prod->p, rng.uniform(i)));
  } else {
    const auto& mk = std::get<MarkovLaw>(system.law);
    int cur = draw(mk.stationary, rng.uniform(0));
    s.symbols[0] = static_cast<std::uint8_t>(cur);
    for (std::size_t i = 1; i < s.symbols.size(); ++i) {
      cur = draw(mk.transition[static_cast<std::size_t>(cur)], rng.uniform(i));
      s.symbols[i] = static_cast<std::uint8_t>(cur);
    }
  }
  return s;
}

OrbitSample sample_window(const SymbolicSystem& system, std::int64_t core_side, std::int64_t pad,
                          std::uint64_t seed) {
  return sample_window(system, Window::cube(system.rank, core_side, pad), seed);
}

double empirical_measure(const OrbitSample& sample, const LocalEvent& event) {
  if (event.reach() > sample.window.min_pad())
    throw DomainError("empirical_measure: event support needs padding r_pad >= " + std::to_string(event.reach()));
  if (event.never) return 0.0;
  std::size_t hits = 0;
  const auto core = sample.window.core_positions();
  for (const auto& p : core) hits += event.holds(sample, p) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(core.size());
}

InducedSequence induced_system(const OrbitSample& sample, const LocalEvent& u) {
  if (sample.rank() != 1) throw DomainError("induced_system: Z^1 samples only");
  const Window& w = sample.window;
  const std::int64_t reach = u.reach();
  if (reach > w.pad[0]) throw DomainError("induced_system: event support exceeds padding");
  const std::int64_t hi = w.core[0] + w.pad[0] - reach;  // last position where U is decidable, exclusive
  InducedSequence out;
  for (std::int64_t p = 0; p < w.core[0]; ++p)
    if (u.holds(sample, Element{p})) out.visits.push_back(p);
  if (out.visits.empty()) throw DegenerateInputError("induced_system: no visits to U in the window");

  std::map<std::vector<std::uint8_t>, std::uint32_t> ids;
  std::int64_t next = -1;
  std::int64_t total = 0;
  for (std::size_t i = 0; i < out.visits.size(); ++i) {
    const std::int64_t p = out.visits[i];
    if (i + 1 < out.visits.size()) {
      next = out.visits[i + 1];
    } else {
      next = -1;
      for (std::int64_t q = p + 1; q < hi; ++q)
        if (u.holds(sample, Element{q})) {
          next = q;
          break;
        }
      if (next < 0) break;
    }
    const std::int64_t t = next - p;
    std::vector<std::uint8_t> block(sample.symbols.begin() + static_cast<std::ptrdiff_t>(w.index(Element{p})),
                                    sample.symbols.begin() + static_cast<std::ptrdiff_t>(w.index(Element{next})));
    auto [it, inserted] = ids.emplace(std::move(block), static_cast<std::uint32_t>(ids.size()));
    out.return_times.push_back(t);
    out.codes.push_back(it->second);
    total += t;
  }
  out.distinct_codes = ids.size();
  if (out.return_times.empty()) throw DegenerateInputError("induced_system: no complete return in the window");
  out.mean_return_time = static_cast<double>(total) / static_cast<double>(out.return_times.size());
  return out;
}

namespace {

struct Fit {
  Element lo;
  std::array<std::int64_t, kMaxRank> sides{};
};

// True iff M w + [0, dom) stays in the window for every w in lo + [0, sides).
bool box_fits(const IntMatrix& m, const Window& w, const Element& lo, const std::array<std::int64_t, kMaxRank>& sides,
              const std::array<std::int64_t, kMaxRank>& dom) {
  const int d = m.dim();
  for (int mask = 0; mask < (1 << d); ++mask) {
    Element corner = lo;
    for (int i = 0; i < d; ++i)
      if (mask & (1 << i)) corner[i] += sides[static_cast<std::size_t>(i)] - 1;
    Element img = m.apply(corner);
    for (int i = 0; i < d; ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (img[i] < -w.pad[k] || img[i] + dom[k] - 1 >= w.core[k] + w.pad[k]) return false;
    }
  }
  return true;
}

// Solve M y = b in doubles (d <= 4, M invertible).
std::array<double, kMaxRank> solve(const IntMatrix& m, std::array<double, kMaxRank> b) {
  const int d = m.dim();
  double a[kMaxRank][kMaxRank];
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a[i][j] = static_cast<double>(m.at(i, j));
  for (int c = 0; c < d; ++c) {
    int piv = c;
    for (int r = c + 1; r < d; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(b[static_cast<std::size_t>(c)], b[static_cast<std::size_t>(piv)]);
    for (int r = 0; r < d; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (int j = c; j < d; ++j) a[r][j] -= f * a[c][j];
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(c)];
    }
  }
  for (int i = 0; i < d; ++i) b[static_cast<std::size_t>(i)] /= a[i][i];
  return b;
}

Fit fit_box(const IntMatrix& m, const Window& w, const std::array<std::int64_t, kMaxRank>& dom) {
  const int d = m.dim();
  Fit fit;
  bool diagonal = true;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j && m.at(i, j) != 0) diagonal = false;
  if (diagonal) {
    for (int i = 0; i < d; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const std::int64_t s = m.at(i, i);
      if (s <= 0) break;
      const std::int64_t lo = -w.pad[k], hi = w.core[k] + w.pad[k];  // [lo, hi)
      fit.lo[i] = (lo >= 0) ? (lo + s - 1) / s : -((-lo) / s);
      fit.sides[k] = std::max<std::int64_t>(0, (hi - dom[k] - s * fit.lo[i]) / s + 1);
    }
    if (box_fits(m, w, fit.lo, fit.sides, dom)) return fit;
  }
  std::array<double, kMaxRank> centre{};
  std::int64_t max_side = 0;
  for (int i = 0; i < d; ++i) {
    centre[static_cast<std::size_t>(i)] = 0.5 * static_cast<double>(w.core[static_cast<std::size_t>(i)]);
    max_side = std::max(max_side, w.extent(i));
  }
  const auto c = solve(m, centre);
  for (std::int64_t n = max_side; n >= 1; --n) {
    std::array<std::int64_t, kMaxRank> sides{};
    Element lo;
    for (int i = 0; i < d; ++i) {
      sides[static_cast<std::size_t>(i)] = n;
      lo[i] = static_cast<std::int64_t>(std::floor(c[static_cast<std::size_t>(i)] - 0.5 * static_cast<double>(n)));
    }
    if (box_fits(m, w, lo, sides, dom)) return Fit{lo, sides};
  }
  throw CapacityError("no box of positive side fits the window under " + m.str());
}

OrbitSample recode(const OrbitSample& sample, const IntMatrix& m, const std::array<std::int64_t, kMaxRank>& dom,
                   int alphabet) {
  const int d = m.dim();
  Fit fit = fit_box(m, sample.window, dom);
  OrbitSample out;
  out.alphabet = alphabet;
  out.seed = sample.seed;
  out.window.rank = d;
  for (int i = 0; i < d; ++i) out.window.core[static_cast<std::size_t>(i)] = fit.sides[static_cast<std::size_t>(i)];
  if (out.window.size() == 0) throw CapacityError("recoded view is empty");
  out.symbols.resize(out.window.size());

  // Fundamental domain offsets in row-major order.
  Window dwin;
  dwin.rank = d;
  dwin.core = dom;
  const auto offsets = dwin.core_positions();
  const auto positions = out.window.core_positions();
  for (std::size_t idx = 0; idx < positions.size(); ++idx) {
    const Element base = m.apply(add(fit.lo, positions[idx]));
    unsigned code = 0;
    for (const auto& off : offsets) code = code * static_cast<unsigned>(sample.alphabet) + sample.at(add(base, off));
    out.symbols[idx] = static_cast<std::uint8_t>(code);
  }
  return out;
}

}  // namespace

OrbitSample reparam_system(const OrbitSample& sample, const IntMatrix& m) {
  if (m.dim() != sample.rank()) throw DomainError("reparam_system: matrix dimension differs from sample rank");
  if (std::llabs(m.det()) != 1) throw DomainError("reparam_system: matrix " + m.str() + " is not unimodular");
  std::array<std::int64_t, kMaxRank> dom{};
  for (int i = 0; i < m.dim(); ++i) dom[static_cast<std::size_t>(i)] = 1;
  return recode(sample, m, dom, sample.alphabet);
}

Element recoded_origin(const OrbitSample& sample, const IntMatrix& m) {
  std::array<std::int64_t, kMaxRank> dom{};
  const bool unimodular = std::llabs(m.det()) == 1;
  for (int i = 0; i < m.dim(); ++i) dom[static_cast<std::size_t>(i)] = unimodular ? 1 : m.at(i, i);
  return fit_box(m, sample.window, dom).lo;
}

OrbitSample sublattice_system(const OrbitSample& sample, const IntMatrix& m) {
  if (m.dim() != sample.rank()) throw DomainError("sublattice_system: matrix dimension differs from sample rank");
  if (!m.is_upper_triangular()) throw DomainError("sublattice_system: matrix must be upper triangular");
  std::array<std::int64_t, kMaxRank> dom{};
  for (int i = 0; i < m.dim(); ++i) {
    if (m.at(i, i) <= 0) throw DomainError("sublattice_system: diagonal entries must be positive");
    dom[static_cast<std::size_t>(i)] = m.at(i, i);
  }
  const double letters = std::pow(static_cast<double>(sample.alphabet), static_cast<double>(m.det()));
  if (letters > 256.0)
    throw CapacityError("sublattice_system: recoded alphabet of " + std::to_string(letters) + " letters exceeds 256");
  return recode(sample, m, dom, static_cast<int>(letters));
}

namespace {

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw DomainError("import_binary: truncated input");
  return v;
}

}  // namespace

void export_binary(const OrbitSample& sample, std::ostream& out) {
  out.write("OBWS", 4);
  put<std::uint32_t>(out, 1);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(sample.rank()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(sample.alphabet));
  put<std::uint64_t>(out, sample.seed);
  for (int i = 0; i < sample.rank(); ++i) put<std::int64_t>(out, sample.window.core[static_cast<std::size_t>(i)]);
  for (int i = 0; i < sample.rank(); ++i) put<std::int64_t>(out, sample.window.pad[static_cast<std::size_t>(i)]);
  out.write(reinterpret_cast<const char*>(sample.symbols.data()), static_cast<std::streamsize>(sample.symbols.size()));
}

OrbitSample import_binary(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "OBWS", 4) != 0) throw DomainError("import_binary: bad magic");
  if (get<std::uint32_t>(in) != 1) throw DomainError("import_binary: unsupported version");
  OrbitSample s;
  s.window.rank = static_cast<int>(get<std::uint32_t>(in));
  if (s.window.rank < 1 || s.window.rank > kMaxRank) throw DomainError("import_binary: bad rank");
  s.alphabet = static_cast<int>(get<std::uint32_t>(in));
  s.seed = get<std::uint64_t>(in);
  for (int i = 0; i < s.rank(); ++i) s.window.core[static_cast<std::size_t>(i)] = get<std::int64_t>(in);
  for (int i = 0; i < s.rank(); ++i) s.window.pad[static_cast<std::size_t>(i)] = get<std::int64_t>(in);
  if (s.window.size() > kMaxWindowSites) throw CapacityError("import_binary: window exceeds budget");
  s.symbols.resize(s.window.size());
  in.read(reinterpret_cast<char*>(s.symbols.data()), static_cast<std::streamsize>(s.symbols.size()));
  if (!in) throw DomainError("import_binary: truncated symbol data");
  return s;
}

}  // namespace orbitbench
