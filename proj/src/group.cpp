#include "orbitbench/group.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "orbitbench/errors.hpp"
#include "orbitbench/union_find.hpp"

namespace orbitbench {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw CapacityError("coordinate overflow in group arithmetic");
  }
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw CapacityError("coordinate overflow in group arithmetic");
  }
  return out;
}

std::int64_t checked_abs(std::int64_t a) {
  if (a == std::numeric_limits<std::int64_t>::min()) {
    throw CapacityError("coordinate overflow in word length");
  }
  return a < 0 ? -a : a;
}

void enumerate_l1_ball(int rank, int axis, std::int64_t remaining, Element& cur,
                       std::vector<Element>& out) {
  if (axis == rank) {
    out.push_back(cur);
    return;
  }
  for (std::int64_t v = -remaining; v <= remaining; ++v) {
    cur[axis] = v;
    enumerate_l1_ball(rank, axis + 1, remaining - (v < 0 ? -v : v), cur, out);
  }
  cur[axis] = 0;
}

}  // namespace

Element::Element(std::initializer_list<std::int64_t> coords) {
  if (coords.size() > static_cast<std::size_t>(kMaxRank)) {
    throw DomainError("element has more than kMaxRank coordinates");
  }
  std::size_t i = 0;
  for (std::int64_t v : coords) c[i++] = v;
}

std::string to_string(const Element& e, int rank) {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < rank; ++i) {
    if (i) os << ',';
    os << e[i];
  }
  os << ')';
  return os.str();
}

Element add(const Element& a, const Element& b) {
  Element out;
  for (int i = 0; i < kMaxRank; ++i) out[i] = checked_add(a[i], b[i]);
  return out;
}

Element sub(const Element& a, const Element& b) { return add(a, negate(b)); }

Element negate(const Element& a) {
  Element out;
  for (int i = 0; i < kMaxRank; ++i) out[i] = -a[i];
  return out;
}

std::int64_t l1_norm(const Element& a) {
  std::int64_t s = 0;
  for (std::int64_t v : a.c) s = checked_add(s, checked_abs(v));
  return s;
}

// ---------------------------------------------------------------------------

FiniteSet::FiniteSet(std::vector<Element> elements) : elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

bool FiniteSet::contains(const Element& e) const {
  return std::binary_search(elements_.begin(), elements_.end(), e);
}

std::optional<std::size_t> FiniteSet::index_of(const Element& e) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), e);
  if (it == elements_.end() || *it != e) return std::nullopt;
  return static_cast<std::size_t>(it - elements_.begin());
}

// ---------------------------------------------------------------------------

struct Group::BfsMemo {
  std::mutex mu;
  std::unordered_map<Element, std::int64_t, ElementHash> length;
  std::vector<std::vector<Element>> spheres;  // spheres[r], each sorted
};

Group::Group(Kind kind, int rank, std::string id)
    : kind_(kind), rank_(rank), id_(std::move(id)), memo_(std::make_shared<BfsMemo>()) {
  for (int i = 0; i < (kind == Kind::kHeisenberg ? 2 : rank); ++i) {
    Element plus, minus;
    plus[i] = 1;
    minus[i] = -1;
    generators_.push_back(plus);
    generators_.push_back(minus);
  }
  std::sort(generators_.begin(), generators_.end());
  memo_->length.emplace(Element{}, 0);
  memo_->spheres.push_back({Element{}});
}

Group Group::lattice(int d) {
  if (d < 1 || d > kMaxRank) throw DomainError("lattice rank must be in [1, 4]");
  return Group(Kind::kLattice, d, "z" + std::to_string(d));
}

Group Group::heisenberg() { return Group(Kind::kHeisenberg, 3, "heis"); }

Group Group::from_id(std::string_view id) {
  if (id == "heis") return heisenberg();
  if (id.size() == 2 && id[0] == 'z' && id[1] >= '1' && id[1] <= '4') return lattice(id[1] - '0');
  throw DomainError("unknown group id '" + std::string(id) + "' (expected z1..z4 or heis)");
}

bool Group::is_valid(const Element& e) const {
  for (int i = rank_; i < kMaxRank; ++i) {
    if (e[i] != 0) return false;
  }
  return true;
}

Element Group::multiply(const Element& a, const Element& b) const {
  if (kind_ == Kind::kLattice) return add(a, b);
  Element out;
  out[0] = checked_add(a[0], b[0]);
  out[1] = checked_add(a[1], b[1]);
  out[2] = checked_add(checked_add(a[2], b[2]), checked_mul(a[0], b[1]));
  return out;
}

Element Group::inverse(const Element& a) const {
  if (kind_ == Kind::kLattice) return negate(a);
  Element out;
  out[0] = -a[0];
  out[1] = -a[1];
  out[2] = checked_add(-a[2], checked_mul(a[0], a[1]));
  return out;
}

void Group::expand_memo_to(std::int64_t radius) const {
  // Caller holds memo_->mu.
  auto& m = *memo_;
  while (static_cast<std::int64_t>(m.spheres.size()) - 1 < radius) {
    const std::int64_t next_len = static_cast<std::int64_t>(m.spheres.size());
    std::vector<Element> next;
    for (const Element& x : m.spheres.back()) {
      for (const Element& s : generators_) {
        Element y = multiply(s, x);
        if (m.length.emplace(y, next_len).second) next.push_back(y);
      }
    }
    if (m.length.size() > budget_) {
      for (const Element& y : next) m.length.erase(y);
      throw CapacityError("ball of radius " + std::to_string(next_len) + " in " + id_ +
                          " exceeds the element budget of " + std::to_string(budget_));
    }
    std::sort(next.begin(), next.end());
    m.spheres.push_back(std::move(next));
  }
}

std::int64_t Group::word_length(const Element& g) const {
  if (!is_valid(g)) throw DomainError("element " + to_string(g, kMaxRank) + " not in " + id_);
  if (kind_ == Kind::kLattice) return l1_norm(g);

  std::lock_guard lock(memo_->mu);
  auto& m = *memo_;
  // |a| + |b| <= |g|, so the sphere index to reach is at least that.
  const std::int64_t lower = l1_norm(Element{g[0], g[1]});
  while (true) {
    if (auto it = m.length.find(g); it != m.length.end()) return it->second;
    const std::int64_t radius = static_cast<std::int64_t>(m.spheres.size()) - 1;
    try {
      expand_memo_to(std::max(radius + 1, lower));
    } catch (const CapacityError&) {
      break;
    }
  }
  // Budget reached: meet in the middle. A geodesic g = h k with |k| = R
  // passes through the sphere of radius R.
  const std::int64_t radius = static_cast<std::int64_t>(m.spheres.size()) - 1;
  std::optional<std::int64_t> best;
  for (const Element& k : m.spheres.back()) {
    Element h = multiply(g, inverse(k));
    if (auto it = m.length.find(h); it != m.length.end()) {
      std::int64_t cand = radius + it->second;
      if (!best || cand < *best) best = cand;
    }
  }
  if (!best) {
    throw CapacityError("word length of " + to_string(g, rank_) + " exceeds twice the memoized radius " +
                        std::to_string(radius));
  }
  return *best;
}

std::int64_t Group::distance(const Element& a, const Element& b) const {
  if (kind_ == Kind::kLattice) return l1_norm(sub(a, b));
  return word_length(multiply(a, inverse(b)));
}

std::int64_t Group::lattice_ball_size(std::int64_t r) const {
  // sum_k 2^k C(d,k) C(r,k)
  std::int64_t total = 0;
  std::int64_t choose_d = 1;
  std::int64_t choose_r = 1;
  std::int64_t pow2 = 1;
  for (std::int64_t k = 0; k <= std::min<std::int64_t>(rank_, r); ++k) {
    if (k > 0) {
      choose_d = choose_d * (rank_ - k + 1) / k;
      choose_r = checked_mul(choose_r, r - k + 1) / k;
      pow2 *= 2;
    }
    total = checked_add(total, checked_mul(checked_mul(pow2, choose_d), choose_r));
  }
  return total;
}

std::size_t Group::ball_size(std::int64_t r) const {
  if (r < 0) throw DomainError("ball radius must be nonnegative");
  if (kind_ == Kind::kLattice) return static_cast<std::size_t>(lattice_ball_size(r));
  std::lock_guard lock(memo_->mu);
  expand_memo_to(r);
  std::size_t total = 0;
  for (std::int64_t i = 0; i <= r; ++i) total += memo_->spheres[static_cast<std::size_t>(i)].size();
  return total;
}

std::vector<Element> Group::ball_by_length(std::int64_t r) const {
  if (r < 0) throw DomainError("ball radius must be nonnegative");
  if (kind_ == Kind::kLattice) {
    if (static_cast<std::size_t>(lattice_ball_size(r)) > budget_) {
      throw CapacityError("ball of radius " + std::to_string(r) + " in " + id_ +
                          " exceeds the element budget of " + std::to_string(budget_));
    }
    std::vector<Element> out;
    Element cur;
    enumerate_l1_ball(rank_, 0, r, cur, out);  // lexicographic
    std::stable_sort(out.begin(), out.end(), [](const Element& a, const Element& b) {
      return l1_norm(a) < l1_norm(b);
    });
    return out;
  }
  std::lock_guard lock(memo_->mu);
  expand_memo_to(r);
  std::vector<Element> out;
  for (std::int64_t i = 0; i <= r; ++i) {
    const auto& sphere = memo_->spheres[static_cast<std::size_t>(i)];
    out.insert(out.end(), sphere.begin(), sphere.end());
  }
  return out;
}

FiniteSet Group::ball(std::int64_t r) const { return FiniteSet(ball_by_length(r)); }

// ---------------------------------------------------------------------------

namespace {

// Multi-source BFS over the lattice grid inside the bounding box of F grown
// by r. Geodesics of the l1 metric between points of that box stay inside
// it, so grid distances are exact word distances.
std::size_t lattice_boundary_by_bfs(const Group& group, const FiniteSet& f, std::int64_t r) {
  const int d = group.rank();
  Element lo = f[0], hi = f[0];
  for (const Element& e : f) {
    for (int i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], e[i]);
      hi[i] = std::max(hi[i], e[i]);
    }
  }
  std::array<std::int64_t, kMaxRank> ext{}, stride{};
  std::int64_t volume = 1;
  for (int i = 0; i < d; ++i) {
    lo[i] -= r;
    ext[static_cast<std::size_t>(i)] = hi[i] - lo[i] + 1 + r;
    stride[static_cast<std::size_t>(i)] = volume;
    volume *= ext[static_cast<std::size_t>(i)];
  }
  auto index_of = [&](const Element& p) {
    std::int64_t idx = 0;
    for (int i = 0; i < d; ++i) idx += (p[i] - lo[i]) * stride[static_cast<std::size_t>(i)];
    return idx;
  };
  std::vector<std::int32_t> dist(static_cast<std::size_t>(volume), -1);
  std::deque<std::int64_t> queue;
  for (const Element& e : f) {
    std::int64_t idx = index_of(e);
    dist[static_cast<std::size_t>(idx)] = 0;
    queue.push_back(idx);
  }
  std::size_t count = 0;
  while (!queue.empty()) {
    std::int64_t idx = queue.front();
    queue.pop_front();
    const std::int32_t dv = dist[static_cast<std::size_t>(idx)];
    if (dv >= r) continue;
    std::int64_t rem = idx;
    std::array<std::int64_t, kMaxRank> coord{};
    for (int i = d - 1; i >= 0; --i) {
      coord[static_cast<std::size_t>(i)] = rem / stride[static_cast<std::size_t>(i)];
      rem %= stride[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < d; ++i) {
      for (int step : {-1, 1}) {
        std::int64_t ci = coord[static_cast<std::size_t>(i)] + step;
        if (ci < 0 || ci >= ext[static_cast<std::size_t>(i)]) continue;
        std::int64_t nidx = idx + step * stride[static_cast<std::size_t>(i)];
        if (dist[static_cast<std::size_t>(nidx)] == -1) {
          dist[static_cast<std::size_t>(nidx)] = dv + 1;
          ++count;
          queue.push_back(nidx);
        }
      }
    }
  }
  return count;
}

std::size_t boundary_by_enumeration(const Group& group, const FiniteSet& f, std::int64_t r) {
  const auto ball = group.ball_by_length(r);
  std::unordered_set<Element, ElementHash> outside;
  for (const Element& x : f) {
    for (const Element& b : ball) {
      Element y = group.multiply(b, x);
      if (!f.contains(y)) outside.insert(y);
    }
  }
  return outside.size();
}

}  // namespace

std::size_t neighbourhood_boundary_size(const Group& group, const FiniteSet& f, std::int64_t r) {
  if (r < 0) throw DomainError("radius must be nonnegative");
  if (f.empty() || r == 0) return 0;
  if (group.is_abelian()) {
    double volume = 1.0;
    Element lo = f[0], hi = f[0];
    for (const Element& e : f) {
      for (int i = 0; i < group.rank(); ++i) {
        lo[i] = std::min(lo[i], e[i]);
        hi[i] = std::max(hi[i], e[i]);
      }
    }
    for (int i = 0; i < group.rank(); ++i) volume *= static_cast<double>(hi[i] - lo[i] + 1 + 2 * r);
    const double enumeration = static_cast<double>(f.size()) * static_cast<double>(group.ball_size(r));
    if (volume <= 6.4e7 && volume <= 4.0 * enumeration) return lattice_boundary_by_bfs(group, f, r);
  }
  return boundary_by_enumeration(group, f, r);
}

Rational folner_defect(const Group& group, const FiniteSet& f, std::int64_t r) {
  if (f.empty()) throw DomainError("Folner defect of an empty set");
  return Rational(static_cast<std::int64_t>(neighbourhood_boundary_size(group, f, r)),
                  static_cast<std::int64_t>(f.size()));
}

bool is_r_connected(const Group& group, const FiniteSet& e, std::int64_t r) {
  if (e.size() <= 1) return true;
  if (r <= 0) return false;
  UnionFind uf(e.size());
  std::size_t components = e.size();
  const std::size_t ball_size = group.ball_size(r);
  if (ball_size <= e.size()) {
    const auto ball = group.ball_by_length(r);
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (const Element& b : ball) {
        if (auto j = e.index_of(group.multiply(b, e[i])); j && uf.unite(i, *j)) --components;
      }
    }
  } else {
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (std::size_t j = i + 1; j < e.size(); ++j) {
        if (group.distance(e[i], e[j]) <= r && uf.unite(i, j)) --components;
      }
    }
  }
  return components == 1;
}

FiniteSet lattice_box(const Group& group, std::span<const std::int64_t> sides, const Element& lo) {
  if (!group.is_abelian()) throw DomainError("lattice_box requires a lattice group");
  if (static_cast<int>(sides.size()) != group.rank()) throw DomainError("box rank mismatch");
  std::vector<Element> out;
  std::int64_t total = 1;
  for (std::int64_t s : sides) {
    if (s < 0) throw DomainError("negative box side");
    total = checked_mul(total, s);
  }
  out.reserve(static_cast<std::size_t>(total));
  for (std::int64_t idx = 0; idx < total; ++idx) {
    Element p = lo;
    std::int64_t rem = idx;
    for (int i = group.rank() - 1; i >= 0; --i) {
      p[i] += rem % sides[static_cast<std::size_t>(i)];
      rem /= sides[static_cast<std::size_t>(i)];
    }
    out.push_back(p);
  }
  return FiniteSet(std::move(out));
}

FiniteSet heisenberg_box(std::int64_t n) {
  std::vector<Element> out;
  for (std::int64_t a = 0; a < n; ++a)
    for (std::int64_t b = 0; b < n; ++b)
      for (std::int64_t c = 0; c < n * n; ++c) out.push_back(Element{a, b, c});
  return FiniteSet(std::move(out));
}

FiniteSet connected_folner(const Group& group, double eps, std::int64_t r, std::size_t max_elements) {
  if (!(eps > 0.0)) throw DomainError("connected_folner requires eps > 0");
  if (r < 1) throw DomainError("connected_folner requires r >= 1");
  auto passes = [&](const FiniteSet& f) {
    return folner_defect(group, f, r).to_double() <= eps && is_r_connected(group, f, 1);
  };
  auto box_of = [&](std::int64_t n) {
    if (group.is_abelian()) {
      std::vector<std::int64_t> sides(static_cast<std::size_t>(group.rank()), n);
      return lattice_box(group, sides);
    }
    return heisenberg_box(n);
  };
  auto box_volume = [&](std::int64_t n) {
    double v = group.is_abelian() ? std::pow(static_cast<double>(n), group.rank())
                                  : std::pow(static_cast<double>(n), 4);
    return v;
  };

  if (group.is_abelian()) {
    // Box defects are nonincreasing in the side: double, then bisect.
    std::int64_t hi = 1;
    while (true) {
      if (box_volume(hi) > static_cast<double>(max_elements)) {
        throw CapacityError("no (" + std::to_string(eps) + "," + std::to_string(r) +
                            ")-Folner box within the element budget");
      }
      if (passes(box_of(hi))) break;
      hi *= 2;
    }
    std::int64_t lo = hi / 2;  // fails (or 0)
    while (hi - lo > 1) {
      std::int64_t mid = (lo + hi) / 2;
      if (passes(box_of(mid))) hi = mid;
      else lo = mid;
    }
    return box_of(hi);
  }
  for (std::int64_t n = 1;; ++n) {
    if (box_volume(n) > static_cast<double>(max_elements)) {
      throw CapacityError("no (" + std::to_string(eps) + "," + std::to_string(r) +
                          ")-Folner box within the element budget");
    }
    FiniteSet f = box_of(n);
    if (passes(f)) return f;
  }
}

double growth_floor(const Group& group, std::int64_t r_max) {
  if (r_max < 1) throw DomainError("growth_floor requires r_max >= 1");
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t r = 1; r <= r_max; ++r) {
    best = std::min(best, static_cast<double>(group.ball_size(r)) / static_cast<double>(r * r));
  }
  return best;
}

double log_growth_constant(const Group& group, std::int64_t n_max) {
  double c = 0.0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    c = std::max(c, std::log(static_cast<double>(group.ball_size(n))) / static_cast<double>(n));
  }
  return c;
}

}  // namespace orbitbench
