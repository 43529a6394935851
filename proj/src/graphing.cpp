#include "orbitbench/graphing.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <unordered_set>

#include "orbitbench/entropy.hpp"
#include "orbitbench/errors.hpp"
#include "orbitbench/skeleton.hpp"
#include "orbitbench/union_find.hpp"

namespace orbitbench {

PositionMask event_mask(const OrbitSample& s, const LocalEvent& u) {
  PositionMask m(s.window.size(), 0);
  if (u.reach() > s.window.min_pad())
    throw DomainError("event_mask: event reach " + std::to_string(u.reach()) + " exceeds the padding");
  for (const auto& p : s.window.core_positions())
    if (u.holds(s, p)) m[s.window.index(p)] = 1;
  return m;
}

double mask_measure(const Window& w, const PositionMask& m) {
  std::size_t n = 0;
  for (const auto& p : w.core_positions())
    if (m[w.index(p)]) ++n;
  return static_cast<double>(n) / static_cast<double>(w.core_size());
}

Graphing::Graphing(SamplePtr s) : sample(std::move(s)), group(Group::lattice(sample->rank())) {}

void Graphing::add_edge(const Element& x, const Element& g) {
  const Element y = add(x, g);
  if (!window().in_core(x)) throw DomainError("graphing: " + to_string(x, window().rank) + " is not a core position");
  if (!window().in_window(y)) throw DomainError("graphing: edge leaves the window at " + to_string(x, window().rank));
  support[g].push_back(window().index(x));
  if (window().in_core(y)) support[negate(g)].push_back(window().index(y));
}

void Graphing::add_vertex(const Element& x) {
  if (!window().in_core(x)) throw DomainError("graphing: " + to_string(x, window().rank) + " is not a core position");
  support[Element{}].push_back(window().index(x));
}

void Graphing::merge(const Graphing& other) {
  for (const auto& [g, a] : other.support) {
    auto& dst = support[g];
    dst.insert(dst.end(), a.begin(), a.end());
  }
}

void Graphing::normalize() {
  for (auto it = support.begin(); it != support.end();) {
    auto& a = it->second;
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    it = a.empty() ? support.erase(it) : std::next(it);
  }
}

bool Graphing::contains(const Element& g, std::size_t index) const {
  auto it = support.find(g);
  return it != support.end() && std::binary_search(it->second.begin(), it->second.end(), index);
}

std::vector<std::size_t> Graphing::vertices() const {
  std::vector<std::size_t> out;
  for (const auto& [g, a] : support) out.insert(out.end(), a.begin(), a.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t Graphing::edge_count() const {
  std::size_t n = 0;
  for (const auto& [g, a] : support)
    if (g != Element{}) n += a.size();
  return n / 2;
}

GraphingReport validate(const Graphing& gr) {
  GraphingReport rep;
  const Window& w = gr.window();
  auto flag = [&](const Element& g, const Element& p, const char* what) {
    rep.valid = false;
    ++rep.violation_count;
    if (rep.violations.size() < 8) rep.violations.push_back({g, p, what});
  };
  for (const auto& [g, a] : gr.support) {
    if (a.empty()) continue;
    ++rep.nonempty;
    rep.max_length = std::max(rep.max_length, gr.group.word_length(g));
    const Element inv = negate(g);
    for (std::size_t idx : a) {
      const Element x = w.position(idx);
      if (!w.in_core(x)) {
        flag(g, x, "position outside the core");
        continue;
      }
      if (g == Element{}) continue;
      const Element y = add(x, g);
      if (!w.in_window(y))
        flag(g, x, "edge leaves the window");
      else if (w.in_core(y) && !gr.contains(inv, w.index(y)))
        flag(g, x, "symmetry: T^g x missing from A_{g^-1}");
    }
  }
  rep.vertex_count = gr.vertices().size();
  rep.vertex_measure = static_cast<double>(rep.vertex_count) / static_cast<double>(w.core_size());
  return rep;
}

void require_valid(const Graphing& gr) {
  const auto rep = validate(gr);
  if (rep.valid) return;
  const auto& v = rep.violations.front();
  throw InvariantViolation("graphing: " + v.what + " at g = " + to_string(v.g, gr.group.rank()) + ", x = " +
                           to_string(v.position, gr.group.rank()) + " (" + std::to_string(rep.violation_count) +
                           " violations)");
}

double cost(const Graphing& gr) {
  double total = 0;
  for (const auto& [g, a] : gr.support)
    total += static_cast<double>(gr.group.word_length(g)) * static_cast<double>(a.size());
  return total / static_cast<double>(gr.window().core_size());
}

std::size_t WindowRelation::classes_among(const std::vector<std::size_t>& indices) const {
  std::unordered_set<std::size_t> seen;
  for (std::size_t i : indices) seen.insert(labels[i]);
  return seen.size();
}

WindowRelation generated_relation(const Graphing& gr) {
  const Window& w = gr.window();
  UnionFind uf(w.size());
  for (const auto& [g, a] : gr.support) {
    if (g == Element{}) continue;
    for (std::size_t idx : a) {
      const Element y = add(w.position(idx), g);
      if (w.in_window(y)) uf.unite(idx, w.index(y));
    }
  }
  return WindowRelation{uf.canonical_labels()};
}

ConnectivityReport orbit_wise_connectivity(const Graphing& gr, std::int64_t boundary) {
  ConnectivityReport rep;
  const Window& w = gr.window();
  const auto rel = generated_relation(gr);
  std::unordered_set<std::size_t> labels;
  for (std::size_t idx : gr.vertices()) {
    const Element p = w.position(idx);
    bool inner = true;
    for (int i = 0; i < w.rank; ++i)
      if (p[i] < boundary || p[i] >= w.core[static_cast<std::size_t>(i)] - boundary) inner = false;
    if (!inner) {
      ++rep.excluded;
      continue;
    }
    ++rep.checked;
    labels.insert(rel.labels[idx]);
  }
  rep.classes = labels.size();
  rep.connected = labels.size() <= 1;
  return rep;
}

bool orbit_wise_connected(const Graphing& gr, std::int64_t boundary) {
  return orbit_wise_connectivity(gr, boundary).connected;
}

std::size_t RokhlinTiling::tile_at(const Element& p) const {
  std::size_t idx = 0;
  for (int i = 0; i < window.rank; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const auto per_axis = static_cast<std::size_t>((window.core[k] + side - 1) / side);
    idx = idx * per_axis + static_cast<std::size_t>(p[i] / side);
  }
  return idx;
}

std::size_t RokhlinTiling::full_tiles() const {
  return static_cast<std::size_t>(std::count_if(tiles.begin(), tiles.end(), [&](const Tile& t) {
    for (int i = 0; i < window.rank; ++i)
      if (t.sides[static_cast<std::size_t>(i)] != side) return false;
    return true;
  }));
}

std::int64_t rokhlin_side(int d, double eps, std::int64_t r) {
  if (eps <= 0 || r < 1) throw DomainError("rokhlin_side: eps and r must be positive");
  for (std::int64_t n = 1;; ++n) {
    const double nd = std::pow(static_cast<double>(n), d);
    if ((std::pow(static_cast<double>(n + 2 * r), d) - nd) / nd <= eps) return n;
  }
}

RokhlinTiling cube_tiling(const Window& w, std::int64_t side, std::int64_t r) {
  if (side < 1) throw DomainError("cube_tiling: side must be positive");
  RokhlinTiling t;
  t.window = w;
  t.side = side;
  t.r = r;
  const Group group = Group::lattice(w.rank);
  std::array<std::int64_t, kMaxRank> counts{};
  std::size_t total = 1;
  for (int i = 0; i < w.rank; ++i) {
    const auto k = static_cast<std::size_t>(i);
    counts[k] = (w.core[k] + side - 1) / side;
    total *= static_cast<std::size_t>(counts[k]);
  }
  std::map<std::array<std::int64_t, kMaxRank>, bool> folner;
  t.tiles.reserve(total);
  for (std::size_t n = 0; n < total; ++n) {
    Tile tile;
    std::size_t rest = n;
    for (int i = w.rank - 1; i >= 0; --i) {
      const auto k = static_cast<std::size_t>(i);
      const auto c = static_cast<std::int64_t>(rest % static_cast<std::size_t>(counts[k]));
      rest /= static_cast<std::size_t>(counts[k]);
      tile.lo[i] = c * side;
      tile.sides[k] = std::min(side, w.core[k] - c * side);
    }
    auto it = folner.find(tile.sides);
    if (it == folner.end()) {
      const auto box = lattice_box(group, std::span<const std::int64_t>(tile.sides.data(), static_cast<std::size_t>(w.rank)));
      it = folner.emplace(tile.sides, folner_defect(group, box, r) <= Rational(1)).first;
    }
    tile.folner = it->second;
    t.tiles.push_back(tile);
  }
  return t;
}

RokhlinTiling rokhlin_tiling(const Window& w, double eps, std::int64_t r) {
  const std::int64_t n = rokhlin_side(w.rank, eps, r);
  for (int i = 0; i < w.rank; ++i)
    if (n > w.core[static_cast<std::size_t>(i)])
      throw CapacityError("rokhlin_tiling: side " + std::to_string(n) + " exceeds the core");
  return cube_tiling(w, n, r);
}

namespace {

// l1 distance to the nearest source over the core, -1 if unreachable.
std::vector<std::int64_t> core_distance(const Window& w, const std::vector<std::size_t>& sources) {
  std::vector<std::int64_t> dist(w.size(), -1);
  std::deque<std::size_t> queue;
  for (std::size_t s : sources) {
    if (dist[s] < 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    const Element p = w.position(i);
    for (int a = 0; a < w.rank; ++a)
      for (int step : {-1, 1}) {
        Element q = p;
        q[a] += step;
        if (!w.in_core(q)) continue;
        const std::size_t j = w.index(q);
        if (dist[j] >= 0) continue;
        dist[j] = dist[i] + 1;
        queue.push_back(j);
      }
  }
  return dist;
}

}  // namespace

LowCostResult low_cost_graphing(const RokhlinTiling& tiling, SamplePtr sample, const PositionMask& u, bool check) {
  const Window& w = sample->window;
  if (w.rank != tiling.window.rank || w.core != tiling.window.core)
    throw DomainError("low_cost_graphing: tiling and sample windows differ");
  LowCostResult res;
  res.graphing = Graphing(sample);
  const Group& group = res.graphing.group;
  const std::int64_t r = tiling.r;
  std::map<std::array<std::int64_t, kMaxRank>, SkeletonGraph> parents;

  for (const auto& tile : tiling.tiles) {
    const std::span<const std::int64_t> sides(tile.sides.data(), static_cast<std::size_t>(w.rank));
    std::vector<Element> b;
    for (const auto& g : lattice_box(group, sides))
      if (u[w.index(add(tile.lo, g))]) b.push_back(g);
    if (b.empty()) {
      ++res.tiles_skipped;
      continue;
    }
    ++res.tiles_used;
    auto it = parents.find(tile.sides);
    if (it == parents.end()) it = parents.emplace(tile.sides, build_skeleton(group, lattice_box(group, sides), r)).first;
    // build_skeleton gives a (2r)-skeleton, so this is a (4r)-skeleton of B_y.
    const SkeletonGraph sk = subset_skeleton(group, it->second, FiniteSet(std::move(b)), 2 * r);
    for (const auto& v : sk.vertices) res.graphing.add_vertex(add(tile.lo, v));
    for (const auto& [i, j] : sk.edges)
      res.graphing.add_edge(add(tile.lo, sk.vertices[i]), sub(sk.vertices[j], sk.vertices[i]));
  }
  res.graphing.normalize();
  res.cost = cost(res.graphing);
  if (!check) return res;

  res.checked = true;
  require_valid(res.graphing);
  const auto verts = res.graphing.vertices();
  for (std::size_t idx : verts)
    if (!u[idx]) res.vert_in_u = false;

  const auto rel = generated_relation(res.graphing);
  std::unordered_map<std::size_t, std::size_t> tile_of_label, label_of_tile;
  for (std::size_t idx : verts) {
    const std::size_t t = tiling.tile_at(w.position(idx));
    const std::size_t l = rel.labels[idx];
    auto [a, fresh_a] = tile_of_label.emplace(l, t);
    auto [b, fresh_b] = label_of_tile.emplace(t, l);
    if (a->second != t || b->second != l) res.classes_match = false;
  }

  const auto dist = core_distance(w, verts);
  for (const auto& p : w.core_positions()) {
    const std::size_t idx = w.index(p);
    if (!u[idx] || !tiling.tiles[tiling.tile_at(p)].folner) continue;
    if (dist[idx] < 0) {
      res.dense = false;
      res.density_radius = std::numeric_limits<std::int64_t>::max();
      continue;
    }
    res.density_radius = std::max(res.density_radius, dist[idx]);
    if (dist[idx] > 4 * r) res.dense = false;
  }
  return res;
}

MultiscaleResult multiscale_graphing(SamplePtr sample, const PositionMask& u, double eps) {
  if (eps <= 0) throw DomainError("multiscale_graphing: eps must be positive");
  const Window& w = sample->window;
  MultiscaleResult res;
  res.graphing = Graphing(sample);
  std::int64_t max_side = 0;
  for (int i = 0; i < w.rank; ++i) max_side = std::max(max_side, w.core[static_cast<std::size_t>(i)]);
  if (mask_measure(w, u) == 0) return res;

  for (std::int64_t r : {2, 4, 8}) {
    try {
      const auto lc = low_cost_graphing(rokhlin_tiling(w, 1.0, r), sample, u, false);
      res.c_impl = std::max(res.c_impl, lc.cost * static_cast<double>(r));
    } catch (const CapacityError&) {
    }
  }
  int m = 1;
  while (std::ldexp(1.0, m) <= 2.0 * res.c_impl / eps) ++m;

  const Group& group = res.graphing.group;
  for (;; ++m) {
    std::int64_t r = std::int64_t{1} << m;
    if (r > max_side) throw CapacityError("multiscale_graphing: no scale 2^m <= core side meets the cost target");
    ++res.attempts;
    std::int64_t side = 1;
    while (side < rokhlin_side(w.rank, 1.0, r)) side *= 2;

    res.scales.clear();
    auto base = low_cost_graphing(cube_tiling(w, side, r), sample, u, true);
    if (!base.vert_in_u || !base.classes_match)
      throw InvariantViolation("multiscale_graphing: base scale breaks the low-cost graphing contract");
    Graphing total = std::move(base.graphing);
    res.scales.push_back({r, side, base.cost, total.vertices().size()});

    while (side < max_side) {
      side *= 2;
      r *= 2;
      const auto rel = generated_relation(total);
      const auto tiling = cube_tiling(w, side, r);
      std::map<std::size_t, std::vector<Element>> reps;
      for (std::size_t idx : total.vertices())
        if (rel.labels[idx] == idx) reps[tiling.tile_at(w.position(idx))].push_back(w.position(idx));
      Graphing bridge(sample);
      for (auto& [t, pts] : reps) {
        if (pts.size() < 2) continue;
        const FiniteSet set(std::move(pts));
        for (const auto& e : metric_mst(group, set)) bridge.add_edge(set[e.u], sub(set[e.v], set[e.u]));
      }
      bridge.normalize();
      const double c = cost(bridge);
      total.merge(bridge);
      total.normalize();
      res.scales.push_back({r, side, c, bridge.vertices().size()});
    }
    res.m = m;
    res.graphing = std::move(total);
    res.cost = cost(res.graphing);
    if (res.cost < eps || (std::int64_t{2} << m) > max_side) break;
  }

  require_valid(res.graphing);
  const auto verts = res.graphing.vertices();
  res.vertex_measure = static_cast<double>(verts.size()) / static_cast<double>(w.core_size());
  res.vert_in_u = std::all_of(verts.begin(), verts.end(), [&](std::size_t i) { return u[i] != 0; });
  res.connectivity = orbit_wise_connectivity(res.graphing);
  return res;
}

EdgeValues edge_values(const Graphing& gr, const Cocycle& alpha) {
  EdgeValues out;
  const Window& w = gr.window();
  for (const auto& [g, a] : gr.support) {
    auto& vals = out[g];
    vals.reserve(a.size());
    for (std::size_t idx : a) {
      const Element x = w.position(idx);
      auto v = alpha.evaluate(g, x);
      if (!v)
        throw DomainError("edge_values: cocycle undefined at g = " + to_string(g, gr.group.rank()) + ", x = " +
                          to_string(x, w.rank));
      vals.push_back(*v);
    }
  }
  return out;
}

std::vector<Element> geodesic_word(const Group& group, const Element& g) {
  auto gens = group.generators();
  std::sort(gens.begin(), gens.end());
  std::vector<Element> word;
  Element h = g;
  std::int64_t len = group.word_length(h);
  while (len > 0) {
    bool stepped = false;
    for (const auto& s : gens) {
      const Element next = group.multiply(h, group.inverse(s));
      if (group.word_length(next) == len - 1) {
        word.push_back(s);
        h = next;
        --len;
        stepped = true;
        break;
      }
    }
    if (!stepped) throw InvariantViolation("geodesic_word: no geodesic step from " + to_string(h, group.rank()));
  }
  return word;
}

namespace {

const Element* lookup(const Graphing& gr, const EdgeValues& values, const Element& g, std::size_t idx) {
  auto it = gr.support.find(g);
  if (it == gr.support.end()) return nullptr;
  auto pos = std::lower_bound(it->second.begin(), it->second.end(), idx);
  if (pos == it->second.end() || *pos != idx) return nullptr;
  return &values.at(g)[static_cast<std::size_t>(pos - it->second.begin())];
}

}  // namespace

NnEncoding nn_encode(const Graphing& gr, const Cocycle& alpha) {
  require_valid(gr);
  const Window& w = gr.window();
  const Group& group = gr.group;
  NnEncoding enc;
  enc.theta = Graphing(gr.sample);
  std::map<Element, std::vector<Element>> words;
  auto word_for = [&](const Element& g) -> const std::vector<Element>& {
    auto it = words.find(g);
    if (it != words.end()) return it->second;
    const Element inv = group.inverse(g);
    std::vector<Element> word;
    if (g < inv) {
      word = geodesic_word(group, g);
    } else {
      for (const auto& s : geodesic_word(group, inv)) word.insert(word.begin(), group.inverse(s));
    }
    return words.emplace(g, std::move(word)).first->second;
  };

  for (const auto& [g, a] : gr.support) {
    if (g == Element{}) {
      for (std::size_t idx : a) enc.theta.add_vertex(w.position(idx));
      continue;
    }
    if (!(g < group.inverse(g))) continue;
    const auto& word = word_for(g);
    for (std::size_t idx : a) {
      Element p = w.position(idx);
      for (const auto& s : word) {
        enc.theta.add_edge(p, s);
        p = add(p, s);
      }
    }
  }
  enc.theta.normalize();
  require_valid(enc.theta);
  enc.cost_gamma = cost(gr);
  enc.cost_theta = cost(enc.theta);
  if (enc.cost_theta > enc.cost_gamma + 1e-12)
    throw InvariantViolation("nn_encode: cost " + std::to_string(enc.cost_theta) + " exceeds " +
                             std::to_string(enc.cost_gamma));
  enc.values = edge_values(enc.theta, alpha);

  const Group& h = alpha.target();
  for (const auto& [g, a] : gr.support) {
    if (g == Element{}) continue;
    const auto& word = word_for(g);
    for (std::size_t idx : a) {
      Element p = w.position(idx);
      const auto direct = alpha.evaluate(g, p);
      Element acc;
      for (const auto& s : word) {
        const Element* v = lookup(enc.theta, enc.values, s, w.index(p));
        if (v == nullptr) throw InvariantViolation("nn_encode: path edge missing from theta");
        acc = h.multiply(*v, acc);
        p = add(p, s);
      }
      if (!direct || *direct != acc)
        throw InvariantViolation("nn_encode: product reconstruction fails at g = " + to_string(g, group.rank()));
      ++enc.reconstructed;
    }
  }
  return enc;
}

EdgeIndex::EdgeIndex(const Graphing& gr, const EdgeValues& values, Group target)
    : gr_(&gr), target_(std::move(target)) {
  const Window& w = gr.window();
  for (const auto& [g, a] : gr.support) {
    if (g == Element{}) continue;
    const auto& vals = values.at(g);
    for (std::size_t i = 0; i < a.size(); ++i) adj_[a[i]].emplace_back(w.index(add(w.position(a[i]), g)), vals[i]);
  }
}

std::optional<Element> EdgeIndex::reconstruct(const Element& x, const Element& g, BfsOrder order) const {
  const Window& w = gr_->window();
  const Element y = add(x, g);
  if (!w.in_core(x) || !w.in_core(y)) return std::nullopt;
  const std::size_t src = w.index(x), dst = w.index(y);
  if (src == dst) {
    if (adj_.count(src) || gr_->contains(Element{}, src)) return Element{};
    return std::nullopt;
  }
  std::unordered_map<std::size_t, std::pair<std::size_t, const Element*>> parent;
  parent.emplace(src, std::make_pair(src, nullptr));
  std::deque<std::size_t> queue{src};
  while (!queue.empty() && !parent.count(dst)) {
    const std::size_t v = queue.front();
    queue.pop_front();
    auto it = adj_.find(v);
    if (it == adj_.end()) continue;
    const auto& nb = it->second;
    auto visit = [&](const std::pair<std::size_t, Element>& e) {
      if (parent.emplace(e.first, std::make_pair(v, &e.second)).second) queue.push_back(e.first);
    };
    if (order == BfsOrder::kForward)
      std::for_each(nb.begin(), nb.end(), visit);
    else
      std::for_each(nb.rbegin(), nb.rend(), visit);
  }
  if (!parent.count(dst)) return std::nullopt;
  std::vector<const Element*> path;  // last edge first
  for (std::size_t v = dst; v != src; v = parent.at(v).first) path.push_back(parent.at(v).second);
  Element acc;
  for (auto it = path.rbegin(); it != path.rend(); ++it) acc = target_.multiply(**it, acc);
  return acc;
}

std::optional<Element> reconstruct_cocycle(const Graphing& gr, const EdgeValues& values, const Group& target,
                                           const Element& x, const Element& g, BfsOrder order) {
  return EdgeIndex(gr, values, target).reconstruct(x, g, order);
}

LabelField generated_field(const Graphing& gr, const EdgeValues& values) {
  const Window& w = gr.window();
  std::unordered_map<std::size_t, std::vector<std::int64_t>> keys;
  std::int64_t gi = 0;
  for (const auto& [g, a] : gr.support) {
    const auto& vals = values.at(g);
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto& k = keys[a[i]];
      k.push_back(gi);
      k.insert(k.end(), vals[i].c.begin(), vals[i].c.end());
    }
    ++gi;
  }
  LabelField f;
  f.rank = w.rank;
  for (int i = 0; i < w.rank; ++i) f.extent[static_cast<std::size_t>(i)] = w.core[static_cast<std::size_t>(i)];
  f.labels.assign(w.core_size(), 0);
  std::map<std::vector<std::int64_t>, std::uint32_t> ids;
  std::size_t n = 0;
  for (const auto& p : w.core_positions()) {
    auto it = keys.find(w.index(p));
    if (it != keys.end()) {
      auto [id, fresh] = ids.emplace(it->second, static_cast<std::uint32_t>(ids.size() + 1));
      f.labels[n] = id->second;
    }
    ++n;
  }
  return f;
}

GraphingEntropyBound graphing_entropy_bound(const Graphing& gr, const EdgeValues& values, double eps,
                                            double tolerance) {
  GraphingEntropyBound out;
  const auto n = static_cast<double>(gr.window().core_size());
  for (const auto& [g, a] : gr.support) {
    const double mu = static_cast<double>(a.size()) / n;
    std::map<Element, std::uint64_t> counts;
    for (const auto& v : values.at(g)) ++counts[v];
    std::vector<std::uint64_t> c;
    for (const auto& [v, k] : counts) c.push_back(k);
    out.bound_sets += binary_entropy(mu) + mu * shannon_counts(c);
  }
  out.furman_c = 1.1 * log_growth_constant(gr.group);
  const double vmu = static_cast<double>(gr.vertices().size()) / n;
  out.bound_cost = binary_entropy(vmu) + furman_constant(out.furman_c, eps) * cost(gr) + eps;

  const LabelField field = generated_field(gr, values);
  out.alphabet = field.distinct();
  std::vector<std::int64_t> sides;
  const std::int64_t top = field.rank == 1 ? 16 : 8;
  for (std::int64_t s = 1; s <= top; ++s) sides.push_back(s);
  try {
    const auto est = block_entropy(field, sides);
    out.estimated = true;
    out.estimate = est.value;
    out.side_used = est.side_used;
    out.within_bounds = est.value <= out.bound_sets + tolerance && est.value <= out.bound_cost + tolerance;
  } catch (const DegenerateInputError&) {
    out.estimated = false;
  }
  return out;
}

}  // namespace orbitbench
