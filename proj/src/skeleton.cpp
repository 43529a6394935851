#include "orbitbench/skeleton.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>

#include "orbitbench/errors.hpp"
#include "orbitbench/union_find.hpp"

namespace orbitbench {

namespace {

// B(r) ordered by length, or nullopt if it does not fit the budget or would
// cost more than pairwise work.
std::optional<std::vector<Element>> ball_if_cheaper(const Group& group, std::int64_t r,
                                                    std::size_t pairwise_cost, std::size_t per_point) {
  if (group.kind() == Group::Kind::kLattice) {
    const std::size_t size = group.ball_size(r);
    if (size * per_point > pairwise_cost) return std::nullopt;
  }
  try {
    auto b = group.ball_by_length(r);
    if (b.size() * per_point > pairwise_cost) return std::nullopt;
    return b;
  } catch (const CapacityError&) {
    return std::nullopt;
  }
}

}  // namespace

FiniteSet separated_net(const Group& group, const FiniteSet& points, std::int64_t s) {
  if (points.empty()) throw DomainError("separated_net: empty point set");
  if (s < 0) throw DomainError("separated_net: negative separation");
  std::vector<Element> order;
  order.reserve(points.size());
  if (points.contains(group.identity())) order.push_back(group.identity());
  for (const auto& p : points)
    if (p != group.identity()) order.push_back(p);

  std::vector<Element> net;
  auto ball = ball_if_cheaper(group, s, points.size() * points.size(), points.size() / 4 + 1);
  if (ball) {
    std::unordered_set<Element, ElementHash> covered;
    for (const auto& p : order) {
      if (covered.count(p)) continue;
      net.push_back(p);
      for (const auto& b : *ball) covered.insert(group.multiply(b, p));
    }
  } else {
    for (const auto& p : order) {
      bool far = true;
      for (const auto& q : net)
        if (group.distance(p, q) <= s) {
          far = false;
          break;
        }
      if (far) net.push_back(p);
    }
  }
  return FiniteSet(std::move(net));
}

std::vector<WeightedEdge> proximity_edges(const Group& group, const FiniteSet& v, std::int64_t radius) {
  std::vector<WeightedEdge> out;
  const std::size_t n = v.size();
  auto ball = ball_if_cheaper(group, radius, n * n / 2 + 1, n);
  if (ball) {
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& b : *ball) {
        if (b == group.identity()) continue;
        auto j = v.index_of(group.multiply(b, v[i]));
        if (j && *j > i) out.push_back({i, *j, group.word_length(b)});
      }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto d = group.distance(v[i], v[j]);
        if (d <= radius) out.push_back({i, j, d});
      }
  }
  std::sort(out.begin(), out.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return std::tie(a.w, a.u, a.v) < std::tie(b.w, b.u, b.v);
  });
  return out;
}

std::vector<WeightedEdge> kruskal(std::size_t n, std::vector<WeightedEdge> edges) {
  std::stable_sort(edges.begin(), edges.end(),
                   [](const WeightedEdge& a, const WeightedEdge& b) { return a.w < b.w; });
  UnionFind uf(n);
  std::vector<WeightedEdge> tree;
  for (const auto& e : edges) {
    if (uf.unite(e.u, e.v)) tree.push_back(e);
    if (tree.size() + 1 == n) break;
  }
  return tree;
}

std::vector<WeightedEdge> metric_mst(const Group& group, const FiniteSet& v) {
  const std::size_t n = v.size();
  std::vector<WeightedEdge> tree;
  if (n <= 1) return tree;
  constexpr auto kInf = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> best(n, kInf);
  std::vector<std::size_t> from(n, 0);
  std::vector<char> in(n, 0);
  std::size_t cur = 0;
  in[0] = 1;
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t next = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (in[j]) continue;
      const auto d = group.distance(v[cur], v[j]);
      if (d < best[j]) {
        best[j] = d;
        from[j] = cur;
      }
      if (next == n || best[j] < best[next]) next = j;
    }
    in[next] = 1;
    tree.push_back({std::min(from[next], next), std::max(from[next], next), best[next]});
    cur = next;
  }
  return tree;
}

SkeletonGraph build_skeleton(const Group& group, const FiniteSet& f, std::int64_t r) {
  if (f.empty()) throw DomainError("build_skeleton: empty set");
  if (r < 1) throw DomainError("build_skeleton: r must be positive");
  if (!is_r_connected(group, f, 1)) throw DomainError("build_skeleton: input is not 1-connected");
  SkeletonGraph sk;
  sk.vertices = separated_net(group, f, 2 * r);
  auto tree = kruskal(sk.vertices.size(), proximity_edges(group, sk.vertices, 5 * r));
  if (tree.size() + 1 != sk.vertices.size())
    throw InvariantViolation("build_skeleton: 5r-proximity graph of the net is disconnected");
  for (const auto& e : tree) sk.edges.emplace_back(e.u, e.v);
  std::sort(sk.edges.begin(), sk.edges.end());
  return sk;
}

SkeletonGraph subset_skeleton(const Group& group, const SkeletonGraph& parent, const FiniteSet& y,
                              std::int64_t r) {
  if (y.empty()) throw DomainError("subset_skeleton: empty subset");
  if (r < 1) throw DomainError("subset_skeleton: r must be positive");
  if (!is_r_dense(group, parent.vertices, y, r))
    throw DomainError("subset_skeleton: parent vertices are not r-dense over the subset");

  // W = parent vertices within r of Y, each with its nearest point of Y.
  std::vector<Element> w;
  std::vector<Element> rep;
  auto ball = ball_if_cheaper(group, r, parent.vertices.size() * y.size(), parent.vertices.size());
  for (const auto& p : parent.vertices) {
    std::optional<Element> found;
    if (ball) {
      for (const auto& b : *ball) {
        Element q = group.multiply(b, p);
        if (y.contains(q)) {
          found = q;
          break;
        }
      }
    } else {
      std::int64_t best = r + 1;
      for (const auto& q : y) {
        const auto d = group.distance(q, p);
        if (d < best) {
          best = d;
          found = q;
        }
      }
    }
    if (found) {
      w.push_back(p);
      rep.push_back(*found);
    }
  }
  FiniteSet wset(w);  // already canonical: parent vertices are sorted
  auto tree = metric_mst(group, wset);

  SkeletonGraph out;
  out.vertices = FiniteSet(rep);
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& e : tree) {
    auto a = *out.vertices.index_of(rep[e.u]);
    auto b = *out.vertices.index_of(rep[e.v]);
    if (a == b) continue;
    edges.emplace(std::min(a, b), std::max(a, b));
  }
  out.edges.assign(edges.begin(), edges.end());

  const std::int64_t bound = 2 * skeleton_weight(group, parent) +
                             2 * r * static_cast<std::int64_t>(parent.vertices.size());
  const std::int64_t weight = skeleton_weight(group, out);
  if (weight > bound)
    throw InvariantViolation("subset_skeleton: weight " + std::to_string(weight) + " exceeds bound " +
                             std::to_string(bound));
  return out;
}

std::int64_t skeleton_weight(const Group& group, const SkeletonGraph& sk) {
  std::int64_t total = 0;
  for (const auto& [u, v] : sk.edges) total += group.distance(sk.vertices[u], sk.vertices[v]);
  return total;
}

bool is_r_dense(const Group& group, const FiniteSet& v, const FiniteSet& x, std::int64_t r) {
  if (x.empty()) return true;
  if (v.empty()) return false;
  auto ball = ball_if_cheaper(group, r, v.size() * x.size(), std::min(v.size(), x.size()));
  if (ball) {
    if (v.size() <= x.size()) {
      std::unordered_set<Element, ElementHash> covered;
      for (const auto& p : v)
        for (const auto& b : *ball) covered.insert(group.multiply(b, p));
      return std::all_of(x.begin(), x.end(), [&](const Element& q) { return covered.count(q) > 0; });
    }
    return std::all_of(x.begin(), x.end(), [&](const Element& q) {
      return std::any_of(ball->begin(), ball->end(),
                         [&](const Element& b) { return v.contains(group.multiply(b, q)); });
    });
  }
  return std::all_of(x.begin(), x.end(), [&](const Element& q) {
    return std::any_of(v.begin(), v.end(), [&](const Element& p) { return group.distance(p, q) <= r; });
  });
}

bool is_valid_skeleton(const SkeletonGraph& sk) {
  const std::size_t n = sk.vertices.size();
  if (n == 0) return false;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  UnionFind uf(n);
  for (const auto& [u, v] : sk.edges) {
    if (u >= n || v >= n || u == v) return false;
    if (!seen.emplace(std::min(u, v), std::max(u, v)).second) return false;
    uf.unite(u, v);
  }
  for (std::size_t i = 1; i < n; ++i)
    if (!uf.connected(0, i)) return false;
  return true;
}

}  // namespace orbitbench
