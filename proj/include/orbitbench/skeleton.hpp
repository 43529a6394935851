#pragma once

// Skeleta: connected graphs on dense vertex subsets of a finite part of a
// group, weighted by word-metric edge lengths.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "orbitbench/group.hpp"

namespace orbitbench {

struct WeightedEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  std::int64_t w = 0;
};

// Edges are index pairs (u < v) into vertices.
struct SkeletonGraph {
  FiniteSet vertices;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

// Greedy maximal subset with pairwise distance > s, scanned in canonical
// order with the identity moved to the front when present.
FiniteSet separated_net(const Group& group, const FiniteSet& points, std::int64_t s);

// All pairs of V at distance <= radius, sorted by (w, u, v).
std::vector<WeightedEdge> proximity_edges(const Group& group, const FiniteSet& v, std::int64_t radius);

// Kruskal over the given edges; ties broken by input order.
std::vector<WeightedEdge> kruskal(std::size_t n, std::vector<WeightedEdge> edges);

// Prim over the complete metric graph on V.
std::vector<WeightedEdge> metric_mst(const Group& group, const FiniteSet& v);

// Net at separation 2r, proximity graph at 5r, minimum spanning tree.
SkeletonGraph build_skeleton(const Group& group, const FiniteSet& f, std::int64_t r);

// A (2r)-skeleton of Y built from an r-skeleton of a superset of Y. Throws
// InvariantViolation if the weight exceeds 2 wt(parent) + 2r |V(parent)|.
SkeletonGraph subset_skeleton(const Group& group, const SkeletonGraph& parent, const FiniteSet& y,
                              std::int64_t r);

std::int64_t skeleton_weight(const Group& group, const SkeletonGraph& sk);

bool is_r_dense(const Group& group, const FiniteSet& v, const FiniteSet& x, std::int64_t r);

// Union-find connectivity plus the structural edge checks.
bool is_valid_skeleton(const SkeletonGraph& sk);

}  // namespace orbitbench
