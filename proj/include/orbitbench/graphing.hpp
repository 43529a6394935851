#pragma once

// T-graphings on Z^d window models. A graphing is a family (A_g) of core
// positions; x in A_g is joined to x + g, which may sit in the padding.
// A_e holds isolated vertices.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "orbitbench/cocycle.hpp"
#include "orbitbench/entropy.hpp"
#include "orbitbench/group.hpp"
#include "orbitbench/orbit.hpp"

namespace orbitbench {

// One byte per window index; nonzero = member.
using PositionMask = std::vector<std::uint8_t>;

// Core positions where the event holds.
PositionMask event_mask(const OrbitSample& s, const LocalEvent& u);
// Fraction of core positions in the mask.
double mask_measure(const Window& w, const PositionMask& m);

struct Graphing {
  SamplePtr sample;
  Group group = Group::lattice(1);
  std::map<Element, std::vector<std::size_t>> support;  // g -> sorted window indices

  Graphing() = default;
  explicit Graphing(SamplePtr s);

  const Window& window() const { return sample->window; }
  // Adds x to A_g and, if it is in the core, x + g to A_{g^-1}. Call
  // normalize() before use.
  void add_edge(const Element& x, const Element& g);
  void add_vertex(const Element& x);
  void merge(const Graphing& other);
  void normalize();

  bool contains(const Element& g, std::size_t index) const;
  std::vector<std::size_t> vertices() const;  // sorted window indices
  std::size_t edge_count() const;             // undirected, g != e
};

struct GraphingViolation {
  Element g;
  Element position;
  std::string what;
};

struct GraphingReport {
  bool valid = true;
  std::vector<GraphingViolation> violations;  // first few only
  std::size_t violation_count = 0;
  std::size_t vertex_count = 0;
  double vertex_measure = 0;
  std::int64_t max_length = 0;
  std::size_t nonempty = 0;
};

// Positions in the core, edges inside the window, and symmetry
// A_{g^-1} = T^g A_g wherever T^g x is a core position.
GraphingReport validate(const Graphing& gr);
// Throws InvariantViolation naming the first violation.
void require_valid(const Graphing& gr);

// sum_g |g| mu(A_g) with mu the core average.
double cost(const Graphing& gr);

struct WindowRelation {
  std::vector<std::size_t> labels;  // per window index, least index of the class

  std::size_t classes_among(const std::vector<std::size_t>& indices) const;
};

WindowRelation generated_relation(const Graphing& gr);

struct ConnectivityReport {
  bool connected = true;
  std::size_t checked = 0;
  std::size_t excluded = 0;  // within `boundary` of the core edge
  std::size_t classes = 0;
};

ConnectivityReport orbit_wise_connectivity(const Graphing& gr, std::int64_t boundary = 0);
bool orbit_wise_connected(const Graphing& gr, std::int64_t boundary = 0);

struct Tile {
  Element lo;
  std::array<std::int64_t, kMaxRank> sides{};
  bool folner = false;  // (1, r)-Folner
};

struct RokhlinTiling {
  Window window;
  std::int64_t side = 0;
  std::int64_t r = 0;
  std::vector<Tile> tiles;

  std::size_t tile_at(const Element& p) const;  // p in the core
  std::size_t full_tiles() const;
};

// Least n with ((n + 2r)^d - n^d) / n^d <= eps.
std::int64_t rokhlin_side(int d, double eps, std::int64_t r);
// Cubes of the given side anchored at multiples of it; edge tiles truncated.
RokhlinTiling cube_tiling(const Window& w, std::int64_t side, std::int64_t r);
// Throws CapacityError if the side exceeds the core.
RokhlinTiling rokhlin_tiling(const Window& w, double eps, std::int64_t r);

struct LowCostResult {
  Graphing graphing;
  double cost = 0;
  std::size_t tiles_used = 0;
  std::size_t tiles_skipped = 0;  // no point of U
  bool checked = false;
  bool vert_in_u = true;
  bool classes_match = true;      // R_Gamma = tiling classes on Vert
  bool dense = true;              // (T, 4r)-dense in U over Folner tiles
  std::int64_t density_radius = 0;  // worst distance seen
};

LowCostResult low_cost_graphing(const RokhlinTiling& tiling, SamplePtr sample, const PositionMask& u,
                                bool check = true);

struct ScaleInfo {
  std::int64_t r = 0;
  std::int64_t side = 0;
  double cost = 0;
  std::size_t vertices = 0;
};

struct MultiscaleResult {
  Graphing graphing;
  double c_impl = 0;
  int m = 0;
  std::vector<ScaleInfo> scales;
  double cost = 0;
  double vertex_measure = 0;
  bool vert_in_u = true;
  ConnectivityReport connectivity;
  int attempts = 0;
};

// Low-cost graphing at radius 2^m on U, then per dyadic scale a metric
// spanning tree over one representative per class inside each doubled
// tile, until one tile covers the core. Throws CapacityError if no m fits.
MultiscaleResult multiscale_graphing(SamplePtr sample, const PositionMask& u, double eps);

// Values alpha(g, x) aligned with support[g].
using EdgeValues = std::map<Element, std::vector<Element>>;
// Throws DomainError if alpha is undefined on some edge.
EdgeValues edge_values(const Graphing& gr, const Cocycle& alpha);

// Lexicographically least geodesic word s_1, ..., s_n with g = s_n ... s_1.
std::vector<Element> geodesic_word(const Group& group, const Element& g);

struct NnEncoding {
  Graphing theta;
  EdgeValues values;
  double cost_gamma = 0;
  double cost_theta = 0;
  std::size_t reconstructed = 0;
};

// Nearest-neighbour re-encoding along geodesic words. Each edge {x, x+g}
// is routed once, along the word of the lesser of g, g^-1 (reversed for the
// other), so both directions share one path. Asserts the cost bound and
// the product reconstruction of alpha on every edge of gr.
NnEncoding nn_encode(const Graphing& gr, const Cocycle& alpha);

enum class BfsOrder { kForward, kReverse };

// Adjacency of a graphing with its edge values.
class EdgeIndex {
 public:
  EdgeIndex(const Graphing& gr, const EdgeValues& values, Group target);
  // Product of edge values along a BFS path from x to x + g.
  std::optional<Element> reconstruct(const Element& x, const Element& g, BfsOrder order) const;

 private:
  const Graphing* gr_;
  Group target_;
  std::unordered_map<std::size_t, std::vector<std::pair<std::size_t, Element>>> adj_;  // -> (neighbour, value)
};

std::optional<Element> reconstruct_cocycle(const Graphing& gr, const EdgeValues& values, const Group& target,
                                           const Element& x, const Element& g, BfsOrder order = BfsOrder::kForward);

struct GraphingEntropyBound {
  double bound_sets = 0;    // sum_g H(A_g) + sum_g mu(A_g) H(alpha^g | A_g)
  double bound_cost = 0;    // H(Vert) + C_eps cost + eps
  double furman_c = 0;
  bool estimated = false;
  double estimate = 0;      // block entropy of the generated process
  std::int64_t side_used = 0;
  std::size_t alphabet = 0;
  bool within_bounds = true;
};

// Labels per core position: membership in each nonempty A_g plus alpha
// values there. The estimate is skipped if no block size is reliable.
LabelField generated_field(const Graphing& gr, const EdgeValues& values);
GraphingEntropyBound graphing_entropy_bound(const Graphing& gr, const EdgeValues& values, double eps,
                                            double tolerance = 0.05);

}  // namespace orbitbench
