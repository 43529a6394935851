#pragma once

// Finitely generated groups with explicit coordinates: the lattices Z^d and
// the discrete Heisenberg group H3(Z). Word lengths, balls, Folner sets and
// r-connectivity for the right-invariant word metric d(g,h) = |g h^-1|.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orbitbench/rational.hpp"

namespace orbitbench {

inline constexpr int kMaxRank = 4;

// Integer coordinate vector. Coordinates beyond a group's rank stay zero, so
// the defaulted lexicographic ordering is the canonical element ordering.
struct Element {
  std::array<std::int64_t, kMaxRank> c{};

  Element() = default;
  Element(std::initializer_list<std::int64_t> coords);

  std::int64_t& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  std::int64_t operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

  friend auto operator<=>(const Element&, const Element&) = default;
  friend bool operator==(const Element&, const Element&) = default;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::int64_t v : e.c) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

std::string to_string(const Element& e, int rank);

// Coordinatewise sum/difference for lattice points (window positions).
Element add(const Element& a, const Element& b);
Element sub(const Element& a, const Element& b);
Element negate(const Element& a);
std::int64_t l1_norm(const Element& a);

// Sorted, duplicate-free set of group elements in canonical (lexicographic)
// order. Membership is by binary search.
class FiniteSet {
 public:
  FiniteSet() = default;
  explicit FiniteSet(std::vector<Element> elements);

  const std::vector<Element>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  bool contains(const Element& e) const;
  std::optional<std::size_t> index_of(const Element& e) const;
  const Element& operator[](std::size_t i) const { return elements_[i]; }

  auto begin() const noexcept { return elements_.begin(); }
  auto end() const noexcept { return elements_.end(); }

  friend bool operator==(const FiniteSet&, const FiniteSet&) = default;

 private:
  std::vector<Element> elements_;
};

class Group {
 public:
  enum class Kind { kLattice, kHeisenberg };

  static Group lattice(int d);
  static Group heisenberg();
  // "z1".."z4" or "heis".
  static Group from_id(std::string_view id);

  const std::string& id() const noexcept { return id_; }
  Kind kind() const noexcept { return kind_; }
  int rank() const noexcept { return rank_; }
  bool is_abelian() const noexcept { return kind_ == Kind::kLattice; }

  Element identity() const { return Element{}; }
  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  bool is_valid(const Element& e) const;

  // Symmetric generating set, sorted canonically, identity excluded.
  const std::vector<Element>& generators() const noexcept { return generators_; }

  // Minimal word length. Closed form (l1 norm) on Z^d; memoized
  // breadth-first search over the Cayley graph on H3(Z).
  std::int64_t word_length(const Element& g) const;
  std::int64_t distance(const Element& a, const Element& b) const;

  // { g : |g| <= r }, canonical order.
  FiniteSet ball(std::int64_t r) const;
  // Same elements ordered by word length, ties lexicographic; identity first.
  std::vector<Element> ball_by_length(std::int64_t r) const;
  std::size_t ball_size(std::int64_t r) const;

  // Upper bound on the number of elements any ball/BFS may materialize.
  std::size_t element_budget() const noexcept { return budget_; }
  void set_element_budget(std::size_t budget) noexcept { budget_ = budget; }

 private:
  struct BfsMemo;

  Group(Kind kind, int rank, std::string id);

  void expand_memo_to(std::int64_t radius) const;
  std::int64_t lattice_ball_size(std::int64_t r) const;

  Kind kind_;
  int rank_;
  std::string id_;
  std::vector<Element> generators_;
  std::size_t budget_ = 8'000'000;
  std::shared_ptr<BfsMemo> memo_;
};

// Exact Folner defect |(B(r) F) \ F| / |F|.
Rational folner_defect(const Group& group, const FiniteSet& f, std::int64_t r);

// |(B(r) F) \ F|.
std::size_t neighbourhood_boundary_size(const Group& group, const FiniteSet& f, std::int64_t r);

// True iff every pair of E is joined by an r-path inside E.
bool is_r_connected(const Group& group, const FiniteSet& e, std::int64_t r);

// Axis-aligned lattice box lo + [0, sides).
FiniteSet lattice_box(const Group& group, std::span<const std::int64_t> sides,
                      const Element& lo = Element{});
// {(a,b,c) : 0 <= a,b < n, 0 <= c < n^2} in H3(Z).
FiniteSet heisenberg_box(std::int64_t n);

// Connected (eps, r)-Folner set, found by growing boxes until the defect test
// passes. Throws CapacityError once the box exceeds max_elements.
FiniteSet connected_folner(const Group& group, double eps, std::int64_t r,
                           std::size_t max_elements = 4'000'000);

// min over 1 <= r <= r_max of |B(r)| / r^2.
double growth_floor(const Group& group, std::int64_t r_max);

// Smallest c with log|B(n)| <= c n for 1 <= n <= n_max.
double log_growth_constant(const Group& group, std::int64_t n_max = 16);

}  // namespace orbitbench
