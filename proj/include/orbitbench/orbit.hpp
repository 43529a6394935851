#pragma once

// Window models of Z^d symbolic systems: a configuration sampled on a core
// box plus padding, with empirical averages over the core standing in for
// the invariant measure.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "orbitbench/group.hpp"
#include "orbitbench/matrix.hpp"

namespace orbitbench {

struct ProductLaw {
  std::vector<double> p;
};

// Two-sided stationary Markov chain on Z^1.
struct MarkovLaw {
  std::vector<std::vector<double>> transition;
  std::vector<double> stationary;
};

struct SymbolicSystem {
  int rank = 1;  // Z^rank
  int alphabet = 2;
  std::variant<ProductLaw, MarkovLaw> law;

  static SymbolicSystem bernoulli(int rank, std::vector<double> p);
  // Symmetric two-state chain flipping with probability q.
  static SymbolicSystem symmetric_markov(double q);
  static SymbolicSystem markov(std::vector<std::vector<double>> transition);

  // Throws DomainError on malformed laws.
  void validate() const;
  // Closed-form entropy rate in nats.
  double entropy_rate() const;
  // Stationary probability of one symbol.
  double marginal(int symbol) const;
};

// Core box [0, core) with per-axis padding; the stored window is
// [-pad, core + pad) in row-major order, last axis fastest.
struct Window {
  int rank = 1;
  std::array<std::int64_t, kMaxRank> core{};
  std::array<std::int64_t, kMaxRank> pad{};

  static Window cube(int rank, std::int64_t core_side, std::int64_t pad);

  std::int64_t extent(int i) const { return core[static_cast<std::size_t>(i)] + 2 * pad[static_cast<std::size_t>(i)]; }
  std::size_t size() const;
  std::size_t core_size() const;
  bool in_window(const Element& p) const;
  bool in_core(const Element& p) const;
  std::size_t index(const Element& p) const;  // p must be in the window
  Element position(std::size_t index) const;
  // Core positions in row-major order.
  std::vector<Element> core_positions() const;
  std::int64_t min_pad() const;
};

struct OrbitSample {
  std::optional<SymbolicSystem> system;  // empty for recoded views
  int alphabet = 2;
  Window window;
  std::vector<std::uint8_t> symbols;
  std::uint64_t seed = 0;

  int rank() const { return window.rank; }
  std::uint8_t at(const Element& p) const { return symbols[window.index(p)]; }
};

// Cylinder {x : x_{o_j} in allowed_j for all j}. No constraints = whole space.
struct LocalEvent {
  struct Constraint {
    Element offset;
    std::vector<std::uint8_t> allowed;
  };
  std::vector<Constraint> constraints;
  bool never = false;

  static LocalEvent always() { return {}; }
  static LocalEvent empty() { return LocalEvent{{}, true}; }
  static LocalEvent symbol_at_origin(std::uint8_t a) { return LocalEvent{{{Element{}, {a}}}, false}; }

  bool holds(const OrbitSample& s, const Element& p) const;
  // Largest |offset_i| over constraints and axes.
  std::int64_t reach() const;
  std::string str(int rank) const;
};

OrbitSample sample_window(const SymbolicSystem& system, const Window& window, std::uint64_t seed);
OrbitSample sample_window(const SymbolicSystem& system, std::int64_t core_side, std::int64_t pad,
                          std::uint64_t seed);

// Fraction of core positions at which the event holds. Throws DomainError if
// the event's support leaves the window from some core position.
double empirical_measure(const OrbitSample& sample, const LocalEvent& event);

// Induced first-return process on a Z^1 sample.
struct InducedSequence {
  std::vector<std::int64_t> visits;        // core positions in U, increasing
  std::vector<std::int64_t> return_times;  // one per visit with a later visit in the window
  std::vector<std::uint32_t> codes;        // id of (block, return time), same length as return_times
  std::size_t distinct_codes = 0;
  double mean_return_time = 0;
};
InducedSequence induced_system(const OrbitSample& sample, const LocalEvent& u);

// S^v = T^{Mv}: view sampled on the largest cube whose image under M lies in
// the source window. Throws DomainError unless |det M| = 1.
OrbitSample reparam_system(const OrbitSample& sample, const IntMatrix& m);

// Recoding over the fundamental box prod [0, M_ii) of M Z^d, indexed by
// w with symbol read at M w. Requires upper-triangular M with positive
// diagonal; alphabet^det must fit in a byte.
OrbitSample sublattice_system(const OrbitSample& sample, const IntMatrix& m);

// lo such that view position w reads the source at M (lo + w).
Element recoded_origin(const OrbitSample& sample, const IntMatrix& m);

// Flat binary layout: magic "OBWS", u32 version, u32 rank, u32 alphabet,
// u64 seed, rank x i64 core, rank x i64 pad, then row-major symbol bytes.
void export_binary(const OrbitSample& sample, std::ostream& out);
OrbitSample import_binary(std::istream& in);

}  // namespace orbitbench
