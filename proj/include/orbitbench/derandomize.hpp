#pragma once

// Low-entropy re-description of a cocycle: multiscale graphing, restriction
// to its vertex set, nearest-neighbour encoding and return-map extension.

#include <cstddef>
#include <cstdint>
#include <memory>

#include "orbitbench/cocycle.hpp"
#include "orbitbench/graphing.hpp"

namespace orbitbench {

struct DerandomizeConfig {
  double eps = 0.1;
  std::size_t pairs = 500;
  std::int64_t g_radius = 4;
  std::uint64_t seed = 1;
  int max_halvings = 6;
};

struct DerandomizeResult {
  double delta = 0;  // graphing target that met eps
  int halvings = 0;
  MultiscaleResult multiscale;
  NnEncoding encoding;
  GraphingEntropyBound entropy;
  bool entropy_ok = false;
  std::size_t vertices = 0;
  std::int64_t search_radius = 0;
  std::size_t v_pairs_checked = 0;
  std::size_t v_pair_failures = 0;
  ExtensionReport extension;
};

// tau must be defined on the whole window (full domain). The graphing
// target is halved from eps until the generated process of the encoding
// has estimated entropy below eps.
DerandomizeResult derandomize(CocyclePtr tau, const PositionMask& u, const DerandomizeConfig& cfg);

}  // namespace orbitbench
