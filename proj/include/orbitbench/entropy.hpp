#pragma once

// Shannon, partial and block entropies (nats), and the Furman constant.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orbitbench/group.hpp"
#include "orbitbench/orbit.hpp"

namespace orbitbench {

// Throws DomainError unless p is nonnegative and sums to 1 within 1e-12.
double shannon(std::span<const double> p);
double shannon_counts(std::span<const std::uint64_t> counts);
// -p log p - (1-p) log(1-p)
double binary_entropy(double p);

// A labelled box of Z^d; labels are arbitrary 32-bit codes.
struct LabelField {
  int rank = 1;
  std::array<std::int64_t, kMaxRank> extent{};
  std::vector<std::uint32_t> labels;  // row-major, last axis fastest

  std::size_t size() const { return labels.size(); }
  std::uint32_t distinct() const;
};

// The whole padded window of a sample.
LabelField to_field(const OrbitSample& sample);
LabelField sequence_field(std::vector<std::uint32_t> seq);

struct BlockPoint {
  std::int64_t side = 0;
  std::size_t cells = 0;
  std::size_t samples = 0;
  std::size_t patterns = 0;
  double entropy = 0;     // H(pattern distribution)
  double normalized = 0;  // entropy / cells
  bool reliable = false;  // patterns * min_samples_per_pattern <= samples
};

struct EntropyEstimate {
  double value = 0;
  std::string method;  // "difference" (Z^1) or "normalized"
  std::int64_t side_used = 0;
  std::vector<BlockPoint> curve;
  std::size_t window_size = 0;
  double stderr_proxy = 0;
  // Normalized values nonincreasing over reliable sides within 2%.
  bool monotone = true;
};

// Plug-in entropy of cube patterns of each side over all anchors whose cube
// lies in the field. Throws DegenerateInputError if no side is reliable.
EntropyEstimate block_entropy(const LabelField& field, const std::vector<std::int64_t>& sides,
                              double min_samples_per_pattern = 100);

struct PartialEntropy {
  double value = 0;       // H(1_U) + mu(U) H_{mu|U}(phi)
  double star_value = 0;  // H(phi*) with phi* = star off U
  double measure = 0;     // mu(U)
};

// labels[i] = phi at core position i, nullopt off U.
PartialEntropy partial_entropy(std::span<const std::optional<std::uint32_t>> labels);

// Least positive integer k with 2 sum_{n>=1} e^{-kn-1} <= eps.
int furman_k(double eps);
// 2(c + k) + 2 log 2.
double furman_constant(double c, double eps);

struct FurmanCheck {
  double lhs = 0;
  double rhs = 0;
  bool holds = true;
};

// Sum of binary entropies of p_g against C_eps sum |g| p_g + eps.
FurmanCheck furman_bound_check(const Group& group, const std::map<Element, double>& p, double eps, double c);
// H(q) against C_eps E|g| + eps for a probability vector q on G \ {e}.
FurmanCheck furman_distribution_check(const Group& group, const std::map<Element, double>& q, double eps, double c);

}  // namespace orbitbench
