#pragma once

// Small square integer matrices acting on Z^d coordinates.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "orbitbench/group.hpp"

namespace orbitbench {

class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(int d);  // identity
  // Row-major rows; must be square with 1 <= d <= kMaxRank.
  IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);
  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);

  int dim() const noexcept { return d_; }
  std::int64_t at(int i, int j) const { return a_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  std::int64_t& at(int i, int j) { return a_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }

  Element apply(const Element& v) const;
  Element column(int j) const;
  IntMatrix operator*(const IntMatrix& o) const;
  std::int64_t det() const;
  bool is_upper_triangular() const;
  // Exact integer inverse; throws DomainError unless |det| = 1.
  IntMatrix unimodular_inverse() const;
  // max over generators e of |M e|_1, i.e. the l1 operator norm.
  std::int64_t l1_operator_norm() const;

  std::string str() const;
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  int d_ = 0;
  std::array<std::array<std::int64_t, kMaxRank>, kMaxRank> a_{};
};

}  // namespace orbitbench
