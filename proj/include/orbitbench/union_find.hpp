#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

namespace orbitbench {

// Disjoint-set forest with union by size and path halving.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n = 0) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t size() const noexcept { return parent_.size(); }

  std::size_t find(std::size_t x) noexcept {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns true if a and b were in different sets.
  bool unite(std::size_t a, std::size_t b) noexcept {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  bool connected(std::size_t a, std::size_t b) noexcept { return find(a) == find(b); }

  std::size_t class_size(std::size_t x) noexcept { return size_[find(x)]; }

  // Label of each element = smallest element of its class. Independent of
  // merge order, so usable for golden outputs.
  std::vector<std::size_t> canonical_labels() {
    const std::size_t n = parent_.size();
    std::vector<std::size_t> min_of_root(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = find(i);
      if (min_of_root[r] == n) min_of_root[r] = i;
    }
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = min_of_root[find(i)];
    return labels;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace orbitbench
