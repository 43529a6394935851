#pragma once

// Philox4x32-10 counter-based generator (Salmon et al. 2011 parameters).
// Every draw is a pure function of (key, counter), so a window can be
// sampled in any order and regenerated bit-exactly.

#include <array>
#include <cstdint>

namespace orbitbench {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

  explicit Philox4x32(std::uint64_t seed, std::uint32_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream) {}

  // Uniform double in [0,1) attached to an index; 53 random bits.
  double uniform(std::uint64_t index, std::uint32_t lane = 0) const {
    Counter out = block({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream_, lane},
                        key_);
    const std::uint64_t bits = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  std::uint64_t bits64(std::uint64_t index, std::uint32_t lane = 0) const {
    Counter out = block({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream_, lane},
                        key_);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  Key key_;
  std::uint32_t stream_;
};

}  // namespace orbitbench
