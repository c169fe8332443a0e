// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace qubo {

/// Seed plus stream id. Identical (seed, stream_id) produces identical draws
/// on any platform; derived streams (per instance, per restart) advance the
/// stream id and leave the seed untouched.
struct GeneratorSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  GeneratorSeed derived(std::uint64_t offset) const {
    return GeneratorSeed{seed, stream_id + offset};
  }
};

namespace detail {

// splitmix64 finalizer (Steele et al.); also used to decorrelate stream ids.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// splitmix64 generator. State advances by the 64-bit golden ratio; output is
/// the xorshift/multiply finalizer of the state. Stream 0 runs directly off
/// the seed; nonzero streams start from seed ^ mix64(stream_id).
class SplitMix64 {
 public:
  explicit SplitMix64(GeneratorSeed s)
      : state_(s.seed ^ detail::mix64(s.stream_id)) {}
  explicit SplitMix64(std::uint64_t seed, std::uint64_t stream_id = 0)
      : SplitMix64(GeneratorSeed{seed, stream_id}) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return detail::mix64(state_);
  }

  /// Uniform in [0,1) from the top 53 bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [-1,1].
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

  /// Fair coin from the top bit.
  bool coin() { return (next_u64() >> 63) != 0; }

  /// Uniform integer in [0, m) via the multiply-shift bound (m >= 1).
  std::uint64_t bounded(std::uint64_t m) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * m) >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace qubo
