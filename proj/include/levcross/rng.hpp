#pragma once

#include <cstdint>

// Keyed per-stream RNG for reproducible parallel simulation. Each stream is
// derived from (seed, stream_index) by splitmix64 mixing, so path i always
// sees the same variates no matter which thread runs it.

namespace levcross {

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_index) {
    state_ = mix(seed + 0x9e3779b97f4a7c15ULL * (stream_index + 1));
    state_ = mix(state_ ^ 0xbf58476d1ce4e5b9ULL);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // uniform in [0, 1)
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace levcross
