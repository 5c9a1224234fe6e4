#pragma once

#include <cmath>
#include <cstdint>

namespace perc {

// Counter-based random stream: output k is a bit-mix of (key + k * golden
// ratio), where the key is derived from (seed, stream).  Streams with
// different ids are independent of each other and of the order in which
// they are consumed, which makes per-edge and per-run substreams
// reproducible regardless of iteration order.
class SubstreamRng {
 public:
  SubstreamRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(mix(seed + kGolden) ^ mix(stream * kGolden + 0x1d8af066u))) {}

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGolden); }

  // Uniform on (0,1), never exactly 0 or 1.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_exponential(double rate) { return -std::log(next_unit()) / rate; }

  bool next_bernoulli(double p) { return next_unit() < p; }

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace perc
