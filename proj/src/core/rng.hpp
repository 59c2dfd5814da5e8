#pragma once

#include <cstdint>

namespace hardy {

// splitmix64; fixed algorithm so reports are reproducible byte-for-byte
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  int range(int lo, int hi_inclusive) {
    return lo + int(below(std::uint64_t(hi_inclusive - lo + 1)));
  }

 private:
  std::uint64_t state_;
};

}  // namespace hardy
