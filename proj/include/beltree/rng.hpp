#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace beltree {

// Seeded RNG with hand-rolled draw helpers so that a given seed produces the
// same stream on every standard library we build against.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound).
  int next_int(int bound) {
    return static_cast<int>(next_unit() * static_cast<double>(bound));
  }

  double next_range(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  bool next_bool(double p_true) { return next_unit() < p_true; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace beltree
