#pragma once

#include <cstdint>
#include <random>

namespace dispersive {

// Platform-independent uniform draws: std::uniform_real_distribution is not
// specified bit-for-bit, so doubles are built from the raw 64-bit engine output.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dispersive
