#pragma once

#include <cstdint>
#include <random>

namespace hcalg {

// Seeded generator whose draws do not depend on the standard library's
// distribution implementations, so reports are identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Uniform in the open interval (0,1).
  double uniform() {
    for (;;) {
      double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(eng_() % span);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace hcalg
