#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace latlab {

// splitmix64 step; used to whiten per-trial seeds derived from (base, index)
// so that campaign results do not depend on worker partitioning.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t base, uint64_t index) {
  return splitmix64(base ^ splitmix64(index));
}

// Deterministic normal/uniform source. Box-Muller is hand-rolled because
// std::normal_distribution is implementation-defined and would break
// bit-reproducibility across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  // uniform in (0, 1]
  double uniform() {
    return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * 3.14159265358979323846 * uniform();
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // uniform integer in [0, bound)
  uint64_t below(uint64_t bound) {
    // multiply-shift rejection-free mapping is fine here: bound << 2^64
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(eng_()) * bound) >> 64);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace latlab
