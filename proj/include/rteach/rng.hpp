#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rteach {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a master seed and a stream tag.
inline uint64_t derive_seed(uint64_t master, uint64_t tag) {
  return splitmix64(splitmix64(master) ^ splitmix64(tag * 0x9e3779b97f4a7c15ULL + 1));
}

// Deterministic RNG with hand-rolled value transforms. The standard
// distributions are implementation-defined, so everything downstream of the
// raw engine is spelled out here to keep trajectories stable across
// toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : gen_(splitmix64(seed)) {}

  void reseed(uint64_t seed) {
    gen_.seed(splitmix64(seed));
    has_spare_ = false;
  }

  uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1).
  double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }

  float uniform_f() { return float(uniform()); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Modulo bias is < n / 2^64, irrelevant here.
  int uniform_int(int n) { return int(gen_() % uint64_t(n)); }

  // Standard normal via Box-Muller with a cached spare.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  float normal_f() { return float(normal()); }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rteach
