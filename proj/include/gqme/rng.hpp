#pragma once

#include <cmath>
#include <cstdint>

namespace gqme {

// Counter-based generator: output k of stream `key` is a pure function of
// (key, k), so any partitioning of the index range yields identical draws.
// Mixing is the splitmix64 finalizer over key + (k+1)*golden.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0)
      : key_(key), counter_(counter) {}

  static std::uint64_t at(std::uint64_t key, std::uint64_t counter) {
    std::uint64_t z = key + (counter + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Independent stream key derived from this one; `salt` distinguishes uses.
  static std::uint64_t derive(std::uint64_t key, std::uint64_t salt) {
    return at(key ^ 0xD1B54A32D192ED03ull, salt);
  }

  std::uint64_t next_u64() { return at(key_, counter_++); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal pair (Box-Muller); avoids platform-dependent
  // std::normal_distribution so that streams are bit-reproducible.
  void normal_pair(double& z0, double& z1) {
    double u1 = uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 6.283185307179586476925286766559 * u2;
    z0 = r * std::cos(th);
    z1 = r * std::sin(th);
  }

  double normal() {
    double z0, z1;
    normal_pair(z0, z1);
    return z0;
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace gqme
