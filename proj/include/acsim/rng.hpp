#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace acsim {

// Deterministic 64-bit generator. We avoid std:: distributions in the hot
// path because their output is implementation-defined; run logs must be
// reproducible from the seed alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // Warm up so that small seeds diverge quickly.
    next_u64();
    next_u64();
  }

  std::uint64_t next_u64() {
    // splitmix64 (Steele et al.), public domain reference constants.
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1]; never returns 0 so it is safe under log().
  double next_unit() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t next_below(std::uint64_t n) {
    // Rejection sampling keeps the draw exactly uniform.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix_u64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_str(const std::string& s) {
  // FNV-1a, fixed so that seed derivation is stable across platforms.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Child seed for a named stream. mix() has full avalanche, so serial and
// parallel consumers of the same (master, label, index) agree.
inline std::uint64_t derive_seed(std::uint64_t master, const std::string& label,
                                 std::uint64_t index) {
  return mix_u64(mix_u64(master ^ hash_str(label)) + index);
}

}  // namespace acsim
