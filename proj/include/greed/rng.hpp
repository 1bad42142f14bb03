#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace greed {

// splitmix64 finalizer. Used both as a mixer for seed derivation and as the
// core of the Rng engine so results are identical across compilers.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_str(const char* s) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (; *s; ++s) h = (h ^ static_cast<unsigned char>(*s)) * 0x100000001b3ull;
  return h;
}

// Deterministic seed derivation: one root seed fans out to per-stage and
// per-item streams. derive_seed(root, "walks", node, walk_idx) must give the
// same stream no matter which worker evaluates it.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t salt) {
  return splitmix64(root ^ splitmix64(salt));
}
inline std::uint64_t derive_seed(std::uint64_t root, const char* stage) {
  return derive_seed(root, hash_str(stage));
}
inline std::uint64_t derive_seed(std::uint64_t root, const char* stage,
                                 std::uint64_t a) {
  return splitmix64(derive_seed(root, stage) ^ splitmix64(a));
}
inline std::uint64_t derive_seed(std::uint64_t root, const char* stage,
                                 std::uint64_t a, std::uint64_t b) {
  return splitmix64(derive_seed(root, stage, a) ^ splitmix64(b + 0x632be59bd9b4e019ull));
}

// Small deterministic generator (splitmix64 stream). Not cryptographic.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  // Uniform in [0, n), unbiased via rejection.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t bound = n == 0 ? 0 : (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= bound);
    return x % n;
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Standard normal via Box-Muller.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace greed
