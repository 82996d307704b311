#pragma once

#include <cstdint>
#include <initializer_list>

namespace qsat::rng {

// splitmix64 finalizer (Steele/Lea/Flood; Vigna's reference constants).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Substream derivation rule: fold each path element into the running seed,
// one mix64 at a time. derive(s, {a, b}) == derive(derive(s, {a}), {b}), so
// nested components can extend a stream path without coordination.
// Per-clause substream = derive(seed, {kClauseStream, clause_index}).
constexpr std::uint64_t derive(std::uint64_t seed,
                               std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t s = mix64(seed);
  for (std::uint64_t p : path) s = mix64(s ^ mix64(p));
  return s;
}

inline constexpr std::uint64_t kClauseStream = 1;
inline constexpr std::uint64_t kAngleStream = 2;
inline constexpr std::uint64_t kInstanceStream = 3;

// Counter-based splitmix64 stream. The output sequence is fully specified by
// the seed and identical on every platform, which std:: distributions do not
// guarantee.
class Stream {
 public:
  explicit constexpr Stream(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased draw from [0, n) by rejection; n must be nonzero.
  constexpr std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  constexpr double unit() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  constexpr bool coin() noexcept { return (next() >> 63) != 0; }

 private:
  std::uint64_t state_;
};

}  // namespace qsat::rng
