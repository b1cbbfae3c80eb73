#pragma once

#include <cstdint>

namespace secomp::rng {

// Counter-based generation: every draw is a pure function of (seed, stream,
// a, b), so results do not depend on evaluation order or thread count.
enum class Stream : std::uint64_t {
  kSourceBinning = 1,
  kCodeword = 2,
  kKey = 3,
  kSample = 4,
  kColoring = 5,
  kAux = 6,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t draw(std::uint64_t seed, Stream stream, std::uint64_t a,
                             std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  return splitmix64(h ^ c);
}

// Integer in [0, bound) from the top 32 bits by the multiply-high reduction.
constexpr std::uint32_t below(std::uint64_t word, std::uint32_t bound) {
  return static_cast<std::uint32_t>(((word >> 32) * bound) >> 32);
}

// Uniform double in [0, 1) from the top 53 bits.
constexpr double unit(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

}  // namespace secomp::rng
