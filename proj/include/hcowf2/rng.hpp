#pragma once

#include <array>
#include <cstdint>

#include "hcowf2/bitvec.hpp"

namespace hcowf2 {

// 256-bit seed, little-endian byte order.
using Seed256 = std::array<std::uint8_t, 32>;

inline Seed256 seed_from_u64(std::uint64_t value) {
  Seed256 s{};
  for (int i = 0; i < 8; ++i)
    s[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(value >> (8 * i));
  return s;
}

// Deterministic generator with platform-independent output: xoshiro256**
// state initialized from the seed through splitmix64. std::mt19937 would
// also be portable, but std::uniform_int_distribution is not, so bounded
// draws are done by hand here. Not a CSPRNG; instance generation only.
//
// The `stream` tag domain-separates independent draw sequences derived
// from the same seed (clause stream vs. Q stream).
class DeterministicRng {
public:
  explicit DeterministicRng(const Seed256 &seed, std::uint64_t stream = 0) {
    std::uint64_t x = 0x9e3779b97f4a7c15ull ^ stream;
    for (int i = 0; i < 4; ++i) {
      std::uint64_t word = 0;
      for (int b = 0; b < 8; ++b)
        word |= static_cast<std::uint64_t>(seed[static_cast<std::size_t>(8 * i + b)]) << (8 * b);
      x = splitmix64(x ^ word);
      state_[static_cast<std::size_t>(i)] = x;
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0)
      state_[0] = 1; // xoshiro forbids the all-zero state
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform value in [0, bound) by masked rejection; unbiased and
  // reproducible across platforms.
  std::uint64_t bounded(std::uint64_t bound) {
    if (bound < 2)
      return 0;
    std::uint64_t mask = ~std::uint64_t{0};
    const int zeros = __builtin_clzll(bound - 1);
    mask >>= zeros;
    for (;;) {
      const std::uint64_t v = next_u64() & mask;
      if (v < bound)
        return v;
    }
  }

  bool bit() { return next_u64() & 1u; }

  Bitvec bits(std::size_t width) {
    Bitvec v(width);
    std::vector<std::uint8_t> bytes(Bitvec::byte_count(width));
    // Draw whole words so the consumption pattern is width-independent
    // within a word.
    std::size_t i = 0;
    while (i < bytes.size()) {
      std::uint64_t w = next_u64();
      for (int b = 0; b < 8 && i < bytes.size(); ++b, ++i)
        bytes[i] = static_cast<std::uint8_t>(w >> (8 * b));
    }
    return Bitvec::from_bytes_lsb(width, bytes.data(), bytes.size());
  }

private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

} // namespace hcowf2
