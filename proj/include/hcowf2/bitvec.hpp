#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hcowf2/errors.hpp"

namespace hcowf2 {

// Fixed-width bit vector. Bit 0 is the least significant bit; storage is
// 64-bit words, low word first, with all bits above `width` kept zero.
class Bitvec {
public:
  Bitvec() = default;

  explicit Bitvec(std::size_t width) : width_(width), words_(word_count(width), 0) {
    if (width == 0)
      throw ParameterError("Bitvec width must be >= 1");
  }

  static Bitvec from_u64(std::size_t width, std::uint64_t value) {
    Bitvec v(width);
    v.words_[0] = value;
    v.mask_top();
    return v;
  }

  // Bytes in little-endian order, bit j of the value at byte j/8, bit
  // position j%8. Excess bits in `bytes` are ignored.
  static Bitvec from_bytes_lsb(std::size_t width, const std::uint8_t *bytes, std::size_t len) {
    Bitvec v(width);
    const std::size_t need = byte_count(width);
    if (len < need)
      throw ParameterError("byte buffer too short for Bitvec width");
    for (std::size_t i = 0; i < need; ++i)
      v.words_[i / 8] |= static_cast<std::uint64_t>(bytes[i]) << (8 * (i % 8));
    v.mask_top();
    return v;
  }

  std::size_t width() const { return width_; }

  bool bit(std::size_t index) const {
    return (words_[index / 64] >> (index % 64)) & 1u;
  }

  void set_bit(std::size_t index, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (index % 64);
    if (value)
      words_[index / 64] |= mask;
    else
      words_[index / 64] &= ~mask;
  }

  void flip_bit(std::size_t index) { words_[index / 64] ^= std::uint64_t{1} << (index % 64); }

  const std::vector<std::uint64_t> &words() const { return words_; }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (std::uint64_t w : words_)
      c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

  std::size_t hamming_distance(const Bitvec &other) const {
    require_same_width(other);
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
      c += static_cast<std::size_t>(__builtin_popcountll(words_[i] ^ other.words_[i]));
    return c;
  }

  // Little-endian byte serialization, ceil(width/8) bytes.
  std::vector<std::uint8_t> to_bytes_lsb() const {
    std::vector<std::uint8_t> out(byte_count(width_), 0);
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = static_cast<std::uint8_t>(words_[i / 8] >> (8 * (i % 8)));
    return out;
  }

  // Lowercase hex of the little-endian bytes, in byte order.
  std::string to_hex() const {
    static const char digits[] = "0123456789abcdef";
    std::string s;
    for (std::uint8_t b : to_bytes_lsb()) {
      s.push_back(digits[b >> 4]);
      s.push_back(digits[b & 0xf]);
    }
    return s;
  }

  std::uint64_t low_u64() const { return words_[0]; }

  bool operator==(const Bitvec &other) const {
    return width_ == other.width_ && words_ == other.words_;
  }
  bool operator!=(const Bitvec &other) const { return !(*this == other); }

  // Strict ordering so Bitvec works as a map/set key.
  bool operator<(const Bitvec &other) const {
    if (width_ != other.width_)
      return width_ < other.width_;
    for (std::size_t i = words_.size(); i-- > 0;)
      if (words_[i] != other.words_[i])
        return words_[i] < other.words_[i];
    return false;
  }

  static std::size_t word_count(std::size_t width) { return (width + 63) / 64; }
  static std::size_t byte_count(std::size_t width) { return (width + 7) / 8; }

  void require_same_width(const Bitvec &other) const {
    if (width_ != other.width_)
      throw WidthMismatch("Bitvec width mismatch: " + std::to_string(width_) + " vs " +
                          std::to_string(other.width_));
  }

  struct Hash {
    std::size_t operator()(const Bitvec &v) const {
      std::uint64_t h = 0xcbf29ce484222325ull ^ v.width_;
      for (std::uint64_t w : v.words_) {
        h ^= w;
        h *= 0x100000001b3ull;
        h ^= h >> 29;
      }
      return static_cast<std::size_t>(h);
    }
  };

private:
  void mask_top() {
    const std::size_t rem = width_ % 64;
    if (rem != 0)
      words_.back() &= (~std::uint64_t{0}) >> (64 - rem);
  }

  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

} // namespace hcowf2
