#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "hcowf2/errors.hpp"

namespace hcowf2 {

using Digest256 = std::array<std::uint8_t, 32>;

inline Digest256 sha256(const std::uint8_t *data, std::size_t len) {
  Digest256 out{};
  unsigned int out_len = 0;
  if (EVP_Digest(data, len, out.data(), &out_len, EVP_sha256(), nullptr) != 1 || out_len != 32)
    throw Error("SHA-256 computation failed");
  return out;
}

inline Digest256 sha256(const std::vector<std::uint8_t> &data) {
  return sha256(data.data(), data.size());
}

inline std::string hex_encode(const std::uint8_t *data, std::size_t len) {
  static const char digits[] = "0123456789abcdef";
  std::string s;
  s.reserve(2 * len);
  for (std::size_t i = 0; i < len; ++i) {
    s.push_back(digits[data[i] >> 4]);
    s.push_back(digits[data[i] & 0xf]);
  }
  return s;
}

inline std::string hex_encode(const std::vector<std::uint8_t> &data) {
  return hex_encode(data.data(), data.size());
}

inline std::vector<std::uint8_t> hex_decode(const std::string &hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9')
      return c - '0';
    if (c >= 'a' && c <= 'f')
      return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
      return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0)
    throw ParameterError("hex string has odd length");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = nibble(hex[2 * i]);
    const int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0)
      throw ParameterError("invalid hex digit in \"" + hex + "\"");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

} // namespace hcowf2
