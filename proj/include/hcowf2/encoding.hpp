#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hcowf2/digest.hpp"
#include "hcowf2/errors.hpp"
#include "hcowf2/function_description.hpp"

namespace hcowf2 {

// 256-bit digest of the canonical description bytes; the cache key and
// the announcement sent before a message.
struct Signature {
  Digest256 digest{};

  bool operator==(const Signature &o) const { return digest == o.digest; }
  bool operator!=(const Signature &o) const { return !(*this == o); }
  std::string to_hex() const { return hex_encode(digest.data(), digest.size()); }

  static Signature from_hex(const std::string &hex) {
    const auto bytes = hex_decode(hex);
    if (bytes.size() != 32)
      throw ParameterError("signature hex must decode to 32 bytes");
    Signature s;
    std::copy(bytes.begin(), bytes.end(), s.digest.begin());
    return s;
  }

  struct Hash {
    std::size_t operator()(const Signature &s) const {
      std::uint64_t h;
      std::memcpy(&h, s.digest.data(), sizeof h);
      return static_cast<std::size_t>(h);
    }
  };
};

namespace detail {

inline void put_u16_be(std::vector<std::uint8_t> &out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_u32_be(std::vector<std::uint8_t> &out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

struct ByteReader {
  const std::uint8_t *data;
  std::size_t size;
  std::size_t pos = 0;

  std::uint16_t u16_be() {
    require(2);
    const std::uint16_t v = static_cast<std::uint16_t>((data[pos] << 8) | data[pos + 1]);
    pos += 2;
    return v;
  }

  std::uint32_t u32_be() {
    require(4);
    const std::uint32_t v = (static_cast<std::uint32_t>(data[pos]) << 24) |
                            (static_cast<std::uint32_t>(data[pos + 1]) << 16) |
                            (static_cast<std::uint32_t>(data[pos + 2]) << 8) |
                            static_cast<std::uint32_t>(data[pos + 3]);
    pos += 4;
    return v;
  }

  const std::uint8_t *bytes(std::size_t count) {
    require(count);
    const std::uint8_t *p = data + pos;
    pos += count;
    return p;
  }

  void require(std::size_t count) const {
    if (pos + count > size)
      throw MalformedEncoding("truncated function description");
  }
};

} // namespace detail

inline constexpr char kFdMagic[4] = {'H', 'C', 'W', '2'};
inline constexpr std::size_t kFdHeaderBytes = 12; // magic + version + n + k

inline std::size_t encoded_fd_size(std::size_t n, std::size_t k) {
  return kFdHeaderBytes + n * n * k * 4 + n * n * Bitvec::byte_count(n);
}

// Canonical byte layout, identical across platforms:
//   "HCW2" | version u16 BE | n u32 BE | k u16 BE
//   | n^2 clauses in formula-major order, each literal u32 BE = 2*var + neg
//   | n^2 Q values, each ceil(n/8) bytes, LSB-first bit packing.
inline std::vector<std::uint8_t> encode_fd(const FunctionDescription &fd) {
  const std::size_t n = fd.n();
  const std::size_t k = fd.k();
  std::vector<std::uint8_t> out;
  out.reserve(encoded_fd_size(n, k));

  out.insert(out.end(), std::begin(kFdMagic), std::end(kFdMagic));
  detail::put_u16_be(out, fd.version);
  detail::put_u32_be(out, static_cast<std::uint32_t>(n));
  detail::put_u16_be(out, static_cast<std::uint16_t>(k));

  for (const OutputFormula &f : fd.h.formulas)
    for (const Clause &c : f.clauses)
      for (const Literal &l : c.literals)
        detail::put_u32_be(out, l.variable * 2 + (l.negated ? 1 : 0));

  for (const Bitvec &q : fd.q_set) {
    const auto bytes = q.to_bytes_lsb();
    out.insert(out.end(), bytes.begin(), bytes.end());
  }
  return out;
}

// Inverse of encode_fd. Structural damage (magic, size) raises
// MalformedEncoding; well-formed bytes describing an invalid instance
// raise InvariantViolation, so a hostile description is distinguishable
// from line noise.
inline FunctionDescription decode_fd(const std::vector<std::uint8_t> &bytes) {
  detail::ByteReader r{bytes.data(), bytes.size()};

  const std::uint8_t *magic = r.bytes(4);
  if (!std::equal(magic, magic + 4, std::begin(kFdMagic)))
    throw MalformedEncoding("bad magic, not a function description");
  const std::uint16_t version = r.u16_be();
  if (version != kFdFormatVersion)
    throw MalformedEncoding("unsupported format version " + std::to_string(version));
  const std::uint32_t n = r.u32_be();
  const std::uint16_t k = r.u16_be();
  if (n > (1u << 20))
    throw MalformedEncoding("implausible n in header");
  if (n < 2 || k <= 2 || k > 2 * static_cast<std::uint64_t>(n))
    throw InvariantViolation("header parameters out of domain (n >= 2, 2 < k <= 2n)");
  if (bytes.size() != encoded_fd_size(n, k))
    throw MalformedEncoding("encoded size does not match header (expected " +
                            std::to_string(encoded_fd_size(n, k)) + " bytes, got " +
                            std::to_string(bytes.size()) + ")");

  FunctionDescription fd;
  fd.version = version;
  fd.h.n = n;
  fd.h.k = k;
  fd.h.formulas.resize(n);
  for (OutputFormula &f : fd.h.formulas) {
    f.clauses.resize(n);
    for (Clause &c : f.clauses) {
      c.literals.resize(k);
      for (Literal &l : c.literals) {
        const std::uint32_t packed = r.u32_be();
        l.variable = packed >> 1;
        l.negated = packed & 1;
      }
      // no canonicalization here: the wire form must already be canonical
    }
  }

  const std::size_t q_bytes = Bitvec::byte_count(n);
  fd.q_set.reserve(static_cast<std::size_t>(n) * n);
  for (std::size_t i = 0; i < static_cast<std::size_t>(n) * n; ++i)
    fd.q_set.push_back(Bitvec::from_bytes_lsb(n, r.bytes(q_bytes), q_bytes));

  if (auto v = detail::description_violation(fd))
    throw InvariantViolation(*v);
  return fd;
}

inline Signature fd_signature(const FunctionDescription &fd) {
  return Signature{sha256(encode_fd(fd))};
}

inline void write_fd_file(const std::filesystem::path &path, const FunctionDescription &fd) {
  const auto bytes = encode_fd(fd);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw Error("short write to " + path.string());
}

inline FunctionDescription read_fd_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_fd(bytes);
}

} // namespace hcowf2
