#include <catch_amalgamated.hpp>

#include <set>

#include "hcowf2/bitvec.hpp"
#include "hcowf2/rng.hpp"

using namespace hcowf2;

TEST_CASE("bit access and masking across word boundaries", "[bitvec]") {
  Bitvec v(100);
  REQUIRE(v.width() == 100);
  REQUIRE(v.words().size() == 2);
  REQUIRE(v.popcount() == 0);

  v.set_bit(0, true);
  v.set_bit(63, true);
  v.set_bit(64, true);
  v.set_bit(99, true);
  REQUIRE(v.popcount() == 4);
  REQUIRE(v.bit(0));
  REQUIRE(v.bit(63));
  REQUIRE(v.bit(64));
  REQUIRE(v.bit(99));
  REQUIRE_FALSE(v.bit(1));
  REQUIRE_FALSE(v.bit(65));

  v.flip_bit(63);
  REQUIRE_FALSE(v.bit(63));
  REQUIRE(v.popcount() == 3);

  // from_u64 masks bits beyond the width
  REQUIRE(Bitvec::from_u64(4, 0xff).low_u64() == 0xf);
  REQUIRE(Bitvec::from_u64(64, ~std::uint64_t{0}).popcount() == 64);
}

TEST_CASE("construction errors", "[bitvec]") {
  REQUIRE_THROWS_AS(Bitvec(0), ParameterError);
  const std::uint8_t one = 0xff;
  REQUIRE_THROWS_AS(Bitvec::from_bytes_lsb(16, &one, 1), ParameterError);
}

TEST_CASE("byte serialization is LSB-first per byte, low byte first", "[bitvec]") {
  // 0x01 0x80 as bytes: bit 0 set (byte 0, bit 0) and bit 15 set (byte 1, bit 7)
  const std::uint8_t bytes[2] = {0x01, 0x80};
  const Bitvec v = Bitvec::from_bytes_lsb(16, bytes, 2);
  REQUIRE(v.bit(0));
  REQUIRE(v.bit(15));
  REQUIRE(v.popcount() == 2);
  REQUIRE(v.to_bytes_lsb() == std::vector<std::uint8_t>{0x01, 0x80});
  REQUIRE(v.to_hex() == "0180");

  // hex is emitted in byte order, lowercase
  REQUIRE(Bitvec::from_u64(12, 0xabc).to_hex() == "bc0a");

  // width not a byte multiple: excess bits in the source are ignored
  const std::uint8_t full = 0xff;
  REQUIRE(Bitvec::from_bytes_lsb(5, &full, 1).popcount() == 5);
}

TEST_CASE("comparison, ordering and hashing", "[bitvec]") {
  const Bitvec a = Bitvec::from_u64(8, 5);
  const Bitvec b = Bitvec::from_u64(8, 5);
  const Bitvec c = Bitvec::from_u64(8, 6);
  REQUIRE(a == b);
  REQUIRE(a != c);
  REQUIRE(a < c);
  REQUIRE_FALSE(c < a);
  REQUIRE(Bitvec::Hash{}(a) == Bitvec::Hash{}(b));

  // widths differ: never equal, ordered by width first
  const Bitvec wide = Bitvec::from_u64(9, 5);
  REQUIRE(a != wide);
  REQUIRE(a < wide);

  // high word dominates the ordering
  Bitvec x(128), y(128);
  x.set_bit(127, true);
  y.set_bit(0, true);
  REQUIRE(y < x);
}

TEST_CASE("hamming distance and width checks", "[bitvec]") {
  const Bitvec a = Bitvec::from_u64(70, 0b1011);
  Bitvec b = Bitvec::from_u64(70, 0b0011);
  b.set_bit(69, true);
  REQUIRE(a.hamming_distance(b) == 2);
  REQUIRE(a.hamming_distance(a) == 0);
  REQUIRE_THROWS_AS(a.hamming_distance(Bitvec(8)), WidthMismatch);
}

TEST_CASE("deterministic stream with cross-implementation golden values", "[rng]") {
  // First outputs for the all-zero 256-bit seed, frozen from an
  // independent reimplementation of the derivation and generator.
  DeterministicRng rng(seed_from_u64(0), 0);
  REQUIRE(rng.next_u64() == 0x1afdb7a92e6601b0ull);
  REQUIRE(rng.next_u64() == 0xd05594c54a29aa44ull);
  REQUIRE(rng.next_u64() == 0x312106b075567646ull);
  REQUIRE(rng.next_u64() == 0xb41a14e5a7ff40f1ull);

  DeterministicRng stream1(seed_from_u64(0), 1);
  REQUIRE(stream1.next_u64() == 0xb58b72e854735baeull);

  DeterministicRng seeded(seed_from_u64(7), 0);
  REQUIRE(seeded.next_u64() == 0xfeee65f786e5785cull);
}

TEST_CASE("seed_from_u64 embeds the value little-endian in the first word", "[rng]") {
  Seed256 manual{};
  manual[0] = 0x07;
  DeterministicRng a(seed_from_u64(7), 0);
  DeterministicRng b(manual, 0);
  for (int i = 0; i < 16; ++i)
    REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("same seed same stream reproduces; streams are independent", "[rng]") {
  DeterministicRng a(seed_from_u64(42), 3);
  DeterministicRng b(seed_from_u64(42), 3);
  DeterministicRng other(seed_from_u64(42), 4);
  bool any_difference = false;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t va = a.next_u64();
    REQUIRE(va == b.next_u64());
    any_difference = any_difference || va != other.next_u64();
  }
  REQUIRE(any_difference);
}

TEST_CASE("bounded draws stay in range and cover the range", "[rng]") {
  DeterministicRng rng(seed_from_u64(1), 0);
  REQUIRE(rng.bounded(1) == 0);

  std::set<std::uint64_t> seen;
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t v = rng.bounded(6); // non-power-of-two exercises rejection
    REQUIRE(v < 6);
    seen.insert(v);
  }
  REQUIRE(seen.size() == 6);

  for (int i = 0; i < 100; ++i)
    REQUIRE(rng.bounded(3) < 3);
}

TEST_CASE("single-bit draws are unbiased enough to trust polarities", "[rng]") {
  DeterministicRng rng(seed_from_u64(2), 0);
  int ones = 0;
  for (int i = 0; i < 1000; ++i)
    ones += rng.bit();
  REQUIRE(ones > 400);
  REQUIRE(ones < 600);
}

TEST_CASE("bits() packs LSB-first and masks the top word", "[rng]") {
  DeterministicRng rng(seed_from_u64(3), 0);
  DeterministicRng twin(seed_from_u64(3), 0);

  const Bitvec v = rng.bits(12);
  REQUIRE(v.width() == 12);
  // first generator word, low 12 bits, matching the byte packing
  const std::uint64_t word = twin.next_u64();
  REQUIRE(v.low_u64() == (word & 0xfff));

  const Bitvec wide = rng.bits(70);
  REQUIRE(wide.width() == 70);
  REQUIRE(wide.words().size() == 2);
  REQUIRE((wide.words()[1] >> 6) == 0);
}
