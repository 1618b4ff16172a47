#include <catch_amalgamated.hpp>

#include <algorithm>

#include "hcowf2/inversion.hpp"
#include "oracles.hpp"

using namespace hcowf2;

TEST_CASE("pinned n = 2 image: recover where possible, refuse where not", "[inversion]") {
  // Frozen from the independent reimplementation: chain maps
  // {0,1,2} -> 2 and {3} -> 3, so 0 and 1 have no preimage.
  const FunctionDescription fd = make_function_description(0, 2, 3);
  for (std::uint64_t pv = 0; pv < 4; ++pv) {
    const std::uint64_t expected = pv == 3 ? 3 : 2;
    REQUIRE(evaluate(fd, Bitvec::from_u64(2, pv)).tag.value.low_u64() == expected);
  }

  SECTION("target with three preimages") {
    const MacTag target{Bitvec::from_u64(2, 2)};
    const InversionReport r = invert_small(fd, target);
    REQUIRE(r.preimage.has_value());
    REQUIRE(r.preimage->low_u64() <= 2);
    REQUIRE(evaluate(fd, *r.preimage).tag == target);
    REQUIRE(r.sat_calls_recovery == 2);
    REQUIRE(r.sat_calls_total == 3);
  }
  SECTION("unique preimage") {
    const InversionReport r = invert_small(fd, MacTag{Bitvec::from_u64(2, 3)});
    REQUIRE(r.preimage.has_value());
    REQUIRE(r.preimage->low_u64() == 3);
  }
  SECTION("no preimage") {
    for (std::uint64_t target : {0ull, 1ull}) {
      const InversionReport r = invert_small(fd, MacTag{Bitvec::from_u64(2, target)});
      REQUIRE_FALSE(r.preimage.has_value());
      REQUIRE(r.sat_calls_total == 1); // the feasibility decision settles it
      REQUIRE(r.sat_calls_recovery == 0);
    }
  }
}

TEST_CASE("report sizes: constructed formula next to the symbolic model", "[inversion]") {
  const FunctionDescription fd = make_function_description(0, 2, 3);
  const MacTag target{Bitvec::from_u64(2, 2)};
  // Gate count depends on the target bits (the comparator inverts where the
  // target has a zero), so the reference circuit must use the same target.
  const Circuit circuit = build_composed_circuit(fd, target);
  const CnfFormula formula = tseytin_transform(circuit);

  const InversionReport r = invert_small(fd, target);
  REQUIRE(r.circuit_gates == circuit.gates.size());
  REQUIRE(r.cnf_variables == formula.num_vars);
  REQUIRE(r.cnf_aux_variables == formula.num_vars - 2);
  REQUIRE(r.cnf_clauses == formula.clauses.size());
  REQUIRE(r.model_aux_variables == 3.0 * static_cast<double>(circuit.gates.size()));
  REQUIRE(r.model_clauses == r.model_aux_variables);
  REQUIRE(r.model_sat_calls == 3.0 * 16.0); // 3 n^4 at n = 2
}

TEST_CASE("recovered preimages are members of the brute-force set", "[inversion]") {
  for (std::uint64_t seed : {0ull, 1ull, 2ull}) {
    const FunctionDescription fd = make_function_description(seed, 4, 3);
    // walk a few in-image targets derived from actual evaluations
    for (std::uint64_t pv : {0ull, 5ull, 9ull, 15ull}) {
      const MacTag target = evaluate(fd, Bitvec::from_u64(4, pv)).tag;
      const auto expected = oracle::preimages(fd, target.value);
      REQUIRE_FALSE(expected.empty());

      const InversionReport r = invert_small(fd, target);
      REQUIRE(r.preimage.has_value());
      REQUIRE(std::find(expected.begin(), expected.end(), r.preimage->low_u64()) !=
              expected.end());
      REQUIRE(r.sat_calls_total == 5);
    }
  }
}

TEST_CASE("targets outside the image report no preimage", "[inversion]") {
  const FunctionDescription fd = make_function_description(0, 4, 3);
  int outside = 0;
  for (std::uint64_t t = 0; t < 16 && outside < 3; ++t) {
    const Bitvec tag = Bitvec::from_u64(4, t);
    if (!oracle::preimages(fd, tag).empty())
      continue;
    ++outside;
    const InversionReport r = invert_small(fd, MacTag{tag});
    REQUIRE_FALSE(r.preimage.has_value());
  }
  REQUIRE(outside > 0); // the fixture image must not be the full space
}

TEST_CASE("caps propagate through the pipeline", "[inversion]") {
  const FunctionDescription fd = make_function_description(0, 4, 3);
  REQUIRE_THROWS_AS(invert_small(fd, MacTag{Bitvec(4)}, 2), ScaleRefused);

  SatOptions tiny;
  tiny.max_vars = 100;
  REQUIRE_THROWS_AS(invert_small(fd, MacTag{Bitvec(4)}, kDefaultCircuitCap, tiny), ScaleRefused);
}
