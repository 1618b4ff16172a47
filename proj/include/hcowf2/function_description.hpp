#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "hcowf2/bitvec.hpp"
#include "hcowf2/characteristic.hpp"
#include "hcowf2/digest.hpp"
#include "hcowf2/errors.hpp"
#include "hcowf2/rng.hpp"

namespace hcowf2 {

inline constexpr std::uint16_t kFdFormatVersion = 1;

// Everything needed to reproduce one function instance: the characteristic
// function H plus the ordered parameter set Q of n^2 n-bit values, one per
// chained computation.
struct FunctionDescription {
  std::uint16_t version = kFdFormatVersion;
  CharacteristicFunction h;
  std::vector<Bitvec> q_set;
  std::optional<Seed256> seed; // provenance only; not serialized

  std::size_t n() const { return h.n; }
  std::size_t k() const { return h.k; }
};

struct MacTag {
  Bitvec value;

  bool operator==(const MacTag &o) const { return value == o.value; }
  bool operator!=(const MacTag &o) const { return !(*this == o); }
  std::string to_hex() const { return value.to_hex(); }
};

// Audit record of one full evaluation: all n^2 (input, q, output) triples
// in chain order.
struct EvalTrace {
  struct Step {
    Bitvec input_state;
    Bitvec q;
    Bitvec output;
  };
  std::vector<Step> steps;
};

struct CollisionStats {
  std::uint64_t input_repeats = 0;
  std::uint64_t output_collisions = 0;
  double estimated_c = 0.0;
};

struct EvalResult {
  MacTag tag;
  std::optional<EvalTrace> trace;
  std::uint64_t h_invocations = 0;
};

// Q distinctness is an invariant except where it is impossible: n = 3 is
// the only n >= 2 with n^2 > 2^n, so there a duplicate entry is not an
// error. Everywhere else duplicates would let a chained input pair repeat.
inline bool q_distinctness_required(std::size_t n) {
  return !(n == 3);
}

namespace detail {

inline std::optional<std::string> description_violation(const FunctionDescription &fd) {
  if (auto v = characteristic_violation(fd.h))
    return v;
  const std::size_t n = fd.h.n;
  if (fd.q_set.size() != n * n)
    return "Q must contain exactly n^2 entries";
  std::unordered_set<Bitvec, Bitvec::Hash> seen;
  for (const Bitvec &q : fd.q_set) {
    if (q.width() != n)
      return "Q entry width differs from n";
    if (!seen.insert(q).second && q_distinctness_required(n))
      return "duplicate Q entry";
  }
  return std::nullopt;
}

} // namespace detail

inline void validate_description(const FunctionDescription &fd) {
  if (auto v = detail::description_violation(fd))
    throw DescriptionInvalid(*v);
}

// Generates a complete instance from one seed: clause draws on stream 0
// (identical to generate_characteristic_function), Q draws on stream 1,
// so the same seed gives the same H whether or not a Q set is attached.
inline FunctionDescription make_function_description(const Seed256 &seed, std::size_t n,
                                                     std::size_t k) {
  FunctionDescription fd;
  fd.h = generate_characteristic_function(seed, n, k);
  fd.seed = seed;

  DeterministicRng rng(seed, /*stream=*/1);
  const bool distinct = q_distinctness_required(n);
  const std::uint64_t rejection_bound = 1000ull * n * n;
  std::uint64_t consecutive_rejections = 0;
  std::unordered_set<Bitvec, Bitvec::Hash> seen;
  fd.q_set.reserve(n * n);
  while (fd.q_set.size() < n * n) {
    Bitvec q = rng.bits(n);
    if (distinct && !seen.insert(q).second) {
      if (++consecutive_rejections > rejection_bound)
        throw GenerationExhausted("Q resampling exceeded " + std::to_string(rejection_bound) +
                                  " consecutive rejections");
      continue;
    }
    consecutive_rejections = 0;
    fd.q_set.push_back(std::move(q));
  }
  return fd;
}

inline FunctionDescription make_function_description(std::uint64_t seed, std::size_t n,
                                                     std::size_t k) {
  return make_function_description(seed_from_u64(seed), n, k);
}

inline FunctionDescription make_function_description(std::uint64_t seed, std::size_t n) {
  return make_function_description(seed_from_u64(seed), n, default_k(n));
}

// The one-way function proper: s_0 = p, s_{i+1} = H(s_i, q_i) for the n^2
// entries of Q in order; the tag is the final state. Each computation's
// input pair (s_i, q_i) is unique because the q_i are distinct.
inline EvalResult evaluate(const FunctionDescription &fd, const Bitvec &p,
                           bool with_trace = false) {
  validate_description(fd);
  if (p.width() != fd.n())
    throw WidthMismatch("evaluate expects a " + std::to_string(fd.n()) + "-bit input");

  HEvaluator ev(fd.h);
  EvalResult result;
  if (with_trace)
    result.trace.emplace();

  Bitvec state = p;
  Bitvec next(fd.n());
  for (const Bitvec &q : fd.q_set) {
    ev.eval_into(state, q, next);
    if (with_trace)
      result.trace->steps.push_back(EvalTrace::Step{state, q, next});
    std::swap(state, next);
  }
  result.tag = MacTag{state};
  result.h_invocations = ev.calls();
  return result;
}

// Maps an arbitrary message to an n-bit input: the first n bits of
// SHA-256(message), extended in counter mode (SHA-256(message || be32(i))
// for i >= 1) when n exceeds 256. Bits are taken LSB-first per byte, the
// same packing the Q block uses.
inline Bitvec derive_input(const std::vector<std::uint8_t> &message, std::size_t n) {
  if (n < 2)
    throw ParameterError("derive_input requires n >= 2");
  std::vector<std::uint8_t> stream;
  stream.reserve(Bitvec::byte_count(n) + 32);
  std::uint32_t counter = 0;
  while (stream.size() < Bitvec::byte_count(n)) {
    Digest256 block;
    if (counter == 0) {
      block = sha256(message);
    } else {
      std::vector<std::uint8_t> buf(message);
      for (int b = 3; b >= 0; --b)
        buf.push_back(static_cast<std::uint8_t>(counter >> (8 * b)));
      block = sha256(buf);
    }
    stream.insert(stream.end(), block.begin(), block.end());
    ++counter;
  }
  return Bitvec::from_bytes_lsb(n, stream.data(), stream.size());
}

inline Bitvec derive_input(const std::string &message, std::size_t n) {
  return derive_input(std::vector<std::uint8_t>(message.begin(), message.end()), n);
}

// Counts repeated (input, q) pairs and repeated outputs across the trace.
// estimated_c scales the observed output collisions by 2^n over the
// number of step pairs, matching the c/2^n repeat-probability model; it
// is an estimator only, no target value is asserted anywhere.
inline CollisionStats check_uniqueness(const EvalTrace &trace) {
  CollisionStats stats;
  struct PairHash {
    std::size_t operator()(const std::pair<Bitvec, Bitvec> &p) const {
      return Bitvec::Hash{}(p.first) * 0x9e3779b97f4a7c15ull + Bitvec::Hash{}(p.second);
    }
  };
  std::unordered_set<std::pair<Bitvec, Bitvec>, PairHash> inputs;
  std::unordered_set<Bitvec, Bitvec::Hash> outputs;
  for (const EvalTrace::Step &s : trace.steps) {
    if (!inputs.insert({s.input_state, s.q}).second)
      ++stats.input_repeats;
    if (!outputs.insert(s.output).second)
      ++stats.output_collisions;
  }
  if (!trace.steps.empty()) {
    const double n = static_cast<double>(trace.steps.front().input_state.width());
    const double steps = static_cast<double>(trace.steps.size());
    const double pairs = steps * (steps - 1.0) / 2.0;
    if (pairs > 0)
      stats.estimated_c =
          static_cast<double>(stats.output_collisions) * std::exp2(n) / pairs;
  }
  return stats;
}

} // namespace hcowf2
