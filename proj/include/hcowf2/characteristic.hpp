#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hcowf2/bitvec.hpp"
#include "hcowf2/clause.hpp"
#include "hcowf2/errors.hpp"
#include "hcowf2/rng.hpp"

namespace hcowf2 {

// Conjunction of exactly n clauses; one per output bit of H.
struct OutputFormula {
  std::vector<Clause> clauses;
};

// The characteristic random function H: {0,1}^n x {0,1}^n -> {0,1}^n,
// defined by n output formulas of n irreducible k-CNF clauses over 2n
// shared variables (n^2 clauses total, no duplicate, no reducible pair
// anywhere in the set).
struct CharacteristicFunction {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<OutputFormula> formulas;

  std::size_t clause_count() const { return n * n; }
};

struct GateCountModel {
  std::uint64_t or_gates = 0;
  std::uint64_t and_gates = 0;
  std::uint64_t not_gates = 0;
  std::uint64_t total = 0;
};

// Default clause width: a conjunction of n width-k clauses over uniform
// inputs is true with probability ~exp(-n/2^k), so k = log2(n/ln 2) keeps
// each output bit near unbiased. Floor of 3 because k > 2 is required.
inline std::size_t default_k(std::size_t n) {
  const double ideal = std::log2(static_cast<double>(n) / std::log(2.0));
  const auto rounded = static_cast<long>(std::lround(ideal));
  return static_cast<std::size_t>(std::max(3l, rounded));
}

namespace detail {

inline std::uint64_t variable_set_hash(const Clause &c) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const Literal &l : c.literals) {
    h ^= l.variable;
    h *= 0x100000001b3ull;
    h ^= h >> 29;
  }
  return h;
}

// Groups clauses by variable set so duplicate / reducible-pair candidates
// can be found without a pairwise scan. Same-set clauses land in one
// bucket; cross-set pairs are never reducible.
class ClauseIndex {
public:
  // Returns the polarity hamming distance to the closest same-set clause
  // already present (0 = duplicate, 1 = reducible pair), or nullopt if no
  // conflict at distance <= 1.
  std::optional<std::size_t> conflict(const std::vector<Clause> &store, const Clause &c) const {
    const auto it = buckets_.find(variable_set_hash(c));
    if (it == buckets_.end())
      return std::nullopt;
    for (std::uint32_t id : it->second) {
      const Clause &other = store[id];
      if (!other.same_variable_set(c))
        continue;
      std::size_t diff = 0;
      for (std::size_t i = 0; i < c.literals.size() && diff <= 1; ++i)
        diff += c.literals[i].negated != other.literals[i].negated;
      if (diff <= 1)
        return diff;
    }
    return std::nullopt;
  }

  void add(const std::vector<Clause> &store, std::uint32_t id) {
    buckets_[variable_set_hash(store[id])].push_back(id);
  }

private:
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets_;
};

// Shared by the generator and by validation of decoded descriptions.
// Returns a diagnostic for the first violated invariant, or nullopt.
inline std::optional<std::string> characteristic_violation(const CharacteristicFunction &h) {
  if (h.n < 2)
    return "n must be >= 2";
  if (h.k <= 2 || h.k > 2 * h.n)
    return "k must satisfy 2 < k <= 2n";
  if (h.formulas.size() != h.n)
    return "expected " + std::to_string(h.n) + " output formulas";

  std::vector<Clause> flat;
  flat.reserve(h.n * h.n);
  for (const OutputFormula &f : h.formulas) {
    if (f.clauses.size() != h.n)
      return "expected " + std::to_string(h.n) + " clauses per output formula";
    for (const Clause &c : f.clauses) {
      if (c.width() != h.k)
        return "clause width differs from k";
      if (!c.is_canonical())
        return "clause not in canonical form (sorted, distinct variables)";
      if (c.literals.back().variable >= 2 * h.n)
        return "literal variable index out of range";
      flat.push_back(c);
    }
  }

  ClauseIndex index;
  for (std::uint32_t id = 0; id < flat.size(); ++id) {
    if (const auto dist = index.conflict(flat, flat[id]))
      return *dist == 0 ? "duplicate clause in C" : "reducible clause pair in C";
    index.add(flat, id);
  }
  return std::nullopt;
}

} // namespace detail

// Draws the full clause set C for one instance: n formulas of n clauses,
// resampling any draw that would duplicate an existing clause or form a
// reducible pair with one. Pure function of (seed, n, k).
inline CharacteristicFunction generate_characteristic_function(const Seed256 &seed,
                                                               std::size_t n, std::size_t k) {
  if (n < 2)
    throw ParameterError("security parameter n must be >= 2, got " + std::to_string(n));
  require_clause_params(n, k);

  DeterministicRng rng(seed, /*stream=*/0);
  const std::uint64_t rejection_bound = 1000ull * n * n;

  std::vector<Clause> flat;
  flat.reserve(n * n);
  detail::ClauseIndex index;
  std::uint64_t consecutive_rejections = 0;

  while (flat.size() < n * n) {
    Clause candidate = generate_clause(rng, n, k);
    if (index.conflict(flat, candidate)) {
      if (++consecutive_rejections > rejection_bound)
        throw GenerationExhausted("clause resampling exceeded " +
                                  std::to_string(rejection_bound) +
                                  " consecutive rejections; (n, k) too tight");
      continue;
    }
    consecutive_rejections = 0;
    flat.push_back(std::move(candidate));
    index.add(flat, static_cast<std::uint32_t>(flat.size() - 1));
  }

  CharacteristicFunction h;
  h.n = n;
  h.k = k;
  h.formulas.resize(n);
  auto it = flat.begin();
  for (OutputFormula &f : h.formulas) {
    f.clauses.assign(std::make_move_iterator(it), std::make_move_iterator(it + static_cast<std::ptrdiff_t>(n)));
    it += static_cast<std::ptrdiff_t>(n);
  }
  return h;
}

// Evaluation engine for H. Flattens every literal to a (word, mask, flip)
// probe into the concatenated (p, q) word buffer, so the hot loop does no
// per-literal branching on the p/q split. Immutable after construction;
// safe for concurrent eval() calls except for the shared call counter,
// which is per-instance (use one evaluator per thread when counting).
class HEvaluator {
public:
  explicit HEvaluator(const CharacteristicFunction &h)
      : n_(h.n), k_(h.k), state_words_(2 * Bitvec::word_count(h.n)) {
    const std::size_t p_words = Bitvec::word_count(n_);
    word_.reserve(n_ * n_ * k_);
    mask_.reserve(n_ * n_ * k_);
    flip_.reserve(n_ * n_ * k_);
    for (const OutputFormula &f : h.formulas) {
      for (const Clause &c : f.clauses) {
        for (const Literal &l : c.literals) {
          const bool from_q = l.variable >= n_;
          const std::size_t local = from_q ? l.variable - n_ : l.variable;
          word_.push_back(static_cast<std::uint32_t>(local / 64 + (from_q ? p_words : 0)));
          const std::uint64_t m = std::uint64_t{1} << (local % 64);
          mask_.push_back(m);
          flip_.push_back(l.negated ? m : 0);
        }
      }
    }
  }

  Bitvec eval(const Bitvec &p, const Bitvec &q) {
    if (p.width() != n_ || q.width() != n_)
      throw WidthMismatch("H expects two " + std::to_string(n_) + "-bit inputs");
    load_state(p, q);
    Bitvec out(n_);
    eval_loaded(out);
    return out;
  }

  std::uint64_t calls() const { return calls_; }
  std::size_t n() const { return n_; }

  // Chained-evaluation fast path: reuses the previous output as the next
  // p without round-tripping through Bitvec packing.
  void eval_into(const Bitvec &p, const Bitvec &q, Bitvec &out) {
    load_state(p, q);
    eval_loaded(out);
  }

private:
  void load_state(const Bitvec &p, const Bitvec &q) {
    const std::size_t pw = p.words().size();
    for (std::size_t i = 0; i < pw; ++i)
      state_words_[i] = p.words()[i];
    for (std::size_t i = 0; i < q.words().size(); ++i)
      state_words_[pw + i] = q.words()[i];
  }

  void eval_loaded(Bitvec &out) {
    ++calls_;
    std::size_t lit = 0;
    const std::uint64_t *buf = state_words_.data();
    for (std::size_t j = 0; j < n_; ++j) {
      bool all_clauses_true = true;
      for (std::size_t c = 0; c < n_; ++c) {
        bool clause_true = false;
        const std::size_t base = lit;
        for (std::size_t t = 0; t < k_; ++t) {
          const std::size_t i = base + t;
          if ((buf[word_[i]] ^ flip_[i]) & mask_[i]) {
            clause_true = true;
            break;
          }
        }
        lit = base + k_;
        if (!clause_true) {
          all_clauses_true = false;
          lit = (j * n_ + n_) * k_; // skip the rest of this formula
          break;
        }
      }
      out.set_bit(j, all_clauses_true);
    }
  }

  std::size_t n_;
  std::size_t k_;
  std::vector<std::uint64_t> state_words_;
  std::vector<std::uint32_t> word_;
  std::vector<std::uint64_t> mask_;
  std::vector<std::uint64_t> flip_;
  std::uint64_t calls_ = 0;
};

// One-shot evaluation. Builds a fresh evaluator per call; chained use
// should construct an HEvaluator once instead.
inline Bitvec eval_H(const CharacteristicFunction &h, const Bitvec &p, const Bitvec &q) {
  HEvaluator ev(h);
  return ev.eval(p, q);
}

// Structural gate model: per clause, (k-1) binary ORs plus one NOT per
// negated literal; per output bit, (n-1) binary ANDs.
inline GateCountModel gate_count(const CharacteristicFunction &h) {
  GateCountModel m;
  for (const OutputFormula &f : h.formulas) {
    for (const Clause &c : f.clauses) {
      m.or_gates += c.width() - 1;
      for (const Literal &l : c.literals)
        m.not_gates += l.negated;
    }
    m.and_gates += f.clauses.size() - 1;
  }
  m.total = m.or_gates + m.and_gates + m.not_gates;
  return m;
}

} // namespace hcowf2
