#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "hcowf2/errors.hpp"
#include "hcowf2/rng.hpp"

namespace hcowf2 {

// A literal over the 2n shared variables. Indices [0, n) address bits of
// p, [n, 2n) address bits of q.
struct Literal {
  std::uint32_t variable = 0;
  bool negated = false;

  bool operator==(const Literal &o) const {
    return variable == o.variable && negated == o.negated;
  }
  bool operator!=(const Literal &o) const { return !(*this == o); }
};

// A width-k disjunction in canonical form: literals sorted by strictly
// ascending variable index, so equal clauses compare equal elementwise.
struct Clause {
  std::vector<Literal> literals;

  Clause() = default;
  explicit Clause(std::vector<Literal> lits) : literals(std::move(lits)) { canonicalize(); }

  std::size_t width() const { return literals.size(); }

  void canonicalize() {
    std::sort(literals.begin(), literals.end(),
              [](const Literal &a, const Literal &b) { return a.variable < b.variable; });
  }

  bool is_canonical() const {
    for (std::size_t i = 1; i < literals.size(); ++i)
      if (literals[i - 1].variable >= literals[i].variable)
        return false;
    return true;
  }

  bool same_variable_set(const Clause &o) const {
    if (literals.size() != o.literals.size())
      return false;
    for (std::size_t i = 0; i < literals.size(); ++i)
      if (literals[i].variable != o.literals[i].variable)
        return false;
    return true;
  }

  bool operator==(const Clause &o) const { return literals == o.literals; }
  bool operator!=(const Clause &o) const { return !(*this == o); }
};

// True iff the clauses range over the identical variable set and their
// polarity vectors differ in exactly one position: the pair would resolve
// to a shorter clause, so such a pair is forbidden in a generated set.
inline bool is_reducible_pair(const Clause &c, const Clause &c2) {
  if (!c.same_variable_set(c2))
    return false;
  std::size_t diff = 0;
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    if (c.literals[i].negated != c2.literals[i].negated && ++diff > 1)
      return false;
  }
  return diff == 1;
}

inline void require_clause_params(std::size_t n, std::size_t k) {
  if (k <= 2)
    throw ParameterError("clause width k must be > 2, got " + std::to_string(k));
  if (k > 2 * n)
    throw ParameterError("clause width k must be <= 2n = " + std::to_string(2 * n) +
                         ", got " + std::to_string(k));
}

// One uniform draw: k distinct variables from [0, 2n), each with an
// independent uniform polarity. Draw order (variable, then polarity, with
// in-place rejection of repeated variables) is part of the format: golden
// fixtures pin it.
inline Clause generate_clause(DeterministicRng &rng, std::size_t n, std::size_t k) {
  require_clause_params(n, k);
  const std::uint64_t domain = 2 * n;
  std::vector<Literal> lits;
  lits.reserve(k);
  std::vector<bool> used(domain, false);
  while (lits.size() < k) {
    const auto v = static_cast<std::uint32_t>(rng.bounded(domain));
    if (used[v])
      continue;
    used[v] = true;
    lits.push_back(Literal{v, rng.bit()});
  }
  return Clause(std::move(lits));
}

} // namespace hcowf2
