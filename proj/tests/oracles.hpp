#pragma once

// Reference implementations used as referees by the test suite. They are
// deliberately naive (per-object walks, full enumeration) and share no
// evaluation logic with the library paths they check, only data types.

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hcowf2/hcowf2.hpp"

namespace oracle {

inline bool literal_true(const hcowf2::Literal &l, const hcowf2::Bitvec &p,
                         const hcowf2::Bitvec &q) {
  const std::size_t n = p.width();
  const bool value = l.variable < n ? p.bit(l.variable) : q.bit(l.variable - n);
  return value != l.negated;
}

inline bool clause_true(const hcowf2::Clause &c, const hcowf2::Bitvec &p,
                        const hcowf2::Bitvec &q) {
  for (const hcowf2::Literal &l : c.literals)
    if (literal_true(l, p, q))
      return true;
  return false;
}

inline hcowf2::Bitvec eval_H(const hcowf2::CharacteristicFunction &h, const hcowf2::Bitvec &p,
                             const hcowf2::Bitvec &q) {
  hcowf2::Bitvec out(h.n);
  for (std::size_t j = 0; j < h.n; ++j) {
    bool all = true;
    for (const hcowf2::Clause &c : h.formulas[j].clauses) {
      if (!clause_true(c, p, q)) {
        all = false;
        break;
      }
    }
    out.set_bit(j, all);
  }
  return out;
}

inline hcowf2::Bitvec chain(const hcowf2::FunctionDescription &fd, const hcowf2::Bitvec &p) {
  hcowf2::Bitvec state = p;
  for (const hcowf2::Bitvec &q : fd.q_set)
    state = oracle::eval_H(fd.h, state, q);
  return state;
}

// All p (as integers) with chain(p) == tag; exhaustive over 2^n inputs.
inline std::vector<std::uint64_t> preimages(const hcowf2::FunctionDescription &fd,
                                            const hcowf2::Bitvec &tag) {
  const std::size_t n = fd.n();
  if (n > 20)
    throw std::logic_error("oracle::preimages is exhaustive; n too large");
  std::vector<std::uint64_t> result;
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << n); ++p)
    if (chain(fd, hcowf2::Bitvec::from_u64(n, p)) == tag)
      result.push_back(p);
  return result;
}

// ---- CNF referees ----

// assign is 1-based: assign[v] is the value of variable v.
inline bool cnf_satisfied(const hcowf2::CnfFormula &f, const std::vector<bool> &assign) {
  for (const auto &clause : f.clauses) {
    bool sat = false;
    for (std::int32_t lit : clause) {
      const auto v = static_cast<std::size_t>(lit > 0 ? lit : -lit);
      if (assign[v] == (lit > 0)) {
        sat = true;
        break;
      }
    }
    if (!sat)
      return false;
  }
  return true;
}

inline std::optional<std::vector<bool>> brute_sat(const hcowf2::CnfFormula &f) {
  if (f.num_vars > 24)
    throw std::logic_error("oracle::brute_sat is exhaustive; formula too large");
  std::vector<bool> assign(f.num_vars + 1, false);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << f.num_vars); ++bits) {
    for (std::uint32_t v = 1; v <= f.num_vars; ++v)
      assign[v] = (bits >> (v - 1)) & 1;
    if (cnf_satisfied(f, assign))
      return assign;
  }
  return std::nullopt;
}

// All satisfying assignments projected to variables 1..inputs.
inline std::set<std::uint64_t> brute_models_projected(const hcowf2::CnfFormula &f,
                                                      std::uint32_t inputs) {
  if (f.num_vars > 24)
    throw std::logic_error("oracle::brute_models_projected is exhaustive; formula too large");
  std::set<std::uint64_t> result;
  std::vector<bool> assign(f.num_vars + 1, false);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << f.num_vars); ++bits) {
    for (std::uint32_t v = 1; v <= f.num_vars; ++v)
      assign[v] = (bits >> (v - 1)) & 1;
    if (cnf_satisfied(f, assign))
      result.insert(bits & ((std::uint64_t{1} << inputs) - 1));
  }
  return result;
}

// [begin, end) clause index range contributed by each gate, mirroring the
// emission order of tseytin_transform (And2/Or2: 3, Not: 2, Const: 1).
inline std::vector<std::pair<std::size_t, std::size_t>>
tseytin_gate_ranges(const hcowf2::Circuit &c) {
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  ranges.reserve(c.gates.size());
  std::size_t pos = 0;
  for (const hcowf2::Circuit::Gate &g : c.gates) {
    std::size_t width = 0;
    switch (g.kind) {
    case hcowf2::Circuit::Kind::And2:
    case hcowf2::Circuit::Kind::Or2:
      width = 3;
      break;
    case hcowf2::Circuit::Kind::Not:
      width = 2;
      break;
    case hcowf2::Circuit::Kind::Const:
      width = 1;
      break;
    }
    ranges.emplace_back(pos, pos + width);
    pos += width;
  }
  return ranges;
}

inline bool range_satisfied(const hcowf2::CnfFormula &f, const std::vector<bool> &assign,
                            std::size_t begin, std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) {
    bool sat = false;
    for (std::int32_t lit : f.clauses[i]) {
      const auto v = static_cast<std::size_t>(lit > 0 ? lit : -lit);
      if (assign[v] == (lit > 0)) {
        sat = true;
        break;
      }
    }
    if (!sat)
      return false;
  }
  return true;
}

// Certifies, for every input assignment x, that the Tseytin image of the
// circuit behaves exactly like the circuit:
//   1. the simulated wire extension of x satisfies every gate clause, and
//      the final output unit clause iff the circuit outputs 1;
//   2. flipping any single gate's wire value violates a clause of that
//      same gate (so gate values are forced in topological order, and no
//      model can project onto an input outside the circuit's preimage).
// Together these prove: CNF models, projected to the input variables, are
// exactly {x : circuit(x) = 1}.
inline bool forced_extension_ok(const hcowf2::Circuit &c, const hcowf2::CnfFormula &f) {
  if (c.inputs > 16)
    throw std::logic_error("oracle::forced_extension_ok is exhaustive; too many inputs");
  if (f.num_vars != c.wire_count())
    return false;
  const auto ranges = tseytin_gate_ranges(c);
  if (f.clauses.size() != (ranges.empty() ? 0 : ranges.back().second) + 1)
    return false; // gate clauses plus exactly one output unit clause

  for (std::uint64_t x = 0; x < (std::uint64_t{1} << c.inputs); ++x) {
    const auto wires = hcowf2::simulate_wires(c, hcowf2::Bitvec::from_u64(c.inputs, x));
    std::vector<bool> assign(f.num_vars + 1, false);
    for (std::size_t w = 0; w < wires.size(); ++w)
      assign[w + 1] = wires[w] != 0;

    for (std::size_t g = 0; g < ranges.size(); ++g) {
      if (!range_satisfied(f, assign, ranges[g].first, ranges[g].second))
        return false;
      assign[c.inputs + g + 1] = !assign[c.inputs + g + 1];
      if (range_satisfied(f, assign, ranges[g].first, ranges[g].second))
        return false;
      assign[c.inputs + g + 1] = !assign[c.inputs + g + 1];
    }

    const bool output_unit_sat =
        range_satisfied(f, assign, f.clauses.size() - 1, f.clauses.size());
    if (output_unit_sat != (wires[c.output] != 0))
      return false;
  }
  return true;
}

} // namespace oracle
