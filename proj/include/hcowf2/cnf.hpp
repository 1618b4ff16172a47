#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "hcowf2/circuit.hpp"

namespace hcowf2 {

// CNF over 1-based variables, DIMACS literal convention: +v is the
// variable, -v its negation. All clauses have width <= 3 when produced by
// tseytin_transform.
struct CnfFormula {
  std::uint32_t num_vars = 0;
  std::vector<std::vector<std::int32_t>> clauses;

  std::size_t clause_count() const { return clauses.size(); }
};

// Standard gate encoding, one auxiliary variable per gate: variable i+1
// is wire i, so variables 1..inputs are the circuit's free inputs and the
// rest are gate outputs. And2/Or2 emit 3 clauses, Not 2, Const 1, plus
// one unit clause asserting the output wire. Satisfiable iff some input
// makes the circuit true; any model restricted to the input variables is
// such an input.
inline CnfFormula tseytin_transform(const Circuit &c) {
  CnfFormula f;
  f.num_vars = static_cast<std::uint32_t>(c.wire_count());
  f.clauses.reserve(3 * c.gates.size() + 1);

  const auto lit = [](std::uint32_t wire, bool positive) {
    const auto v = static_cast<std::int32_t>(wire + 1);
    return positive ? v : -v;
  };

  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Circuit::Gate &gate = c.gates[i];
    const std::uint32_t g = static_cast<std::uint32_t>(c.inputs + i);
    switch (gate.kind) {
    case Circuit::Kind::And2:
      // g <-> a & b
      f.clauses.push_back({lit(g, false), lit(gate.a, true)});
      f.clauses.push_back({lit(g, false), lit(gate.b, true)});
      f.clauses.push_back({lit(g, true), lit(gate.a, false), lit(gate.b, false)});
      break;
    case Circuit::Kind::Or2:
      // g <-> a | b
      f.clauses.push_back({lit(g, true), lit(gate.a, false)});
      f.clauses.push_back({lit(g, true), lit(gate.b, false)});
      f.clauses.push_back({lit(g, false), lit(gate.a, true), lit(gate.b, true)});
      break;
    case Circuit::Kind::Not:
      // g <-> !a
      f.clauses.push_back({lit(g, true), lit(gate.a, true)});
      f.clauses.push_back({lit(g, false), lit(gate.a, false)});
      break;
    case Circuit::Kind::Const:
      f.clauses.push_back({lit(g, gate.a != 0)});
      break;
    }
  }
  f.clauses.push_back({lit(c.output, true)});
  return f;
}

inline void to_dimacs(const CnfFormula &f, std::ostream &out) {
  out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (const auto &clause : f.clauses) {
    for (std::int32_t l : clause)
      out << l << ' ';
    out << "0\n";
  }
}

} // namespace hcowf2
