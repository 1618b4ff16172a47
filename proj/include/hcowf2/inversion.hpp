#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "hcowf2/circuit.hpp"
#include "hcowf2/cnf.hpp"
#include "hcowf2/function_description.hpp"
#include "hcowf2/sat.hpp"

namespace hcowf2 {

// Outcome of a desk-scale inversion, with the constructed formula sizes
// next to the symbolic 3m/3m accounting so the two columns can be
// compared. `model_sat_calls` is the 3n^4 decision count of the
// self-reduction cost model (every variable recovered); the recovery loop
// here only needs the n input bits, one decision each, because unit
// propagation forces all auxiliaries.
struct InversionReport {
  std::optional<Bitvec> preimage; // empty = no preimage exists

  std::uint64_t sat_calls_recovery = 0; // decisions inside the bit-recovery loop
  std::uint64_t sat_calls_total = 0;    // including the initial feasibility decision
  double model_sat_calls = 0.0;         // symbolic: 3n^4

  std::uint64_t circuit_gates = 0;
  std::uint64_t cnf_variables = 0;
  std::uint64_t cnf_aux_variables = 0;
  std::uint64_t cnf_clauses = 0;
  double model_aux_variables = 0.0; // symbolic: 3m
  double model_clauses = 0.0;       // symbolic: 3m
};

// Inverts by self-reduction over the Tseytin image of the composed
// circuit: one feasibility decision, then one SAT decision per input bit
// with accumulated unit assumptions. Input variables are CNF variables
// 1..n by construction.
inline InversionReport invert_small(const FunctionDescription &fd, const MacTag &target,
                                    std::size_t circuit_cap = kDefaultCircuitCap,
                                    const SatOptions &sat_options = {}) {
  const Circuit circuit = build_composed_circuit(fd, target, circuit_cap);
  const CnfFormula formula = tseytin_transform(circuit);
  const std::size_t n = fd.n();

  InversionReport report;
  report.circuit_gates = circuit.gates.size();
  report.cnf_variables = formula.num_vars;
  report.cnf_aux_variables = formula.num_vars - circuit.inputs;
  report.cnf_clauses = formula.clauses.size();
  const double m = static_cast<double>(circuit.gates.size());
  report.model_aux_variables = 3.0 * m;
  report.model_clauses = 3.0 * m;
  const double nd = static_cast<double>(n);
  report.model_sat_calls = 3.0 * nd * nd * nd * nd;

  SatResult feasible = sat_decide(formula, {}, sat_options);
  report.sat_calls_total = 1;
  if (!feasible.satisfiable)
    return report;

  std::vector<std::int32_t> assumptions;
  assumptions.reserve(n);
  Bitvec p(n);
  for (std::size_t bit = 0; bit < n; ++bit) {
    const auto var = static_cast<std::int32_t>(bit + 1);
    assumptions.push_back(-var); // try this input bit = 0
    const SatResult r = sat_decide(formula, assumptions, sat_options);
    ++report.sat_calls_recovery;
    ++report.sat_calls_total;
    if (r.satisfiable) {
      p.set_bit(bit, false);
    } else {
      assumptions.back() = var; // forced to 1 given the prefix
      p.set_bit(bit, true);
    }
  }

  if (evaluate(fd, p).tag != target)
    throw Error("internal inversion error: recovered input does not reproduce the tag");
  report.preimage = p;
  return report;
}

} // namespace hcowf2
