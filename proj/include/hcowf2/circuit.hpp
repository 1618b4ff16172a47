#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hcowf2/errors.hpp"
#include "hcowf2/function_description.hpp"

namespace hcowf2 {

// Gate-level combinational circuit. Wires are dense ids: [0, inputs) are
// the free input variables, inputs + i is the output of gates[i]. Gates
// only reference earlier wires, so the list is already in topological
// order.
struct Circuit {
  enum class Kind : std::uint8_t { And2, Or2, Not, Const };

  struct Gate {
    Kind kind;
    std::uint32_t a = 0; // operand wire; constant value (0/1) for Const
    std::uint32_t b = 0; // second operand for And2/Or2
  };

  std::uint32_t inputs = 0;
  std::vector<Gate> gates;
  std::uint32_t output = 0;

  std::size_t wire_count() const { return inputs + gates.size(); }
};

class CircuitBuilder {
public:
  explicit CircuitBuilder(std::uint32_t inputs) { circuit_.inputs = inputs; }

  std::uint32_t add_and(std::uint32_t a, std::uint32_t b) {
    return add(Circuit::Gate{Circuit::Kind::And2, a, b});
  }
  std::uint32_t add_or(std::uint32_t a, std::uint32_t b) {
    return add(Circuit::Gate{Circuit::Kind::Or2, a, b});
  }
  std::uint32_t add_not(std::uint32_t a) {
    return add(Circuit::Gate{Circuit::Kind::Not, a, 0});
  }
  std::uint32_t add_const(bool value) {
    return add(Circuit::Gate{Circuit::Kind::Const, value ? 1u : 0u, 0});
  }

  // Left fold; count-1 binary gates.
  std::uint32_t or_tree(std::span<const std::uint32_t> wires) {
    std::uint32_t acc = wires[0];
    for (std::size_t i = 1; i < wires.size(); ++i)
      acc = add_or(acc, wires[i]);
    return acc;
  }
  std::uint32_t and_tree(std::span<const std::uint32_t> wires) {
    std::uint32_t acc = wires[0];
    for (std::size_t i = 1; i < wires.size(); ++i)
      acc = add_and(acc, wires[i]);
    return acc;
  }

  Circuit finish(std::uint32_t output) {
    circuit_.output = output;
    return std::move(circuit_);
  }

private:
  std::uint32_t add(Circuit::Gate g) {
    circuit_.gates.push_back(g);
    return static_cast<std::uint32_t>(circuit_.inputs + circuit_.gates.size() - 1);
  }

  Circuit circuit_;
};

// All wire values for the given input assignment, in wire order.
inline std::vector<std::uint8_t> simulate_wires(const Circuit &c, const Bitvec &inputs) {
  if (inputs.width() != c.inputs)
    throw WidthMismatch("circuit expects " + std::to_string(c.inputs) + " input bits");
  std::vector<std::uint8_t> values(c.wire_count());
  for (std::uint32_t i = 0; i < c.inputs; ++i)
    values[i] = inputs.bit(i);
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    const Circuit::Gate &gate = c.gates[g];
    std::uint8_t v = 0;
    switch (gate.kind) {
    case Circuit::Kind::And2:
      v = values[gate.a] & values[gate.b];
      break;
    case Circuit::Kind::Or2:
      v = values[gate.a] | values[gate.b];
      break;
    case Circuit::Kind::Not:
      v = values[gate.a] ^ 1u;
      break;
    case Circuit::Kind::Const:
      v = static_cast<std::uint8_t>(gate.a & 1u);
      break;
    }
    values[c.inputs + g] = v;
  }
  return values;
}

inline bool simulate(const Circuit &c, const Bitvec &inputs) {
  return simulate_wires(c, inputs)[c.output] != 0;
}

inline constexpr std::size_t kDefaultCircuitCap = 16;

// Unrolls the full n^2-step chain into one circuit over the n free bits
// of p. Every step instantiates the complete clause circuitry of H: each
// negated literal gets its own NOT gate, each clause an OR chain, each
// output bit an AND chain; q bits are wired to two shared constant gates.
// The final output ANDs the per-bit comparisons against the target tag
// (constant-folded: XNOR against a constant bit is the wire itself or its
// negation).
inline Circuit build_composed_circuit(const FunctionDescription &fd, const MacTag &target,
                                      std::size_t max_n = kDefaultCircuitCap) {
  validate_description(fd);
  const std::size_t n = fd.n();
  if (target.value.width() != n)
    throw WidthMismatch("target tag width differs from n");
  if (n > max_n)
    throw ScaleRefused("composed circuit refused for n = " + std::to_string(n) +
                       " (cap " + std::to_string(max_n) + "); the unrolled chain has Ω(n^4) gates");

  CircuitBuilder b(static_cast<std::uint32_t>(n));
  const std::uint32_t const_false = b.add_const(false);
  const std::uint32_t const_true = b.add_const(true);

  std::vector<std::uint32_t> state(n);
  for (std::size_t i = 0; i < n; ++i)
    state[i] = static_cast<std::uint32_t>(i);

  std::vector<std::uint32_t> clause_wires(n);
  std::vector<std::uint32_t> lit_wires(fd.k());
  std::vector<std::uint32_t> next(n);

  for (const Bitvec &q : fd.q_set) {
    for (std::size_t j = 0; j < n; ++j) {
      const OutputFormula &formula = fd.h.formulas[j];
      for (std::size_t c = 0; c < n; ++c) {
        const Clause &clause = formula.clauses[c];
        for (std::size_t t = 0; t < clause.literals.size(); ++t) {
          const Literal &l = clause.literals[t];
          std::uint32_t wire;
          if (l.variable < n)
            wire = state[l.variable];
          else
            wire = q.bit(l.variable - n) ? const_true : const_false;
          if (l.negated)
            wire = b.add_not(wire);
          lit_wires[t] = wire;
        }
        clause_wires[c] = b.or_tree(lit_wires);
      }
      next[j] = b.and_tree(clause_wires);
    }
    state = next;
  }

  std::vector<std::uint32_t> equal_bits(n);
  for (std::size_t j = 0; j < n; ++j)
    equal_bits[j] = target.value.bit(j) ? state[j] : b.add_not(state[j]);
  return b.finish(b.and_tree(equal_bits));
}

} // namespace hcowf2
