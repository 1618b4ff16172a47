#pragma once

#include <cstdint>
#include <cstdlib>
#include <vector>

#include "hcowf2/cnf.hpp"
#include "hcowf2/errors.hpp"

namespace hcowf2 {

struct SatOptions {
  std::uint32_t max_vars = 20000;
};

struct SatResult {
  bool satisfiable = false;
  // Indexed by variable (1-based); meaningful only when satisfiable.
  std::vector<bool> model;
};

namespace detail {

// DPLL with two watched literals per clause and chronological
// backtracking. No clause learning, no restarts; branching is
// lowest-index variable, false first. Decisions stay cheap because unit
// propagation forces almost everything in gate-consistency formulas.
class DpllSolver {
public:
  DpllSolver(const CnfFormula &formula, const std::vector<std::int32_t> &assumptions)
      : num_vars_(formula.num_vars), values_(formula.num_vars + 1, 0),
        watches_(2 * formula.num_vars) {
    clauses_.reserve(formula.clauses.size());
    for (const auto &clause : formula.clauses) {
      if (clause.empty()) {
        contradiction_ = true;
        return;
      }
      if (clause.size() == 1) {
        if (!enqueue(clause[0])) {
          contradiction_ = true;
          return;
        }
        continue;
      }
      clauses_.push_back(clause);
      const auto id = static_cast<std::uint32_t>(clauses_.size() - 1);
      watches_[watch_slot(clause[0])].push_back(id);
      watches_[watch_slot(clause[1])].push_back(id);
    }
    for (std::int32_t lit : assumptions) {
      if (value(lit) == 0 && !enqueue(lit)) {
        contradiction_ = true;
        return;
      }
      if (value(lit) < 0) {
        contradiction_ = true;
        return;
      }
    }
  }

  SatResult solve() {
    if (contradiction_)
      return {false, {}};
    if (!propagate())
      return {false, {}};

    for (;;) {
      if (trail_.size() == num_vars_) {
        SatResult r;
        r.satisfiable = true;
        r.model.assign(num_vars_ + 1, false);
        for (std::uint32_t v = 1; v <= num_vars_; ++v)
          r.model[v] = values_[v] > 0;
        return r;
      }

      std::uint32_t branch_var = 0;
      for (std::uint32_t v = 1; v <= num_vars_; ++v) {
        if (values_[v] == 0) {
          branch_var = v;
          break;
        }
      }
      decisions_.push_back({-static_cast<std::int32_t>(branch_var), false, trail_.size()});
      enqueue(decisions_.back().lit);

      while (!propagate()) {
        // conflict: flip the deepest untried decision
        for (;;) {
          if (decisions_.empty())
            return {false, {}};
          Decision d = decisions_.back();
          decisions_.pop_back();
          undo_to(d.trail_mark);
          if (!d.flipped) {
            decisions_.push_back({-d.lit, true, trail_.size()});
            enqueue(-d.lit);
            break;
          }
        }
      }
    }
  }

private:
  struct Decision {
    std::int32_t lit;
    bool flipped;
    std::size_t trail_mark;
  };

  static std::uint32_t var_of(std::int32_t lit) {
    return static_cast<std::uint32_t>(lit > 0 ? lit : -lit);
  }

  std::size_t watch_slot(std::int32_t lit) const {
    return 2 * (var_of(lit) - 1) + (lit < 0 ? 1 : 0);
  }

  int value(std::int32_t lit) const {
    const std::int8_t v = values_[var_of(lit)];
    return lit > 0 ? v : -v;
  }

  bool enqueue(std::int32_t lit) {
    const int v = value(lit);
    if (v > 0)
      return true;
    if (v < 0)
      return false;
    values_[var_of(lit)] = static_cast<std::int8_t>(lit > 0 ? 1 : -1);
    trail_.push_back(lit);
    return true;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      values_[var_of(trail_.back())] = 0;
      trail_.pop_back();
    }
    qhead_ = mark;
  }

  bool propagate() {
    while (qhead_ < trail_.size()) {
      const std::int32_t assigned = trail_[qhead_++];
      const std::int32_t false_lit = -assigned;
      auto &watch_list = watches_[watch_slot(false_lit)];
      std::size_t keep = 0;
      for (std::size_t i = 0; i < watch_list.size(); ++i) {
        const std::uint32_t id = watch_list[i];
        auto &clause = clauses_[id];
        if (clause[0] == false_lit)
          std::swap(clause[0], clause[1]);
        if (value(clause[0]) > 0) {
          watch_list[keep++] = id; // satisfied by the other watch
          continue;
        }
        bool moved = false;
        for (std::size_t t = 2; t < clause.size(); ++t) {
          if (value(clause[t]) >= 0) {
            std::swap(clause[1], clause[t]);
            watches_[watch_slot(clause[1])].push_back(id);
            moved = true;
            break;
          }
        }
        if (moved)
          continue;
        watch_list[keep++] = id;
        if (!enqueue(clause[0])) {
          // conflict: keep the remaining watches intact before bailing
          for (++i; i < watch_list.size(); ++i)
            watch_list[keep++] = watch_list[i];
          watch_list.resize(keep);
          return false;
        }
      }
      watch_list.resize(keep);
    }
    return true;
  }

  std::uint32_t num_vars_;
  std::vector<std::int8_t> values_;
  std::vector<std::vector<std::uint32_t>> watches_;
  std::vector<std::vector<std::int32_t>> clauses_;
  std::vector<std::int32_t> trail_;
  std::size_t qhead_ = 0;
  std::vector<Decision> decisions_;
  bool contradiction_ = false;
};

} // namespace detail

// Complete decision procedure. Returns a full model on SAT; the model is
// re-checked against every clause before it is returned.
inline SatResult sat_decide(const CnfFormula &formula,
                            const std::vector<std::int32_t> &assumptions = {},
                            const SatOptions &options = {}) {
  if (formula.num_vars > options.max_vars)
    throw ScaleRefused("SAT refused: " + std::to_string(formula.num_vars) +
                       " variables exceeds cap " + std::to_string(options.max_vars));

  detail::DpllSolver solver(formula, assumptions);
  SatResult result = solver.solve();
  if (result.satisfiable) {
    for (const auto &clause : formula.clauses) {
      bool ok = false;
      for (std::int32_t lit : clause) {
        const std::uint32_t v = static_cast<std::uint32_t>(lit > 0 ? lit : -lit);
        if (result.model[v] == (lit > 0)) {
          ok = true;
          break;
        }
      }
      if (!ok)
        throw Error("internal solver error: model does not satisfy a clause");
    }
  }
  return result;
}

} // namespace hcowf2
