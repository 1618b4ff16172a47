#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>

#include "hcowf2/errors.hpp"
#include "hcowf2/kv.hpp"

namespace hcowf2 {

// Size accounting for the 3-CNF image of a fully composed inversion
// circuit, evaluated symbolically: 3n^4 + n variables, 3n^4 clauses,
// log2(vars) + 1 bits per literal (the extra bit marks negation), three
// literals per clause. Counts are doubles because they overflow 64-bit
// integers long before n stops being interesting.
struct FormulaSizeReport {
  std::uint64_t n = 0;
  double variables = 0;
  double clauses = 0;
  double bits_per_literal = 0;
  double bits_per_clause = 0;
  double total_bits = 0;
  double total_bytes = 0;
};

struct MachineModel {
  double clock_hz = 4e9;
  double bytes_per_cycle = 1.0;
  double node_memory_bytes = 1e12;

  void validate() const {
    if (clock_hz <= 0 || bytes_per_cycle <= 0 || node_memory_bytes <= 0)
      throw ParameterError("machine model parameters must be positive");
  }
};

struct ClusterModel {
  std::uint64_t nodes = 1000;
  MachineModel machine;

  void validate() const {
    if (nodes < 1)
      throw ParameterError("cluster must have at least one node");
    machine.validate();
  }
};

// Self-reduction cost: one full scan of the formula per SAT decision,
// 3n^4 decisions.
struct CostReport {
  double single_scan_seconds = 0;
  double single_scan_hours = 0;
  double sat_calls = 0;
  double total_hours = 0;
  double total_years = 0;
};

enum class PartitionStrategy { formula, search_space };

struct PartitionReport {
  PartitionStrategy strategy = PartitionStrategy::formula;
  double partitions = 0;
  double bytes_per_node = 0;
  double min_wall_seconds = 0;
  std::string notes;
};

// `ceil_log` switches bits-per-literal to a whole-bit encoding
// (ceil(log2(vars)) + 1); the default keeps the real-valued log.
inline FormulaSizeReport formula_stats(std::uint64_t n, bool ceil_log = false) {
  if (n < 1)
    throw ParameterError("formula_stats requires n >= 1");
  FormulaSizeReport r;
  r.n = n;
  const double nd = static_cast<double>(n);
  const double n4 = nd * nd * nd * nd;
  r.variables = 3.0 * n4 + nd;
  r.clauses = 3.0 * n4;
  const double log_vars = std::log2(r.variables);
  r.bits_per_literal = (ceil_log ? std::ceil(log_vars) : log_vars) + 1.0;
  r.bits_per_clause = 3.0 * r.bits_per_literal;
  r.total_bits = r.clauses * r.bits_per_clause;
  r.total_bytes = r.total_bits / 8.0;
  return r;
}

inline CostReport inversion_cost(std::uint64_t n, const MachineModel &machine = {},
                                 bool ceil_log = false) {
  machine.validate();
  const FormulaSizeReport stats = formula_stats(n, ceil_log);
  CostReport c;
  c.single_scan_seconds = stats.total_bytes / (machine.clock_hz * machine.bytes_per_cycle);
  c.single_scan_hours = c.single_scan_seconds / 3600.0;
  c.sat_calls = stats.clauses; // 3n^4 decisions under self-reduction
  c.total_hours = c.single_scan_hours * c.sat_calls;
  c.total_years = c.total_hours / 8760.0;
  return c;
}

inline const char *to_string(PartitionStrategy s) {
  return s == PartitionStrategy::formula ? "formula" : "search_space";
}

// Wall-clock floor for the two cluster strategies. Formula partitioning
// splits the formula across node memories but still pays one full
// single-node scan to compute the partitioning; search-space partitioning
// gives every node the whole formula, so each node pays the full scan
// regardless of node count.
inline PartitionReport partition_plan(const FormulaSizeReport &report,
                                      const ClusterModel &cluster, PartitionStrategy strategy) {
  cluster.validate();
  const MachineModel &m = cluster.machine;
  const double scan_seconds = report.total_bytes / (m.clock_hz * m.bytes_per_cycle);

  PartitionReport p;
  p.strategy = strategy;
  p.min_wall_seconds = scan_seconds;
  if (strategy == PartitionStrategy::formula) {
    p.partitions = std::ceil(report.total_bytes / m.node_memory_bytes);
    if (p.partitions < 1)
      p.partitions = 1;
    if (p.partitions > static_cast<double>(cluster.nodes))
      throw InsufficientCluster("formula partitioning needs " +
                                std::to_string(static_cast<std::uint64_t>(p.partitions)) +
                                " partitions but the cluster has " +
                                std::to_string(cluster.nodes) + " nodes");
    p.bytes_per_node = report.total_bytes / p.partitions;
    p.notes = "one full single-node scan dominates; partitions sized to node memory";
  } else {
    p.partitions = static_cast<double>(cluster.nodes);
    p.bytes_per_node = report.total_bytes;
    p.notes = "every node scans the whole formula; node count does not reduce the floor";
  }
  return p;
}

inline void append_kv(KvDoc &doc, const FormulaSizeReport &r) {
  doc.add("formula.n", static_cast<std::uint64_t>(r.n));
  doc.add("formula.variables", r.variables);
  doc.add("formula.clauses", r.clauses);
  doc.add("formula.bits_per_literal", r.bits_per_literal);
  doc.add("formula.bits_per_clause", r.bits_per_clause);
  doc.add("formula.total_bits", r.total_bits);
  doc.add("formula.total_bytes", r.total_bytes);
  doc.add("formula.total_tb_decimal", r.total_bytes / 1e12);
  doc.add("formula.total_tib", r.total_bytes / 1099511627776.0);
}

inline void append_kv(KvDoc &doc, const CostReport &r) {
  doc.add("cost.single_scan_seconds", r.single_scan_seconds);
  doc.add("cost.single_scan_hours", r.single_scan_hours);
  doc.add("cost.sat_calls", r.sat_calls);
  doc.add("cost.total_hours", r.total_hours);
  doc.add("cost.total_years", r.total_years);
}

inline void append_kv(KvDoc &doc, const PartitionReport &r) {
  doc.add("partition.strategy", std::string(to_string(r.strategy)));
  doc.add("partition.partitions", r.partitions);
  doc.add("partition.bytes_per_node", r.bytes_per_node);
  doc.add("partition.min_wall_seconds", r.min_wall_seconds);
}

inline void write_text(std::ostream &out, const FormulaSizeReport &r) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "formula size (n = %llu)\n"
                "  variables        %.4g\n"
                "  clauses          %.4g\n"
                "  bits/literal     %.4f\n"
                "  bits/clause      %.4f\n"
                "  total bits       %.4g\n"
                "  total bytes      %.4g  (%.1f TB, %.1f TiB)\n",
                static_cast<unsigned long long>(r.n), r.variables, r.clauses,
                r.bits_per_literal, r.bits_per_clause, r.total_bits, r.total_bytes,
                r.total_bytes / 1e12, r.total_bytes / 1099511627776.0);
  out << buf;
}

inline void write_text(std::ostream &out, const CostReport &r) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "inversion cost\n"
                "  single scan      %.4g s  (%.1f h)\n"
                "  SAT decisions    %.4g\n"
                "  total            %.4g h  (%.4g years)\n",
                r.single_scan_seconds, r.single_scan_hours, r.sat_calls, r.total_hours,
                r.total_years);
  out << buf;
}

inline void write_text(std::ostream &out, const PartitionReport &r) {
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "partition plan (%s)\n"
                "  partitions       %.0f\n"
                "  bytes/node       %.4g\n"
                "  min wall time    %.4g s\n"
                "  %s\n",
                to_string(r.strategy), r.partitions, r.bytes_per_node, r.min_wall_seconds,
                r.notes.c_str());
  out << buf;
}

} // namespace hcowf2
