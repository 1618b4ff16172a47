// hcw2: command-line surface for the HCOWF2 library. Subcommands cover
// instance generation, tagging, verification, cost analysis, desk-scale
// inversion, and the two protocol peers.

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "hcowf2/hcowf2.hpp"

namespace {

using namespace hcowf2;

// Software evaluation is Θ(n^4 k / wordsize); past this width a tag
// computation stops being interactive, so it needs an explicit override.
constexpr std::uint64_t kDefaultEvaluateCap = 512;

std::vector<std::uint8_t> read_file_bytes(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open " + path);
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
}

// Reads only the fixed 12-byte header so oversized descriptions can be
// refused before the body is parsed (or even read).
std::uint32_t peek_fd_n(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open " + path);
  std::uint8_t header[kFdHeaderBytes];
  in.read(reinterpret_cast<char *>(header), sizeof header);
  if (in.gcount() != static_cast<std::streamsize>(sizeof header))
    throw MalformedEncoding("truncated function description");
  if (header[0] != 'H' || header[1] != 'C' || header[2] != 'W' || header[3] != '2')
    throw MalformedEncoding("bad magic, not a function description");
  const std::uint16_t version = static_cast<std::uint16_t>((header[4] << 8) | header[5]);
  if (version != kFdFormatVersion)
    throw MalformedEncoding("unsupported format version " + std::to_string(version));
  return (static_cast<std::uint32_t>(header[6]) << 24) |
         (static_cast<std::uint32_t>(header[7]) << 16) |
         (static_cast<std::uint32_t>(header[8]) << 8) | static_cast<std::uint32_t>(header[9]);
}

FunctionDescription load_fd_checked(const std::string &path, std::uint64_t evaluate_cap) {
  const std::uint32_t n = peek_fd_n(path);
  if (n > evaluate_cap)
    throw ScaleRefused("evaluate refused for n = " + std::to_string(n) + " (cap " +
                       std::to_string(evaluate_cap) +
                       "); pass --cap-override to force a software evaluation");
  return read_fd_file(path);
}

// Tag hex must encode exactly ceil(n/8) LSB-first bytes with no bits above
// width n; a lossy parse would make verify accept malformed input.
Bitvec parse_tag_hex(std::size_t n, const std::string &hex) {
  const auto bytes = hex_decode(hex);
  if (bytes.size() != Bitvec::byte_count(n))
    throw ParameterError("tag must be " + std::to_string(Bitvec::byte_count(n)) +
                         " hex-encoded bytes for n = " + std::to_string(n));
  Bitvec tag = Bitvec::from_bytes_lsb(n, bytes.data(), bytes.size());
  if (tag.to_bytes_lsb() != bytes)
    throw ParameterError("tag hex has bits set beyond width n");
  return tag;
}

struct Config {
  std::uint64_t n = 0;
  std::uint64_t k = 0; // 0 = default_k(n)
  std::uint64_t seed = 0;
  std::string fd_path;
  std::string message_path;
  std::string tag_hex;
  std::string addr;
  std::string cache_dir;
  std::uint64_t nodes = 1000;
  double node_memory = 1e12;
  double clock_hz = 4e9;
  double bytes_per_cycle = 1.0;
  std::string strategy = "formula";
  bool ceil_log = false;
  std::uint64_t cap_override = 0; // 0 = command default
  std::uint64_t max_sessions = 0; // 0 = serve forever
  int fd_timeout_ms = kDefaultFdDecisionTimeoutMs;
  bool machine_readable = false;
};

int cmd_fdgen(const Config &cfg) {
  const std::size_t n = cfg.n;
  const std::size_t k = cfg.k ? cfg.k : default_k(n);
  const FunctionDescription fd = make_function_description(cfg.seed, n, k);
  write_fd_file(cfg.fd_path, fd);
  const Signature sig = fd_signature(fd);
  if (cfg.machine_readable) {
    KvDoc doc;
    doc.add("fd.path", cfg.fd_path);
    doc.add("fd.bytes", static_cast<std::uint64_t>(encoded_fd_size(n, k)));
    doc.add("fd.signature", sig.to_hex());
    doc.add("fd.n", static_cast<std::uint64_t>(n));
    doc.add("fd.k", static_cast<std::uint64_t>(k));
    doc.add("fd.seed", cfg.seed);
    doc.write(std::cout);
  } else {
    std::cout << sig.to_hex() << "\n";
  }
  return 0;
}

int cmd_mac(const Config &cfg) {
  const std::uint64_t cap = cfg.cap_override ? cfg.cap_override : kDefaultEvaluateCap;
  const FunctionDescription fd = load_fd_checked(cfg.fd_path, cap);
  const auto message = read_file_bytes(cfg.message_path);
  const EvalResult result = evaluate(fd, derive_input(message, fd.n()));
  if (cfg.machine_readable) {
    KvDoc doc;
    doc.add("mac.tag", result.tag.to_hex());
    doc.add("mac.n", static_cast<std::uint64_t>(fd.n()));
    doc.add("mac.h_invocations", result.h_invocations);
    doc.write(std::cout);
  } else {
    std::cout << result.tag.to_hex() << "\n";
  }
  return 0;
}

int cmd_verify(const Config &cfg) {
  const std::uint64_t cap = cfg.cap_override ? cfg.cap_override : kDefaultEvaluateCap;
  const FunctionDescription fd = load_fd_checked(cfg.fd_path, cap);
  const auto message = read_file_bytes(cfg.message_path);
  const Bitvec expected = parse_tag_hex(fd.n(), cfg.tag_hex);
  const MacTag computed = evaluate(fd, derive_input(message, fd.n())).tag;
  const bool accepted = computed.value == expected;
  if (cfg.machine_readable) {
    KvDoc doc;
    doc.add("verify.accepted", std::uint64_t{accepted ? 1u : 0u});
    doc.add("verify.computed", computed.to_hex());
    doc.add("verify.expected", expected.to_hex());
    doc.write(std::cout);
  } else {
    std::cout << (accepted ? "accept" : "reject") << "\n";
  }
  return accepted ? 0 : 1;
}

int cmd_analyze(const Config &cfg) {
  MachineModel machine;
  machine.clock_hz = cfg.clock_hz;
  machine.bytes_per_cycle = cfg.bytes_per_cycle;
  machine.node_memory_bytes = cfg.node_memory;
  ClusterModel cluster{cfg.nodes, machine};

  const FormulaSizeReport stats = formula_stats(cfg.n, cfg.ceil_log);
  const CostReport cost = inversion_cost(cfg.n, machine, cfg.ceil_log);
  const PartitionStrategy strategy = cfg.strategy == "formula" ? PartitionStrategy::formula
                                                               : PartitionStrategy::search_space;
  const PartitionReport partition = partition_plan(stats, cluster, strategy);

  if (cfg.machine_readable) {
    KvDoc doc;
    append_kv(doc, stats);
    append_kv(doc, cost);
    append_kv(doc, partition);
    doc.write(std::cout);
  } else {
    write_text(std::cout, stats);
    write_text(std::cout, cost);
    write_text(std::cout, partition);
  }
  return 0;
}

int cmd_invert(const Config &cfg) {
  const FunctionDescription fd = read_fd_file(cfg.fd_path);
  const MacTag target{parse_tag_hex(fd.n(), cfg.tag_hex)};
  const std::size_t circuit_cap = cfg.cap_override ? cfg.cap_override : kDefaultCircuitCap;
  const InversionReport report = invert_small(fd, target, circuit_cap);

  if (cfg.machine_readable) {
    KvDoc doc;
    doc.add("invert.found", std::uint64_t{report.preimage ? 1u : 0u});
    if (report.preimage)
      doc.add("invert.preimage", report.preimage->to_hex());
    doc.add("invert.sat_calls_recovery", report.sat_calls_recovery);
    doc.add("invert.sat_calls_total", report.sat_calls_total);
    doc.add("invert.model_sat_calls", report.model_sat_calls);
    doc.add("invert.circuit_gates", report.circuit_gates);
    doc.add("invert.cnf_variables", report.cnf_variables);
    doc.add("invert.cnf_aux_variables", report.cnf_aux_variables);
    doc.add("invert.cnf_clauses", report.cnf_clauses);
    doc.add("invert.model_aux_variables", report.model_aux_variables);
    doc.add("invert.model_clauses", report.model_clauses);
    doc.write(std::cout);
  } else {
    if (report.preimage)
      std::cout << "preimage " << report.preimage->to_hex() << "\n";
    else
      std::cout << "no preimage\n";
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "sat calls            %llu (feasibility 1 + recovery %llu)\n"
                  "model sat calls      %.0f\n"
                  "circuit gates        %llu\n"
                  "cnf variables        %llu (aux %llu)\n"
                  "cnf clauses          %llu\n"
                  "model aux variables  %.0f\n"
                  "model clauses        %.0f\n",
                  static_cast<unsigned long long>(report.sat_calls_total),
                  static_cast<unsigned long long>(report.sat_calls_recovery),
                  report.model_sat_calls, static_cast<unsigned long long>(report.circuit_gates),
                  static_cast<unsigned long long>(report.cnf_variables),
                  static_cast<unsigned long long>(report.cnf_aux_variables),
                  static_cast<unsigned long long>(report.cnf_clauses),
                  report.model_aux_variables, report.model_clauses);
    std::cout << buf;
  }
  return report.preimage ? 0 : 1;
}

int cmd_send(const Config &cfg) {
  const std::uint64_t cap = cfg.cap_override ? cfg.cap_override : kDefaultEvaluateCap;
  const FunctionDescription fd = load_fd_checked(cfg.fd_path, cap);
  const auto message = read_file_bytes(cfg.message_path);
  auto stream = tcp_connect(cfg.addr);
  const SenderOutcome outcome = sender_session(*stream, fd, message, cfg.fd_timeout_ms);
  if (cfg.machine_readable) {
    KvDoc doc;
    doc.add("send.signature", outcome.signature.to_hex());
    doc.add("send.fd_requested", std::uint64_t{outcome.fd_requested ? 1u : 0u});
    doc.add("send.tag", outcome.tag.to_hex());
    doc.add("send.accepted", std::uint64_t{outcome.accepted ? 1u : 0u});
    doc.write(std::cout);
  } else {
    std::cout << "signature " << outcome.signature.to_hex() << "\n"
              << "fd requested: " << (outcome.fd_requested ? "yes" : "no") << "\n"
              << "tag " << outcome.tag.to_hex() << "\n"
              << (outcome.accepted ? "accepted" : "rejected") << "\n";
  }
  return outcome.accepted ? 0 : 1;
}

int cmd_recv(const Config &cfg) {
  FdCache cache;
  std::optional<std::filesystem::path> persist_dir;
  if (!cfg.cache_dir.empty()) {
    persist_dir = cfg.cache_dir;
    load_cache_dir(*persist_dir, cache);
  }

  TcpListener listener(cfg.addr);
  const auto [host, port] = split_hostport(cfg.addr);
  std::cout << "listening on " << (host.empty() ? "0.0.0.0" : host) << ":" << listener.port()
            << std::endl; // flushed so a parent process can scrape the port

  std::mutex out_mutex;
  std::vector<std::thread> sessions;
  for (std::uint64_t index = 0; cfg.max_sessions == 0 || index < cfg.max_sessions; ++index) {
    auto stream = listener.accept();
    sessions.emplace_back([&, index, stream = std::move(stream)]() mutable {
      try {
        const ReceiverOutcome outcome = receiver_session(*stream, cache, persist_dir);
        std::lock_guard<std::mutex> lock(out_mutex);
        if (cfg.machine_readable) {
          const std::string prefix = "session." + std::to_string(index) + ".";
          KvDoc doc;
          doc.add(prefix + "accepted", std::uint64_t{outcome.accepted ? 1u : 0u});
          doc.add(prefix + "fd_requested", std::uint64_t{outcome.fd_requested ? 1u : 0u});
          doc.add(prefix + "signature", outcome.signature.to_hex());
          doc.write(std::cout);
        } else {
          std::cout << "session " << index << ": "
                    << (outcome.accepted ? "accepted" : "rejected")
                    << (outcome.fd_requested ? " (fd requested)" : " (cache hit)")
                    << " sig=" << outcome.signature.to_hex() << "\n";
        }
        std::cout.flush();
      } catch (const std::exception &e) {
        std::lock_guard<std::mutex> lock(out_mutex);
        std::cerr << "session " << index << " failed: " << e.what() << "\n";
      }
    });
  }
  for (std::thread &t : sessions)
    t.join();
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"HCOWF2: chained hardware-style one-way function toolkit"};
  app.require_subcommand(1);

  Config cfg;
  int exit_code = 0;
  const auto run = [&](int (*handler)(const Config &)) {
    return [&, handler] { exit_code = handler(cfg); };
  };

  app.add_flag("--machine-readable", cfg.machine_readable,
               "emit key=value lines instead of text reports");

  CLI::App *fdgen = app.add_subcommand("fdgen", "generate a function description file");
  fdgen->add_option("--n", cfg.n, "security parameter")->required()->envname("HCW2_N");
  fdgen->add_option("--k", cfg.k, "clause width (default: k(n))")->envname("HCW2_K");
  fdgen->add_option("--seed", cfg.seed, "64-bit generation seed")->envname("HCW2_SEED");
  fdgen->add_option("--fd", cfg.fd_path, "output .hcw2 path")->required()->envname("HCW2_FD");
  fdgen->callback(run(cmd_fdgen));

  CLI::App *mac = app.add_subcommand("mac", "compute the tag of a message");
  mac->add_option("--fd", cfg.fd_path, "function description file")
      ->required()
      ->check(CLI::ExistingFile)
      ->envname("HCW2_FD");
  mac->add_option("--message", cfg.message_path, "message file")
      ->required()
      ->check(CLI::ExistingFile)
      ->envname("HCW2_MESSAGE");
  mac->add_option("--cap-override", cfg.cap_override, "raise the n cap for evaluation")
      ->envname("HCW2_CAP_OVERRIDE");
  mac->callback(run(cmd_mac));

  CLI::App *verify = app.add_subcommand("verify", "recompute and compare a tag");
  verify->add_option("--fd", cfg.fd_path, "function description file")
      ->required()
      ->check(CLI::ExistingFile)
      ->envname("HCW2_FD");
  verify->add_option("--message", cfg.message_path, "message file")
      ->required()
      ->check(CLI::ExistingFile)
      ->envname("HCW2_MESSAGE");
  verify->add_option("--tag", cfg.tag_hex, "claimed tag, lowercase hex")
      ->required()
      ->envname("HCW2_TAG");
  verify->add_option("--cap-override", cfg.cap_override, "raise the n cap for evaluation")
      ->envname("HCW2_CAP_OVERRIDE");
  verify->callback(run(cmd_verify));

  CLI::App *analyze = app.add_subcommand("analyze", "inversion-cost analysis reports");
  analyze->add_option("--n", cfg.n, "security parameter")->required()->envname("HCW2_N");
  analyze->add_option("--nodes", cfg.nodes, "cluster node count")->envname("HCW2_NODES");
  analyze->add_option("--node-memory", cfg.node_memory, "bytes of memory per node")
      ->envname("HCW2_NODE_MEMORY");
  analyze->add_option("--clock-hz", cfg.clock_hz, "scan clock rate")->envname("HCW2_CLOCK_HZ");
  analyze->add_option("--bytes-per-cycle", cfg.bytes_per_cycle, "scan width per cycle")
      ->envname("HCW2_BYTES_PER_CYCLE");
  analyze->add_option("--strategy", cfg.strategy, "partitioning strategy")
      ->check(CLI::IsMember({"formula", "search_space"}))
      ->envname("HCW2_STRATEGY");
  analyze->add_flag("--ceil-log", cfg.ceil_log, "whole-bit literal encoding");
  analyze->callback(run(cmd_analyze));

  CLI::App *invert = app.add_subcommand("invert", "recover a preimage at desk scale");
  invert->add_option("--fd", cfg.fd_path, "function description file")
      ->required()
      ->check(CLI::ExistingFile)
      ->envname("HCW2_FD");
  invert->add_option("--tag", cfg.tag_hex, "target tag, lowercase hex")
      ->required()
      ->envname("HCW2_TAG");
  invert->add_option("--cap-override", cfg.cap_override, "raise the n cap for circuit construction")
      ->envname("HCW2_CAP_OVERRIDE");
  invert->callback(run(cmd_invert));

  CLI::App *send = app.add_subcommand("send", "deliver one tagged message to a receiver");
  send->add_option("--addr", cfg.addr, "receiver host:port")->required()->envname("HCW2_ADDR");
  send->add_option("--fd", cfg.fd_path, "function description file")
      ->required()
      ->check(CLI::ExistingFile)
      ->envname("HCW2_FD");
  send->add_option("--message", cfg.message_path, "message file")
      ->required()
      ->check(CLI::ExistingFile)
      ->envname("HCW2_MESSAGE");
  send->add_option("--cap-override", cfg.cap_override, "raise the n cap for evaluation")
      ->envname("HCW2_CAP_OVERRIDE");
  send->add_option("--fd-timeout-ms", cfg.fd_timeout_ms,
                   "how long to wait for an FD request before sending the message");
  send->callback(run(cmd_send));

  CLI::App *recv = app.add_subcommand("recv", "verify incoming tagged messages");
  recv->add_option("--addr", cfg.addr, "listen host:port (port 0 = kernel-assigned)")
      ->required()
      ->envname("HCW2_ADDR");
  recv->add_option("--cache-dir", cfg.cache_dir, "persist received descriptions here")
      ->envname("HCW2_CACHE_DIR");
  recv->add_option("--max-sessions", cfg.max_sessions, "exit after this many sessions (0 = forever)");
  recv->callback(run(cmd_recv));

  // Subcommand callbacks run inside parse(), so domain errors surface
  // here. Exit codes: 0 success/accept, 1 reject/no-preimage, 2 usage or
  // parameter error, 3 runtime error.
  try {
    app.parse(argc, argv);
    return exit_code;
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const hcowf2::ParameterError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hcowf2::ScaleRefused &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
