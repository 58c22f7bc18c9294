#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <tuple>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "telegate/protocol.hpp"
#include "telegate/statevector.hpp"

namespace telegate {

inline constexpr std::size_t kDefaultMaxMeasurements = 16;

struct LocalityViolation {
  std::size_t instruction;
  std::string reason;
};

/// Every gate, measurement and correction touches qubits of its own node
/// only; Bell preparation spans exactly its declared owner pair; every
/// condition bit reaches the consuming node through an earlier Send.
inline std::vector<LocalityViolation> check_locality(const Program& prog, const Ownership& own) {
  std::vector<LocalityViolation> out;
  auto owned = [&](std::size_t i, QubitIndex q, const NodeId& node) {
    if (q >= own.size()) {
      out.push_back({i, "qubit index " + std::to_string(q) + " out of range"});
      return;
    }
    if (own.node_of(q) != node)
      out.push_back({i, "qubit " + own.label(q) + " belongs to " + own.node_of(q).str() +
                            ", not " + node.str()});
  };
  for (std::size_t i = 0; i < prog.instructions.size(); ++i) {
    std::visit(overloaded{
                   [&](const instr::BellPrep& b) {
                     owned(i, b.local, b.local_node);
                     owned(i, b.remote, b.remote_node);
                   },
                   [&](const instr::LocalMCX& g) {
                     for (QubitIndex q : g.controls) owned(i, q, g.node);
                     owned(i, g.target, g.node);
                   },
                   [&](const instr::LocalMCU& g) {
                     for (QubitIndex q : g.controls) owned(i, q, g.node);
                     owned(i, g.target, g.node);
                   },
                   [&](const instr::MeasureZ& m) { owned(i, m.qubit, m.node); },
                   [&](const instr::MeasureX& m) { owned(i, m.qubit, m.node); },
                   [&](const instr::CondX& c) { owned(i, c.qubit, c.node); },
                   [&](const instr::CondMCZ& c) {
                     for (QubitIndex q : c.controls) owned(i, q, c.node);
                     owned(i, c.target, c.node);
                   },
                   [](const instr::Send&) {},
               },
               prog.instructions[i]);
  }
  for (auto& issue : check_dataflow(prog)) out.push_back({issue.instruction, std::move(issue.reason)});
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.instruction < b.instruction; });
  return out;
}

inline std::vector<LocalityViolation> check_locality(const Program& prog) {
  return check_locality(prog, prog.layout);
}

/// Instantaneous, in-order delivery of measurement bits between nodes.
class ClassicalChannel {
 public:
  struct Message {
    std::string tag;
    NodeId from;
    NodeId to;
    int bit;
  };

  void deliver(const std::string& tag, const NodeId& from, const NodeId& to, int bit) {
    messages_.push_back({tag, from, to, bit});
    received_[to][tag] = bit;
  }

  /// A node's own measurement result; not a message.
  void hold(const NodeId& node, const std::string& tag, int bit) { received_[node][tag] = bit; }

  /// Bit delivered to `node` under `tag`.
  int read(const NodeId& node, const std::string& tag) const {
    auto n = received_.find(node);
    if (n != received_.end()) {
      auto t = n->second.find(tag);
      if (t != n->second.end()) return t->second;
    }
    throw Error(ErrorKind::UnresolvedCondition,
                "node " + node.str() + " has not received '" + tag + "'");
  }

  const std::vector<Message>& messages() const noexcept { return messages_; }

 private:
  std::vector<Message> messages_;
  std::map<NodeId, std::map<std::string, int>> received_;
};

struct Outcome {
  std::string tag;
  MeasurementRecord record;
};

struct TraceEntry {
  std::size_t index = 0;
  std::string text;
  std::optional<int> bit;
  std::optional<double> probability;
  std::optional<bool> applied;
};

struct BranchResult {
  std::vector<Outcome> outcomes;
  double probability = 1.0;
  StateVector final_state;
  std::vector<TraceEntry> trace;
  ClassicalChannel channel;

  /// Outcome bits in measurement order, e.g. "01".
  std::string bits() const {
    std::string s;
    for (const auto& o : outcomes) s += static_cast<char>('0' + o.record.outcome);
    return s;
  }

  int outcome(const std::string& tag) const {
    for (const auto& o : outcomes)
      if (o.tag == tag) return o.record.outcome;
    throw Error(ErrorKind::InvalidArgument, "no measurement tagged '" + tag + "'");
  }

  /// Computational value every measured qubit was left in (last measurement wins).
  std::map<QubitIndex, int> measured_values() const {
    std::map<QubitIndex, int> m;
    for (const auto& o : outcomes) m[o.record.qubit] = o.record.outcome;
    return m;
  }
};

namespace detail {

inline std::string fixed12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

/// Input over the data qubits only is padded with |0> on the Bell qubits
/// (appended as least significant bits); a full-register input is used as is.
inline StateVector initial_register(const Program& prog, const StateVector& input) {
  const std::size_t n = prog.num_qubits();
  if (n > max_qubits())
    throw Error(ErrorKind::Capacity, "program register of " + std::to_string(n) +
                                         " qubits exceeds the cap of " +
                                         std::to_string(max_qubits()));
  if (input.num_qubits() == n) return input;
  if (input.num_qubits() != prog.data_qubits)
    throw Error(ErrorKind::SizeMismatch, "input has " + std::to_string(input.num_qubits()) +
                                             " qubits, program expects " +
                                             std::to_string(prog.data_qubits) + " data qubits");
  const std::size_t shift = n - prog.data_qubits;
  std::vector<Amplitude> amps(std::size_t{1} << n);
  for (std::size_t i = 0; i < input.size(); ++i) amps[i << shift] = input[i];
  return StateVector(std::move(amps));
}

inline void require_local(const Program& prog) {
  const auto violations = check_locality(prog);
  if (violations.empty()) return;
  std::string msg = "program violates locality:";
  for (const auto& v : violations) msg += " [" + std::to_string(v.instruction) + "] " + v.reason + ";";
  throw Error(ErrorKind::Locality, msg);
}

/// Runs every instruction up to (not including) the next measurement.
/// Returns the index of that measurement, or the program size.
inline std::size_t run_until_measurement(const Program& prog, std::size_t pc, BranchResult& run) {
  const Ownership& layout = prog.layout;
  for (; pc < prog.instructions.size(); ++pc) {
    const Instruction& in = prog.instructions[pc];
    if (is_measurement(in)) return pc;
    TraceEntry entry{pc, to_text(in, layout), {}, {}, {}};
    StateVector& s = run.final_state;
    std::visit(overloaded{
                   [&](const instr::BellPrep& b) { s = prepare_bell(std::move(s), b.local, b.remote); },
                   [&](const instr::LocalMCX& g) {
                     s = apply_controlled_u(std::move(s), g.controls, g.target, gates::pauli_x());
                   },
                   [&](const instr::LocalMCU& g) {
                     s = apply_controlled_u(std::move(s), g.controls, g.target, g.u);
                   },
                   [&](const instr::Send& m) {
                     const int bit = run.channel.read(m.from, m.tag);
                     run.channel.deliver(m.tag, m.from, m.to, bit);
                     entry.bit = bit;
                   },
                   [&](const instr::CondX& c) {
                     const int bit = run.channel.read(c.node, c.condition);
                     entry.bit = bit;
                     entry.applied = bit == 1;
                     if (bit) s = apply_single(std::move(s), c.qubit, gates::pauli_x());
                   },
                   [&](const instr::CondMCZ& c) {
                     const int bit = run.channel.read(c.node, c.condition);
                     entry.bit = bit;
                     entry.applied = bit == 1;
                     if (bit) s = apply_controlled_u(std::move(s), c.controls, c.target, gates::pauli_z());
                   },
                   [](const auto&) {},
               },
               in);
    run.trace.push_back(std::move(entry));
  }
  return pc;
}

/// Collapses the measurement at `pc` onto `bit` and records it.
inline void apply_measurement(const Program& prog, std::size_t pc, int bit, BranchResult& run,
                              const std::array<double, 2>* weights = nullptr) {
  const Instruction& in = prog.instructions[pc];
  const auto [node, qubit, tag, basis] = std::visit(
      overloaded{
          [](const instr::MeasureZ& m) { return std::tuple{m.node, m.qubit, m.tag, Basis::Z}; },
          [](const instr::MeasureX& m) { return std::tuple{m.node, m.qubit, m.tag, Basis::X}; },
          [](const auto&) -> std::tuple<NodeId, QubitIndex, std::string, Basis> {
            throw Error(ErrorKind::InvalidArgument, "not a measurement");
          },
      },
      in);
  if (bit != 0 && bit != 1)
    throw Error(ErrorKind::InvalidArgument, "outcome for '" + tag + "' must be 0 or 1");
  double prob = 0.0;
  try {
    prob = collapse(run.final_state, qubit, basis, bit, weights);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ImpossibleBranch) throw;
    throw Error(ErrorKind::ImpossibleBranch,
                "measurement '" + tag + "' of " + prog.layout.label(qubit) + " cannot yield " +
                    std::to_string(bit) + " (probability " +
                    fixed12(outcome_probabilities(run.final_state, qubit, basis)[bit]) + ")");
  }
  const MeasurementRecord record{qubit, basis, bit, prob};
  run.probability *= prob;
  run.outcomes.push_back({tag, record});
  run.channel.hold(node, tag, bit);
  run.trace.push_back({pc, to_text(in, prog.layout), bit, prob, {}});
}

inline const std::string& measurement_tag(const Instruction& in) {
  if (auto* z = std::get_if<instr::MeasureZ>(&in)) return z->tag;
  return std::get<instr::MeasureX>(in).tag;
}

inline std::pair<QubitIndex, Basis> measurement_target(const Instruction& in) {
  if (auto* z = std::get_if<instr::MeasureZ>(&in)) return {z->qubit, Basis::Z};
  const auto& x = std::get<instr::MeasureX>(in);
  return {x.qubit, Basis::X};
}

/// Drives one run; `choose(tag, probabilities)` picks each outcome.
inline BranchResult run_program(
    const Program& prog, const StateVector& input,
    const std::function<int(const std::string&, const std::array<double, 2>&)>& choose) {
  require_local(prog);
  BranchResult run;
  run.final_state = initial_register(prog, input);
  std::size_t pc = 0;
  while ((pc = run_until_measurement(prog, pc, run)) < prog.instructions.size()) {
    const auto [qubit, basis] = measurement_target(prog.instructions[pc]);
    const auto w = outcome_weights(run.final_state, qubit, basis);
    const int bit = choose(measurement_tag(prog.instructions[pc]), {w[0] / (w[0] + w[1]), w[1] / (w[0] + w[1])});
    apply_measurement(prog, pc, bit, run, &w);
    ++pc;
  }
  return run;
}

/// Depth-first over outcomes, 0 before 1. `scratch[d]` holds the outcome-0
/// copy made at depth d so its buffers are reused across siblings; it must
/// hold one slot per measurement up front.
inline void enumerate_from(const Program& prog, std::size_t pc, BranchResult& run,
                           const std::function<void(BranchResult&&)>& visit,
                           std::vector<BranchResult>& scratch, std::size_t depth) {
  pc = run_until_measurement(prog, pc, run);
  if (pc == prog.instructions.size()) {
    visit(std::move(run));
    return;
  }
  const auto [qubit, basis] = measurement_target(prog.instructions[pc]);
  const auto w = outcome_weights(run.final_state, qubit, basis);
  const std::array<double, 2> probs = {w[0] / (w[0] + w[1]), w[1] / (w[0] + w[1])};
  const bool both = probs[0] > kImpossibleBranch && probs[1] > kImpossibleBranch;
  if (both) {
    scratch[depth] = run;
    apply_measurement(prog, pc, 0, scratch[depth], &w);
    enumerate_from(prog, pc + 1, scratch[depth], visit, scratch, depth + 1);
  }
  const int bit = both || probs[1] > kImpossibleBranch ? 1 : 0;
  apply_measurement(prog, pc, bit, run, &w);
  enumerate_from(prog, pc + 1, run, visit, scratch, depth + 1);
}

}  // namespace detail

inline std::size_t count_measurements(const Program& prog) {
  return static_cast<std::size_t>(
      std::count_if(prog.instructions.begin(), prog.instructions.end(), is_measurement));
}

/// Runs the branch selected by `forced` (result tag -> bit).
inline BranchResult execute_branch(const Program& prog, const StateVector& input,
                                   const std::map<std::string, int>& forced) {
  return detail::run_program(prog, input, [&](const std::string& tag, const std::array<double, 2>&) {
    auto it = forced.find(tag);
    if (it == forced.end())
      throw Error(ErrorKind::InvalidArgument, "no forced outcome for measurement '" + tag + "'");
    return it->second;
  });
}

/// Forced outcomes given as a bit string in measurement order.
inline BranchResult execute_branch(const Program& prog, const StateVector& input,
                                   const std::string& bits) {
  if (bits.size() != count_measurements(prog))
    throw Error(ErrorKind::InvalidArgument, "branch has " + std::to_string(bits.size()) +
                                                " bits, program has " +
                                                std::to_string(count_measurements(prog)) +
                                                " measurements");
  std::map<std::string, int> forced;
  std::size_t k = 0;
  for (const auto& in : prog.instructions) {
    if (!is_measurement(in)) continue;
    const char c = bits[k++];
    if (c != '0' && c != '1') throw Error(ErrorKind::InvalidArgument, "branch bits must be 0 or 1");
    forced[detail::measurement_tag(in)] = c - '0';
  }
  return execute_branch(prog, input, forced);
}

/// Visits every branch with probability above 1e-14, in lexicographic order
/// of the outcome bits (measurement order). Only the states along the
/// current path are alive at any time.
inline void for_each_branch(const Program& prog, const StateVector& input,
                            const std::function<void(BranchResult&&)>& visit,
                            std::size_t max_measurements = kDefaultMaxMeasurements) {
  const std::size_t m = count_measurements(prog);
  if (m > max_measurements)
    throw Error(ErrorKind::LimitExceeded, std::to_string(m) + " measurements exceed the limit of " +
                                              std::to_string(max_measurements));
  detail::require_local(prog);
  BranchResult root;
  root.final_state = detail::initial_register(prog, input);
  std::vector<BranchResult> scratch(m);
  detail::enumerate_from(prog, 0, root, visit, scratch, 0);
}

inline std::vector<BranchResult> enumerate_branches(const Program& prog, const StateVector& input,
                                                    std::size_t max_measurements = kDefaultMaxMeasurements) {
  std::vector<BranchResult> out;
  for_each_branch(prog, input, [&](BranchResult&& b) { out.push_back(std::move(b)); }, max_measurements);
  return out;
}

/// Outcomes drawn from the exact branch probabilities; same seed, same result.
inline BranchResult run_sampled(const Program& prog, const StateVector& input, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return detail::run_program(prog, input, [&](const std::string&, const std::array<double, 2>& p) {
    int bit = uniform01(rng) < p[0] ? 0 : 1;
    if (p[bit] <= kImpossibleBranch) bit ^= 1;
    return bit;
  });
}

/// One executed instruction per line, with resolved bits and measurement
/// probabilities in fixed 12-digit decimals.
inline std::string format_trace(const BranchResult& run) {
  std::string out;
  for (const auto& e : run.trace) {
    out += std::to_string(e.index) + " " + e.text;
    if (e.probability) {
      out += " = " + std::to_string(*e.bit) + " p=" + detail::fixed12(*e.probability);
    } else if (e.applied) {
      out += " bit=" + std::to_string(*e.bit) + (*e.applied ? " applied" : " skipped");
    } else if (e.bit) {
      out += " bit=" + std::to_string(*e.bit);
    }
    out += "\n";
  }
  out += "branch " + run.bits() + " p=" + detail::fixed12(run.probability) + "\n";
  return out;
}

}  // namespace telegate
