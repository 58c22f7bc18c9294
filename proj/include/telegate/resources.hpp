#pragma once

#include <algorithm>
#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "telegate/error.hpp"
#include "telegate/protocol.hpp"

namespace telegate {

enum class GateKind { ControlledX, ControlledZ, ControlledU, Hadamard };

/// A gate family together with its total qubit count (controls + target).
struct OpKey {
  GateKind kind;
  std::size_t arity;

  friend auto operator<=>(const OpKey&, const OpKey&) = default;
};

inline std::string op_name(const OpKey& op) {
  const std::string k = std::to_string(op.arity);
  switch (op.kind) {
    case GateKind::ControlledX:
      if (op.arity == 1) return "X";
      if (op.arity == 2) return "CNOT";
      if (op.arity == 3) return "Toffoli";
      return k + "-qubit Toffoli";
    case GateKind::ControlledZ:
      if (op.arity == 1) return "Z";
      if (op.arity == 2) return "CZ";
      return k + "-qubit CZ";
    case GateKind::ControlledU:
      if (op.arity == 1) return "U";
      if (op.arity == 2) return "controlled-U";
      return k + "-qubit controlled-U";
    case GateKind::Hadamard:
      return "Hadamard";
  }
  return "?";
}

/// Multiset of gates that remembers first-insertion order for display.
class OpCounts {
 public:
  OpCounts() = default;
  OpCounts(std::initializer_list<std::pair<OpKey, std::size_t>> entries) {
    for (const auto& [op, n] : entries) add(op, n);
  }

  void add(const OpKey& op, std::size_t n = 1) {
    if (n == 0) return;
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [&](const auto& e) { return e.first == op; });
    if (it == entries_.end())
      entries_.emplace_back(op, n);
    else
      it->second += n;
  }

  std::size_t count(const OpKey& op) const {
    for (const auto& [k, n] : entries_)
      if (k == op) return n;
    return 0;
  }

  std::size_t total() const {
    std::size_t t = 0;
    for (const auto& e : entries_) t += e.second;
    return t;
  }

  const std::vector<std::pair<OpKey, std::size_t>>& entries() const noexcept { return entries_; }

  /// "1 CNOT, 1 Toffoli"
  std::string to_string() const {
    std::string s;
    for (const auto& [op, n] : entries_) {
      if (!s.empty()) s += ", ";
      s += std::to_string(n) + " " + op_name(op);
    }
    return s.empty() ? "-" : s;
  }

  /// Multiset equality; display order is ignored.
  friend bool operator==(const OpCounts& a, const OpCounts& b) {
    auto sorted = [](std::vector<std::pair<OpKey, std::size_t>> v) {
      std::sort(v.begin(), v.end());
      return v;
    };
    return sorted(a.entries_) == sorted(b.entries_);
  }

 private:
  std::vector<std::pair<OpKey, std::size_t>> entries_;
};

/// Counts in the comparison-table conventions: entangled resources are Bell
/// pairs; applied operations exclude Bell preparation and the
/// measurement-conditioned corrections, which are listed separately.
struct ResourceReport {
  std::string method;
  std::size_t entangled_pairs = 0;
  std::size_t auxiliary_qubits = 0;
  OpCounts unconditional_ops;
  OpCounts conditional_corrections;
  std::size_t bell_preparations = 0;
  std::size_t single_qubit_measurements = 0;
  std::size_t classical_bits_sent = 0;
};

inline OpKey classify(const Unitary2& u, std::size_t arity) {
  if (approx_equal(u, gates::pauli_x())) return {GateKind::ControlledX, arity};
  if (approx_equal(u, gates::pauli_z())) return {GateKind::ControlledZ, arity};
  return {GateKind::ControlledU, arity};
}

inline ResourceReport account(const Program& prog) {
  ResourceReport r;
  r.method = "telegate (grouped)";
  for (const auto& in : prog.instructions) {
    std::visit(overloaded{
                   [&](const instr::BellPrep&) {
                     ++r.entangled_pairs;
                     ++r.bell_preparations;
                   },
                   [&](const instr::LocalMCX& g) {
                     r.unconditional_ops.add({GateKind::ControlledX, g.controls.size() + 1});
                   },
                   [&](const instr::LocalMCU& g) {
                     r.unconditional_ops.add(classify(g.u, g.controls.size() + 1));
                   },
                   [&](const instr::MeasureZ&) { ++r.single_qubit_measurements; },
                   [&](const instr::MeasureX&) { ++r.single_qubit_measurements; },
                   [&](const instr::Send&) { ++r.classical_bits_sent; },
                   [&](const instr::CondX&) {
                     r.conditional_corrections.add({GateKind::ControlledX, 1});
                   },
                   [&](const instr::CondMCZ& c) {
                     r.conditional_corrections.add({GateKind::ControlledZ, c.controls.size() + 1});
                   },
               },
               in);
  }
  return r;
}

/// One Bell pair per remote control qubit (Eisert et al. 2000): each remote
/// control costs a CNOT, a Hadamard and two single-qubit measurements, and
/// the gate itself becomes one local Toffoli over all `gate_arity` qubits.
inline ResourceReport baseline_per_qubit(std::size_t remote_controls, std::size_t gate_arity) {
  ResourceReport r;
  r.method = "Eisert et al. 2000";
  r.entangled_pairs = remote_controls;
  r.unconditional_ops.add({GateKind::ControlledX, 2}, remote_controls);
  r.unconditional_ops.add({GateKind::ControlledX, gate_arity});
  r.unconditional_ops.add({GateKind::Hadamard, 1}, remote_controls);
  r.single_qubit_measurements = 2 * remote_controls;
  r.classical_bits_sent = 2 * remote_controls;
  return r;
}

/// The per-qubit baseline for the three-node scenario with n qubits per
/// node: 3n - 1 remote controls and one 3n-qubit Toffoli.
inline ResourceReport baseline_eisert(std::size_t n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be at least 1");
  return baseline_per_qubit(3 * n - 1, 3 * n);
}

/// Counts echoed verbatim as published for the qudit-assisted construction
/// of Luo and Li (2016). Not simulated.
struct PublishedRow {
  std::string scenario;
  std::string method;
  std::string entangled;
  std::string auxiliary;
  std::string operations;
  std::string measurements;
};

inline const std::vector<PublishedRow>& published_qudit_rows() {
  static const std::vector<PublishedRow> rows = {
      {"bipartite_case1", "Luo & Li 2016 (published, not simulated)", "1", "4", "3 CE, 2 CNOT", "2 SM, 1 FM"},
      {"bipartite_case2", "Luo & Li 2016 (published, not simulated)", "1", "4", "3 CE, 2 CNOT", "2 SM, 1 FM"},
      {"tripartite", "Luo & Li 2016 (published, not simulated)", "4", "4", "3 CE, 3CNOT", "3 SM, 1 FM"},
  };
  return rows;
}

}  // namespace telegate
