#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "telegate/gate_model.hpp"

namespace telegate {

namespace instr {

/// Shares (|00> + |11>)/sqrt(2) between `local` (owned by `local_node`) and
/// `remote` (owned by `remote_node`).
struct BellPrep {
  QubitIndex local;
  QubitIndex remote;
  NodeId local_node;
  NodeId remote_node;
};

struct LocalMCX {
  NodeId node;
  std::vector<QubitIndex> controls;
  QubitIndex target;
};

struct LocalMCU {
  NodeId node;
  std::vector<QubitIndex> controls;
  QubitIndex target;
  Unitary2 u;
};

struct MeasureZ {
  NodeId node;
  QubitIndex qubit;
  std::string tag;
};

struct MeasureX {
  NodeId node;
  QubitIndex qubit;
  std::string tag;
};

struct Send {
  std::string tag;
  NodeId from;
  NodeId to;
};

/// X on `qubit` iff the bit under `condition` is 1.
struct CondX {
  NodeId node;
  QubitIndex qubit;
  std::string condition;
};

/// Multi-controlled Z iff the bit under `condition` is 1 (|-> observed).
/// Empty `controls` gives a plain conditional Z.
struct CondMCZ {
  NodeId node;
  std::vector<QubitIndex> controls;
  QubitIndex target;
  std::string condition;
};

}  // namespace instr

using Instruction = std::variant<instr::BellPrep, instr::LocalMCX, instr::LocalMCU, instr::MeasureZ,
                                 instr::MeasureX, instr::Send, instr::CondX, instr::CondMCZ>;

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

struct Program {
  std::vector<Instruction> instructions;
  Ownership layout;
  std::size_t data_qubits = 0;
  /// Result tags in the order their measurements appear.
  std::vector<std::string> result_tags;

  std::size_t num_qubits() const noexcept { return layout.size(); }
};

inline bool is_measurement(const Instruction& in) {
  return std::holds_alternative<instr::MeasureZ>(in) || std::holds_alternative<instr::MeasureX>(in);
}

/// Emits, per control group: BellPrep, group MCX onto the local Bell half,
/// Z-measure, send, conditional X on the target half. Then one MCU at the
/// target node over every target-side Bell half plus its local controls.
/// Then, per group: X-measure the target half, send back, conditional MCZ
/// over the group's controls with the last control as the Z target.
inline Program compile(const GroupPlan& plan, const Unitary2& u) {
  Program prog;
  prog.layout = plan.layout;
  prog.data_qubits = plan.data_qubits;
  const auto& layout = plan.layout;
  const NodeId& tnode = plan.target_group.node;

  auto indices = [&](const std::vector<std::string>& labels) {
    std::vector<QubitIndex> out;
    out.reserve(labels.size());
    for (const auto& l : labels) out.push_back(layout.index_of(l));
    return out;
  };

  for (const auto& g : plan.control_groups) {
    const QubitIndex local = layout.index_of(g.bell_local);
    const QubitIndex remote = layout.index_of(g.bell_target);
    const std::string tag = "mz_" + g.node.str();
    prog.instructions.emplace_back(instr::BellPrep{local, remote, g.node, tnode});
    prog.instructions.emplace_back(instr::LocalMCX{g.node, indices(g.controls), local});
    prog.instructions.emplace_back(instr::MeasureZ{g.node, local, tag});
    prog.instructions.emplace_back(instr::Send{tag, g.node, tnode});
    prog.instructions.emplace_back(instr::CondX{tnode, remote, tag});
    prog.result_tags.push_back(tag);
  }

  std::vector<QubitIndex> mcu_controls;
  for (const auto& g : plan.control_groups) mcu_controls.push_back(layout.index_of(g.bell_target));
  for (QubitIndex q : indices(plan.target_group.local_controls)) mcu_controls.push_back(q);
  prog.instructions.emplace_back(
      instr::LocalMCU{tnode, std::move(mcu_controls), layout.index_of(plan.target_group.target), u});

  for (const auto& g : plan.control_groups) {
    const QubitIndex remote = layout.index_of(g.bell_target);
    const std::string tag = "mx_" + g.node.str();
    auto controls = indices(g.controls);
    const QubitIndex z_target = controls.back();
    controls.pop_back();
    prog.instructions.emplace_back(instr::MeasureX{tnode, remote, tag});
    prog.instructions.emplace_back(instr::Send{tag, tnode, g.node});
    prog.instructions.emplace_back(instr::CondMCZ{g.node, std::move(controls), z_target, tag});
    prog.result_tags.push_back(tag);
  }
  return prog;
}

inline Program compile(const DistributedGateSpec& spec, const Ownership& own) {
  return compile(plan_groups(spec, own), spec.u);
}

namespace detail {

inline std::string qubit_list(const Ownership& layout, const std::vector<QubitIndex>& qs) {
  std::string s = "[";
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (i) s += ' ';
    s += layout.label(qs[i]);
  }
  return s + "]";
}

inline std::string unitary_text(const Unitary2& u) {
  const std::string name = gate_name(u);
  if (name != "U") return name;
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c)
      os << (r || c ? " " : "") << u[r][c].real() << (u[r][c].imag() < 0 ? "" : "+")
         << u[r][c].imag() << "i";
  os << "]";
  return os.str();
}

}  // namespace detail

/// One-line rendering of an instruction with qubit labels.
inline std::string to_text(const Instruction& in, const Ownership& layout) {
  using detail::qubit_list;
  return std::visit(
      overloaded{
          [&](const instr::BellPrep& b) {
            return "BELL " + layout.label(b.local) + "@" + b.local_node.str() + " " +
                   layout.label(b.remote) + "@" + b.remote_node.str();
          },
          [&](const instr::LocalMCX& g) {
            return "MCX " + g.node.str() + " " + qubit_list(layout, g.controls) + " -> " +
                   layout.label(g.target);
          },
          [&](const instr::LocalMCU& g) {
            return "MCU " + g.node.str() + " " + qubit_list(layout, g.controls) + " -> " +
                   layout.label(g.target) + " u=" + detail::unitary_text(g.u);
          },
          [&](const instr::MeasureZ& m) {
            return "MEASZ " + m.node.str() + " " + layout.label(m.qubit) + " -> " + m.tag;
          },
          [&](const instr::MeasureX& m) {
            return "MEASX " + m.node.str() + " " + layout.label(m.qubit) + " -> " + m.tag;
          },
          [&](const instr::Send& s) {
            return "SEND " + s.tag + " " + s.from.str() + " -> " + s.to.str();
          },
          [&](const instr::CondX& c) {
            return "CONDX " + c.node.str() + " " + layout.label(c.qubit) + " if " + c.condition;
          },
          [&](const instr::CondMCZ& c) {
            return "CONDMCZ " + c.node.str() + " " + qubit_list(layout, c.controls) + " -> " +
                   layout.label(c.target) + " if " + c.condition;
          },
      },
      in);
}

/// Program listing, one instruction per line.
inline std::string to_text(const Program& prog) {
  std::string out;
  for (const auto& in : prog.instructions) out += to_text(in, prog.layout) + "\n";
  return out;
}

struct DataflowIssue {
  std::size_t instruction;
  std::string reason;
};

/// Linear scan: tags unique, every Send forwards a tag its sender holds,
/// every condition was delivered by an earlier Send to the consuming node.
inline std::vector<DataflowIssue> check_dataflow(const Program& prog) {
  std::vector<DataflowIssue> issues;
  std::map<std::string, NodeId> measured_by;
  std::set<std::pair<std::string, NodeId>> delivered;
  auto consume = [&](std::size_t i, const std::string& tag, const NodeId& node) {
    if (!delivered.count({tag, node}))
      issues.push_back({i, "condition '" + tag + "' not available at node " + node.str()});
  };
  for (std::size_t i = 0; i < prog.instructions.size(); ++i) {
    std::visit(overloaded{
                   [&](const instr::MeasureZ& m) {
                     if (!measured_by.emplace(m.tag, m.node).second)
                       issues.push_back({i, "result tag '" + m.tag + "' defined twice"});
                   },
                   [&](const instr::MeasureX& m) {
                     if (!measured_by.emplace(m.tag, m.node).second)
                       issues.push_back({i, "result tag '" + m.tag + "' defined twice"});
                   },
                   [&](const instr::Send& s) {
                     const bool own = measured_by.count(s.tag) && measured_by.at(s.tag) == s.from;
                     if (!measured_by.count(s.tag))
                       issues.push_back({i, "send of undefined tag '" + s.tag + "'"});
                     else if (!own && !delivered.count({s.tag, s.from}))
                       issues.push_back({i, "node " + s.from.str() + " does not hold '" + s.tag + "'"});
                     delivered.insert({s.tag, s.to});
                   },
                   [&](const instr::CondX& c) { consume(i, c.condition, c.node); },
                   [&](const instr::CondMCZ& c) { consume(i, c.condition, c.node); },
                   [](const auto&) {},
               },
               prog.instructions[i]);
  }
  return issues;
}

}  // namespace telegate
