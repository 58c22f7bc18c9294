#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "telegate/error.hpp"
#include "telegate/statevector.hpp"
#include "telegate/unitary.hpp"

namespace telegate {

/// Label of a network node ("A", "B", "Charlie", ...).
class NodeId {
 public:
  NodeId() = default;
  explicit NodeId(std::string label) : label_(std::move(label)) {}

  const std::string& str() const noexcept { return label_; }

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
  friend std::ostream& operator<<(std::ostream& os, const NodeId& n) { return os << n.label_; }

 private:
  std::string label_;
};

/// Qubit labels in register order, each owned by exactly one node.
class Ownership {
 public:
  Ownership() = default;
  Ownership(std::initializer_list<std::pair<std::string, std::string>> qubits) {
    for (const auto& [label, node] : qubits) add(label, NodeId(node));
  }

  /// Appends a qubit at the end of the register.
  QubitIndex add(const std::string& label, const NodeId& node) {
    if (label.empty()) throw Error(ErrorKind::Validation, "empty qubit label");
    if (index_.count(label))
      throw Error(ErrorKind::Validation, "duplicate qubit label '" + label + "'");
    index_.emplace(label, labels_.size());
    labels_.push_back(label);
    owners_.push_back(node);
    return labels_.size() - 1;
  }

  std::size_t size() const noexcept { return labels_.size(); }
  bool contains(const std::string& label) const { return index_.count(label) != 0; }

  QubitIndex index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw Error(ErrorKind::Validation, "unknown qubit label '" + label + "'");
    return it->second;
  }

  const NodeId& node_of(const std::string& label) const { return owners_[index_of(label)]; }
  const NodeId& node_of(QubitIndex q) const { return owners_.at(q); }
  const std::string& label(QubitIndex q) const { return labels_.at(q); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Distinct owners in order of first appearance in the register.
  std::vector<NodeId> nodes() const {
    std::vector<NodeId> out;
    for (const auto& n : owners_)
      if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    return out;
  }

  friend bool operator==(const Ownership& a, const Ownership& b) {
    return a.labels_ == b.labels_ && a.owners_ == b.owners_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<NodeId> owners_;
  std::map<std::string, QubitIndex> index_;
};

/// The requested gate: U on `target` iff every control is |1>.
struct DistributedGateSpec {
  std::vector<std::string> controls;
  std::string target;
  Unitary2 u = gates::pauli_x();
};

enum class SpecIssue { UnknownLabel, DuplicateControl, TargetInControls, NonUnitary };

struct ValidationIssue {
  SpecIssue issue;
  std::string label;
  std::string message;
};

inline std::vector<ValidationIssue> validate_spec(const DistributedGateSpec& spec,
                                                  const Ownership& own) {
  std::vector<ValidationIssue> issues;
  auto report = [&](SpecIssue kind, const std::string& label, std::string msg) {
    issues.push_back({kind, label, std::move(msg)});
  };
  if (!own.contains(spec.target))
    report(SpecIssue::UnknownLabel, spec.target, "unknown target qubit '" + spec.target + "'");
  std::vector<std::string> seen;
  for (const auto& c : spec.controls) {
    if (!own.contains(c)) report(SpecIssue::UnknownLabel, c, "unknown control qubit '" + c + "'");
    if (c == spec.target)
      report(SpecIssue::TargetInControls, c, "target '" + c + "' is also listed as a control");
    if (std::find(seen.begin(), seen.end(), c) != seen.end())
      report(SpecIssue::DuplicateControl, c, "control '" + c + "' listed more than once");
    seen.push_back(c);
  }
  if (!is_unitary(spec.u)) report(SpecIssue::NonUnitary, "", "gate matrix is not unitary");
  return issues;
}

struct TargetGroup {
  NodeId node;
  std::vector<std::string> local_controls;
  std::string target;
};

/// Controls owned by one non-target node plus the Bell pair that carries
/// their conjunction to the target node.
struct ControlGroup {
  NodeId node;
  std::vector<std::string> controls;
  std::string bell_local;   // owned by `node`
  std::string bell_target;  // owned by the target node
};

struct GroupPlan {
  TargetGroup target_group;
  std::vector<ControlGroup> control_groups;
  /// Data qubits in their original order followed by the generated Bell
  /// qubits (bell_local, bell_target per group).
  Ownership layout;
  std::size_t data_qubits = 0;
};

namespace detail {

inline std::string unique_label(std::string label, const Ownership& taken) {
  while (taken.contains(label)) label += '\'';
  return label;
}

inline std::string join_issues(const std::vector<ValidationIssue>& issues) {
  std::string msg;
  for (const auto& i : issues) {
    if (!msg.empty()) msg += "; ";
    msg += i.message;
  }
  return msg;
}

}  // namespace detail

/// Groups controls by owning node. Nodes are taken in order of first
/// appearance in the control list; controls on the target node join the
/// target group and need no Bell pair.
inline GroupPlan plan_groups(const DistributedGateSpec& spec, const Ownership& own) {
  if (auto issues = validate_spec(spec, own); !issues.empty())
    throw Error(ErrorKind::Validation, detail::join_issues(issues));

  GroupPlan plan;
  const NodeId target_node = own.node_of(spec.target);
  plan.target_group.node = target_node;
  plan.target_group.target = spec.target;
  for (const auto& c : spec.controls) {
    const NodeId& node = own.node_of(c);
    if (node == target_node) {
      plan.target_group.local_controls.push_back(c);
      continue;
    }
    auto it = std::find_if(plan.control_groups.begin(), plan.control_groups.end(),
                           [&](const ControlGroup& g) { return g.node == node; });
    if (it == plan.control_groups.end()) {
      plan.control_groups.push_back({node, {}, {}, {}});
      it = std::prev(plan.control_groups.end());
    }
    it->controls.push_back(c);
  }

  plan.layout = own;
  plan.data_qubits = own.size();
  std::size_t k = 1;
  for (auto& g : plan.control_groups) {
    g.bell_local = detail::unique_label(g.node.str() + "_e", plan.layout);
    plan.layout.add(g.bell_local, g.node);
    g.bell_target = detail::unique_label(target_node.str() + "_e" + std::to_string(k++), plan.layout);
    plan.layout.add(g.bell_target, target_node);
  }
  return plan;
}

}  // namespace telegate
