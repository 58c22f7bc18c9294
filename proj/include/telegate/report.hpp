#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "telegate/resources.hpp"
#include "telegate/scenario.hpp"
#include "telegate/verifier.hpp"

namespace telegate {

// ---------------------------------------------------------------------------
// Comparison tables

struct TableRow {
  std::string scenario;
  std::string method;
  std::string entangled;
  std::string auxiliary;
  std::string operations;
  std::string measurements;
  std::optional<ResourceReport> counts;  // empty for published-only rows
};

inline TableRow table_row(const std::string& scenario, const ResourceReport& r, bool sm_suffix) {
  return {scenario,
          r.method,
          std::to_string(r.entangled_pairs),
          std::to_string(r.auxiliary_qubits),
          r.unconditional_ops.to_string(),
          std::to_string(r.single_qubit_measurements) + (sm_suffix ? " SM" : ""),
          r};
}

/// Remote controls of a spec: those not owned by the target's node.
inline std::size_t remote_controls(const DistributedGateSpec& spec, const Ownership& own) {
  const NodeId& t = own.node_of(spec.target);
  return static_cast<std::size_t>(std::count_if(spec.controls.begin(), spec.controls.end(),
                                                [&](const auto& c) { return own.node_of(c) != t; }));
}

/// Bipartite and tripartite Toffoli comparison. Rows for this protocol come
/// from compiling the bundled scenarios.
inline std::vector<TableRow> table1_rows() {
  std::vector<TableRow> rows;
  const auto& published = published_qudit_rows();
  for (const auto& s : {scenarios::bipartite_case1(), scenarios::bipartite_case2(), scenarios::tripartite()}) {
    for (const auto& p : published)
      if (p.scenario == s.name)
        rows.push_back({p.scenario, p.method, p.entangled, p.auxiliary, p.operations, p.measurements, {}});
    rows.push_back(table_row(
        s.name, baseline_per_qubit(remote_controls(s.spec, s.ownership), s.spec.controls.size() + 1), true));
    rows.push_back(table_row(s.name, account(compile(s.spec, s.ownership)), true));
  }
  return rows;
}

/// Three nodes, n qubits each, for every n in `n_values`.
inline std::vector<TableRow> table2_rows(const std::vector<std::size_t>& n_values) {
  std::vector<TableRow> rows;
  for (std::size_t n : n_values) {
    const auto s = scenarios::fig2_parametric(n);
    rows.push_back(table_row("n=" + std::to_string(n), baseline_eisert(n), false));
    rows.push_back(table_row("n=" + std::to_string(n), account(compile(s.spec, s.ownership)), false));
  }
  return rows;
}

inline std::string render_rows(const std::string& title, const std::vector<TableRow>& rows) {
  const std::vector<std::string> head = {"Scenario", "Method", "Entangled pairs", "Aux qubits",
                                         "Applied operations", "Measurements"};
  auto cells = [](const TableRow& r) {
    return std::vector<std::string>{r.scenario, r.method, r.entangled, r.auxiliary, r.operations, r.measurements};
  };
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) width[c] = head[c].size();
  for (const auto& r : rows) {
    const auto v = cells(r);
    for (std::size_t c = 0; c < v.size(); ++c) width[c] = std::max(width[c], v[c].size());
  }
  auto line = [&](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t c = 0; c < v.size(); ++c) {
      s += v[c];
      if (c + 1 < v.size()) s += std::string(width[c] - v[c].size() + 2, ' ');
    }
    return s + "\n";
  };
  std::string out = title + "\n" + line(head);
  std::size_t total = 0;
  for (auto w : width) total += w + 2;
  out += std::string(total - 2, '-') + "\n";
  for (const auto& r : rows) out += line(cells(r));
  return out;
}

inline std::string render_table1() {
  return render_rows("Table 1: remote Toffoli, bipartite and tripartite", table1_rows());
}

inline std::string render_table2(const std::vector<std::size_t>& n_values) {
  return render_rows("Table 2: three nodes with n qubits each (3n-input Toffoli)", table2_rows(n_values));
}

inline std::string render_tables(const std::vector<std::size_t>& n_values) {
  return render_table1() + "\n" + render_table2(n_values);
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const OpCounts& ops) {
  auto j = nlohmann::json::array();
  for (const auto& [op, n] : ops.entries())
    j.push_back({{"gate", op_name(op)}, {"arity", op.arity}, {"count", n}});
  return j;
}

inline nlohmann::json to_json(const ResourceReport& r) {
  return {{"method", r.method},
          {"entangled_pairs", r.entangled_pairs},
          {"auxiliary_qubits", r.auxiliary_qubits},
          {"unconditional_ops", to_json(r.unconditional_ops)},
          {"conditional_corrections", to_json(r.conditional_corrections)},
          {"bell_preparations", r.bell_preparations},
          {"single_qubit_measurements", r.single_qubit_measurements},
          {"classical_bits_sent", r.classical_bits_sent}};
}

inline nlohmann::json to_json(const TableRow& row) {
  nlohmann::json j = {{"scenario", row.scenario},         {"method", row.method},
                      {"entangled", row.entangled},       {"auxiliary", row.auxiliary},
                      {"operations", row.operations},     {"measurements", row.measurements},
                      {"simulated", row.counts.has_value()}};
  if (row.counts) j["counts"] = to_json(*row.counts);
  return j;
}

inline nlohmann::json to_json(const std::vector<TableRow>& rows) {
  auto j = nlohmann::json::array();
  for (const auto& r : rows) j.push_back(to_json(r));
  return j;
}

inline nlohmann::json to_json(const VerificationReport& r) {
  auto branches = nlohmann::json::array();
  for (const auto& b : r.branches)
    branches.push_back({{"input", b.input},
                        {"bits", b.bits},
                        {"probability", b.probability},
                        {"deviation", b.deviation},
                        {"fidelity", b.fidelity},
                        {"pass", b.pass}});
  return {{"spec", r.spec_summary},
          {"inputs", r.inputs},
          {"tolerance", r.tolerance},
          {"branches", branches},
          {"branch_count", r.branches.size()},
          {"failures", r.failures()},
          {"max_deviation", r.max_deviation},
          {"min_fidelity", r.min_fidelity},
          {"probability_error", r.probability_error},
          {"resources", to_json(r.resources)},
          {"pass", r.pass}};
}

inline nlohmann::json to_json(const BranchResult& run) {
  auto trace = nlohmann::json::array();
  for (const auto& e : run.trace) {
    nlohmann::json t = {{"index", e.index}, {"instruction", e.text}};
    if (e.bit) t["bit"] = *e.bit;
    if (e.probability) t["probability"] = detail::fixed12(*e.probability);
    if (e.applied) t["applied"] = *e.applied;
    trace.push_back(std::move(t));
  }
  return {{"branch", run.bits()}, {"probability", detail::fixed12(run.probability)}, {"trace", trace}};
}

// ---------------------------------------------------------------------------
// Text

inline std::string render_text(const VerificationReport& r) {
  std::string s;
  s += "spec:            " + r.spec_summary + "\n";
  s += "inputs:          " + std::to_string(r.inputs) + "\n";
  s += "branches:        " + std::to_string(r.branches.size()) + " (" + std::to_string(r.failures()) +
       " failed)\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.3e", r.max_deviation);
  s += std::string("max deviation:   ") + buf;
  std::snprintf(buf, sizeof buf, "%.3e", r.tolerance);
  s += std::string(" (tolerance ") + buf + ")\n";
  s += "min fidelity:    " + detail::fixed12(r.min_fidelity) + "\n";
  std::snprintf(buf, sizeof buf, "%.3e", r.probability_error);
  s += std::string("prob. sum error: ") + buf + "\n";
  s += "resources:       " + std::to_string(r.resources.entangled_pairs) + " Bell pairs, " +
       r.resources.unconditional_ops.to_string() + ", " +
       std::to_string(r.resources.single_qubit_measurements) + " SM, " +
       std::to_string(r.resources.classical_bits_sent) + " classical bits\n";
  s += "corrections:     " + r.resources.conditional_corrections.to_string() + "\n";
  s += std::string("result:          ") + (r.pass ? "PASS" : "FAIL") + "\n";
  return s;
}

}  // namespace telegate
