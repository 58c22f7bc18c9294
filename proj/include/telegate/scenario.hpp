#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "telegate/gate_model.hpp"

namespace telegate {

enum class RunMode { Exhaustive, Sampled };

/// A network, its qubit ownership, and the requested nonlocal gate.
struct Scenario {
  std::string name;
  std::vector<NodeId> nodes;
  Ownership ownership;
  DistributedGateSpec spec;
  std::optional<std::vector<Amplitude>> input;
  std::uint64_t seed = 0;
  RunMode mode = RunMode::Exhaustive;
  std::size_t shots = 1000;
  /// Random inputs generated by `verify` when no count is given.
  std::size_t random_inputs = 10;
};

inline constexpr int kScenarioVersion = 1;

namespace scenarios {

inline Scenario make(std::string name, const std::vector<std::string>& nodes,
                     const std::vector<std::pair<std::string, std::string>>& qubits,
                     std::vector<std::string> controls, std::string target) {
  Scenario s;
  s.name = std::move(name);
  for (const auto& n : nodes) s.nodes.emplace_back(n);
  for (const auto& [label, node] : qubits) s.ownership.add(label, NodeId(node));
  s.spec.controls = std::move(controls);
  s.spec.target = std::move(target);
  s.spec.u = gates::pauli_x();
  s.seed = 2024;
  return s;
}

/// Alice holds A1; Bob holds B1 and the target B2.
inline Scenario bipartite_case1() {
  return make("bipartite_case1", {"A", "B"}, {{"A1", "A"}, {"B1", "B"}, {"B2", "B"}}, {"A1", "B1"}, "B2");
}

/// Alice holds both controls A1, A2; Bob holds the target B1.
inline Scenario bipartite_case2() {
  return make("bipartite_case2", {"A", "B"}, {{"A1", "A"}, {"A2", "A"}, {"B1", "B"}}, {"A1", "A2"}, "B1");
}

/// One control each at Alice and Bob, target C at Charlie.
inline Scenario tripartite() {
  return make("tripartite", {"A", "B", "C"}, {{"A1", "A"}, {"B1", "B"}, {"C", "C"}}, {"A1", "B1"}, "C");
}

/// Three nodes with n qubits each: controls A1..An, B1..Bn, C1..C(n-1),
/// target Cn.
inline Scenario fig2_parametric(std::size_t n) {
  if (n < 1) throw Error(ErrorKind::Scenario, "fig2_parametric needs n >= 1");
  std::vector<std::pair<std::string, std::string>> qubits;
  std::vector<std::string> controls;
  for (const char* node : {"A", "B", "C"}) {
    for (std::size_t i = 1; i <= n; ++i) {
      const std::string label = std::string(node) + std::to_string(i);
      qubits.emplace_back(label, node);
      if (!(std::string(node) == "C" && i == n)) controls.push_back(label);
    }
  }
  return make("fig2_parametric(" + std::to_string(n) + ")", {"A", "B", "C"}, qubits, controls,
              "C" + std::to_string(n));
}

inline const std::vector<std::string>& bundled_names() {
  static const std::vector<std::string> names = {"bipartite_case1", "bipartite_case2", "tripartite",
                                                 "fig2_parametric"};
  return names;
}

/// "bipartite_case1", "tripartite", "fig2_parametric" (n = 2) or
/// "fig2_parametric:<n>".
inline std::optional<Scenario> bundled(const std::string& name) {
  if (name == "bipartite_case1") return bipartite_case1();
  if (name == "bipartite_case2") return bipartite_case2();
  if (name == "tripartite") return tripartite();
  if (name == "fig2_parametric") return fig2_parametric(2);
  const std::string prefix = "fig2_parametric:";
  if (name.rfind(prefix, 0) == 0) {
    const std::string arg = name.substr(prefix.size());
    if (arg.empty() || arg.find_first_not_of("0123456789") != std::string::npos || arg.size() > 3)
      throw Error(ErrorKind::Scenario, "bad fig2_parametric size '" + arg + "'");
    return fig2_parametric(std::stoul(arg));
  }
  return std::nullopt;
}

}  // namespace scenarios

namespace detail {

using nlohmann::json;

inline Amplitude parse_complex(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw Error(ErrorKind::Scenario, where + ": expected a number or [re, im] pair");
}

inline json complex_json(const Amplitude& a) { return json::array({a.real(), a.imag()}); }

inline Unitary2 parse_unitary(const json& j) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "X") return gates::pauli_x();
    if (name == "Z") return gates::pauli_z();
    if (name == "H") return gates::hadamard();
    if (name == "I") return gates::identity();
    throw Error(ErrorKind::Scenario, "unknown gate name '" + name + "' (expected X, Z, H, I or a matrix)");
  }
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 || !j[1].is_array() ||
      j[1].size() != 2)
    throw Error(ErrorKind::Scenario, "u: expected a name or a 2x2 matrix of [re, im] entries");
  Unitary2 u;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c)
      u[r][c] = parse_complex(j[r][c], "u[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  return u;
}

template <class T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::Scenario, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::Scenario, std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace detail

/// Parses and validates a scenario document; every failure is an
/// ErrorKind::Scenario naming the offending field or label.
inline Scenario parse_scenario(const nlohmann::json& j) {
  using detail::json;
  if (!j.is_object()) throw Error(ErrorKind::Scenario, "scenario must be a JSON object");
  const int version = detail::required<int>(j, "version");
  if (version != kScenarioVersion)
    throw Error(ErrorKind::Scenario, "unsupported scenario version " + std::to_string(version));

  Scenario s;
  s.name = j.value("name", std::string("scenario"));
  for (const auto& n : detail::required<std::vector<std::string>>(j, "nodes")) {
    NodeId id(n);
    if (n.empty()) throw Error(ErrorKind::Scenario, "empty node name");
    if (std::find(s.nodes.begin(), s.nodes.end(), id) != s.nodes.end())
      throw Error(ErrorKind::Scenario, "duplicate node '" + n + "'");
    s.nodes.push_back(std::move(id));
  }
  if (!j.contains("qubits") || !j["qubits"].is_array())
    throw Error(ErrorKind::Scenario, "missing field 'qubits'");
  for (const auto& q : j["qubits"]) {
    if (!q.is_object()) throw Error(ErrorKind::Scenario, "qubit entries must be objects");
    const auto label = detail::required<std::string>(q, "label");
    const NodeId node(detail::required<std::string>(q, "node"));
    if (std::find(s.nodes.begin(), s.nodes.end(), node) == s.nodes.end())
      throw Error(ErrorKind::Scenario, "qubit '" + label + "' is owned by undeclared node '" + node.str() + "'");
    if (s.ownership.contains(label))
      throw Error(ErrorKind::Scenario, "duplicate qubit label '" + label + "'");
    if (label.empty()) throw Error(ErrorKind::Scenario, "empty qubit label");
    s.ownership.add(label, node);
  }
  s.spec.controls = detail::required<std::vector<std::string>>(j, "controls");
  s.spec.target = detail::required<std::string>(j, "target");
  s.spec.u = j.contains("u") ? detail::parse_unitary(j["u"]) : gates::pauli_x();

  if (j.contains("input")) {
    const auto& in = j["input"];
    if (!in.is_array()) throw Error(ErrorKind::Scenario, "input: expected an array of amplitudes");
    std::vector<Amplitude> amps;
    for (std::size_t i = 0; i < in.size(); ++i)
      amps.push_back(detail::parse_complex(in[i], "input[" + std::to_string(i) + "]"));
    if (amps.size() != (std::size_t{1} << s.ownership.size()))
      throw Error(ErrorKind::Scenario, "input has " + std::to_string(amps.size()) +
                                           " amplitudes, expected " +
                                           std::to_string(std::size_t{1} << s.ownership.size()));
    s.input = std::move(amps);
  }
  if (j.contains("seed")) s.seed = detail::required<std::uint64_t>(j, "seed");
  if (j.contains("mode")) {
    const auto mode = detail::required<std::string>(j, "mode");
    if (mode == "exhaustive")
      s.mode = RunMode::Exhaustive;
    else if (mode == "sampled")
      s.mode = RunMode::Sampled;
    else
      throw Error(ErrorKind::Scenario, "mode must be 'exhaustive' or 'sampled'");
  }
  if (j.contains("shots")) s.shots = detail::required<std::size_t>(j, "shots");
  if (j.contains("inputs")) s.random_inputs = detail::required<std::size_t>(j, "inputs");

  if (auto issues = validate_spec(s.spec, s.ownership); !issues.empty())
    throw Error(ErrorKind::Scenario, detail::join_issues(issues));
  return s;
}

inline nlohmann::json to_json(const Scenario& s) {
  using detail::json;
  json j;
  j["version"] = kScenarioVersion;
  j["name"] = s.name;
  j["nodes"] = json::array();
  for (const auto& n : s.nodes) j["nodes"].push_back(n.str());
  j["qubits"] = json::array();
  for (const auto& label : s.ownership.labels())
    j["qubits"].push_back({{"label", label}, {"node", s.ownership.node_of(label).str()}});
  j["controls"] = s.spec.controls;
  j["target"] = s.spec.target;
  const std::string name = gate_name(s.spec.u);
  if (name != "U") {
    j["u"] = name;
  } else {
    j["u"] = json::array();
    for (std::size_t r = 0; r < 2; ++r)
      j["u"].push_back({detail::complex_json(s.spec.u[r][0]), detail::complex_json(s.spec.u[r][1])});
  }
  if (s.input) {
    j["input"] = json::array();
    for (const auto& a : *s.input) j["input"].push_back(detail::complex_json(a));
  }
  j["seed"] = s.seed;
  j["mode"] = s.mode == RunMode::Exhaustive ? "exhaustive" : "sampled";
  j["shots"] = s.shots;
  j["inputs"] = s.random_inputs;
  return j;
}

inline Scenario parse_scenario_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Scenario, std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(j);
}

inline Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Scenario, "cannot read scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

}  // namespace telegate
