#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "telegate/report.hpp"

using namespace telegate;

namespace {

constexpr OpKey kCnot{GateKind::ControlledX, 2};
constexpr OpKey kToffoli{GateKind::ControlledX, 3};
constexpr OpKey kHadamard{GateKind::Hadamard, 1};

ResourceReport account_scenario(const Scenario& s) { return account(compile(s.spec, s.ownership)); }

}  // namespace

TEST_CASE("op names", "[resources]") {
  CHECK(op_name(kCnot) == "CNOT");
  CHECK(op_name(kToffoli) == "Toffoli");
  CHECK(op_name({GateKind::ControlledX, 7}) == "7-qubit Toffoli");
  CHECK(op_name({GateKind::ControlledZ, 1}) == "Z");
  CHECK(op_name({GateKind::ControlledZ, 2}) == "CZ");
  CHECK(op_name({GateKind::ControlledU, 3}) == "3-qubit controlled-U");
  CHECK(OpCounts{{kCnot, 1}, {kToffoli, 1}} == OpCounts{{kToffoli, 1}, {kCnot, 1}});
  CHECK(OpCounts{{kCnot, 1}, {kToffoli, 1}}.to_string() == "1 CNOT, 1 Toffoli");
}

TEST_CASE("account: bundled scenarios", "[resources]") {
  const auto c1 = account_scenario(scenarios::bipartite_case1());
  CHECK(c1.entangled_pairs == 1);
  CHECK(c1.auxiliary_qubits == 0);
  CHECK(c1.unconditional_ops == OpCounts{{kCnot, 1}, {kToffoli, 1}});
  CHECK(c1.single_qubit_measurements == 2);
  CHECK(c1.classical_bits_sent == 2);
  CHECK(c1.conditional_corrections == OpCounts{{{GateKind::ControlledX, 1}, 1}, {{GateKind::ControlledZ, 1}, 1}});

  const auto c2 = account_scenario(scenarios::bipartite_case2());
  CHECK(c2.entangled_pairs == 1);
  CHECK(c2.unconditional_ops.to_string() == "1 Toffoli, 1 CNOT");
  CHECK(c2.single_qubit_measurements == 2);
  CHECK(c2.conditional_corrections.count({GateKind::ControlledZ, 2}) == 1);

  const auto tri = account_scenario(scenarios::tripartite());
  CHECK(tri.entangled_pairs == 2);
  CHECK(tri.auxiliary_qubits == 0);
  CHECK(tri.unconditional_ops == OpCounts{{kCnot, 2}, {kToffoli, 1}});
  CHECK(tri.single_qubit_measurements == 4);
  CHECK(tri.bell_preparations == 2);
}

TEST_CASE("account: three nodes with n qubits each", "[resources]") {
  for (std::size_t n = 1; n <= 6; ++n) {
    INFO("n=" << n);
    const auto r = account_scenario(scenarios::fig2_parametric(n));
    CHECK(r.entangled_pairs == 2);
    CHECK(r.single_qubit_measurements == 4);
    CHECK(r.unconditional_ops.count({GateKind::ControlledX, n + 1}) == 2);
    CHECK(r.unconditional_ops.count({GateKind::ControlledX, n + 2}) == 1);
    CHECK(r.unconditional_ops.total() == 3);
  }
}

TEST_CASE("per-qubit baseline", "[resources]") {
  const auto b1 = baseline_eisert(1);
  CHECK(b1.entangled_pairs == 2);
  CHECK(b1.single_qubit_measurements == 4);
  CHECK(b1.unconditional_ops == OpCounts{{kCnot, 2}, {kToffoli, 1}, {kHadamard, 2}});

  const auto b3 = baseline_eisert(3);
  CHECK(b3.entangled_pairs == 8);
  CHECK(b3.single_qubit_measurements == 16);
  CHECK(b3.unconditional_ops.count({GateKind::ControlledX, 9}) == 1);
  CHECK(b3.unconditional_ops.count(kCnot) == 8);
  CHECK(b3.unconditional_ops.count(kHadamard) == 8);

  CHECK(b1.entangled_pairs == account_scenario(scenarios::tripartite()).entangled_pairs);
  CHECK_THROWS_AS(baseline_eisert(0), Error);

  // Two-node rows of the comparison: one pair per remote control.
  const auto case1 = baseline_per_qubit(1, 3);
  CHECK(case1.unconditional_ops == OpCounts{{kCnot, 1}, {kToffoli, 1}, {kHadamard, 1}});
  CHECK(case1.single_qubit_measurements == 2);
  const auto case2 = baseline_per_qubit(2, 3);
  CHECK(case2.unconditional_ops == OpCounts{{kCnot, 2}, {kToffoli, 1}, {kHadamard, 2}});
  CHECK(case2.single_qubit_measurements == 4);
}

TEST_CASE("pairs equal distinct remote control nodes for any program", "[resources][property]") {
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t nodes = 1 + rng() % 5;
    const std::size_t qubits = 2 + rng() % 12;
    Ownership own;
    for (std::size_t q = 0; q < qubits; ++q)
      own.add("q" + std::to_string(q), NodeId(std::string(1, static_cast<char>('A' + rng() % nodes))));
    auto labels = own.labels();
    std::shuffle(labels.begin(), labels.end(), rng);
    DistributedGateSpec spec{{labels.begin() + 1, labels.begin() + 1 + rng() % qubits}, labels[0],
                             gates::pauli_x()};
    const auto plan = plan_groups(spec, own);
    const auto r = account(compile(plan, spec.u));
    std::set<NodeId> remote;
    for (const auto& c : spec.controls)
      if (own.node_of(c) != own.node_of(spec.target)) remote.insert(own.node_of(c));
    CHECK(r.entangled_pairs == remote.size());
    CHECK(r.entangled_pairs == plan.control_groups.size());
    CHECK(r.single_qubit_measurements == 2 * r.entangled_pairs);
    CHECK(r.classical_bits_sent == 2 * r.entangled_pairs);
    CHECK(r.unconditional_ops.total() == plan.control_groups.size() + 1);
    CHECK(r.conditional_corrections.total() == 2 * plan.control_groups.size());
  }
}

TEST_CASE("comparison tables", "[resources]") {
  const auto t1 = table1_rows();
  REQUIRE(t1.size() == 9);
  CHECK(t1[0].method.find("not simulated") != std::string::npos);
  CHECK(t1[6].entangled == "4");
  CHECK(t1[6].auxiliary == "4");
  CHECK(t1[6].operations == "3 CE, 3CNOT");
  CHECK(t1[6].measurements == "3 SM, 1 FM");
  // bipartite case 2: this protocol vs the per-qubit baseline
  CHECK(t1[5].operations == "1 Toffoli, 1 CNOT");
  CHECK(t1[5].measurements == "2 SM");
  CHECK(t1[4].operations == "2 CNOT, 1 Toffoli, 2 Hadamard");
  CHECK(t1[4].measurements == "4 SM");

  const auto t2 = table2_rows({5});
  REQUIRE(t2.size() == 2);
  CHECK(t2[0].entangled == "14");
  CHECK(t2[1].entangled == "2");

  const auto text = render_tables({1, 2, 3, 4, 5});
  CHECK(text.find("Table 1") != std::string::npos);
  CHECK(text.find("Table 2") != std::string::npos);
  CHECK(text.find("15-qubit Toffoli") != std::string::npos);

  const auto j = to_json(t1);
  CHECK(j[0]["simulated"] == false);
  CHECK(j[2]["simulated"] == true);
  CHECK(j[2]["counts"]["entangled_pairs"] == 1);
}
