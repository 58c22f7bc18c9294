#include <catch_amalgamated.hpp>

#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "oracle.hpp"
#include "telegate/executor.hpp"
#include "telegate/scenario.hpp"
#include "telegate/verifier.hpp"

using namespace telegate;
using Catch::Approx;

namespace {

Program compile_scenario(const Scenario& s) { return compile(s.spec, s.ownership); }

/// Fixed input d_0..d_7 with distinct amplitudes so any misplaced swap shows.
StateVector general_input() {
  std::vector<Amplitude> d;
  for (int i = 0; i < 8; ++i) d.emplace_back(0.05 * (i + 1), 0.03 * (7 - i) - 0.1);
  double n2 = 0.0;
  for (const auto& x : d) n2 += std::norm(x);
  for (auto& x : d) x /= std::sqrt(n2);
  return StateVector(d);
}

/// The ideal output: d6 and d7 exchange places.
StateVector swapped67(const StateVector& in) {
  auto out = in;
  std::swap(out[6], out[7]);
  return out;
}

/// Bipartite case 1 as dense matrices over A1 B1 B2 A_e B_e1, forced onto
/// (z, x). Returns the normalized final state and the branch probability.
std::pair<std::vector<Amplitude>, double> bipartite_oracle(const StateVector& input, int z, int x) {
  using namespace oracle;
  const std::size_t n = 5;
  std::vector<cplx> v(32);
  for (std::size_t i = 0; i < 8; ++i) v[i << 2] = input[i];
  v = mat_vec(single(n, 3, from2(telegate::gates::hadamard())), v);
  v = mat_vec(controlled(n, {3}, 4, telegate::gates::pauli_x()), v);
  v = mat_vec(controlled(n, {0}, 3, telegate::gates::pauli_x()), v);
  double p = project(n, v, 3, false, z);
  if (z) v = mat_vec(single(n, 4, from2(telegate::gates::pauli_x())), v);
  v = mat_vec(controlled(n, {4, 1}, 2, telegate::gates::pauli_x()), v);
  p *= project(n, v, 4, true, x);
  if (x) v = mat_vec(single(n, 0, from2(telegate::gates::pauli_z())), v);
  normalize(v);
  return {v, p};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("check_locality", "[executor]") {
  const auto tri = compile_scenario(scenarios::tripartite());
  CHECK(check_locality(tri).empty());

  SECTION("gate spanning two nodes") {
    auto prog = compile_scenario(scenarios::bipartite_case1());
    // A1 (node A) controlling B2 (node B).
    prog.instructions.insert(prog.instructions.begin(), instr::LocalMCX{NodeId("A"), {0}, 2});
    const auto v = check_locality(prog);
    REQUIRE(v.size() == 1);
    CHECK(v[0].instruction == 0);
    CHECK_THROWS_MATCHES(enumerate_branches(prog, general_input()), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.kind() == ErrorKind::Locality;
                         }));
  }
  SECTION("condition never sent to the consuming node") {
    auto prog = compile_scenario(scenarios::bipartite_case1());
    prog.instructions.erase(prog.instructions.begin() + 3);  // drop the first Send
    const auto v = check_locality(prog);
    REQUIRE_FALSE(v.empty());
    CHECK(v[0].instruction == 3);
  }
  SECTION("Bell pair declared with the wrong owners") {
    auto prog = compile_scenario(scenarios::bipartite_case1());
    std::get<instr::BellPrep>(prog.instructions[0]).remote_node = NodeId("A");
    CHECK_FALSE(check_locality(prog).empty());
  }
}

TEST_CASE("bipartite case 1 branches reproduce the Toffoli output", "[executor]") {
  const auto prog = compile_scenario(scenarios::bipartite_case1());
  const auto input = general_input();
  const auto want = swapped67(input);

  const auto b00 = execute_branch(prog, input, {{"mz_A", 0}, {"mx_A", 0}});
  CHECK(b00.probability == Approx(0.25).margin(1e-12));
  CHECK(max_deviation(data_state(prog, b00), want) <= 1e-12);

  const auto b11 = execute_branch(prog, input, {{"mz_A", 1}, {"mx_A", 1}});
  CHECK(b11.probability == Approx(0.25).margin(1e-12));
  CHECK(max_deviation(data_state(prog, b11), want) <= 1e-12);

  for (int z = 0; z < 2; ++z) {
    for (int x = 0; x < 2; ++x) {
      const auto run = execute_branch(prog, input, {{"mz_A", z}, {"mx_A", x}});
      const auto [oracle_state, oracle_p] = bipartite_oracle(input, z, x);
      INFO("branch " << z << x);
      CHECK(std::abs(run.probability - oracle_p) <= 1e-12);
      CHECK(max_deviation(run.final_state, StateVector(oracle_state)) <= 1e-12);
    }
  }
}

TEST_CASE("execute_branch by bit string and error paths", "[executor]") {
  const auto prog = compile_scenario(scenarios::bipartite_case1());
  const auto input = general_input();
  CHECK(execute_branch(prog, input, std::string("10")).bits() == "10");
  CHECK_THROWS_AS(execute_branch(prog, input, std::string("000")), Error);
  CHECK_THROWS_AS(execute_branch(prog, input, std::string("0x")), Error);
  CHECK_THROWS_AS(execute_branch(prog, input, std::map<std::string, int>{{"mz_A", 0}}), Error);
  CHECK_THROWS_AS(execute_branch(prog, init_zero(2), std::string("00")), Error);

  SECTION("impossible forced outcome names the measurement") {
    // Z-measuring a definite |0> cannot yield 1.
    Program p;
    p.layout = Ownership{{"q", "N"}};
    p.data_qubits = 1;
    p.instructions.push_back(instr::MeasureZ{NodeId("N"), 0, "m"});
    try {
      execute_branch(p, init_zero(1), std::map<std::string, int>{{"m", 1}});
      FAIL("expected impossible branch");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ImpossibleBranch);
      CHECK(std::string(e.what()).find("'m'") != std::string::npos);
    }
  }
  SECTION("channel refuses undelivered bits") {
    ClassicalChannel ch;
    ch.deliver("t", NodeId("A"), NodeId("B"), 1);
    CHECK(ch.read(NodeId("B"), "t") == 1);
    try {
      ch.read(NodeId("C"), "t");
      FAIL("expected unresolved condition");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UnresolvedCondition);
    }
  }
}

TEST_CASE("local-only program flips the target on all-ones controls", "[executor]") {
  Ownership own{{"c1", "N"}, {"c2", "N"}, {"c3", "N"}, {"t", "N"}};
  const auto prog = compile(DistributedGateSpec{{"c1", "c2", "c3"}, "t", gates::pauli_x()}, own);
  const auto run = execute_branch(prog, basis_state(4, 0b1110), std::map<std::string, int>{});
  CHECK(run.final_state[0b1111] == Amplitude(1.0));
  const auto branches = enumerate_branches(prog, basis_state(4, 0b1110));
  REQUIRE(branches.size() == 1);
  CHECK(branches[0].probability == 1.0);
}

TEST_CASE("enumerate_branches", "[executor]") {
  const auto input = general_input();
  SECTION("bipartite: 4 branches of 1/4") {
    const auto prog = compile_scenario(scenarios::bipartite_case1());
    const auto bs = enumerate_branches(prog, input);
    REQUIRE(bs.size() == 4);
    const std::vector<std::string> order = {"00", "01", "10", "11"};
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(bs[i].bits() == order[i]);
      CHECK(bs[i].probability == Approx(0.25).margin(1e-12));
    }
  }
  SECTION("tripartite: 16 branches of 1/16") {
    const auto prog = compile_scenario(scenarios::tripartite());
    const auto bs = enumerate_branches(prog, input);
    REQUIRE(bs.size() == 16);
    double total = 0.0;
    for (const auto& b : bs) {
      CHECK(b.probability == Approx(0.0625).margin(1e-12));
      total += b.probability;
    }
    CHECK(std::abs(total - 1.0) <= 1e-10);
  }
  SECTION("measurement limit") {
    const auto prog = compile_scenario(scenarios::tripartite());
    try {
      enumerate_branches(prog, input, 3);
      FAIL("expected limit error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::LimitExceeded);
    }
  }
  SECTION("zero-probability branches are skipped") {
    // A single Z-measurement of a definite qubit has one branch.
    Program p;
    p.layout = Ownership{{"q", "N"}};
    p.data_qubits = 1;
    p.instructions.push_back(instr::MeasureZ{NodeId("N"), 0, "m"});
    const auto bs = enumerate_branches(p, basis_state(1, 1));
    REQUIRE(bs.size() == 1);
    CHECK(bs[0].bits() == "1");
  }
}

TEST_CASE("run_sampled", "[executor]") {
  const auto prog = compile_scenario(scenarios::bipartite_case1());
  const auto input = general_input();
  const auto a = run_sampled(prog, input, 42);
  const auto b = run_sampled(prog, input, 42);
  CHECK(a.bits() == b.bits());
  CHECK(a.final_state == b.final_state);
  CHECK(format_trace(a) == format_trace(b));

  const auto branches = enumerate_branches(prog, input);
  std::map<std::string, const BranchResult*> by_bits;
  for (const auto& br : branches) by_bits[br.bits()] = &br;

  std::map<std::string, int> freq;
  const int shots = 10000;
  for (int s = 0; s < shots; ++s) {
    const auto r = run_sampled(prog, input, static_cast<std::uint64_t>(s));
    ++freq[r.bits()];
    REQUIRE(r.final_state == by_bits.at(r.bits())->final_state);
  }
  REQUIRE(freq.size() == 4);
  for (const auto& [bits, count] : freq) {
    INFO(bits);
    CHECK(std::abs(count / double(shots) - 0.25) <= 0.02);
  }
}

TEST_CASE("group emission order does not change the data state", "[executor][property]") {
  std::mt19937_64 rng(31);
  const auto s = scenarios::fig2_parametric(2);
  auto plan = plan_groups(s.spec, s.ownership);
  const auto forward = compile(plan, s.spec.u);
  std::reverse(plan.control_groups.begin(), plan.control_groups.end());
  const auto reversed = compile(plan, s.spec.u);
  REQUIRE(to_text(forward) != to_text(reversed));

  for (int trial = 0; trial < 5; ++trial) {
    const auto input = random_state(6, rng);
    const auto fb = enumerate_branches(forward, input);
    const auto rb = enumerate_branches(reversed, input);
    REQUIRE(fb.size() == rb.size());
    for (const auto& f : fb) {
      std::map<std::string, int> forced;
      for (const auto& o : f.outcomes) forced[o.tag] = o.record.outcome;
      const auto r = execute_branch(reversed, input, forced);
      CHECK(max_deviation(data_state(forward, f), data_state(reversed, r)) <= 1e-12);
      CHECK(std::abs(f.probability - r.probability) <= 1e-12);
    }
  }
}

TEST_CASE("no condition is read before its send", "[executor][property]") {
  const auto prog = compile_scenario(scenarios::fig2_parametric(2));
  std::mt19937_64 rng(4);
  for (const auto& b : enumerate_branches(prog, random_state(6, rng))) {
    std::set<std::string> sent;
    for (const auto& e : b.trace) {
      const auto& in = prog.instructions[e.index];
      if (auto* s = std::get_if<instr::Send>(&in)) sent.insert(s->tag);
      if (auto* c = std::get_if<instr::CondX>(&in)) CHECK(sent.count(c->condition));
      if (auto* c = std::get_if<instr::CondMCZ>(&in)) CHECK(sent.count(c->condition));
    }
    CHECK(b.channel.messages().size() == 4);
  }
}

TEST_CASE("trace export is byte-stable and matches the golden file", "[executor]") {
  const auto prog = compile_scenario(scenarios::bipartite_case1());
  const auto run = execute_branch(prog, general_input(), std::string("01"));
  const auto text = format_trace(run);
  CHECK(text == format_trace(execute_branch(prog, general_input(), std::string("01"))));
  CHECK(text == read_file(TELEGATE_GOLDEN_DIR "/bipartite_case1.branch01.trace.txt"));
}

TEST_CASE("register cap applies to compiled programs", "[executor]") {
  const auto prog = compile_scenario(scenarios::tripartite());
  ::setenv("TELEGATE_MAX_QUBITS", "5", 1);
  try {
    enumerate_branches(prog, general_input());
    FAIL("expected capacity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Capacity);
  }
  ::unsetenv("TELEGATE_MAX_QUBITS");
}
