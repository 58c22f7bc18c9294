// telegate: verify distributed controlled-U protocols, print resource tables
// and export execution traces.
//
// Exit codes: 0 success, 1 verification failure or impossible branch,
// 2 malformed scenario or usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "telegate/telegate.hpp"

namespace {

using namespace telegate;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

Scenario resolve_scenario(const std::string& arg) {
  if (std::filesystem::is_regular_file(arg)) return load_scenario_file(arg);
  if (auto s = scenarios::bundled(arg)) return *s;
  throw Error(ErrorKind::Scenario, "no scenario file or bundled scenario named '" + arg + "'");
}

std::vector<StateVector> verification_inputs(const Scenario& s, std::optional<std::size_t> count) {
  std::vector<StateVector> inputs;
  if (s.input) inputs.push_back(from_amplitudes(*s.input));
  const std::size_t n = count.value_or(s.input ? 0 : s.random_inputs);
  std::mt19937_64 rng(s.seed);
  for (std::size_t i = 0; i < n; ++i) inputs.push_back(random_state(s.ownership.size(), rng));
  return inputs;
}

StateVector trace_input(const Scenario& s) {
  if (s.input) return from_amplitudes(*s.input);
  std::mt19937_64 rng(s.seed);
  return random_state(s.ownership.size(), rng);
}

struct VerifyArgs {
  std::string scenario;
  double tol = 1e-12;
  std::optional<std::size_t> inputs;
  bool json = false;
};

int cmd_verify(const VerifyArgs& a) {
  const Scenario s = resolve_scenario(a.scenario);
  const auto inputs = verification_inputs(s, a.inputs);
  const auto report = s.mode == RunMode::Exhaustive
                          ? verify_gate(s.spec, s.ownership, inputs, a.tol)
                          : verify_sampled(s.spec, s.ownership, inputs, s.shots, s.seed, a.tol);
  if (a.json) {
    auto j = to_json(report);
    j["scenario"] = s.name;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "scenario:        " << s.name << "\n" << render_text(report);
  }
  return report.pass ? kExitOk : kExitFailed;
}

struct ReportArgs {
  int table = 1;
  std::size_t n_max = 5;
  bool json = false;
};

int cmd_report(const ReportArgs& a) {
  if (a.table != 1 && a.table != 2)
    throw Error(ErrorKind::InvalidArgument, "invalid table " + std::to_string(a.table) + " (expected 1 or 2)");
  if (a.table == 1) {
    if (a.json)
      std::cout << nlohmann::json{{"table", 1}, {"rows", to_json(table1_rows())}}.dump(2) << "\n";
    else
      std::cout << render_table1();
    return kExitOk;
  }
  if (a.n_max < 1) throw Error(ErrorKind::InvalidArgument, "--n-max must be at least 1");
  std::vector<std::size_t> ns;
  for (std::size_t n = 1; n <= a.n_max; ++n) ns.push_back(n);
  if (a.json)
    std::cout << nlohmann::json{{"table", 2}, {"rows", to_json(table2_rows(ns))}}.dump(2) << "\n";
  else
    std::cout << render_table2(ns);
  return kExitOk;
}

struct TraceArgs {
  std::string scenario;
  std::string branch;
  std::string out;
  bool json = false;
};

int cmd_trace(const TraceArgs& a) {
  const Scenario s = resolve_scenario(a.scenario);
  const Program prog = compile(s.spec, s.ownership);
  if (a.branch.size() != count_measurements(prog))
    throw Error(ErrorKind::InvalidArgument, "branch '" + a.branch + "' has " +
                                                std::to_string(a.branch.size()) +
                                                " bits; the program has " +
                                                std::to_string(count_measurements(prog)) +
                                                " measurements");
  const auto run = execute_branch(prog, trace_input(s), a.branch);
  const std::string text = a.json ? to_json(run).dump(2) + "\n" : format_trace(run);
  if (a.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + a.out + "'");
    f << text;
  }
  return kExitOk;
}

int cmd_program(const std::string& scenario, bool json) {
  const Scenario s = resolve_scenario(scenario);
  const Program prog = compile(s.spec, s.ownership);
  if (!json) {
    std::cout << to_text(prog);
    return kExitOk;
  }
  nlohmann::json j = {{"scenario", s.name}, {"instructions", nlohmann::json::array()}};
  for (const auto& in : prog.instructions) j["instructions"].push_back(to_text(in, prog.layout));
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed controlled-U gate protocol: verification, resources, traces"};
  app.require_subcommand(1);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Check every measurement branch against the ideal gate");
  v->add_option("scenario", verify.scenario, "Scenario JSON file or bundled scenario name")->required();
  v->add_option("--tol", verify.tol, "Amplitude tolerance")->check(CLI::PositiveNumber);
  v->add_option("--inputs", verify.inputs, "Number of seeded random input states");
  v->add_flag("--json", verify.json, "Emit JSON");

  ReportArgs report;
  auto* r = app.add_subcommand("report", "Resource comparison tables");
  r->add_option("--table", report.table, "Table id (1 or 2)");
  r->add_option("--n-max", report.n_max, "Largest n for table 2");
  r->add_flag("--json", report.json, "Emit JSON");

  TraceArgs trace;
  auto* t = app.add_subcommand("trace", "Executed-instruction trace for one forced branch");
  t->add_option("scenario", trace.scenario, "Scenario JSON file or bundled scenario name")->required();
  t->add_option("--branch", trace.branch, "Outcome bits in measurement order")->required();
  t->add_option("--out", trace.out, "Output file (default stdout)");
  t->add_flag("--json", trace.json, "Emit JSON");

  std::string program_scenario;
  bool program_json = false;
  auto* p = app.add_subcommand("program", "Print the compiled instruction stream");
  p->add_option("scenario", program_scenario, "Scenario JSON file or bundled scenario name")->required();
  p->add_flag("--json", program_json, "Emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*v) return cmd_verify(verify);
    if (*r) return cmd_report(report);
    if (*t) return cmd_trace(trace);
    if (*p) return cmd_program(program_scenario, program_json);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::ImpossibleBranch:
        return kExitFailed;
      default:
        return kExitUsage;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
