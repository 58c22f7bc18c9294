#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "telegate/executor.hpp"
#include "telegate/resources.hpp"

namespace telegate {

/// The monolithic controlled-U over the data register, ignoring node
/// boundaries.
inline StateVector apply_ideal(const DistributedGateSpec& spec, const Ownership& own,
                               const StateVector& input) {
  if (input.num_qubits() != own.size())
    throw Error(ErrorKind::SizeMismatch, "input has " + std::to_string(input.num_qubits()) +
                                             " qubits, register has " + std::to_string(own.size()));
  std::vector<QubitIndex> controls;
  for (const auto& c : spec.controls) controls.push_back(own.index_of(c));
  return apply_controlled_u(input, controls, own.index_of(spec.target), spec.u);
}

/// Data-qubit state left by a branch, with every measured auxiliary qubit
/// fixed to the value its measurement left it in.
inline StateVector data_state(const Program& prog, const BranchResult& branch) {
  std::vector<QubitIndex> keep(prog.data_qubits);
  std::iota(keep.begin(), keep.end(), QubitIndex{0});
  std::map<QubitIndex, int> fixed;
  const auto measured = branch.measured_values();
  for (QubitIndex q = prog.data_qubits; q < prog.num_qubits(); ++q) {
    auto it = measured.find(q);
    if (it == measured.end())
      throw Error(ErrorKind::Factorization,
                  "auxiliary qubit " + prog.layout.label(q) + " was never measured");
    fixed[q] = it->second;
  }
  return extract_subregister(branch.final_state, keep, fixed);
}

inline std::string describe(const DistributedGateSpec& spec, const Ownership& own) {
  std::string s = "controls=[";
  for (std::size_t i = 0; i < spec.controls.size(); ++i) {
    if (i) s += ' ';
    s += spec.controls[i] + "@" + own.node_of(spec.controls[i]).str();
  }
  s += "] target=" + spec.target + "@" + own.node_of(spec.target).str();
  s += " u=" + detail::unitary_text(spec.u);
  return s;
}

struct BranchCheck {
  std::size_t input = 0;
  std::string bits;
  double probability = 0.0;
  double deviation = 0.0;
  double fidelity = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::string spec_summary;
  std::size_t inputs = 0;
  double tolerance = 1e-12;
  std::vector<BranchCheck> branches;
  double max_deviation = 0.0;
  double min_fidelity = 1.0;
  /// max over inputs of |sum of branch probabilities - 1|
  double probability_error = 0.0;
  ResourceReport resources;
  bool pass = true;

  std::size_t failures() const {
    return static_cast<std::size_t>(
        std::count_if(branches.begin(), branches.end(), [](const BranchCheck& b) { return !b.pass; }));
  }
};

inline constexpr double kProbabilitySumTolerance = 1e-10;

namespace detail {

inline void record_branch(VerificationReport& report, std::size_t input, const BranchResult& b,
                          const StateVector& got, const StateVector& want) {
  BranchCheck c;
  c.input = input;
  c.bits = b.bits();
  c.probability = b.probability;
  c.deviation = max_deviation(got, want);
  c.fidelity = fidelity(got, want);
  c.pass = c.deviation <= report.tolerance;
  report.max_deviation = std::max(report.max_deviation, c.deviation);
  report.min_fidelity = std::min(report.min_fidelity, c.fidelity);
  report.pass = report.pass && c.pass;
  report.branches.push_back(std::move(c));
}

}  // namespace detail

/// Compiles the spec, enumerates every branch for each input and compares
/// the data-qubit state amplitude-wise with apply_ideal.
inline VerificationReport verify_gate(const DistributedGateSpec& spec, const Ownership& own,
                                      const std::vector<StateVector>& inputs, double tol = 1e-12) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  const Program prog = compile(spec, own);
  VerificationReport report;
  report.spec_summary = describe(spec, own);
  report.inputs = inputs.size();
  report.tolerance = tol;
  report.resources = account(prog);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const StateVector want = apply_ideal(spec, own, inputs[i]);
    double psum = 0.0;
    for_each_branch(prog, inputs[i], [&](BranchResult&& b) {
      psum += b.probability;
      detail::record_branch(report, i, b, data_state(prog, b), want);
    });
    report.probability_error = std::max(report.probability_error, std::abs(psum - 1.0));
  }
  if (report.probability_error > kProbabilitySumTolerance) report.pass = false;
  return report;
}

/// Sampled counterpart: `shots` seeded runs per input instead of exhaustive
/// enumeration.
inline VerificationReport verify_sampled(const DistributedGateSpec& spec, const Ownership& own,
                                         const std::vector<StateVector>& inputs, std::size_t shots,
                                         std::uint64_t seed, double tol = 1e-12) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  const Program prog = compile(spec, own);
  VerificationReport report;
  report.spec_summary = describe(spec, own);
  report.inputs = inputs.size();
  report.tolerance = tol;
  report.resources = account(prog);
  std::mt19937_64 seeds(seed);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const StateVector want = apply_ideal(spec, own, inputs[i]);
    for (std::size_t s = 0; s < shots; ++s) {
      const auto b = run_sampled(prog, inputs[i], seeds());
      detail::record_branch(report, i, b, data_state(prog, b), want);
    }
  }
  return report;
}

struct TruthRow {
  std::size_t input;
  std::size_t output;
};

/// Basis-state behaviour of a Toffoli-family spec, computed by running the
/// compiled protocol on every computational basis input of the data
/// register. Each input must map to one basis state on every branch.
inline std::vector<TruthRow> truth_table(const DistributedGateSpec& spec, const Ownership& own) {
  if (!approx_equal(spec.u, gates::pauli_x()) && !approx_equal(spec.u, gates::identity()))
    throw Error(ErrorKind::InvalidArgument, "truth table needs a permutation gate (X or I)");
  const Program prog = compile(spec, own);
  const std::size_t n = own.size();
  std::vector<TruthRow> rows;
  for (std::size_t in = 0; in < (std::size_t{1} << n); ++in) {
    std::optional<std::size_t> out;
    for_each_branch(prog, basis_state(n, in), [&](BranchResult&& b) {
      const StateVector s = data_state(prog, b);
      std::optional<std::size_t> hit;
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (std::abs(s[j] - Amplitude(1.0)) <= 1e-12) {
          hit = j;
        } else if (std::abs(s[j]) > 1e-12) {
          hit.reset();
          break;
        }
      }
      if (!hit || (out && *out != *hit))
        throw Error(ErrorKind::Validation,
                    "basis input " + std::to_string(in) + " does not map to a single basis state");
      out = hit;
    });
    rows.push_back({in, *out});
  }
  return rows;
}

}  // namespace telegate
