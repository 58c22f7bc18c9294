#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "telegate/error.hpp"
#include "telegate/unitary.hpp"

namespace telegate {

using QubitIndex = std::size_t;

inline constexpr std::size_t kDefaultMaxQubits = 26;

/// Branches whose probability falls at or below this are impossible.
inline constexpr double kImpossibleBranch = 1e-14;

/// Register cap: TELEGATE_MAX_QUBITS when set to a positive integer, else 26.
inline std::size_t max_qubits() {
  if (const char* env = std::getenv("TELEGATE_MAX_QUBITS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 63) return static_cast<std::size_t>(v);
  }
  return kDefaultMaxQubits;
}

enum class Basis { Z, X };

inline const char* to_string(Basis b) { return b == Basis::Z ? "Z" : "X"; }

/// Z: 0 <-> |0>, 1 <-> |1>.  X: 0 <-> |+>, 1 <-> |->.
struct MeasurementRecord {
  QubitIndex qubit = 0;
  Basis basis = Basis::Z;
  int outcome = 0;
  double probability = 0.0;
};

/// Dense pure state over a register of num_qubits qubits. Register index 0 is
/// the most significant bit of the amplitude index, so |q0 q1 ... q_{n-1}>
/// reads left to right in descending significance.
class StateVector {
 public:
  StateVector() = default;

  /// Takes the amplitudes as given; the length must be a power of two >= 2.
  /// No normalization is performed (see from_amplitudes for the checked path).
  explicit StateVector(std::vector<Amplitude> amplitudes) : amps_(std::move(amplitudes)) {
    const std::size_t n = amps_.size();
    if (n < 2 || (n & (n - 1)) != 0)
      throw Error(ErrorKind::InvalidArgument,
                  "amplitude count " + std::to_string(n) + " is not a power of two >= 2");
    num_qubits_ = static_cast<std::size_t>(std::countr_zero(n));
  }

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  std::size_t size() const noexcept { return amps_.size(); }

  std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
  std::span<Amplitude> amplitudes() noexcept { return amps_; }

  const Amplitude& operator[](std::size_t index) const { return amps_[index]; }
  Amplitude& operator[](std::size_t index) { return amps_[index]; }

  /// Bit of amplitude index that encodes `qubit`.
  std::size_t mask(QubitIndex qubit) const {
    check_qubit(qubit);
    return std::size_t{1} << (num_qubits_ - 1 - qubit);
  }

  void check_qubit(QubitIndex qubit) const {
    if (qubit >= num_qubits_)
      throw Error(ErrorKind::IndexOutOfRange, "qubit " + std::to_string(qubit) +
                                                  " out of range for " +
                                                  std::to_string(num_qubits_) + "-qubit register");
  }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  bool all_finite() const {
    return std::all_of(amps_.begin(), amps_.end(), [](const Amplitude& a) {
      return std::isfinite(a.real()) && std::isfinite(a.imag());
    });
  }

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  std::size_t num_qubits_ = 0;
  std::vector<Amplitude> amps_;
};

inline StateVector init_zero(std::size_t num_qubits, std::size_t max = max_qubits()) {
  if (num_qubits < 1)
    throw Error(ErrorKind::InvalidArgument, "register needs at least one qubit");
  if (num_qubits > max)
    throw Error(ErrorKind::Capacity, std::to_string(num_qubits) +
                                         " qubits exceeds the register cap of " +
                                         std::to_string(max));
  std::vector<Amplitude> amps(std::size_t{1} << num_qubits);
  amps[0] = 1.0;
  return StateVector(std::move(amps));
}

/// Checked construction: finite entries, norm within 1e-9 of one, then
/// renormalized exactly.
inline StateVector from_amplitudes(std::vector<Amplitude> amps, std::size_t max = max_qubits()) {
  const std::size_t n = amps.size();
  if (n < 2 || (n & (n - 1)) != 0)
    throw Error(ErrorKind::InvalidArgument,
                "amplitude count " + std::to_string(n) + " is not a power of two >= 2");
  if (static_cast<std::size_t>(std::countr_zero(n)) > max)
    throw Error(ErrorKind::Capacity, "amplitude vector exceeds the register cap");
  double norm2 = 0.0;
  for (const auto& a : amps) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw Error(ErrorKind::InvalidArgument, "non-finite amplitude");
    norm2 += std::norm(a);
  }
  if (norm2 == 0.0) throw Error(ErrorKind::InvalidArgument, "zero vector is not a state");
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-9)
    throw Error(ErrorKind::InvalidArgument,
                "amplitudes are not normalized (norm^2 = " + std::to_string(norm2) + ")");
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& a : amps) a *= scale;
  return StateVector(std::move(amps));
}

/// Applies `u` to `target` on the subspace where every control is |1>.
/// An empty control set gives a plain single-qubit gate.
[[nodiscard]] inline StateVector apply_controlled_u(StateVector state, std::span<const QubitIndex> controls,
                                      QubitIndex target, const Unitary2& u) {
  const std::size_t tmask = state.mask(target);
  std::size_t cmask = 0;
  for (QubitIndex c : controls) {
    const std::size_t m = state.mask(c);
    if (c == target)
      throw Error(ErrorKind::InvalidArgument, "qubit " + std::to_string(c) +
                                                  " is both control and target");
    if (cmask & m)
      throw Error(ErrorKind::InvalidArgument, "duplicate control qubit " + std::to_string(c));
    cmask |= m;
  }
  auto amps = state.amplitudes();
  // Visit each index with the target bit clear by inserting a zero bit.
  const std::size_t low = tmask - 1;
  const std::size_t pairs = amps.size() / 2;
  for (std::size_t j = 0; j < pairs; ++j) {
    const std::size_t i = ((j & ~low) << 1) | (j & low);
    if ((i & cmask) != cmask) continue;
    const Amplitude a0 = amps[i];
    const Amplitude a1 = amps[i | tmask];
    amps[i] = u[0][0] * a0 + u[0][1] * a1;
    amps[i | tmask] = u[1][0] * a0 + u[1][1] * a1;
  }
  return state;
}

[[nodiscard]] inline StateVector apply_controlled_u(StateVector state, std::initializer_list<QubitIndex> controls,
                                      QubitIndex target, const Unitary2& u) {
  return apply_controlled_u(std::move(state), std::span<const QubitIndex>(controls.begin(), controls.size()),
                            target, u);
}

[[nodiscard]] inline StateVector apply_single(StateVector state, QubitIndex target, const Unitary2& u) {
  return apply_controlled_u(std::move(state), std::span<const QubitIndex>{}, target, u);
}

/// H on q1 then CNOT(q1 -> q2); both qubits must start in |0>.
[[nodiscard]] inline StateVector prepare_bell(StateVector state, QubitIndex q1, QubitIndex q2) {
  if (q1 == q2) throw Error(ErrorKind::InvalidArgument, "Bell pair needs two distinct qubits");
  const std::size_t both = state.mask(q1) | state.mask(q2);
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & both) && std::abs(amps[i]) > 1e-12)
      throw Error(ErrorKind::Precondition, "Bell qubits " + std::to_string(q1) + "," +
                                               std::to_string(q2) + " are not both in |0>");
  }
  state = apply_single(std::move(state), q1, gates::hadamard());
  const QubitIndex ctrl[] = {q1};
  return apply_controlled_u(std::move(state), ctrl, q2, gates::pauli_x());
}

namespace detail {

/// Unnormalized weights of outcomes 0 and 1.
inline std::array<double, 2> outcome_weights(const StateVector& state, QubitIndex qubit, Basis basis) {
  const std::size_t m = state.mask(qubit);
  const std::size_t low = m - 1;
  const auto amps = state.amplitudes();
  double w0 = 0.0, w1 = 0.0;
  if (basis == Basis::Z) {
    for (std::size_t j = 0; j < amps.size() / 2; ++j) {
      const std::size_t i = ((j & ~low) << 1) | (j & low);
      w0 += std::norm(amps[i]);
      w1 += std::norm(amps[i | m]);
    }
  } else {
    const double r = std::sqrt(0.5);
    for (std::size_t j = 0; j < amps.size() / 2; ++j) {
      const std::size_t i = ((j & ~low) << 1) | (j & low);
      w0 += std::norm(r * (amps[i] + amps[i | m]));
      w1 += std::norm(r * (amps[i] - amps[i | m]));
    }
  }
  return {w0, w1};
}

}  // namespace detail

/// Probabilities of outcomes 0 and 1; they sum to one exactly up to rounding.
inline std::array<double, 2> outcome_probabilities(const StateVector& state, QubitIndex qubit,
                                                   Basis basis) {
  const auto raw = detail::outcome_weights(state, qubit, basis);
  const double total = raw[0] + raw[1];
  return {raw[0] / total, raw[1] / total};
}

struct MeasureResult {
  MeasurementRecord record;
  StateVector state;
};

namespace detail {

/// Collapses `state` in place onto `outcome` and returns its probability.
/// Leaves the state untouched when the outcome is impossible. `weights` may
/// carry outcome_weights already computed for this state.
inline double collapse(StateVector& state, QubitIndex qubit, Basis basis, int outcome,
                       const std::array<double, 2>* weights = nullptr) {
  if (outcome != 0 && outcome != 1) throw Error(ErrorKind::InvalidArgument, "measurement outcome must be 0 or 1");
  const auto raw = weights ? *weights : outcome_weights(state, qubit, basis);
  const double prob = raw[outcome] / (raw[0] + raw[1]);
  if (!(prob > kImpossibleBranch))
    throw Error(ErrorKind::ImpossibleBranch,
                std::string(to_string(basis)) + "-measurement of qubit " + std::to_string(qubit) +
                    " cannot yield " + std::to_string(outcome) + " (probability " + std::to_string(prob) + ")");
  const double scale = 1.0 / std::sqrt(raw[outcome]);
  const double r = std::sqrt(0.5);
  const std::size_t m = state.mask(qubit);
  const std::size_t low = m - 1;
  // Slot that keeps the collapsed amplitude and the one that is cleared.
  const std::size_t keep = outcome ? m : 0;
  const std::size_t drop = outcome ? 0 : m;
  const double sign = outcome ? -1.0 : 1.0;
  const bool x_basis = basis == Basis::X;
  auto amps = state.amplitudes();
  for (std::size_t j = 0; j < amps.size() / 2; ++j) {
    const std::size_t i = ((j & ~low) << 1) | (j & low);
    const Amplitude a0 = amps[i], a1 = amps[i | m];
    const Amplitude kept = x_basis ? r * (a0 + sign * a1) : amps[i | keep];
    amps[i | keep] = kept * scale;
    amps[i | drop] = Amplitude{};
  }
  return prob;
}

}  // namespace detail

/// Projective measurement with a forced outcome. X-basis measurement rotates
/// by H before the Z projection and leaves the qubit in the computational
/// state matching the outcome.
[[nodiscard]] inline MeasureResult measure(StateVector state, QubitIndex qubit, Basis basis, int forced_outcome) {
  const double prob = detail::collapse(state, qubit, basis, forced_outcome);
  return {MeasurementRecord{qubit, basis, forced_outcome, prob}, std::move(state)};
}

/// Uniform double in [0, 1) from the top 53 bits; independent of the
/// standard library's distribution implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

[[nodiscard]] inline MeasureResult measure_sampled(StateVector state, QubitIndex qubit, Basis basis,
                                     std::mt19937_64& rng) {
  const auto probs = outcome_probabilities(state, qubit, basis);
  int outcome = uniform01(rng) < probs[0] ? 0 : 1;
  if (probs[outcome] <= kImpossibleBranch) outcome ^= 1;
  return measure(std::move(state), qubit, basis, outcome);
}

/// Pure state on the `keep` qubits (in the given order) when every qubit in
/// `fixed` is in the stated computational value.
inline StateVector extract_subregister(const StateVector& state, std::span<const QubitIndex> keep,
                                       const std::map<QubitIndex, int>& fixed,
                                       double tol = 1e-12) {
  const std::size_t n = state.num_qubits();
  std::vector<int> seen(n, 0);
  for (QubitIndex q : keep) {
    state.check_qubit(q);
    if (seen[q]++) throw Error(ErrorKind::InvalidArgument, "qubit " + std::to_string(q) + " listed twice");
  }
  std::size_t fixed_mask = 0, fixed_value = 0;
  for (const auto& [q, bit] : fixed) {
    state.check_qubit(q);
    if (seen[q]++) throw Error(ErrorKind::InvalidArgument, "qubit " + std::to_string(q) + " listed twice");
    fixed_mask |= state.mask(q);
    if (bit) fixed_value |= state.mask(q);
  }
  if (keep.empty() || keep.size() + fixed.size() != n)
    throw Error(ErrorKind::InvalidArgument, "keep and fixed qubits must partition the register");

  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & fixed_mask) != fixed_value && std::norm(amps[i]) > tol * tol)
      throw Error(ErrorKind::Factorization,
                  "state has support outside the fixed assignment (basis index " +
                      std::to_string(i) + ")");
  }
  const std::size_t k = keep.size();
  std::vector<Amplitude> out(std::size_t{1} << k);
  for (std::size_t j = 0; j < out.size(); ++j) {
    std::size_t global = fixed_value;
    for (std::size_t b = 0; b < k; ++b)
      if (j & (std::size_t{1} << (k - 1 - b))) global |= state.mask(keep[b]);
    out[j] = amps[global];
  }
  return StateVector(std::move(out));
}

/// <a|b>
inline Amplitude inner_product(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits())
    throw Error(ErrorKind::SizeMismatch, "inner product of " + std::to_string(a.num_qubits()) +
                                             "- and " + std::to_string(b.num_qubits()) +
                                             "-qubit states");
  Amplitude s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// |<a|b>|, blind to global phase. Diagnostics only.
inline double fidelity(const StateVector& a, const StateVector& b) {
  return std::abs(inner_product(a, b));
}

/// Largest entrywise |a_i - b_i|.
inline double max_deviation(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits())
    throw Error(ErrorKind::SizeMismatch, "comparing states of different sizes");
  double dev = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dev = std::max(dev, std::abs(a[i] - b[i]));
  return dev;
}

/// Complex-Gaussian entries, normalized.
inline StateVector random_state(std::size_t num_qubits, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::vector<Amplitude> amps(std::size_t{1} << num_qubits);
  double norm2 = 0.0;
  for (auto& a : amps) {
    a = Amplitude(gauss(rng), gauss(rng));
    norm2 += std::norm(a);
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& a : amps) a *= scale;
  return StateVector(std::move(amps));
}

/// Random 2x2 unitary from Euler angles and a global phase.
inline Unitary2 random_unitary(std::mt19937_64& rng) {
  const double pi = std::acos(-1.0);
  const double theta = uniform01(rng) * pi;
  const double phi = uniform01(rng) * 2 * pi;
  const double lambda = uniform01(rng) * 2 * pi;
  const double gamma = uniform01(rng) * 2 * pi;
  const Amplitude g = std::polar(1.0, gamma);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Unitary2 u;
  u[0][0] = g * c;
  u[0][1] = -g * std::polar(s, lambda);
  u[1][0] = g * std::polar(s, phi);
  u[1][1] = g * std::polar(c, phi + lambda);
  return u;
}

inline StateVector basis_state(std::size_t num_qubits, std::size_t index) {
  std::vector<Amplitude> amps(std::size_t{1} << num_qubits);
  amps.at(index) = 1.0;
  return StateVector(std::move(amps));
}

}  // namespace telegate
