#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>

namespace telegate {

using Amplitude = std::complex<double>;

/// 2x2 complex matrix acting on one qubit, stored row-major:
/// m[0][0] m[0][1] / m[1][0] m[1][1].
struct Unitary2 {
  std::array<std::array<Amplitude, 2>, 2> m{};

  constexpr const std::array<Amplitude, 2>& operator[](std::size_t row) const { return m[row]; }
  constexpr std::array<Amplitude, 2>& operator[](std::size_t row) { return m[row]; }

  friend bool operator==(const Unitary2&, const Unitary2&) = default;
};

namespace gates {

inline Unitary2 identity() { return {{{{1.0, 0.0}, {0.0, 1.0}}}}; }
inline Unitary2 pauli_x() { return {{{{0.0, 1.0}, {1.0, 0.0}}}}; }
inline Unitary2 pauli_z() { return {{{{1.0, 0.0}, {0.0, -1.0}}}}; }
inline Unitary2 hadamard() {
  const double r = 1.0 / std::sqrt(2.0);
  return {{{{r, r}, {r, -r}}}};
}

}  // namespace gates

inline Unitary2 dagger(const Unitary2& u) {
  Unitary2 d;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) d[r][c] = std::conj(u[c][r]);
  return d;
}

inline Unitary2 multiply(const Unitary2& a, const Unitary2& b) {
  Unitary2 p;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) p[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
  return p;
}

inline double max_entry_deviation(const Unitary2& a, const Unitary2& b) {
  double dev = 0.0;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) dev = std::max(dev, std::abs(a[r][c] - b[r][c]));
  return dev;
}

inline bool is_finite(const Unitary2& u) {
  for (const auto& row : u.m)
    for (const auto& z : row)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

/// U U^dagger = I entrywise within `tol`.
inline bool is_unitary(const Unitary2& u, double tol = 1e-10) {
  return is_finite(u) && max_entry_deviation(multiply(u, dagger(u)), gates::identity()) <= tol;
}

inline bool approx_equal(const Unitary2& a, const Unitary2& b, double tol = 1e-12) {
  return max_entry_deviation(a, b) <= tol;
}

/// Short display name for the standard gates, "U" otherwise.
inline std::string gate_name(const Unitary2& u) {
  if (approx_equal(u, gates::pauli_x())) return "X";
  if (approx_equal(u, gates::pauli_z())) return "Z";
  if (approx_equal(u, gates::hadamard())) return "H";
  if (approx_equal(u, gates::identity())) return "I";
  return "U";
}

}  // namespace telegate
