#pragma once

// Test-only reference arithmetic: dense matrices built from Kronecker
// products. Deliberately shares no code path with the simulator's
// bit-mask loops.

#include <cmath>
#include <complex>
#include <cstddef>
#include <set>
#include <vector>

#include "telegate/unitary.hpp"

namespace oracle {

using cplx = std::complex<double>;

struct Matrix {
  std::size_t dim = 0;
  std::vector<cplx> a;  // row-major

  explicit Matrix(std::size_t d) : dim(d), a(d * d) {}
  cplx& operator()(std::size_t r, std::size_t c) { return a[r * dim + c]; }
  cplx operator()(std::size_t r, std::size_t c) const { return a[r * dim + c]; }

  static Matrix identity(std::size_t d) {
    Matrix m(d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
  }
};

inline Matrix from2(const telegate::Unitary2& u) {
  Matrix m(2);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) m(r, c) = u[r][c];
  return m;
}

inline Matrix projector(int bit) {
  Matrix m(2);
  m(bit, bit) = 1.0;
  return m;
}

inline Matrix kron(const Matrix& x, const Matrix& y) {
  Matrix m(x.dim * y.dim);
  for (std::size_t i = 0; i < x.dim; ++i)
    for (std::size_t j = 0; j < x.dim; ++j)
      for (std::size_t k = 0; k < y.dim; ++k)
        for (std::size_t l = 0; l < y.dim; ++l) m(i * y.dim + k, j * y.dim + l) = x(i, j) * y(k, l);
  return m;
}

inline Matrix mul(const Matrix& x, const Matrix& y) {
  Matrix m(x.dim);
  for (std::size_t i = 0; i < x.dim; ++i)
    for (std::size_t k = 0; k < x.dim; ++k) {
      const cplx v = x(i, k);
      if (v == cplx{}) continue;
      for (std::size_t j = 0; j < x.dim; ++j) m(i, j) += v * y(k, j);
    }
  return m;
}

inline Matrix add(const Matrix& x, const Matrix& y, double sign = 1.0) {
  Matrix m(x.dim);
  for (std::size_t i = 0; i < m.a.size(); ++i) m.a[i] = x.a[i] + sign * y.a[i];
  return m;
}

/// Tensor product over n qubits (qubit 0 leftmost) with `factor(q)` on each.
template <class F>
Matrix tensor(std::size_t n, F factor) {
  Matrix m = factor(0);
  for (std::size_t q = 1; q < n; ++q) m = kron(m, factor(q));
  return m;
}

/// I - (P1 on controls (x) I) + (P1 on controls (x) U on target).
inline Matrix controlled(std::size_t n, const std::set<std::size_t>& controls, std::size_t target,
                         const telegate::Unitary2& u) {
  const Matrix id2 = Matrix::identity(2);
  const Matrix p1 = projector(1);
  const Matrix uu = from2(u);
  const Matrix proj = tensor(n, [&](std::size_t q) { return controls.count(q) ? p1 : id2; });
  const Matrix act = tensor(n, [&](std::size_t q) {
    if (controls.count(q)) return p1;
    return q == target ? uu : id2;
  });
  return add(add(Matrix::identity(std::size_t{1} << n), proj, -1.0), act);
}

inline Matrix single(std::size_t n, std::size_t target, const Matrix& g) {
  const Matrix id2 = Matrix::identity(2);
  return tensor(n, [&](std::size_t q) { return q == target ? g : id2; });
}

inline std::vector<cplx> mat_vec(const Matrix& m, const std::vector<cplx>& v) {
  std::vector<cplx> out(v.size());
  for (std::size_t i = 0; i < m.dim; ++i)
    for (std::size_t j = 0; j < m.dim; ++j) out[i] += m(i, j) * v[j];
  return out;
}

inline double norm2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return s;
}

/// Projects `v` onto outcome `bit` of `qubit` in the given basis, in place
/// (unnormalized), and returns the branch weight relative to the input norm.
/// X-basis: H, project, and the qubit stays in the computational state.
inline double project(std::size_t n, std::vector<cplx>& v, std::size_t qubit, bool x_basis, int bit) {
  const double before = norm2(v);
  if (x_basis) v = mat_vec(single(n, qubit, from2(telegate::gates::hadamard())), v);
  v = mat_vec(single(n, qubit, projector(bit)), v);
  return norm2(v) / before;
}

inline void normalize(std::vector<cplx>& v) {
  const double s = 1.0 / std::sqrt(norm2(v));
  for (auto& x : v) x *= s;
}

}  // namespace oracle
