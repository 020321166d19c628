#pragma once

// Dense complex linear algebra for the small Hilbert spaces used by the
// simulator (4-dim logical qubit, 16-dim four-qubit / two-logical-qubit).
// Fixed-size Eigen types keep every step allocation-free.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace hqc {

using Complex = std::complex<double>;

template <int N>
using Operator = Eigen::Matrix<Complex, N, N>;
template <int N>
using StateVector = Eigen::Matrix<Complex, N, 1>;

using Operator4 = Operator<4>;
using Operator16 = Operator<16>;
using State4 = StateVector<4>;
using State16 = StateVector<16>;

using DynOperator = Eigen::MatrixXcd;
using DynState = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Largest allowed dimension of a Kronecker product.
inline constexpr Eigen::Index kMaxDim = 256;

/// Hermitian inputs must satisfy max|H - H^dagger| below this.
inline constexpr double kHermitianTol = 1e-10;

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <class Derived>
auto dagger(const Eigen::MatrixBase<Derived>& a) {
  return a.adjoint().eval();
}

/// Entrywise max of |A - A^dagger|.
template <class Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("hermiticity_defect: matrix is not square");
  return max_abs(a - a.adjoint());
}

/// Entrywise max of |U^dagger U - I|.
template <class Derived>
double unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  if (u.rows() != u.cols()) throw std::invalid_argument("unitarity_defect: matrix is not square");
  using M = Eigen::Matrix<Complex, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  M prod = u.adjoint() * u;
  prod -= M::Identity(u.rows(), u.cols());
  return max_abs(prod);
}

/// <u|v>, conjugate-linear in the first argument.
template <class A, class B>
Complex inner(const Eigen::MatrixBase<A>& u, const Eigen::MatrixBase<B>& v) {
  if (u.size() != v.size()) throw std::invalid_argument("inner: dimension mismatch");
  return u.dot(v);
}

namespace detail {

template <class Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& h, const char* who) {
  if (h.rows() != h.cols()) {
    throw std::invalid_argument(std::string(who) + ": matrix is not square");
  }
  const double defect = hermiticity_defect(h);
  if (!(defect <= kHermitianTol)) {
    std::ostringstream msg;
    msg << who << ": input not Hermitian (max|H - H^dagger| = " << defect << ")";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace detail

/// Ascending eigenvalues of a Hermitian matrix.
template <class Derived>
std::vector<double> spectral_gap(const Eigen::MatrixBase<Derived>& h) {
  detail::require_hermitian(h, "spectral_gap");
  using M = Eigen::Matrix<Complex, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  Eigen::SelfAdjointEigenSolver<M> solver{M(h), Eigen::EigenvaluesOnly};
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// exp(-i * h * tau) for Hermitian h, via eigendecomposition so the result
/// is unitary up to rounding regardless of tau.
template <class Derived>
auto matexp_hermitian(const Eigen::MatrixBase<Derived>& h, double tau) {
  detail::require_hermitian(h, "matexp_hermitian");
  using M = Eigen::Matrix<Complex, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  Eigen::SelfAdjointEigenSolver<M> solver{M(h)};
  const auto& v = solver.eigenvectors();
  const auto& ev = solver.eigenvalues();
  M scaled = v;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    scaled.col(k) *= std::polar(1.0, -ev(k) * tau);
  }
  M out = scaled * v.adjoint();
  return out;
}

/// Row-major Kronecker product: (a (x) b)[i*nb + k, j*nb + l] = a[i,j] * b[k,l].
template <int NA, int NB>
Operator<NA * NB> tensor_product(const Operator<NA>& a, const Operator<NB>& b) {
  static_assert(NA * NB <= kMaxDim, "tensor_product: dimension exceeds 256");
  Operator<NA * NB> out;
  for (int i = 0; i < NA; ++i)
    for (int j = 0; j < NA; ++j) out.template block<NB, NB>(i * NB, j * NB) = a(i, j) * b;
  return out;
}

inline DynOperator tensor_product(const DynOperator& a, const DynOperator& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols()) {
    throw std::invalid_argument("tensor_product: operands must be square");
  }
  const Eigen::Index na = a.rows();
  const Eigen::Index nb = b.rows();
  if (na * nb > kMaxDim) {
    std::ostringstream msg;
    msg << "tensor_product: dimension " << na * nb << " exceeds " << kMaxDim;
    throw std::invalid_argument(msg.str());
  }
  DynOperator out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < na; ++j) out.block(i * nb, j * nb, nb, nb) = a(i, j) * b;
  return out;
}

namespace pauli {

inline Operator<2> identity() { return Operator<2>::Identity(); }
inline Operator<2> x() {
  Operator<2> m;
  m << 0, 1, 1, 0;
  return m;
}
inline Operator<2> y() {
  Operator<2> m;
  m << 0, -kI, kI, 0;
  return m;
}
inline Operator<2> z() {
  Operator<2> m;
  m << 1, 0, 0, -1;
  return m;
}

/// Single-site operator `op` on qubit `site` (0 = most significant) of an
/// n-qubit register.
template <int NQubits>
Operator<(1 << NQubits)> on_site(const Operator<2>& op, int site) {
  constexpr int dim = 1 << NQubits;
  if (site < 0 || site >= NQubits) throw std::out_of_range("pauli::on_site: bad site index");
  DynOperator acc = DynOperator::Identity(1, 1);
  for (int q = 0; q < NQubits; ++q) {
    acc = tensor_product(acc, q == site ? DynOperator(op) : DynOperator(identity()));
  }
  return Operator<dim>(acc);
}

}  // namespace pauli

}  // namespace hqc
