#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "entrospec/error.hpp"
#include "entrospec/types.hpp"

namespace entrospec {

/// Eigendecomposition A = V diag(values) V* of a Hermitian matrix.
/// Values are sorted descending and the columns of V follow the same order.
template <typename Scalar>
struct HermitianEigen {
  RealVector<Scalar> values;
  ComplexMatrix<Scalar> vectors;
  int sweeps = 0;

  ComplexMatrix<Scalar> reconstruct() const {
    return vectors * values.template cast<Complex<Scalar>>().asDiagonal() * vectors.adjoint();
  }
};

namespace detail {

template <typename Scalar>
Scalar off_diagonal_norm(const ComplexMatrix<Scalar>& a) {
  Scalar sum(0);
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

// One complex Jacobi rotation annihilating a(p, q). The rotation is
// J = diag(1, e^{-i phi}) * R(c, s), which first rotates a(p, q) onto the
// positive real axis and then applies the classical real Jacobi step.
template <typename Scalar>
void jacobi_rotate(ComplexMatrix<Scalar>& a, ComplexMatrix<Scalar>& v, Index p, Index q) {
  using C = Complex<Scalar>;
  const C apq = a(p, q);
  const Scalar mag = std::abs(apq);
  if (mag == Scalar(0)) return;

  const C phase = apq / mag;  // e^{i phi}
  const Scalar theta = (std::real(a(q, q)) - std::real(a(p, p))) / (Scalar(2) * mag);
  const Scalar t = (theta >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                   (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
  const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
  const Scalar s = t * c;

  const C jpp(c), jpq(s);
  const C jqp = -s * std::conj(phase);
  const C jqq = c * std::conj(phase);

  const Index n = a.rows();
  // A <- A J
  for (Index k = 0; k < n; ++k) {
    const C akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * jpp + akq * jqp;
    a(k, q) = akp * jpq + akq * jqq;
  }
  // A <- J* A
  for (Index k = 0; k < n; ++k) {
    const C apk = a(p, k), aqk = a(q, k);
    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
  }
  a(p, q) = C(0);
  a(q, p) = C(0);
  a(p, p) = C(std::real(a(p, p)));
  a(q, q) = C(std::real(a(q, q)));
  // V <- V J
  for (Index k = 0; k < n; ++k) {
    const C vkp = v(k, p), vkq = v(k, q);
    v(k, p) = vkp * jpp + vkq * jqp;
    v(k, q) = vkp * jpq + vkq * jqq;
  }
}

}  // namespace detail

/// Cyclic Jacobi eigensolver for complex Hermitian matrices.
///
/// Sweeps over all (p, q) pairs until the off-diagonal Frobenius norm drops
/// to eig_tol * max(1, ||A||_F). Only the Hermitian part of the input is used.
/// Throws Error(NoConvergence) when max_sweeps is exhausted.
template <typename Derived>
HermitianEigen<typename Eigen::NumTraits<typename Derived::Scalar>::Real> hermitian_eigen(
    const Eigen::MatrixBase<Derived>& input, const ToleranceConfig& tols = {}) {
  using Scalar = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  if (input.rows() != input.cols())
    throw Error(ErrorCode::NotSquare, "eigensolver input must be square");

  const Index n = input.rows();
  ComplexMatrix<Scalar> hermitian = input.template cast<Complex<Scalar>>();
  ComplexMatrix<Scalar> a = (hermitian + hermitian.adjoint()) * Scalar(0.5);
  ComplexMatrix<Scalar> v = ComplexMatrix<Scalar>::Identity(n, n);

  const Scalar threshold = Scalar(tols.eig_tol) * std::max(Scalar(1), Scalar(a.norm()));
  int sweep = 0;
  Scalar off = detail::off_diagonal_norm(a);
  while (off > threshold) {
    if (sweep >= tols.max_sweeps) {
      std::ostringstream msg;
      msg << "off-diagonal norm " << off << " above " << threshold << " after " << sweep
          << " sweeps";
      throw Error(ErrorCode::NoConvergence, msg.str());
    }
    for (Index p = 0; p + 1 < n; ++p)
      for (Index q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
    ++sweep;
    off = detail::off_diagonal_norm(a);
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) {
    return std::real(a(i, i)) > std::real(a(j, j));
  });

  HermitianEigen<Scalar> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = std::real(a(src, src));
    out.vectors.col(k) = v.col(src);
  }
  out.sweeps = sweep;
  return out;
}

}  // namespace entrospec
