#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>

#include "entrospec/error.hpp"
#include "entrospec/hermitian_eigen.hpp"
#include "entrospec/types.hpp"

namespace entrospec {

template <typename Scalar>
class QuantumState;

namespace detail {
struct Unchecked {};

template <typename Scalar>
QuantumState<Scalar> make_unchecked(ComplexMatrix<Scalar> m);
}  // namespace detail

/// A density matrix: Hermitian, positive semidefinite, unit trace.
/// Instances only come out of validate_state or operations that preserve
/// the invariants, and are immutable afterwards.
template <typename Scalar>
class QuantumState {
 public:
  const ComplexMatrix<Scalar>& matrix() const { return matrix_; }
  Index dim() const { return matrix_.rows(); }

 private:
  QuantumState(detail::Unchecked, ComplexMatrix<Scalar> m) : matrix_(std::move(m)) {}
  friend QuantumState detail::make_unchecked<Scalar>(ComplexMatrix<Scalar>);

  ComplexMatrix<Scalar> matrix_;
};

namespace detail {
template <typename Scalar>
QuantumState<Scalar> make_unchecked(ComplexMatrix<Scalar> m) {
  return QuantumState<Scalar>(Unchecked{}, std::move(m));
}
}  // namespace detail

/// Sorted eigenvalues x_1 >= ... >= x_n of a state and u_i = x_i - 1/n.
template <typename Scalar>
struct Spectrum {
  RealVector<Scalar> values;
  RealVector<Scalar> shifted;

  Index dim() const { return values.size(); }
};

/// Builds a Spectrum from arbitrary eigenvalues: sorts descending, clamps to
/// [0, 1] and renormalizes to unit sum.
template <typename Scalar>
Spectrum<Scalar> make_spectrum(RealVector<Scalar> values) {
  const Index n = values.size();
  if (n == 0) throw Error(ErrorCode::BadConfig, "spectrum must be non-empty");
  for (Index i = 0; i < n; ++i) {
    if (!std::isfinite(static_cast<double>(values(i))))
      throw Error(ErrorCode::NonFinite, "spectrum entry is not finite");
    values(i) = std::clamp(values(i), Scalar(0), Scalar(1));
  }
  std::sort(values.data(), values.data() + n, std::greater<Scalar>());
  const Scalar total = values.sum();
  if (!(total > Scalar(0))) throw Error(ErrorCode::TraceNotOne, "spectrum sums to zero");
  values /= total;

  Spectrum<Scalar> sp;
  sp.values = std::move(values);
  sp.shifted = sp.values.array() - Scalar(1) / Scalar(n);
  return sp;
}

template <typename Scalar>
QuantumState<Scalar> maximally_mixed(Index n) {
  if (n < 1) throw Error(ErrorCode::BadConfig, "dimension must be positive");
  return detail::make_unchecked<Scalar>(ComplexMatrix<Scalar>::Identity(n, n) /
                                        Complex<Scalar>(Scalar(n)));
}

/// Checks the density-matrix invariants and returns the symmetrized state.
template <typename Derived>
QuantumState<typename Eigen::NumTraits<typename Derived::Scalar>::Real> validate_state(
    const Eigen::MatrixBase<Derived>& input, const ToleranceConfig& tols = {}) {
  using Scalar = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  if (input.rows() != input.cols() || input.rows() == 0) {
    std::ostringstream msg;
    msg << "matrix is " << input.rows() << "x" << input.cols();
    throw Error(ErrorCode::NotSquare, msg.str());
  }
  ComplexMatrix<Scalar> m = input.template cast<Complex<Scalar>>();
  if (!m.allFinite()) throw Error(ErrorCode::NonFinite, "matrix has NaN or Inf entries");

  const Scalar herm_residual = max_abs(ComplexMatrix<Scalar>(m - m.adjoint()));
  if (herm_residual > Scalar(tols.herm_tol)) {
    std::ostringstream msg;
    msg << "max |M - M*| = " << herm_residual << " exceeds herm_tol " << tols.herm_tol;
    throw Error(ErrorCode::NotHermitian, msg.str());
  }
  ComplexMatrix<Scalar> sym = (m + m.adjoint()) * Scalar(0.5);

  const Scalar trace_residual = std::abs(std::real(sym.trace()) - Scalar(1));
  if (trace_residual > Scalar(tols.trace_tol)) {
    std::ostringstream msg;
    msg << "|tr M - 1| = " << trace_residual << " exceeds trace_tol " << tols.trace_tol;
    throw Error(ErrorCode::TraceNotOne, msg.str());
  }

  const auto eig = hermitian_eigen(sym, tols);
  const Scalar min_eig = eig.values(eig.values.size() - 1);
  if (min_eig < -Scalar(tols.psd_tol)) {
    std::ostringstream msg;
    msg << "min eigenvalue " << min_eig << " below -psd_tol " << -tols.psd_tol;
    throw Error(ErrorCode::NotPositiveSemidefinite, msg.str());
  }
  return detail::make_unchecked<Scalar>(std::move(sym));
}

/// Eigen decomposition of a state; eigenvalues are not clamped.
template <typename Scalar>
HermitianEigen<Scalar> state_eigen(const QuantumState<Scalar>& s, const ToleranceConfig& tols = {}) {
  return hermitian_eigen(s.matrix(), tols);
}

template <typename Scalar>
Spectrum<Scalar> hermitian_spectrum(const QuantumState<Scalar>& s, const ToleranceConfig& tols = {}) {
  return make_spectrum<Scalar>(state_eigen(s, tols).values);
}

/// The depolarized state lambda * s + (1 - lambda)/n * I.
template <typename Scalar>
QuantumState<Scalar> depolarize(const QuantumState<Scalar>& s, Scalar lambda) {
  if (!(lambda >= Scalar(0) && lambda <= Scalar(1))) {
    std::ostringstream msg;
    msg << "lambda = " << lambda << " not in [0, 1]";
    throw Error(ErrorCode::LambdaOutOfRange, msg.str());
  }
  const Index n = s.dim();
  ComplexMatrix<Scalar> m = s.matrix() * Complex<Scalar>(lambda);
  m.diagonal().array() += Complex<Scalar>((Scalar(1) - lambda) / Scalar(n));
  return detail::make_unchecked<Scalar>(std::move(m));
}

/// U s U*, still a state for unitary U. The caller vouches for unitarity.
template <typename Scalar>
QuantumState<Scalar> conjugate(const QuantumState<Scalar>& s, const ComplexMatrix<Scalar>& u) {
  if (u.rows() != s.dim() || u.cols() != s.dim())
    throw Error(ErrorCode::DimensionMismatch, "unitary and state dimensions differ");
  ComplexMatrix<Scalar> m = u * s.matrix() * u.adjoint();
  m = (m + m.adjoint()) * Scalar(0.5);
  return detail::make_unchecked<Scalar>(std::move(m));
}

/// Diagonal state with the given (non-negative, unit-sum) eigenvalues.
template <typename Scalar>
QuantumState<Scalar> diagonal_state(const Spectrum<Scalar>& sp) {
  return detail::make_unchecked<Scalar>(
      ComplexMatrix<Scalar>(sp.values.template cast<Complex<Scalar>>().asDiagonal()));
}

template <typename Scalar>
Scalar unitarity_residual(const ComplexMatrix<Scalar>& u) {
  return max_abs(ComplexMatrix<Scalar>(u * u.adjoint() - ComplexMatrix<Scalar>::Identity(u.rows(), u.cols())));
}

}  // namespace entrospec
