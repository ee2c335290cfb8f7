#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace entrospec {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

/// Numerical thresholds for state validation and the Jacobi eigensolver.
struct ToleranceConfig {
  double herm_tol = 1e-10;
  double psd_tol = 1e-9;
  double trace_tol = 1e-9;
  double eig_tol = 1e-12;
  int max_sweeps = 100;
};

template <typename Derived>
auto max_abs(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  return m.size() == 0 ? Real(0) : Real(m.cwiseAbs().maxCoeff());
}

}  // namespace entrospec
