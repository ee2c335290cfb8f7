#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "entrospec/error.hpp"
#include "entrospec/types.hpp"

namespace entrospec {

/// Chebyshev points of the first kind mapped to [lo, hi], ascending.
template <typename Scalar>
RealVector<Scalar> chebyshev_nodes(Index count, Scalar lo, Scalar hi) {
  RealVector<Scalar> x(count);
  const Scalar mid = (lo + hi) / Scalar(2), half = (hi - lo) / Scalar(2);
  for (Index k = 0; k < count; ++k) {
    const Scalar angle = std::numbers::pi_v<Scalar> * (Scalar(2 * (count - 1 - k) + 1)) /
                         Scalar(2 * count);
    x(k) = mid + half * std::cos(angle);
  }
  return x;
}

template <typename Scalar>
Scalar polyval(const RealVector<Scalar>& ascending, Scalar x) {
  Scalar acc(0);
  for (Index k = ascending.size(); k-- > 0;) acc = acc * x + ascending(k);
  return acc;
}

/// Vandermonde matrix with columns x^first_power ... x^last_power.
template <typename Scalar>
RealMatrix<Scalar> vandermonde(const RealVector<Scalar>& x, Index first_power, Index last_power) {
  RealMatrix<Scalar> v(x.size(), last_power - first_power + 1);
  for (Index i = 0; i < x.size(); ++i) {
    Scalar p = std::pow(x(i), Scalar(first_power));
    for (Index j = 0; j < v.cols(); ++j) {
      v(i, j) = p;
      p *= x(i);
    }
  }
  return v;
}

/// Least-squares fit of a polynomial of the given degree, ascending coefficients.
template <typename Scalar>
RealVector<Scalar> fit_polynomial(const RealVector<Scalar>& x, const RealVector<Scalar>& y,
                                  Index degree) {
  if (x.size() != y.size() || x.size() < degree + 1)
    throw Error(ErrorCode::BadConfig, "need at least degree + 1 samples for a polynomial fit");
  return vandermonde(x, 0, degree).colPivHouseholderQr().solve(y);
}

/// Roots of the monic polynomial z^d + a_{d-1} z^{d-1} + ... + a_0 given
/// a = (a_0, ..., a_{d-1}), as eigenvalues of its companion matrix.
template <typename Scalar>
std::vector<Complex<Scalar>> companion_roots(const RealVector<Scalar>& lower) {
  const Index d = lower.size();
  if (d == 0) return {};
  RealMatrix<Scalar> companion = RealMatrix<Scalar>::Zero(d, d);
  for (Index i = 1; i < d; ++i) companion(i, i - 1) = Scalar(1);
  companion.col(d - 1) = -lower;
  Eigen::EigenSolver<RealMatrix<Scalar>> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::NoConvergence, "companion eigenvalue iteration failed");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + d};
}

}  // namespace entrospec
