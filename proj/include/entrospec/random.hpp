#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "entrospec/error.hpp"
#include "entrospec/state.hpp"
#include "entrospec/types.hpp"

namespace entrospec {

using Rng = std::mt19937_64;

// Standard complex Gaussian entries: real and imaginary parts N(0, 1/2).
template <typename Scalar>
ComplexMatrix<Scalar> ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<Scalar> normal(Scalar(0), std::sqrt(Scalar(0.5)));
  ComplexMatrix<Scalar> g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const Scalar re = normal(rng);
      const Scalar im = normal(rng);
      g(i, j) = Complex<Scalar>(re, im);
    }
  return g;
}

/// Random density matrix G G* / tr(G G*) from the seeded Ginibre ensemble.
template <typename Scalar>
QuantumState<Scalar> random_state(Index n, Rng& rng) {
  if (n < 1) throw Error(ErrorCode::BadConfig, "dimension must be positive");
  if (n == 1) return maximally_mixed<Scalar>(1);
  const ComplexMatrix<Scalar> g = ginibre<Scalar>(n, n, rng);
  ComplexMatrix<Scalar> m = g * g.adjoint();
  m /= m.trace();
  m = (m + m.adjoint()) * Scalar(0.5);
  return detail::make_unchecked<Scalar>(std::move(m));
}

template <typename Scalar>
QuantumState<Scalar> random_state(Index n, std::uint64_t seed) {
  Rng rng(seed);
  return random_state<Scalar>(n, rng);
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal absorbed into Q, which makes the factorization unique.
template <typename Scalar>
ComplexMatrix<Scalar> random_unitary(Index n, Rng& rng) {
  if (n < 1) throw Error(ErrorCode::BadConfig, "dimension must be positive");
  constexpr int kAttempts = 3;
  for (int attempt = 0; attempt <= kAttempts; ++attempt) {
    const ComplexMatrix<Scalar> g = ginibre<Scalar>(n, n, rng);
    Eigen::HouseholderQR<ComplexMatrix<Scalar>> qr(g);
    const ComplexMatrix<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
    ComplexMatrix<Scalar> q = qr.householderQ() * ComplexMatrix<Scalar>::Identity(n, n);
    bool singular = false;
    for (Index k = 0; k < n; ++k) {
      const Scalar mag = std::abs(r(k, k));
      if (!(mag > std::numeric_limits<Scalar>::min() * Scalar(1e6))) {
        singular = true;
        break;
      }
      q.col(k) *= r(k, k) / mag;
    }
    if (!singular) return q;
  }
  throw Error(ErrorCode::SingularSample, "Gaussian sample singular after retries");
}

template <typename Scalar>
ComplexMatrix<Scalar> random_unitary(Index n, std::uint64_t seed) {
  Rng rng(seed);
  return random_unitary<Scalar>(n, rng);
}

}  // namespace entrospec
