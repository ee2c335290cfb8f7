#pragma once

#include <cmath>
#include <numbers>
#include <sstream>

#include "entrospec/error.hpp"
#include "entrospec/state.hpp"
#include "entrospec/types.hpp"

namespace entrospec {

/// Shannon entropy in bits of an eigenvalue vector; entries <= 0 contribute 0.
template <typename Scalar>
Scalar entropy_of_spectrum(const Spectrum<Scalar>& sp) {
  Scalar s(0);
  for (Index i = 0; i < sp.dim(); ++i) {
    const Scalar x = sp.values(i);
    if (x > Scalar(0)) s -= x * std::log2(x);
  }
  return s;
}

template <typename Scalar>
Scalar von_neumann_entropy(const QuantumState<Scalar>& s, const ToleranceConfig& tols = {}) {
  return entropy_of_spectrum(hermitian_spectrum(s, tols));
}

/// p(lambda) = prod_i (lambda * u_i + 1/n), coefficients in ascending order.
template <typename Scalar>
struct PolynomialP {
  RealVector<Scalar> coeffs;

  Index degree_bound() const { return coeffs.size() - 1; }

  Scalar operator()(Scalar lambda) const {
    Scalar acc(0);
    for (Index k = coeffs.size(); k-- > 0;) acc = acc * lambda + coeffs(k);
    return acc;
  }
};

/// Expands prod_i (u_i * lambda + 1/n) by repeated multiplication with the
/// linear factors.
template <typename Scalar>
PolynomialP<Scalar> polynomial_p(const Spectrum<Scalar>& sp) {
  const Index n = sp.dim();
  const Scalar inv_n = Scalar(1) / Scalar(n);
  RealVector<Scalar> c = RealVector<Scalar>::Zero(n + 1);
  c(0) = Scalar(1);
  for (Index i = 0; i < n; ++i) {
    const Scalar u = sp.shifted(i);
    for (Index k = i + 1; k >= 1; --k) c(k) = c(k) * inv_n + c(k - 1) * u;
    c(0) *= inv_n;
  }
  return {std::move(c)};
}

/// Entropy along the depolarizing line, f(lambda) = S(lambda rho + (1-lambda)/n I),
/// evaluated in closed form from the spectrum of rho.
template <typename Scalar>
class EntropyCurve {
 public:
  explicit EntropyCurve(Spectrum<Scalar> sp) : spectrum_(std::move(sp)) {}
  explicit EntropyCurve(const QuantumState<Scalar>& s, const ToleranceConfig& tols = {})
      : spectrum_(hermitian_spectrum(s, tols)) {}

  const Spectrum<Scalar>& spectrum() const { return spectrum_; }
  Index dim() const { return spectrum_.dim(); }

  // Weight lambda x_i + (1 - lambda)/n, i.e. lambda u_i + 1/n; exactly 0 when
  // lambda = 1 and x_i = 0.
  Scalar weight(Index i, Scalar lambda) const {
    return lambda * spectrum_.values(i) + (Scalar(1) - lambda) / Scalar(dim());
  }

  Scalar value(Scalar lambda) const {
    check_closed(lambda);
    Scalar f(0);
    for (Index i = 0; i < dim(); ++i) {
      const Scalar w = weight(i, lambda);
      if (w > Scalar(0)) f -= w * std::log2(w);
    }
    return f;
  }

  /// f'(lambda) = -sum_i u_i log2(lambda u_i + 1/n).
  Scalar derivative(Scalar lambda) const {
    check_closed(lambda);
    Scalar d(0);
    for (Index i = 0; i < dim(); ++i) {
      const Scalar u = spectrum_.shifted(i);
      if (u == Scalar(0)) continue;
      d -= u * std::log2(nonsingular_weight(i, lambda));
    }
    return d;
  }

  /// f''(lambda) = -sum_i u_i^2 / (ln 2 (lambda u_i + 1/n)); never positive.
  Scalar second_derivative(Scalar lambda) const {
    check_closed(lambda);
    Scalar d(0);
    for (Index i = 0; i < dim(); ++i) {
      const Scalar u = spectrum_.shifted(i);
      if (u == Scalar(0)) continue;
      d -= u * u / nonsingular_weight(i, lambda);
    }
    return d / std::numbers::ln2_v<Scalar>;
  }

  /// log2 p(lambda) = n lambda^2 d/dlambda (f / lambda) = n (lambda f' - f),
  /// defined on the open interval (0, 1).
  Scalar log2_p(Scalar lambda) const {
    if (!(lambda > Scalar(0) && lambda < Scalar(1))) {
      std::ostringstream msg;
      msg << "log2_p needs lambda in (0, 1), got " << lambda;
      throw Error(ErrorCode::LambdaOutOfRange, msg.str());
    }
    return Scalar(dim()) * (lambda * derivative(lambda) - value(lambda));
  }

 private:
  static void check_closed(Scalar lambda) {
    if (!(lambda >= Scalar(0) && lambda <= Scalar(1))) {
      std::ostringstream msg;
      msg << "lambda = " << lambda << " not in [0, 1]";
      throw Error(ErrorCode::LambdaOutOfRange, msg.str());
    }
  }

  Scalar nonsingular_weight(Index i, Scalar lambda) const {
    const Scalar w = weight(i, lambda);
    if (!(w > Scalar(0))) {
      std::ostringstream msg;
      msg << "derivative undefined at lambda = " << lambda << ": eigenvalue " << i << " is zero";
      throw Error(ErrorCode::SingularEndpoint, msg.str());
    }
    return w;
  }

  Spectrum<Scalar> spectrum_;
};

}  // namespace entrospec
