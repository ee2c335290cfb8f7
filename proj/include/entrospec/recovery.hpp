#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include "entrospec/entropy.hpp"
#include "entrospec/error.hpp"
#include "entrospec/polynomial.hpp"
#include "entrospec/state.hpp"
#include "entrospec/types.hpp"

namespace entrospec {

/// Black-box access to an entropy curve f on (0, 1). `eval_prime`, when set,
/// supplies f' directly; otherwise recovery differentiates numerically.
/// Both callables must be safe to invoke concurrently.
template <typename Scalar>
struct EntropyOracle {
  std::function<Scalar(Scalar)> eval;
  std::function<Scalar(Scalar)> eval_prime;
  Index dim = 0;

  bool has_derivative() const { return static_cast<bool>(eval_prime); }
};

enum class DerivativeMode { Analytic, FiniteDifference };

/// Oracle backed by a state: f(lambda) is the von Neumann entropy of the
/// depolarized matrix, recomputed from scratch on every call.
template <typename Scalar>
EntropyOracle<Scalar> exact_oracle(const QuantumState<Scalar>& s, DerivativeMode mode,
                                   const ToleranceConfig& tols = {}) {
  EntropyOracle<Scalar> oracle;
  oracle.dim = s.dim();
  oracle.eval = [s, tols](Scalar lambda) { return von_neumann_entropy(depolarize(s, lambda), tols); };
  if (mode == DerivativeMode::Analytic) {
    EntropyCurve<Scalar> curve(s, tols);
    oracle.eval_prime = [curve](Scalar lambda) { return curve.derivative(lambda); };
  }
  return oracle;
}

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic uniform value in [-1, 1] keyed by (lambda, seed, stream).
inline double hashed_uniform(double lambda, std::uint64_t seed, std::uint64_t stream) {
  const std::uint64_t h =
      splitmix64(std::bit_cast<std::uint64_t>(lambda) ^ splitmix64(seed ^ (stream << 32)));
  return 2.0 * (static_cast<double>(h >> 11) * 0x1.0p-53) - 1.0;
}
}  // namespace detail

/// Adds deterministic uniform noise of magnitude eps to f (and f' if present).
template <typename Scalar>
EntropyOracle<Scalar> with_noise(EntropyOracle<Scalar> oracle, Scalar eps, std::uint64_t seed) {
  auto eval = oracle.eval;
  oracle.eval = [eval, eps, seed](Scalar lambda) {
    return eval(lambda) + eps * Scalar(detail::hashed_uniform(double(lambda), seed, 0));
  };
  if (oracle.eval_prime) {
    auto prime = oracle.eval_prime;
    oracle.eval_prime = [prime, eps, seed](Scalar lambda) {
      return prime(lambda) + eps * Scalar(detail::hashed_uniform(double(lambda), seed, 1));
    };
  }
  return oracle;
}

template <typename Scalar>
struct RecoveryConfig {
  std::vector<Scalar> nodes;             // empty: n + 5 Chebyshev points on [0.1, 0.9]
  std::vector<Scalar> validation_nodes;  // empty: 4 Chebyshev points on [0.15, 0.85]
  Scalar lambda_max = Scalar(0.9);
  Scalar fd_step = Scalar(1e-6);
  Scalar coeff_trim_tol = Scalar(1e-7);
  Scalar root_imag_tol = Scalar(1e-6);
  Scalar max_fit_residual = Scalar(1e-3);

  std::vector<Scalar> fit_nodes(Index n) const {
    if (!nodes.empty()) return nodes;
    const RealVector<Scalar> c = chebyshev_nodes<Scalar>(n + 5, Scalar(0.1), Scalar(0.9));
    return {c.data(), c.data() + c.size()};
  }
  std::vector<Scalar> check_nodes() const {
    if (!validation_nodes.empty()) return validation_nodes;
    const RealVector<Scalar> c = chebyshev_nodes<Scalar>(4, Scalar(0.15), Scalar(0.85));
    return {c.data(), c.data() + c.size()};
  }
};

/// log2 p(lambda) = n (lambda f'(lambda) - f(lambda)) from oracle samples.
template <typename Scalar>
Scalar sample_log2_p(const EntropyOracle<Scalar>& oracle, Scalar lambda,
                     const RecoveryConfig<Scalar>& cfg = {}) {
  if (!(lambda > Scalar(0) && lambda <= cfg.lambda_max && lambda < Scalar(1))) {
    std::ostringstream msg;
    msg << "lambda = " << lambda << " outside (0, " << cfg.lambda_max << "]";
    throw Error(ErrorCode::OracleDomain, msg.str());
  }
  Scalar slope;
  if (oracle.has_derivative()) {
    slope = oracle.eval_prime(lambda);
  } else {
    Scalar h = cfg.fd_step * std::max(lambda, Scalar(0.1));
    h = std::min({h, lambda / Scalar(2), (Scalar(1) - lambda) / Scalar(2)});
    if (!(h > std::numeric_limits<Scalar>::epsilon() * lambda))
      throw Error(ErrorCode::OracleDomain, "finite-difference stencil does not fit inside (0, 1)");
    slope = (oracle.eval(lambda + h) - oracle.eval(lambda - h)) / (Scalar(2) * h);
  }
  return Scalar(oracle.dim) * (lambda * slope - oracle.eval(lambda));
}

template <typename Scalar>
struct PolynomialFit {
  PolynomialP<Scalar> p;
  Scalar residual = Scalar(0);  // max |log2 p_fit - log2 p_sampled| at validation nodes
};

/// Least-squares fit of p from sampled log2 p. The fit runs on n^n p, whose
/// constant term is pinned to 1, so only the degrees 1..n are free.
template <typename Scalar>
PolynomialFit<Scalar> fit_p(const EntropyOracle<Scalar>& oracle, const RecoveryConfig<Scalar>& cfg = {}) {
  const Index n = oracle.dim;
  if (n < 1) throw Error(ErrorCode::BadConfig, "oracle dimension must be positive");
  const std::vector<Scalar> nodes = cfg.fit_nodes(n);
  if (static_cast<Index>(nodes.size()) < n + 1)
    throw Error(ErrorCode::BadConfig, "need at least n + 1 fit nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(nodes[i] > Scalar(0) && nodes[i] <= cfg.lambda_max))
      throw Error(ErrorCode::BadConfig, "fit nodes must lie in (0, lambda_max]");
    for (std::size_t j = 0; j < i; ++j)
      if (nodes[j] == nodes[i]) throw Error(ErrorCode::BadConfig, "fit nodes must be distinct");
  }

  const Scalar log2_scale = Scalar(n) * std::log2(Scalar(n));  // log2 n^n
  const Index m = static_cast<Index>(nodes.size());
  RealVector<Scalar> x(m), y(m);
  for (Index j = 0; j < m; ++j) {
    x(j) = nodes[static_cast<std::size_t>(j)];
    y(j) = std::exp2(sample_log2_p(oracle, x(j), cfg) + log2_scale) - Scalar(1);
  }

  RealVector<Scalar> scaled = RealVector<Scalar>::Zero(n + 1);
  scaled(0) = Scalar(1);
  if (n > 0) scaled.tail(n) = vandermonde(x, 1, n).colPivHouseholderQr().solve(y);

  PolynomialFit<Scalar> fit;
  fit.p.coeffs = scaled * std::exp2(-log2_scale);

  for (Scalar lambda : cfg.check_nodes()) {
    const Scalar fitted = polyval(scaled, lambda);
    const Scalar sampled = sample_log2_p(oracle, lambda, cfg) + log2_scale;
    const Scalar err = fitted > Scalar(0) ? std::abs(std::log2(fitted) - sampled)
                                          : std::numeric_limits<Scalar>::infinity();
    fit.residual = std::max(fit.residual, err);
  }
  if (!(fit.residual <= cfg.max_fit_residual)) {
    std::ostringstream msg;
    msg << "validation residual " << fit.residual << " exceeds " << cfg.max_fit_residual;
    throw Error(ErrorCode::IllConditioned, msg.str());
  }
  return fit;
}

template <typename Scalar>
struct RecoveredSpectrum {
  RealVector<Scalar> values;  // descending, unit sum
  Scalar residual = Scalar(0);
  Index trimmed_degree = 0;   // eigenvalues recovered as exactly 1/n
  Scalar sum_drift = Scalar(0);      // |sum - 1| before renormalization
  Scalar min_raw_value = Scalar(0);  // smallest eigenvalue before clamping
};

/// Recovers the spectrum from the oracle: fit p, trim vanishing top
/// coefficients (each one is a factor u_i = 0, i.e. x_i = 1/n), take the
/// remaining roots and map them back through x = 1/n - 1/(n r).
///
/// The roots are computed as reciprocals 1/r from the reversed polynomial,
/// which is monic because p(0) is pinned. Eigenvalues near 1/n then give
/// roots near 0 instead of near infinity.
template <typename Scalar>
RecoveredSpectrum<Scalar> recover_spectrum(const EntropyOracle<Scalar>& oracle,
                                           const RecoveryConfig<Scalar>& cfg = {}) {
  const Index n = oracle.dim;
  const PolynomialFit<Scalar> fit = fit_p(oracle, cfg);
  const Scalar scale = std::exp2(Scalar(n) * std::log2(Scalar(n)));
  const RealVector<Scalar> e = fit.p.coeffs * scale;  // elementary symmetric functions of n u_i

  const Scalar cutoff = cfg.coeff_trim_tol * max_abs(e);
  Index degree = n;
  while (degree > 0 && std::abs(e(degree)) <= cutoff) --degree;
  const Index trimmed = n - degree;

  // z^d + e_1 z^{d-1} + ... + e_d, lower coefficients (e_d, ..., e_1).
  RealVector<Scalar> lower(degree);
  for (Index k = 0; k < degree; ++k) lower(k) = e(degree - k);
  const auto roots = companion_roots(lower);

  std::vector<Scalar> raw;
  raw.reserve(static_cast<std::size_t>(n));
  for (const auto& z : roots) {
    if (std::abs(z.imag()) > cfg.root_imag_tol) {
      std::ostringstream msg;
      msg << "root " << z << " has imaginary part above " << cfg.root_imag_tol;
      throw Error(ErrorCode::ComplexRoots, msg.str());
    }
    raw.push_back((Scalar(1) - z.real()) / Scalar(n));
  }
  for (Index k = 0; k < trimmed; ++k) raw.push_back(Scalar(1) / Scalar(n));
  if (static_cast<Index>(raw.size()) != n) {
    std::ostringstream msg;
    msg << "recovered " << raw.size() << " eigenvalues for dimension " << n;
    throw Error(ErrorCode::DegreeDeficit, msg.str());
  }

  RecoveredSpectrum<Scalar> out;
  out.residual = fit.residual;
  out.trimmed_degree = trimmed;
  out.min_raw_value = *std::min_element(raw.begin(), raw.end());
  Scalar clamped_sum(0);
  for (Scalar& x : raw) {
    x = std::clamp(x, Scalar(0), Scalar(1));
    clamped_sum += x;
  }
  out.sum_drift = std::abs(clamped_sum - Scalar(1));
  out.values = make_spectrum<Scalar>(Eigen::Map<RealVector<Scalar>>(raw.data(), n)).values;
  return out;
}

}  // namespace entrospec
