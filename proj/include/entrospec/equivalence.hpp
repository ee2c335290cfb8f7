#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string_view>
#include <utility>
#include <vector>

#include "entrospec/entropy.hpp"
#include "entrospec/error.hpp"
#include "entrospec/state.hpp"
#include "entrospec/types.hpp"

namespace entrospec {

enum class Verdict { Equivalent, NotEquivalent };
enum class Method { Spectral, Theorem1Grid, Theorem2Nodes };

inline std::string_view to_string(Verdict v) {
  return v == Verdict::Equivalent ? "equivalent" : "not_equivalent";
}

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::Spectral: return "spectral";
    case Method::Theorem1Grid: return "theorem1_grid";
    case Method::Theorem2Nodes: return "theorem2_nodes";
  }
  return "unknown";
}

template <typename Scalar>
struct EquivalenceConfig {
  Scalar a = Scalar(0.9);     // dense grid covers (0, a)
  int grid_points = 64;
  std::vector<Scalar> nodes;  // 2n finite-test nodes; empty means i / (2n)
  Scalar entropy_tol = Scalar(1e-9);
  Scalar spectrum_tol = Scalar(1e-8);
  ToleranceConfig tols;
};

/// The finite-test nodes i / (2n), i = 1..2n.
template <typename Scalar>
std::vector<Scalar> default_nodes(Index n) {
  std::vector<Scalar> nodes(static_cast<std::size_t>(2 * n));
  for (Index i = 1; i <= 2 * n; ++i)
    nodes[static_cast<std::size_t>(i - 1)] = Scalar(i) / Scalar(2 * n);
  return nodes;
}

/// Uniform interior grid a k / (points + 1), k = 1..points, lying inside (0, a).
template <typename Scalar>
std::vector<Scalar> open_grid(Scalar a, int points) {
  std::vector<Scalar> grid(static_cast<std::size_t>(points));
  for (int k = 1; k <= points; ++k)
    grid[static_cast<std::size_t>(k - 1)] = a * Scalar(k) / Scalar(points + 1);
  return grid;
}

template <typename Scalar>
struct EquivalenceReport {
  Verdict verdict = Verdict::NotEquivalent;
  Method method = Method::Spectral;
  Scalar max_entropy_gap = Scalar(0);
  std::vector<std::pair<Scalar, Scalar>> per_node_gaps;  // (lambda, |f - g|)
  RealVector<Scalar> spectrum_rho, spectrum_sigma;
  Scalar max_spectrum_gap = Scalar(0);
  std::optional<ComplexMatrix<Scalar>> witness;
  Scalar witness_residual = Scalar(0);     // max |rho - U sigma U*|
  Scalar unitarity_residual = Scalar(0);   // max |U U* - I|
  Scalar entropy_tol = Scalar(0), spectrum_tol = Scalar(0);

  bool equivalent() const { return verdict == Verdict::Equivalent; }
};

namespace detail {
template <typename Scalar>
void require_same_dim(const QuantumState<Scalar>& rho, const QuantumState<Scalar>& sigma) {
  if (rho.dim() != sigma.dim()) {
    std::ostringstream msg;
    msg << "states have dimensions " << rho.dim() << " and " << sigma.dim();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
}
}  // namespace detail

template <typename Scalar>
Scalar spectrum_distance(const Spectrum<Scalar>& a, const Spectrum<Scalar>& b) {
  return max_abs(RealVector<Scalar>(a.values - b.values));
}

template <typename Scalar>
bool spectral_equivalent(const QuantumState<Scalar>& rho, const QuantumState<Scalar>& sigma,
                         Scalar tol, const ToleranceConfig& tols = {}) {
  detail::require_same_dim(rho, sigma);
  return spectrum_distance(hermitian_spectrum(rho, tols), hermitian_spectrum(sigma, tols)) <= tol;
}

/// U = V_rho V_sigma* with both eigenbases ordered by descending eigenvalue,
/// so that U sigma U* = rho whenever the spectra agree. Sorting both spectra
/// already aligns equal eigenvalues; inside a degenerate group any alignment
/// satisfies the residual contract.
template <typename Scalar>
ComplexMatrix<Scalar> unitary_witness(const QuantumState<Scalar>& rho,
                                      const QuantumState<Scalar>& sigma, Scalar spectrum_tol,
                                      const ToleranceConfig& tols = {}) {
  detail::require_same_dim(rho, sigma);
  const auto er = state_eigen(rho, tols);
  const auto es = state_eigen(sigma, tols);
  const Scalar gap = spectrum_distance(make_spectrum<Scalar>(er.values), make_spectrum<Scalar>(es.values));
  if (gap > spectrum_tol) {
    std::ostringstream msg;
    msg << "sorted spectra differ by " << gap << " > " << spectrum_tol;
    throw Error(ErrorCode::SpectraMismatch, msg.str());
  }
  return er.vectors * es.vectors.adjoint();
}

template <typename Scalar>
Scalar witness_residual(const QuantumState<Scalar>& rho, const QuantumState<Scalar>& sigma,
                        const ComplexMatrix<Scalar>& u) {
  return max_abs(ComplexMatrix<Scalar>(rho.matrix() - u * sigma.matrix() * u.adjoint()));
}

template <typename Scalar>
Scalar entropy_gap_at(const EntropyCurve<Scalar>& f, const EntropyCurve<Scalar>& g, Scalar lambda) {
  return std::abs(f.value(lambda) - g.value(lambda));
}

namespace detail {

template <typename Scalar>
EquivalenceReport<Scalar> start_report(const QuantumState<Scalar>& rho,
                                       const QuantumState<Scalar>& sigma,
                                       const EquivalenceConfig<Scalar>& cfg, Method method) {
  detail::require_same_dim(rho, sigma);
  EquivalenceReport<Scalar> r;
  r.method = method;
  r.entropy_tol = cfg.entropy_tol;
  r.spectrum_tol = cfg.spectrum_tol;
  const auto sr = hermitian_spectrum(rho, cfg.tols);
  const auto ss = hermitian_spectrum(sigma, cfg.tols);
  r.spectrum_rho = sr.values;
  r.spectrum_sigma = ss.values;
  r.max_spectrum_gap = spectrum_distance(sr, ss);
  return r;
}

template <typename Scalar>
void attach_witness(EquivalenceReport<Scalar>& r, const QuantumState<Scalar>& rho,
                    const QuantumState<Scalar>& sigma, const EquivalenceConfig<Scalar>& cfg) {
  auto u = unitary_witness(rho, sigma, cfg.spectrum_tol, cfg.tols);
  r.witness_residual = witness_residual(rho, sigma, u);
  r.unitarity_residual = unitarity_residual(u);
  r.witness = std::move(u);
}

// Entropy-based verdict over a node set, followed by witness construction.
template <typename Scalar>
EquivalenceReport<Scalar> entropy_test(const QuantumState<Scalar>& rho,
                                       const QuantumState<Scalar>& sigma,
                                       const EquivalenceConfig<Scalar>& cfg, Method method,
                                       const std::vector<Scalar>& nodes) {
  auto r = start_report(rho, sigma, cfg, method);
  const EntropyCurve<Scalar> f(make_spectrum<Scalar>(r.spectrum_rho));
  const EntropyCurve<Scalar> g(make_spectrum<Scalar>(r.spectrum_sigma));
  r.per_node_gaps.reserve(nodes.size());
  for (Scalar lambda : nodes) {
    const Scalar gap = entropy_gap_at(f, g, lambda);
    r.per_node_gaps.emplace_back(lambda, gap);
    r.max_entropy_gap = std::max(r.max_entropy_gap, gap);
  }
  r.verdict = r.max_entropy_gap <= cfg.entropy_tol ? Verdict::Equivalent : Verdict::NotEquivalent;
  if (r.equivalent()) {
    if (r.max_spectrum_gap > cfg.spectrum_tol) {
      std::ostringstream msg;
      msg << "entropy gaps <= " << cfg.entropy_tol << " but spectra differ by "
          << r.max_spectrum_gap << " > spectrum_tol " << cfg.spectrum_tol;
      throw Error(ErrorCode::WitnessInconsistency, msg.str());
    }
    attach_witness(r, rho, sigma, cfg);
  }
  return r;
}

}  // namespace detail

/// Verdict from sorted spectra alone; the ground truth the entropy tests are
/// checked against.
template <typename Scalar>
EquivalenceReport<Scalar> test_spectral(const QuantumState<Scalar>& rho,
                                        const QuantumState<Scalar>& sigma,
                                        const EquivalenceConfig<Scalar>& cfg = {}) {
  auto r = detail::start_report(rho, sigma, cfg, Method::Spectral);
  r.verdict = r.max_spectrum_gap <= cfg.spectrum_tol ? Verdict::Equivalent : Verdict::NotEquivalent;
  if (r.equivalent()) detail::attach_witness(r, rho, sigma, cfg);
  return r;
}

/// Dense-grid comparison of the two entropy curves on (0, a).
template <typename Scalar>
EquivalenceReport<Scalar> test_theorem1_grid(const QuantumState<Scalar>& rho,
                                             const QuantumState<Scalar>& sigma,
                                             const EquivalenceConfig<Scalar>& cfg = {}) {
  if (!(cfg.a > Scalar(0) && cfg.a <= Scalar(1)) || cfg.grid_points < 2)
    throw Error(ErrorCode::BadConfig, "grid needs 0 < a <= 1 and at least 2 points");
  return detail::entropy_test(rho, sigma, cfg, Method::Theorem1Grid,
                              open_grid(cfg.a, cfg.grid_points));
}

/// Finite test: the curves are compared at exactly 2n increasing nodes in (0, 1].
template <typename Scalar>
EquivalenceReport<Scalar> test_theorem2_nodes(const QuantumState<Scalar>& rho,
                                              const QuantumState<Scalar>& sigma,
                                              const EquivalenceConfig<Scalar>& cfg = {}) {
  detail::require_same_dim(rho, sigma);
  const Index n = rho.dim();
  const std::vector<Scalar> nodes = cfg.nodes.empty() ? default_nodes<Scalar>(n) : cfg.nodes;
  if (static_cast<Index>(nodes.size()) != 2 * n) {
    std::ostringstream msg;
    msg << "expected " << 2 * n << " nodes, got " << nodes.size();
    throw Error(ErrorCode::BadNodeCount, msg.str());
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const bool increasing = i == 0 ? nodes[i] > Scalar(0) : nodes[i] > nodes[i - 1];
    if (!increasing || nodes[i] > Scalar(1))
      throw Error(ErrorCode::BadConfig, "nodes must be strictly increasing in (0, 1]");
  }
  return detail::entropy_test(rho, sigma, cfg, Method::Theorem2Nodes, nodes);
}

/// A spectrum (a, (1-a)/(n-1), ..., (1-a)/(n-1)) whose depolarized entropy at
/// `lambda` matches that of `reference`, found by bisection on a in [1/n, 1].
/// For n = 2 the family is (a, 1 - a) and the match is the reference spectrum
/// itself; for n >= 3 it generally differs from the reference.
template <typename Scalar>
Spectrum<Scalar> equal_entropy_partner(const Spectrum<Scalar>& reference, Scalar lambda = Scalar(1)) {
  const Index n = reference.dim();
  if (n < 2) throw Error(ErrorCode::BadConfig, "equal-entropy partner needs n >= 2");
  const Scalar target = EntropyCurve<Scalar>(reference).value(lambda);
  auto member = [n](Scalar a) {
    RealVector<Scalar> v = RealVector<Scalar>::Constant(n, (Scalar(1) - a) / Scalar(n - 1));
    v(0) = a;
    return make_spectrum<Scalar>(std::move(v));
  };
  // Entropy along the family decreases from log2 n at a = 1/n to 0 at a = 1.
  Scalar lo = Scalar(1) / Scalar(n), hi = Scalar(1);
  for (int it = 0; it < 200 && hi - lo > std::numeric_limits<Scalar>::epsilon(); ++it) {
    const Scalar mid = (lo + hi) / Scalar(2);
    if (EntropyCurve<Scalar>(member(mid)).value(lambda) > target)
      lo = mid;
    else
      hi = mid;
  }
  return member((lo + hi) / Scalar(2));
}

}  // namespace entrospec
