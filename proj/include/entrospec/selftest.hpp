#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entrospec/entropy.hpp"
#include "entrospec/polynomial.hpp"
#include "entrospec/types.hpp"

namespace entrospec {

namespace checks {

/// Least-squares probes of the polynomial structure behind f''. Samples are
/// taken at Chebyshev nodes on [0.05, 0.95], normalized to unit max, and fitted
/// in the centered variable t = (lambda - 0.5) / 0.45 so that the monomial
/// Vandermonde system stays well conditioned. An affine change of variable
/// preserves polynomial degree, so vanishing top coefficients in t mean the
/// same in lambda.
struct DegreeProbe {
  double exact_fit_residual = 0.0;  // relative residual of the fit at the claimed degree
  double top_coeff_max = 0.0;       // largest |coefficient| above the claimed degree
};

/// h''(lambda) p(lambda) q(lambda) with h = f - g: claimed degree 2n - 2,
/// over-fit at degree 2n from 2n + 3 samples.
DegreeProbe probe_h_second_pq(const EntropyCurve<double>& f, const EntropyCurve<double>& g);

/// f''(lambda) p(lambda): fitted at degree n - 1 from n + 3 samples; the
/// reported top coefficient is the degree n - 1 one, which should vanish.
DegreeProbe probe_f_second_p(const EntropyCurve<double>& f);

}  // namespace checks

struct SelftestOptions {
  std::uint64_t seed = 42;
  double entropy_tol = 1e-9;
  double spectrum_tol = 1e-8;
};

struct PropertyResult {
  std::string name;
  bool passed = false;
  double max_residual = 0.0;
  double threshold = 0.0;
  std::string note;
};

/// Runs every module's invariant suite at the given seed. Deterministic:
/// identical options produce identical results.
std::vector<PropertyResult> run_selftest(const SelftestOptions& options);

}  // namespace entrospec
