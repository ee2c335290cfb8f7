#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "entrospec/equivalence.hpp"
#include "entrospec/random.hpp"

using namespace entrospec;
using CMat = ComplexMatrix<double>;
using State = QuantumState<double>;

namespace {

State diag_state(std::initializer_list<double> d) {
  RealVector<double> v(static_cast<Index>(d.size()));
  Index i = 0;
  for (double x : d) v(i++) = x;
  return validate_state(CMat(v.cast<Complex<double>>().asDiagonal()));
}

State coupled_state() {
  CMat m(2, 2);
  m << 0.5, 0.25, 0.25, 0.5;
  return validate_state(m);
}

template <typename F>
ErrorCode code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::ParseError;
}

void check_witness(const EquivalenceReport<double>& r, const State& rho, const State& sigma) {
  REQUIRE(r.witness.has_value());
  CHECK(witness_residual(rho, sigma, *r.witness) <= 1e-8);
  CHECK(unitarity_residual(*r.witness) <= 1e-10);
  CHECK(r.witness_residual <= 1e-8);
}

}  // namespace

TEST_CASE("spectral_equivalent") {
  Rng rng(1);
  for (int k = 0; k < 10; ++k) {
    const Index n = 1 + k % 6;
    const State s = random_state<double>(n, rng);
    CHECK(spectral_equivalent(s, conjugate(s, random_unitary<double>(n, rng)), 1e-8));
  }
  CHECK_FALSE(spectral_equivalent(diag_state({1, 0}), maximally_mixed<double>(2), 1e-8));
  CHECK(spectral_equivalent(diag_state({0.75, 0.25}), coupled_state(), 1e-8));
  CHECK(code_of([] { spectral_equivalent(maximally_mixed<double>(2), maximally_mixed<double>(3), 1e-8); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("unitary_witness") {
  Rng rng(2);
  SUBCASE("state against itself") {
    const State s = random_state<double>(4, rng);
    const CMat u = unitary_witness(s, s, 1e-8);
    CHECK(witness_residual(s, s, u) <= 1e-8);
  }
  SUBCASE("random conjugates") {
    for (int k = 0; k < 20; ++k) {
      const Index n = 1 + k % 8;
      const State s = random_state<double>(n, rng);
      const State rho = conjugate(s, random_unitary<double>(n, rng));
      const CMat u = unitary_witness(rho, s, 1e-8);
      CHECK(witness_residual(rho, s, u) <= 1e-8);
      CHECK(unitarity_residual(u) <= 1e-10);
    }
  }
  SUBCASE("antidiagonal conjugate is matched by a permutation-like U") {
    CMat flip(2, 2);
    flip << 0, 1, 1, 0;
    const State rho = diag_state({0.75, 0.25});
    const State sigma = conjugate(rho, flip);
    const CMat u = unitary_witness(rho, sigma, 1e-8);
    CHECK(witness_residual(rho, sigma, u) <= 1e-8);
    CHECK(std::abs(std::abs(u(0, 1)) - 1.0) < 1e-12);
    CHECK(std::abs(u(0, 0)) < 1e-12);
  }
  SUBCASE("degenerate spectrum") {
    const State rho = diag_state({0.4, 0.4, 0.2});
    const State sigma = conjugate(rho, random_unitary<double>(3, rng));
    const CMat u = unitary_witness(rho, sigma, 1e-8);
    CHECK(witness_residual(rho, sigma, u) <= 1e-8);
  }
  CHECK(code_of([] { unitary_witness(diag_state({1, 0}), maximally_mixed<double>(2), 1e-8); }) ==
        ErrorCode::SpectraMismatch);
}

TEST_CASE("dense-grid test") {
  Rng rng(3);
  const State s = random_state<double>(4, rng);
  const State us = conjugate(s, random_unitary<double>(4, rng));

  const auto r = test_theorem1_grid(s, us);
  CHECK(r.equivalent());
  CHECK(r.method == Method::Theorem1Grid);
  CHECK(r.max_entropy_gap <= 1e-12);
  CHECK(r.per_node_gaps.size() == 64);
  CHECK(r.per_node_gaps.front().first > 0.0);
  CHECK(r.per_node_gaps.back().first < 0.9);
  check_witness(r, s, us);

  const auto self = test_theorem1_grid(s, s);
  CHECK(self.equivalent());
  check_witness(self, s, s);

  const auto far = test_theorem1_grid(diag_state({1, 0}), maximally_mixed<double>(2));
  CHECK_FALSE(far.equivalent());
  CHECK_FALSE(far.witness.has_value());
  // at the last node lambda = 0.9 * 64/65 the pure-state curve sits well below 1 bit
  CHECK(far.max_entropy_gap >= 0.5);
  CHECK(far.max_entropy_gap == doctest::Approx(
      1.0 - EntropyCurve<double>(hermitian_spectrum(diag_state({1, 0}))).value(0.9 * 64 / 65)));

  EquivalenceConfig<double> bad;
  bad.grid_points = 1;
  CHECK(code_of([&] { test_theorem1_grid(s, s, bad); }) == ErrorCode::BadConfig);
}

TEST_CASE("dense-grid test flags tolerance misconfiguration") {
  // spectra 1e-6 apart give entropy gaps far below a huge entropy_tol
  const State a = diag_state({0.6, 0.4});
  const State b = diag_state({0.6 + 1e-6, 0.4 - 1e-6});
  EquivalenceConfig<double> cfg;
  cfg.entropy_tol = 1e-3;
  CHECK(code_of([&] { test_theorem1_grid(a, b, cfg); }) == ErrorCode::WitnessInconsistency);
}

TEST_CASE("finite 2n-node test") {
  Rng rng(4);
  const State s = random_state<double>(3, rng);
  const State us = conjugate(s, random_unitary<double>(3, rng));
  const auto r = test_theorem2_nodes(s, us);
  CHECK(r.equivalent());
  CHECK(r.per_node_gaps.size() == 6);
  CHECK(r.per_node_gaps.back().first == 1.0);
  for (const auto& [lambda, gap] : r.per_node_gaps) CHECK(gap <= 1e-12);
  check_witness(r, s, us);

  EquivalenceConfig<double> cfg;
  cfg.nodes = {0.1, 0.2, 0.3};
  CHECK(code_of([&] { test_theorem2_nodes(s, us, cfg); }) == ErrorCode::BadNodeCount);
  cfg.nodes = {0.1, 0.2, 0.3, 0.3, 0.5, 0.6};
  CHECK(code_of([&] { test_theorem2_nodes(s, us, cfg); }) == ErrorCode::BadConfig);
  cfg.nodes = {0.5, 0.6, 0.7, 0.8, 0.9, 1.2};
  CHECK(code_of([&] { test_theorem2_nodes(s, us, cfg); }) == ErrorCode::BadConfig);
  CHECK(code_of([&] { test_theorem2_nodes(s, maximally_mixed<double>(2)); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("equal entropy at one node does not imply equivalence") {
  SUBCASE("n = 2: the bisection lands back on the reference spectrum") {
    // Binary entropy is injective on [1/2, 1], so equal S(1) forces equal spectra.
    RealVector<double> ref(2);
    ref << 0.9, 0.1;
    const auto sp = make_spectrum<double>(ref);
    const auto partner = equal_entropy_partner(sp, 1.0);
    CHECK(std::abs(entropy_of_spectrum(partner) - entropy_of_spectrum(sp)) <= 1e-12);
    CHECK(spectrum_distance(partner, sp) < 1e-12);
  }
  SUBCASE("n = 3 at lambda = 1") {
    RealVector<double> ref(3);
    ref << 0.9, 0.1, 0.0;
    const auto sp = make_spectrum<double>(ref);
    const auto partner = equal_entropy_partner(sp, 1.0);
    CHECK(std::abs(entropy_of_spectrum(partner) - entropy_of_spectrum(sp)) <= 1e-12);
    CHECK(spectrum_distance(partner, sp) > 1e-2);

    const State rho = diagonal_state(sp), sigma = diagonal_state(partner);
    // a one-node check sees no gap
    CHECK(entropy_gap_at(EntropyCurve<double>(sp), EntropyCurve<double>(partner), 1.0) <= 1e-12);
    const auto r = test_theorem2_nodes(rho, sigma);
    CHECK_FALSE(r.equivalent());
    int above = 0;
    for (const auto& [lambda, gap] : r.per_node_gaps) above += gap > 1e-9;
    CHECK(above >= 1);
  }
  SUBCASE("pure reference: a same-entropy partner at any node is the pure state itself") {
    // Pure states are the unique minimizers of the depolarized entropy.
    const auto sp = hermitian_spectrum(diag_state({1, 0, 0}));
    const auto partner = equal_entropy_partner(sp, 0.5);
    CHECK(spectrum_distance(sp, partner) < 1e-6);
  }
  SUBCASE("mixed reference against a same-entropy partner at lambda = 1/2") {
    const auto sp = hermitian_spectrum(diag_state({0.7, 0.3, 0}));
    const auto partner = equal_entropy_partner(sp, 0.5);
    CHECK(entropy_gap_at(EntropyCurve<double>(sp), EntropyCurve<double>(partner), 0.5) <= 1e-12);
    CHECK_FALSE(test_theorem2_nodes(diagonal_state(sp), diagonal_state(partner)).equivalent());
  }
}

TEST_CASE("methods agree and distinct pairs are rejected") {
  Rng rng(5);
  int distinct = 0;
  for (int k = 0; k < 100; ++k) {
    const Index n = 2 + k % 7;
    const State a = random_state<double>(n, rng);
    const State b = random_state<double>(n, rng);
    const bool far = spectrum_distance(hermitian_spectrum(a), hermitian_spectrum(b)) >= 1e-3;
    const auto r0 = test_spectral(a, b);
    const auto r1 = test_theorem1_grid(a, b);
    const auto r2 = test_theorem2_nodes(a, b);
    CHECK(r0.verdict == r1.verdict);
    CHECK(r0.verdict == r2.verdict);
    if (far) {
      ++distinct;
      CHECK_FALSE(r2.equivalent());
    }
  }
  CHECK(distinct > 90);
}

TEST_CASE("custom node sets") {
  Rng rng(6);
  const State a = random_state<double>(2, rng);
  const State b = random_state<double>(2, rng);
  EquivalenceConfig<double> cfg;
  cfg.nodes = {0.05, 0.1, 0.15, 0.2};
  const auto r = test_theorem2_nodes(a, b, cfg);
  CHECK_FALSE(r.equivalent());
  CHECK(r.per_node_gaps[0].first == 0.05);
}
