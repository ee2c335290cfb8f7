#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "entrospec/random.hpp"
#include "entrospec/state.hpp"

using namespace entrospec;
using CMat = ComplexMatrix<double>;

namespace {

CMat diag(std::initializer_list<double> d) {
  RealVector<double> v(static_cast<Index>(d.size()));
  Index i = 0;
  for (double x : d) v(i++) = x;
  return v.cast<Complex<double>>().asDiagonal();
}

ErrorCode code_of(const CMat& m) {
  try {
    (void)validate_state(m);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected validation failure");
  return ErrorCode::ParseError;
}

}  // namespace

TEST_CASE("validate_state accepts the maximally mixed state") {
  const CMat m = CMat::Identity(3, 3) / 3.0;
  const auto s = validate_state(m);
  CHECK(s.dim() == 3);
  CHECK(max_abs(CMat(s.matrix() - m)) == 0.0);
}

TEST_CASE("validate_state names the violated invariant") {
  CHECK(code_of(diag({0.5, 0.6})) == ErrorCode::TraceNotOne);
  CHECK(code_of(diag({1.2, -0.2})) == ErrorCode::NotPositiveSemidefinite);

  CMat skew = diag({0.5, 0.5});
  skew(0, 1) = 0.1;
  CHECK(code_of(skew) == ErrorCode::NotHermitian);

  CHECK(code_of(CMat::Zero(2, 3)) == ErrorCode::NotSquare);
  CMat bad = diag({0.5, 0.5});
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK(code_of(bad) == ErrorCode::NonFinite);
}

TEST_CASE("validate_state stores the symmetrized matrix") {
  CMat m = diag({0.5, 0.5});
  m(0, 1) = {0.1, 1e-12};
  m(1, 0) = {0.1, 0.0};
  const auto s = validate_state(m);
  CHECK(s.matrix()(0, 1) == std::conj(s.matrix()(1, 0)));
  CHECK(std::imag(s.matrix()(0, 1)) == doctest::Approx(5e-13).epsilon(1e-6));
}

TEST_CASE("hermitian_spectrum examples") {
  SUBCASE("I/4") {
    const auto sp = hermitian_spectrum(maximally_mixed<double>(4));
    for (Index i = 0; i < 4; ++i) {
      CHECK(sp.values(i) == doctest::Approx(0.25).epsilon(1e-15));
      CHECK(std::abs(sp.shifted(i)) < 1e-15);
    }
  }
  SUBCASE("already diagonal") {
    const auto sp = hermitian_spectrum(validate_state(diag({0.25, 0.75})));
    CHECK(sp.values(0) == 0.75);
    CHECK(sp.values(1) == 0.25);
    CHECK(sp.shifted(0) == 0.25);
    CHECK(sp.shifted(1) == -0.25);
  }
  SUBCASE("2x2 with off-diagonal coupling") {
    // lambda^2 - lambda + 3/16 = 0 -> 3/4, 1/4
    CMat m(2, 2);
    m << 0.5, 0.25, 0.25, 0.5;
    const auto sp = hermitian_spectrum(validate_state(m));
    CHECK(std::abs(sp.values(0) - 0.75) < 1e-15);
    CHECK(std::abs(sp.values(1) - 0.25) < 1e-15);
  }
}

TEST_CASE("slightly negative eigenvalues are clamped and renormalized") {
  const auto s = validate_state(diag({1.0 + 5e-10, -5e-10}));
  const auto sp = hermitian_spectrum(s);
  CHECK(sp.values(1) == 0.0);
  CHECK(sp.values.sum() == 1.0);
}

TEST_CASE("Jacobi eigensolver against Eigen's self-adjoint solver") {
  Rng rng(2024);
  for (Index n = 1; n <= 16; ++n) {
    CMat g = ginibre<double>(n, n, rng);
    const CMat h = g + g.adjoint();
    const auto eig = hermitian_eigen(h);
    CHECK(max_abs(CMat(eig.reconstruct() - h)) < 1e-10 * std::max(1.0, max_abs(h)));
    CHECK(unitarity_residual(eig.vectors) < 1e-12);

    Eigen::SelfAdjointEigenSolver<CMat> ref(h, Eigen::EigenvaluesOnly);
    RealVector<double> expected = ref.eigenvalues().reverse();
    CHECK(max_abs(RealVector<double>(eig.values - expected)) < 1e-10 * std::max(1.0, max_abs(h)));
    for (Index i = 1; i < n; ++i) CHECK(eig.values(i - 1) >= eig.values(i));
  }
}

TEST_CASE("Jacobi reports NoConvergence when the sweep budget is zero") {
  CMat m(2, 2);
  m << 0.5, 0.25, 0.25, 0.5;
  ToleranceConfig tols;
  tols.max_sweeps = 0;
  CHECK_THROWS_AS(hermitian_eigen(m, tols), Error);
  try {
    (void)hermitian_eigen(m, tols);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
  }
}

TEST_CASE("random_state") {
  const auto one = random_state<double>(1, 99);
  CHECK(one.dim() == 1);
  CHECK(one.matrix()(0, 0) == Complex<double>(1.0));

  const auto a = random_state<double>(4, 42);
  const auto b = random_state<double>(4, 42);
  CHECK(max_abs(CMat(a.matrix() - b.matrix())) == 0.0);
  CHECK_NOTHROW((void)validate_state(a.matrix()));

  Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    const auto s = random_state<double>(1 + k % 12, rng);
    CHECK_NOTHROW((void)validate_state(s.matrix()));
  }
}

TEST_CASE("random_unitary") {
  const CMat u1 = random_unitary<double>(1, 3);
  CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) < 1e-15);

  const CMat u = random_unitary<double>(3, 7);
  CHECK(unitarity_residual(u) <= 1e-12);
  CHECK(max_abs(CMat(u - random_unitary<double>(3, 7))) == 0.0);

  const auto mixed = maximally_mixed<double>(3);
  CHECK(max_abs(CMat(conjugate(mixed, u).matrix() - mixed.matrix())) < 1e-15);

  Rng rng(11);
  for (Index n = 1; n <= 12; ++n) CHECK(unitarity_residual(random_unitary<double>(n, rng)) <= 1e-12);
}

TEST_CASE("depolarize") {
  const auto s = random_state<double>(3, 1);
  CHECK(max_abs(CMat(depolarize(s, 0.0).matrix() - maximally_mixed<double>(3).matrix())) < 1e-16);
  CHECK(max_abs(CMat(depolarize(s, 1.0).matrix() - s.matrix())) == 0.0);

  const auto pure = validate_state(diag({1.0, 0.0}));
  const CMat half = depolarize(pure, 0.5).matrix();
  CHECK(max_abs(CMat(half - diag({0.75, 0.25}))) == 0.0);

  CHECK_THROWS_AS(depolarize(s, 1.5), Error);
  CHECK_THROWS_AS(depolarize(s, -0.1), Error);
}

TEST_CASE("spectrum of the depolarized state is the affine image of the spectrum") {
  Rng rng(8);
  for (int k = 0; k < 30; ++k) {
    const Index n = 1 + k % 8;
    const double lambda = std::uniform_real_distribution<double>(0, 1)(rng);
    const auto s = random_state<double>(n, rng);
    const RealVector<double> x = state_eigen(s).values;
    const RealVector<double> y = state_eigen(depolarize(s, lambda)).values;
    // lambda >= 0 preserves the descending order
    const RealVector<double> expected = lambda * x.array() + (1 - lambda) / double(n);
    CHECK(max_abs(RealVector<double>(y - expected)) <= 1e-10);
  }
}

TEST_CASE("spectrum is invariant under unitary conjugation") {
  Rng rng(9);
  for (int k = 0; k < 30; ++k) {
    const Index n = 1 + k % 8;
    const auto s = random_state<double>(n, rng);
    const auto u = random_unitary<double>(n, rng);
    const auto a = hermitian_spectrum(s).values;
    const auto b = hermitian_spectrum(conjugate(s, u)).values;
    CHECK(max_abs(RealVector<double>(a - b)) <= 1e-9);
  }
}

TEST_CASE("core templates instantiate for long double") {
  const auto s = random_state<long double>(3, 4);
  const auto sp = hermitian_spectrum(s);
  CHECK(std::abs(static_cast<double>(sp.values.sum()) - 1.0) < 1e-15);
  const auto u = random_unitary<long double>(3, 4);
  CHECK(static_cast<double>(unitarity_residual(u)) < 1e-15);
}
