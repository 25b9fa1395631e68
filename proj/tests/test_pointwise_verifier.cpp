#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "qrgrad/exponent_core.hpp"
#include "qrgrad/optimal_exponent.hpp"
#include "qrgrad/pointwise_verifier.hpp"

using namespace qrgrad;

TEST_CASE("pqs configuration reproduces mu and both Jacobian forms") {
  for (double mu : {0.0, 0.2, 0.5, 0.9}) {
    for (double sigma : {0.3, 1.0, 2.5, 4.0, 5.9}) {
      CAPTURE(mu);
      CAPTURE(sigma);
      const PQSSample x = pqs_from_polar(mu, sigma, 1.3);
      CHECK(x.fzbar.imag() == 0.0);
      CHECK(std::abs(beltrami_quotient(x) - mu) < 1e-14);
      CHECK(jacobian_two_way_residual(x) < 1e-14);
      CHECK(lemma1_identity_check(x) < 1e-13);
      CHECK(beltrami_residual(x) < 1e-13);
    }
  }
  CHECK_THROWS_AS(pqs_from_polar(0.5, std::acos(0.5)), std::domain_error);
  CHECK_THROWS_AS(pqs_from_polar(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(pqs_from_polar(-0.1, 1.0), std::domain_error);
}

TEST_CASE("hand-computed pqs sample") {
  // mu = 0, varsigma = 0: s = -p, q = 0, f_z = -p, f_zbar = 0.
  const PQSSample x = pqs_from_polar(0.0, 0.0, 1.0);
  CHECK(x.s == doctest::Approx(-1.0));
  CHECK(std::abs(x.q) < 1e-15);
  CHECK(std::abs(x.fzbar) < 1e-15);
  CHECK(x.jac == doctest::Approx(1.0));
}

TEST_CASE("lower bound holds across the interval and is sharp at |mu| = k") {
  for (double k : {0.1, 0.5, 0.9}) {
    for (int j = 1; j <= 8; ++j) {
      const double t = 1.0 - k + j / 9.0 * (k - k * k);
      CAPTURE(k);
      CAPTURE(t);
      const MarginReport m = lemma2_margin(k, t);
      CHECK(m.violations == 0);
      CHECK(m.samples > 32000);
      CHECK(std::abs(m.infimum_at_k) < 1e-4);
      CHECK(m.min_margin > -1e-12);
    }
  }
}

TEST_CASE("inflated t1 breaks the lower bound") {
  const double k = 0.5;
  const double t = 0.6;
  const MarginReport m = lemma2_margin_split(k, 1.05 * t1_of(k, t), t);
  CHECK(m.violations > 0);
  CHECK(m.min_margin < 0.0);
  CHECK_THROWS_AS(lemma2_margin_split(k, 0.0, t), std::domain_error);
  CHECK_THROWS_AS(lemma2_margin_split(k, 0.1, t, GridDims{16, 256}), std::domain_error);
}

TEST_CASE("discriminant condition boundary") {
  const double k = 0.4;
  const double t2 = 0.7;
  const double edge = t1_of(k, t2);
  CHECK(discriminant_condition(k, edge, t2));
  CHECK(discriminant_condition(k, 0.5 * edge, t2));
  CHECK_FALSE(discriminant_condition(k, std::nextafter(edge, 1.0), t2));
}

TEST_CASE("reduced quadratic is nonnegative at C = 2 alpha*") {
  for (int i = 1; i <= 9; ++i) {
    const double k = i / 10.0;
    const CriticalPoint cp = maximize_alpha(k);
    const double t1 = t1_of(k, cp.t_star);
    const double t2 = cp.t_star;
    const double C = 2.0 * cp.alpha_star;
    for (int n = 2; n <= 64; ++n) {
      CAPTURE(k);
      CAPTURE(n);
      CHECK(reduced_quadratic_discriminant(n, t1, t2, C) <= 1e-12);
      CHECK(reduced_quadratic_min(n, t1, t2, C).value >= -1e-12);
    }
    // n = 2 is the binding mode: its minimum touches zero.
    CHECK(std::abs(reduced_quadratic_min(2, t1, t2, C).value) < 1e-10);
    CHECK(reduced_quadratic_min(2, t1, t2, 1.05 * C).value < -1e-4);
    CHECK(reduced_quadratic_min(3, t1, t2, 1.02 * C).value > 0.0);
  }
}

TEST_CASE("coefficient inequality matches the reduced quadratic") {
  const double t1 = 0.3, t2 = 0.55, C = 0.8;
  for (int n : {2, 3, 7}) {
    for (double zeta : {-1.5, -0.2, 0.0, 0.4, 2.0}) {
      const CoeffPairSample x{n, 1.0, zeta};
      CHECK(discrete_coeff_margin(t1, t2, x, C) ==
            doctest::Approx(reduced_quadratic_check(zeta, n, t1, t2, C)).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(discrete_coeff_margin(t1, t2, CoeffPairSample{1, 1.0, 0.0}, C), std::domain_error);
  CHECK_THROWS_AS(reduced_quadratic_check(0.0, 1, t1, t2, C), std::domain_error);
}

TEST_CASE("constant-coefficient gradients obey the Beltrami bound") {
  for (double ratio : {1.0, 2.0, 3.0, 9.0}) {
    const double bound = (ratio - 1.0) / (ratio + 1.0);
    for (double b : {0.0, 0.3, 1.0, 5.0}) {
      const ConstantCoeffGradient g = constant_coeff_gradient(ratio, 1.0, 1.0, b);
      CHECK(g.mu_abs <= bound + 1e-15);
    }
    CHECK(constant_coeff_gradient(ratio, 1.0, 1.0, 0.0).mu_abs == doctest::Approx(bound));
  }
  CHECK_THROWS_AS(constant_coeff_gradient(3.0, 1.0, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(constant_coeff_gradient(0.5, 1.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("identity sweep") {
  const PointwiseSweepReport r = pointwise_identity_sweep(20000, 0.95, 42);
  CHECK(r.samples > 19000);
  CHECK(r.max_lemma1_residual < 1e-10);
  CHECK(r.max_beltrami_residual < 1e-10);
  CHECK(r.max_jacobian_residual < 1e-10);
  CHECK(r.max_quotient_error < 1e-10);
  CHECK_THROWS_AS(pointwise_identity_sweep(10, 1.0, 1), std::domain_error);
}

TEST_CASE("discrete sweep: no violations, witness under inflation") {
  DiscreteSweepConfig cfg;
  cfg.samples_per_k = 20000;
  for (const auto& row : discrete_inequality_sweep(cfg)) {
    CHECK(row.violations == 0);
    CHECK(row.min_margin > -1e-12);
    CHECK(row.C == doctest::Approx(2.0 * row.alpha_star));
  }
  cfg.c_scale = 1.05;
  long violations = 0;
  for (const auto& row : discrete_inequality_sweep(cfg)) {
    violations += row.violations;
    REQUIRE(row.witness);
    CHECK(row.witness->sample.n == 2);
  }
  CHECK(violations > 0);
}

TEST_CASE("discrete sweep is independent of the worker count") {
  DiscreteSweepConfig cfg;
  cfg.samples_per_k = 5000;
  cfg.k_values = {0.3, 0.7};
  ::setenv("HB_THREADS", "1", 1);
  const auto serial = discrete_inequality_sweep(cfg);
  ::setenv("HB_THREADS", "5", 1);
  const auto threaded = discrete_inequality_sweep(cfg);
  ::unsetenv("HB_THREADS");
  REQUIRE(serial.size() == threaded.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].samples == threaded[i].samples);
    CHECK(serial[i].min_margin == threaded[i].min_margin);
  }
  cfg.seed = 7;
  const auto other = discrete_inequality_sweep(cfg);
  CHECK(other[0].violations == 0);
}
