#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "oracle_mp.hpp"
#include "qrgrad/optimal_exponent.hpp"

using namespace qrgrad;

namespace {

struct FrozenOptimum {
  double k, t_star, alpha_star;
};

// mpmath, 40 digits, root of d alpha / dt bracketed in (1-k, 1-k^2).
constexpr FrozenOptimum kOptima[] = {
    {0.1, 0.92565436345005010723, 0.86451528586469104238},
    {0.3, 0.75694212076870401158, 0.62435715758641470888},
    {0.5, 0.56475787650642452868, 0.41697442836238843044},
    {0.7, 0.35212699337473306454, 0.2352220694799882128},
    {0.9, 0.1214600656671826909, 0.074056273516763268571},
};

}  // namespace

TEST_CASE("maximizer matches frozen optima") {
  for (const FrozenOptimum& f : kOptima) {
    CAPTURE(f.k);
    const CriticalPoint cp = maximize_alpha(f.k);
    CHECK(std::abs(cp.t_star - f.t_star) < 1e-11);
    CHECK(std::abs(cp.alpha_star - f.alpha_star) < 1e-15);
    CHECK(cp.quartic_root_found);
    CHECK(cp.agreement < 1e-8);
    CHECK(cp.stationarity.corrected < 1e-8);
  }
}

TEST_CASE("maximizer matches the 50-digit ternary search") {
  for (int i = 1; i <= 19; ++i) {
    const double k = i / 20.0;
    CAPTURE(k);
    const oracle::mpf ts = oracle::t_star(oracle::mpf(k));
    const CriticalPoint cp = maximize_alpha(k);
    CHECK(std::abs(cp.t_star - oracle::to_d(ts)) < 1e-10);
    CHECK(std::abs(cp.alpha_star - oracle::to_d(oracle::alpha(oracle::mpf(k), ts))) < 1e-15);
  }
}

TEST_CASE("oracle t_star is a root of the quartic") {
  for (double k : {0.2, 0.5, 0.8}) {
    const oracle::mpf K(k);
    const oracle::mpf ts = oracle::t_star(K);
    CHECK(abs(oracle::Nk(K, ts)) < oracle::mpf("1e-20"));
  }
}

TEST_CASE("quartic coefficients against expanded forms") {
  for (double k : {0.1, 0.37, 0.5, 0.93}) {
    const QuarticNk q = quartic_coeffs(k);
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0, 1.3}) {
      const double ref = oracle::to_d(oracle::Nk(oracle::mpf(k), oracle::mpf(t)));
      CHECK(eval_Nk(q, t) == doctest::Approx(ref).epsilon(1e-13).scale(q.max_abs_coeff()));
    }
    const double t = 0.6;
    const double h = 1e-6;
    CHECK(eval_Nk_derivative(q, t) ==
          doctest::Approx((eval_Nk(q, t + h) - eval_Nk(q, t - h)) / (2 * h)).epsilon(1e-8));
  }
  const QuarticNk q0 = quartic_coeffs(0.5);
  CHECK(q0.c0 == doctest::Approx(16.0 * 0.75 * 0.75 * 0.75));
  CHECK(q0.coeffs()[0] == q0.c4);
}

TEST_CASE("quartic roots are inside the interval and one is the maximizer") {
  for (int i = 1; i <= 9; ++i) {
    const double k = i / 10.0;
    const QuarticNk q = quartic_coeffs(k);
    const auto roots = quartic_roots_in_interval(q);
    REQUIRE_FALSE(roots.empty());
    for (double r : roots) {
      CHECK(r > 1.0 - k);
      CHECK(r < 1.0 - k * k);
      CHECK(std::abs(eval_Nk(q, r)) / q.max_abs_coeff() < 1e-12);
    }
  }
}

TEST_CASE("S', P' and alpha' against the oracle") {
  for (double k : {0.2, 0.5, 0.8}) {
    const double lo = 1.0 - k, hi = 1.0 - k * k;
    for (int j = 1; j < 10; ++j) {
      const double t = lo + (hi - lo) * j / 10.0;
      const oracle::mpf K(k), T(t), h("1e-20");
      auto S = [&](const oracle::mpf& u) { return oracle::t1(K, u) + u; };
      auto P = [&](const oracle::mpf& u) { return oracle::t1(K, u) * u; };
      CHECK(S_prime(k, t) == doctest::Approx(oracle::to_d((S(T + h) - S(T - h)) / (2 * h))).epsilon(1e-12));
      CHECK(P_prime(k, t) == doctest::Approx(oracle::to_d((P(T + h) - P(T - h)) / (2 * h))).epsilon(1e-12));
      CHECK(alpha_prime(k, t) ==
            doctest::Approx(oracle::to_d(oracle::alpha_prime(K, T))).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("alpha' at the endpoints") {
  for (double k : {0.3, 0.5, 0.7}) {
    // Right endpoint: the true derivative is -3/k^2 (twice it is -6/k^2).
    const double right = alpha_prime(k, 1.0 - k * k - 1e-8);
    CHECK(right == doctest::Approx(-3.0 / (k * k)).epsilon(1e-5));
    CHECK(2.0 * right == doctest::Approx(-6.0 / (k * k)).epsilon(1e-5));
    CHECK(alpha_prime(k, 1.0 - k) > 0.0);
  }
  CHECK(alpha_prime(0.3, 0.7) == doctest::Approx(0.40798542).epsilon(1e-7));
  CHECK(alpha_prime(0.5, 0.5) == doctest::Approx(0.36304424).epsilon(1e-7));
  CHECK(alpha_prime(0.7, 0.3) == doctest::Approx(0.32666163).epsilon(1e-7));
}

TEST_CASE("concavity certificate") {
  for (int i = 1; i <= 9; ++i) {
    const double k = i / 10.0;
    CAPTURE(k);
    const ConcavityCertificate c = certify_concavity(k, 1000);
    CHECK(c.holds());
    const PhiCoefficients phi = phi_coefficients(k);
    const double k2 = k * k;
    CHECK(phi.delta == doctest::Approx(80.0 * k2 * k2 * (1 - k2) * (1 - k2)).epsilon(1e-10));
    CHECK(phi.x1 <= phi.x2);
    CHECK(std::abs(phi(phi.x1)) < 1e-9 * phi.c);
  }
  CHECK_THROWS_AS(certify_concavity(0.0, 100), std::domain_error);
  CHECK_THROWS_AS(certify_concavity(0.5, 8), std::domain_error);
}

TEST_CASE("stationarity forms") {
  const CriticalPoint cp = maximize_alpha(0.5);
  // The squared form with 3 P'^2 vanishes at t*, the one with 3 P' does not.
  CHECK(cp.stationarity.corrected < 1e-10);
  CHECK(cp.stationarity.printed > 0.1);
}

TEST_CASE("maximizer input validation") {
  CHECK_THROWS_AS(maximize_alpha(0.0), std::domain_error);
  CHECK_THROWS_AS(maximize_alpha(1.0), std::domain_error);
  CHECK_THROWS_AS(maximize_alpha(0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(maximize_alpha(0.5, -1.0), std::domain_error);
}

TEST_CASE("report ordering chain on the 99-point grid") {
  for (int i = 1; i <= 99; ++i) {
    const double k = i / 100.0;
    CAPTURE(k);
    const ExponentReport r = exponent_report(DistortionParams::from_k(k));
    CHECK(r.alpha_star - r.alpha0 > 1e-12);
    CHECK(r.alpha0 - r.alpha1 > 1e-12);
    CHECK(r.alpha1 - r.alpha_classical > 1e-12);
    CHECK(r.t_star > 1.0 - k);
    CHECK(r.t_star < 1.0 - k * k);
  }
}

TEST_CASE("conformal limit") {
  const ExponentReport r = exponent_report(DistortionParams::from_k(0.0));
  CHECK(r.alpha_classical == 1.0);
  CHECK(r.alpha1 == 1.0);
  CHECK(r.alpha0 == 1.0);
  CHECK(r.alpha_star == 1.0);
  CHECK(r.t_star == 1.0);
}

TEST_CASE("optimum gain over alpha0 stays positive near k = 0") {
  const ExponentReport r = exponent_report(DistortionParams::from_k(0.01));
  const oracle::mpf k("0.01");
  const double gap = oracle::to_d(oracle::alpha(k, oracle::t_star(k)) - oracle::alpha(k, oracle::t0(k)));
  CHECK(gap > 1e-5);
  CHECK(r.alpha_star - r.alpha0 == doctest::Approx(gap).epsilon(1e-6));
}
