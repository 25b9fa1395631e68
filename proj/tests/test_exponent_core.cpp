#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "oracle_mp.hpp"
#include "qrgrad/exponent_core.hpp"

using namespace qrgrad;

namespace {

struct Frozen {
  double k, alpha1, alpha0, alpha2;
};

// 40-digit mpmath values, rounded to binary64.
constexpr Frozen kFrozen[] = {
    {0.1, 0.85762924841105072553, 0.86437930808770229295, 0.67255371783976444882},
    {0.3, 0.61130406421823189781, 0.62425743699958443666, 0.57283302943798304598},
    {0.5, 0.40407148348300872681, 0.41695546847271228157, 0.41168439698070429898},
    {0.7, 0.22607019236198361795, 0.2352215231577334062, 0.23485351505610647928},
    {0.9, 0.070699765510141280138, 0.074047397915587934837, 0.072025815309699647151},
};

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_CASE("distortion round trip") {
  for (double K : {1.0, 1.5, 3.0, 10.0, 1e6}) {
    const DistortionParams p = DistortionParams::from_K(K);
    CHECK(p.K() == doctest::Approx(K).epsilon(1e-15));
    CHECK(DistortionParams::from_k(p.k()).K() == doctest::Approx(K).epsilon(1e-9));
  }
  CHECK(DistortionParams::from_K(3.0).k() == 0.5);
  CHECK(distortion_from_k(0.5).K() == 3.0);
  CHECK_THROWS_AS(DistortionParams::from_k(1.0), std::domain_error);
  CHECK_THROWS_AS(DistortionParams::from_k(-0.1), std::domain_error);
  CHECK_THROWS_AS(DistortionParams::from_k(std::nan("")), std::domain_error);
  CHECK_THROWS_AS(DistortionParams::from_K(0.5), std::domain_error);
  CHECK_THROWS_AS(DistortionParams::from_K(INFINITY), std::domain_error);
}

TEST_CASE("elliptic constants") {
  const EllipticConstants c = kk_prime_constants(2.0, 6.0, 3.0);
  CHECK(c.K_out == 4.0);
  CHECK(c.K_prime == doctest::Approx(9.0 / 8.0));
  CHECK(kk_prime_constants(1.0, 1.0, 0.0).K_prime == 0.0);
  CHECK_THROWS_AS(kk_prime_constants(0.0, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(kk_prime_constants(2.0, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(kk_prime_constants(1.0, 2.0, -1.0), std::domain_error);
}

TEST_CASE("frozen closed forms") {
  for (const Frozen& f : kFrozen) {
    CAPTURE(f.k);
    const DistortionParams p = DistortionParams::from_k(f.k);
    CHECK(close_rel(alpha1(p), f.alpha1, 1e-14));
    CHECK(close_rel(alpha0(p), f.alpha0, 1e-14));
    CHECK(close_rel(alpha0_closed_form(f.k), f.alpha0, 1e-13));
    CHECK(close_rel(alpha2(p), f.alpha2, 1e-14));
    CHECK(close_rel(alpha_classical(p), (1.0 - f.k) / (1.0 + f.k), 1e-15));
  }
}

TEST_CASE("alpha at the left endpoint is alpha1") {
  double worst = 0.0;
  for (int i = 1; i <= 99; ++i) {
    const double k = i / 100.0;
    worst = std::max(worst, std::abs(alpha_of_t(k, 1.0 - k) - alpha1(DistortionParams::from_k(k))));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("alpha0 closed form equals alpha at t0") {
  for (int i = 1; i <= 99; ++i) {
    const double k = i / 100.0;
    CAPTURE(k);
    CHECK(std::abs(alpha0_closed_form(k) - alpha_of_t(k, t0_of(k))) < 1e-13);
    const double t0 = t0_of(k);
    CHECK(t0 > 1.0 - k);
    CHECK(t0 < 1.0 - k * k);
  }
}

TEST_CASE("alpha agrees with the 50-digit oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double k = 0.001 + 0.998 * unit(rng);
    const double lo = 1.0 - k;
    const double hi = 1.0 - k * k;
    const double t = lo + (hi - lo) * unit(rng);
    const double ref = oracle::to_d(oracle::alpha(oracle::mpf(k), oracle::mpf(t)));
    CAPTURE(k);
    CAPTURE(t);
    // 1 - k^2 - t cancels near the right endpoint, where t1 and alpha vanish;
    // allow that rounding error (d alpha / d t1 < 3).
    const double t1_ref = oracle::to_d(oracle::t1(oracle::mpf(k), oracle::mpf(t)));
    const double cancel = 1e-15 * t / ((1.0 - k * k) * (1.0 - t));
    CHECK(std::abs(alpha_of_t(k, t) - ref) <= 1e-13 * std::abs(ref) + 3.0 * cancel);
    CHECK(std::abs(t1_of(k, t) - t1_ref) <= 1e-14 * std::abs(t1_ref) + cancel);
  }
}

TEST_CASE("alpha2 and alpha1 against the oracle") {
  for (int i = 1; i <= 99; ++i) {
    const double k = i / 100.0;
    const DistortionParams p = DistortionParams::from_k(k);
    CHECK(close_rel(alpha1(p), oracle::to_d(oracle::alpha1(oracle::mpf(k))), 1e-13));
    CHECK(close_rel(alpha2(p), oracle::to_d(oracle::alpha2(oracle::mpf(k))), 1e-14));
  }
}

TEST_CASE("split evaluation") {
  const AlphaEvaluation e = evaluate_alpha(0.5, 0.6);
  CHECK(e.in_interval);
  CHECK_FALSE(e.exceeds_one);
  CHECK(e.split.t2 == 0.6);
  CHECK(e.split.S == doctest::Approx(e.split.t1 + 0.6));
  CHECK(e.split.P == doctest::Approx(e.split.t1 * 0.6));
  CHECK(TSplit::make(0.5, 0.6).in_lemma_interval());
  CHECK_FALSE(TSplit::make(0.5, 0.8).in_lemma_interval());

  // Outside the interval but with t1 > 0: allowed and flagged.
  const AlphaEvaluation out = evaluate_alpha(0.5, 0.3);
  CHECK_FALSE(out.in_interval);
  CHECK(out.alpha > 0.0);

  CHECK_THROWS_AS(evaluate_alpha(0.5, 0.75), std::domain_error);  // t1 = 0
  CHECK_THROWS_AS(evaluate_alpha(0.5, 0.9), std::domain_error);   // t1 < 0
  CHECK_THROWS_AS(t1_of(0.5, 1.0), std::domain_error);
}

TEST_CASE("split formula is stable for tiny products") {
  const double S = 1.0;
  const double P = 1e-20;
  const double a = alpha_from_split(S - 1e-20, 1e-20);
  CHECK(a > 0.0);
  CHECK(a == doctest::Approx(3.0 * P / S).epsilon(1e-6));
  CHECK(alpha_from_split(1.0, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("alpha1 limits") {
  CHECK(alpha1(DistortionParams::from_k(0.0)) == doctest::Approx(1.0));
  CHECK(alpha0(DistortionParams::from_k(0.0)) == 1.0);
  CHECK(alpha2(DistortionParams::from_k(0.0)) == doctest::Approx((std::sqrt(33.0) - 3.0) / 4.0));
}

TEST_CASE("alpha2 crossover") {
  const double root = alpha2_crossover(1e-10);
  CHECK(std::abs(root - 0.24212137354815673482) < 2e-10);
  CHECK(std::abs(root - 0.2422) < 5e-4);
  CHECK(alpha2(DistortionParams::from_k(root - 1e-6)) < (1.0 - root + 1e-6) / (1.0 + root - 1e-6));
  CHECK(alpha2(DistortionParams::from_k(root + 1e-6)) > (1.0 - root - 1e-6) / (1.0 + root + 1e-6));
  CHECK_THROWS_AS(alpha2_crossover(0.0), std::domain_error);
}
