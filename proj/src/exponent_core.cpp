#include "qrgrad/exponent_core.hpp"

#include <cmath>
#include <string>

namespace qrgrad {

namespace {

void require_k(double k) {
  if (!(k >= 0.0 && k < 1.0)) {
    throw std::domain_error("Beltrami bound k must lie in [0, 1), got " + std::to_string(k));
  }
}

}  // namespace

DistortionParams DistortionParams::from_k(double k) {
  require_k(k);
  return DistortionParams(k, (1.0 + k) / (1.0 - k));
}

DistortionParams DistortionParams::from_K(double K) {
  if (!(K >= 1.0) || !std::isfinite(K)) {
    throw std::domain_error("distortion K must be finite and >= 1, got " + std::to_string(K));
  }
  return DistortionParams((K - 1.0) / (K + 1.0), K);
}

DistortionParams distortion_from_k(double k) { return DistortionParams::from_k(k); }

EllipticConstants kk_prime_constants(double lambda, double Lambda, double g_sup) {
  if (!(lambda > 0.0) || !(Lambda >= lambda) || !std::isfinite(Lambda)) {
    throw std::domain_error("ellipticity constants need 0 < lambda <= Lambda");
  }
  if (!(g_sup >= 0.0)) {
    throw std::domain_error("g_sup must be non-negative");
  }
  EllipticConstants c;
  c.lambda = lambda;
  c.Lambda = Lambda;
  c.g_sup = g_sup;
  c.K_out = 1.0 + Lambda / lambda;
  c.K_prime = g_sup * g_sup / (2.0 * lambda * lambda);
  return c;
}

double t1_of(double k, double t) {
  if (t == 1.0) {
    throw std::domain_error("t1(k, t) is singular at t = 1");
  }
  const double k2 = k * k;
  return ((1.0 - k2 - t) * t) / ((1.0 - k2) * (1.0 - t));
}

TSplit TSplit::make(double k, double t) {
  TSplit s;
  s.k = k;
  s.t = t;
  s.t1 = t1_of(k, t);
  s.t2 = t;
  s.S = s.t1 + s.t2;
  s.P = s.t1 * s.t2;
  return s;
}

bool TSplit::in_lemma_interval() const noexcept {
  return t > 1.0 - k && t < 1.0 - k * k;
}

double alpha_from_split(double t1, double t2) {
  const double S = t1 + t2;
  const double P = t1 * t2;
  return 6.0 * P / (std::sqrt(S * S + 12.0 * P) + S);
}

AlphaEvaluation evaluate_alpha(double k, double t) {
  require_k(k);
  AlphaEvaluation e;
  e.split = TSplit::make(k, t);
  if (!(e.split.t1 > 0.0) || !(t > 0.0)) {
    throw std::domain_error("alpha(t) needs t1 > 0, i.e. 0 < t < 1 - k^2");
  }
  e.alpha = alpha_from_split(e.split.t1, e.split.t2);
  e.in_interval = e.split.in_lemma_interval();
  e.exceeds_one = e.alpha > 1.0;
  return e;
}

double alpha_of_t(double k, double t) { return evaluate_alpha(k, t).alpha; }

double alpha_classical(const DistortionParams& params) {
  const double k = params.k();
  return (1.0 - k) / (1.0 + k);
}

double alpha1(const DistortionParams& params) {
  const double k = params.k();
  return (1.0 - k) * (std::sqrt(k * k + 16.0 * k + 16.0) - k - 2.0) / (2.0 * (1.0 + k));
}

double t0_of(double k) { return (1.0 - k) * (1.0 + 0.25 * k); }

double alpha0_closed_form(double k) {
  const double u = k * (4.0 + k);
  const double root = std::sqrt(144.0 + u * (48.0 + u));
  const double first = (1.0 - k) * (4.0 + k) * root / ((1.0 + k) * (3.0 + k));
  const double last = (21.0 + 3.0 * k) / ((3.0 + k) * (1.0 + k));
  return (first + k * (3.0 + k) - last - 1.0) / 8.0;
}

double alpha0(const DistortionParams& params) {
  const double k = params.k();
  if (k == 0.0) {
    return 1.0;
  }
  const double literal = alpha0_closed_form(k);
  const double composed = alpha_of_t(k, t0_of(k));
  return std::abs(literal - composed) > 1e-10 ? composed : literal;
}

double alpha2(const DistortionParams& params) {
  const double k2 = params.k() * params.k();
  return 0.25 * (std::sqrt(33.0) - 3.0) * (1.0 - k2) / (1.0 + k2);
}

double alpha2_crossover(double tol) {
  if (!(tol > 0.0)) {
    throw std::domain_error("tol must be positive");
  }
  auto gap = [](double k) { return alpha2(DistortionParams::from_k(k)) - (1.0 - k) / (1.0 + k); };
  double lo = 0.0;
  double hi = 0.99;
  if (!(gap(lo) < 0.0 && gap(hi) > 0.0)) {
    throw std::logic_error("alpha2 crossover is not bracketed");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qrgrad
