#pragma once

// Closed-form Hölder exponents for K-quasiregular gradient mappings.
//
// Every function here is a pure function of its arguments; all
// evaluation is in binary64.

#include <stdexcept>

namespace qrgrad {

/// Beltrami bound k and distortion K, tied by K = (1+k)/(1-k).
class DistortionParams {
 public:
  /// Throws std::domain_error unless 0 <= k < 1.
  static DistortionParams from_k(double k);
  /// Throws std::domain_error unless K >= 1 and finite.
  static DistortionParams from_K(double K);

  double k() const noexcept { return k_; }
  double K() const noexcept { return K_; }

 private:
  DistortionParams(double k, double K) : k_(k), K_(K) {}
  double k_;
  double K_;
};

DistortionParams distortion_from_k(double k);

/// Summary constants of a uniformly elliptic operator with right-hand side g.
struct EllipticConstants {
  double lambda = 1.0;   // min eigenvalue
  double Lambda = 1.0;   // max eigenvalue
  double g_sup = 0.0;    // sup norm of g
  double K_out = 2.0;    // 1 + Lambda/lambda
  double K_prime = 0.0;  // g_sup^2 / (2 lambda^2)
};

/// Throws std::domain_error if lambda <= 0, Lambda < lambda or g_sup < 0.
EllipticConstants kk_prime_constants(double lambda, double Lambda, double g_sup);

/// A point t of the one-parameter family together with the induced split
/// (t1, t2 = t) and the symmetric functions S = t1 + t2, P = t1 * t2.
struct TSplit {
  double k = 0.0;
  double t = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double S = 0.0;
  double P = 0.0;

  static TSplit make(double k, double t);
  /// True iff 1-k < t < 1-k^2.
  bool in_lemma_interval() const noexcept;
};

/// t1 = (1-k^2-t) t / ((1-k^2)(1-t)). Throws std::domain_error at t = 1.
double t1_of(double k, double t);

/// Exponent attached to an arbitrary admissible split:
/// (sqrt(S^2 + 12P) - S) / 2, evaluated in the rationalized form
/// 6P / (sqrt(S^2 + 12P) + S) to avoid cancellation when P << S^2.
double alpha_from_split(double t1, double t2);

struct AlphaEvaluation {
  TSplit split;
  double alpha = 0.0;
  bool in_interval = false;  // t inside (1-k, 1-k^2)
  bool exceeds_one = false;  // alpha > 1, outside the Hölder range
};

/// alpha(t) with diagnostics. Accepts any t with t1 > 0 and flags usage
/// outside (1-k, 1-k^2). Throws std::domain_error when t1 <= 0 or t = 1.
AlphaEvaluation evaluate_alpha(double k, double t);
double alpha_of_t(double k, double t);

double alpha_classical(const DistortionParams& params);
double alpha1(const DistortionParams& params);
/// Explicit exponent at t0 = (1-k)(1 + k/4). The typeset closed form is
/// used unless it disagrees with alpha_of_t(k, t0) by more than 1e-10.
double alpha0(const DistortionParams& params);
double alpha0_closed_form(double k);
double t0_of(double k);
double alpha2(const DistortionParams& params);
/// Root of alpha2(k) = 1/K in (0, 1), by bisection to width tol.
double alpha2_crossover(double tol = 1e-10);

/// Exponents for one k, from the classical 1/K up to the optimum.
struct ExponentReport {
  double k = 0.0;
  double alpha_classical = 1.0;
  double alpha1 = 1.0;
  double alpha0 = 1.0;
  double alpha2 = 1.0;
  double alpha_star = 1.0;
  double t_star = 1.0;
};

}  // namespace qrgrad
