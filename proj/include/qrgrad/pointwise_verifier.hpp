#pragma once

// Pointwise identities and inequalities behind the improved exponent:
// the p, q, s representation of the Jacobian, the lower bound
// J_f >= t1 p^2 + t2 q^2, the Fourier-coefficient inequality that turns
// it into a Hölder exponent, and the constant-coefficient Beltrami bound.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "qrgrad/parallel.hpp"

namespace qrgrad {

using cplx = std::complex<double>;

/// One pointwise configuration, parameterized by |mu| and varsigma = xi - 2 theta,
/// with theta fixed to 0.
struct PQSSample {
  double mu_abs = 0.0;
  double varsigma = 0.0;
  double p = 1.0;
  double q = 0.0;
  double s = 0.0;
  cplx fz;
  cplx fzbar;  // imaginary part is zero by construction
  double jac = 0.0;
};

/// Throws std::domain_error when |cos(varsigma) - mu_abs| <= 1e-12 or
/// mu_abs is outside [0, 1).
PQSSample pqs_from_polar(double mu_abs, double varsigma, double p = 1.0);

/// |J_f - (1-|mu|^2)/(1+|mu|^2) (q^2 + (p^2+s^2)/2)| / max(1, |J_f|).
double lemma1_identity_check(const PQSSample& sample);
/// |(s+p)^2 - |mu|^2 ((s-p)^2 + 4q^2)| relative to the larger side.
double beltrami_residual(const PQSSample& sample);
/// |(q^2 - p s) - (|fz|^2 - |fzbar|^2)| / max(1, |fz|^2).
double jacobian_two_way_residual(const PQSSample& sample);
/// |fzbar / fz|, which must reproduce mu_abs.
double beltrami_quotient(const PQSSample& sample);

struct GridDims {
  int n_mu = 128;
  int n_sigma = 256;
};

struct MarginReport {
  double min_margin = 0.0;
  double argmin_mu = 0.0;
  double argmin_sigma = 0.0;
  long samples = 0;
  long violations = 0;
  double min_margin_at_k = 0.0;  // grid minimum on the circle |mu| = k
  double infimum_at_k = 0.0;     // refined by 1-D search around the grid minimum
};

/// Sweeps |mu| in [0, k] and varsigma in [0, 2 pi) on a uniform grid and
/// records (J_f - t1 p^2 - t2 q^2) / p^2. Nodes within 1e-6 of the singular
/// directions cos(varsigma) = |mu| are skipped. A margin below
/// -1e-12 * max(1, J_f/p^2) counts as a violation.
MarginReport lemma2_margin(double k, double t, GridDims grid = {});
/// Same sweep for an arbitrary split (t1, t2). Throws std::domain_error
/// when t1 <= 0 or the grid is smaller than 32 in either direction.
MarginReport lemma2_margin_split(double k, double t1, double t2, GridDims grid = {});

/// t1 <= (1 - t2 - k^2) t2 / ((1 - t2)(1 - k^2)).
bool discriminant_condition(double k, double t1, double t2);

struct CoeffPairSample {
  int n = 2;
  cplx d_plus;   // d_{n-1}
  cplx d_minus;  // d_{-n-1}
};

/// LHS - RHS of
///   t1 |d+ + conj(d-)|^2 + t2 |d+ - conj(d-)|^2 >= C (|d+|^2/(n-1) - |d-|^2/(n+1)).
double discrete_coeff_margin(double t1, double t2, const CoeffPairSample& sample, double C);
/// Same with (t1, t2) induced by t. Throws std::domain_error when n < 2.
double discrete_coeff_inequality(double k, double t, const CoeffPairSample& sample, double C);
/// max(1, LHS, |RHS|), the scale used for violation thresholds.
double discrete_coeff_scale(double t1, double t2, const CoeffPairSample& sample, double C);

/// (t1 + t2 + C/(n+1)) zeta^2 + 2 (t1 - t2) zeta + (t1 + t2 - C/(n-1)).
double reduced_quadratic_check(double zeta, int n, double t1, double t2, double C);
/// Discriminant 4(t1-t2)^2 - 4(t1+t2+C/(n+1))(t1+t2-C/(n-1)).
double reduced_quadratic_discriminant(int n, double t1, double t2, double C);
/// Minimum of the reduced quadratic over real zeta, and its location.
struct QuadraticMinimum {
  double zeta = 0.0;
  double value = 0.0;
};
QuadraticMinimum reduced_quadratic_min(int n, double t1, double t2, double C);

struct ConstantCoeffGradient {
  cplx fz;
  double fzbar = 0.0;
  double mu_abs = 0.0;
};

/// Derivatives of f = phi_z for phi with Hessian [[a, b], [b, -m a]],
/// m = Lambda/lambda, the general solution of Lambda phi_xx + lambda phi_yy = 0.
/// Throws std::domain_error when a = b = 0 or Lambda < lambda or lambda <= 0.
ConstantCoeffGradient constant_coeff_gradient(double Lambda, double lambda, double a, double b);

// --- Monte Carlo suites -----------------------------------------------------

struct PointwiseSweepReport {
  long samples = 0;
  double max_lemma1_residual = 0.0;
  double max_beltrami_residual = 0.0;
  double max_jacobian_residual = 0.0;
  double max_quotient_error = 0.0;  // max ||fzbar/fz| - mu_abs|
  double worst_mu = 0.0;
  double worst_sigma = 0.0;
};

/// Random (|mu|, varsigma) with |mu| uniform on [0, mu_max], varsigma
/// uniform on [0, 2 pi), p uniform on [-2, 2] away from zero.
PointwiseSweepReport pointwise_identity_sweep(long samples, double mu_max, std::uint64_t seed);

struct DiscreteSweepConfig {
  std::vector<double> k_values{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  long samples_per_k = 100000;
  int n_min = 2;
  int n_max = 64;
  double c_scale = 1.0;  // C = c_scale * 2 alpha*
  std::uint64_t seed = kDefaultSeed;
};

struct DiscreteWitness {
  CoeffPairSample sample;
  double margin = 0.0;  // normalized by the violation scale
};

struct DiscreteSweepRow {
  double k = 0.0;
  double t_star = 0.0;
  double alpha_star = 0.0;
  double C = 0.0;
  long samples = 0;
  long violations = 0;
  double min_margin = 0.0;  // normalized
  std::optional<DiscreteWitness> witness;  // most negative violation
};

/// Random pairs in the unit bidisk plus a deterministic sweep of real and
/// complex zeta = conj(d-)/d+ for the three smallest admissible n.
std::vector<DiscreteSweepRow> discrete_inequality_sweep(const DiscreteSweepConfig& config);

}  // namespace qrgrad
