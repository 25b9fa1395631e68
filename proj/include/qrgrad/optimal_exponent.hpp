#pragma once

// Maximizer t* of alpha(t) on (1-k, 1-k^2), its quartic characterization
// N_k(t) = 0, and a numeric certificate of strict concavity.

#include <array>
#include <vector>

#include "qrgrad/exponent_core.hpp"

namespace qrgrad {

/// N_k(t) = c4 t^4 + c3 t^3 + c2 t^2 + c1 t + c0.
struct QuarticNk {
  double k = 0.0;
  double c4 = 0.0, c3 = 0.0, c2 = 0.0, c1 = 0.0, c0 = 0.0;

  /// Coefficients ordered from t^4 down to t^0.
  std::array<double, 5> coeffs() const noexcept { return {c4, c3, c2, c1, c0}; }
  double max_abs_coeff() const noexcept;
};

QuarticNk quartic_coeffs(double k);
double eval_Nk(const QuarticNk& q, double t);
double eval_Nk_derivative(const QuarticNk& q, double t);

/// Real roots of N_k strictly inside (1-k, 1-k^2), isolated by a sign-change
/// scan and refined by bisection then Newton. Roots closer than 1e-10 are
/// merged. Returns an empty list when no sign change is found.
std::vector<double> quartic_roots_in_interval(const QuarticNk& q);

/// Derivatives of S = t1 + t2 and P = t1 t2 along the family t2 = t.
double S_prime(double k, double t);
double P_prime(double k, double t);

/// Closed-form alpha'(t). Throws std::domain_error at t = 1.
double alpha_prime(double k, double t);

/// Residuals of the squared stationarity condition, normalized by the sum
/// of the magnitudes of its terms.
struct StationarityResiduals {
  double corrected = 0.0;  // S S' P' + 3 P'^2 - P S'^2
  double printed = 0.0;    // S S' P' + 3 P'   - P S'^2
};
StationarityResiduals stationarity_residuals(double k, double t);

struct CriticalPoint {
  double k = 0.0;
  double t_star = 1.0;
  double alpha_star = 1.0;
  double quartic_residual = 0.0;    // |N_k(t*)| / max |coeff|
  double derivative_residual = 0.0; // |alpha'(t*)|
  double agreement = 0.0;           // distance to nearest quartic root, NaN if none
  bool quartic_root_found = false;
  StationarityResiduals stationarity;
  std::vector<double> quartic_roots;
};

inline constexpr double kDefaultMaximizeTol = 1e-12;

/// Maximizes alpha on (1-k+eps, 1-k^2-eps), eps = 1e-12 * width.
/// Golden-section on alpha values narrows the bracket until the two probe
/// values are no longer separable in binary64; from there the bracket is
/// halved on the sign of alpha' (monotone because alpha'' < 0) until its
/// width is below tol. Throws std::domain_error for k outside (0, 1) or
/// tol <= 0.
CriticalPoint maximize_alpha(double k, double tol = kDefaultMaximizeTol);

struct ConcavityCertificate {
  double k = 0.0;
  double dalpha_left = 0.0;            // alpha'(1-k) one-sided
  double dalpha_right = 0.0;           // alpha'(1-k^2) one-sided
  double phi_min_on_interval = 0.0;    // min of phi over [1-k, 1-k^2]
  double phi_min_sampled = 0.0;        // min over grid samples
  double grid_second_deriv_max = 0.0;  // max alpha'' over the grid

  bool holds() const noexcept {
    return dalpha_left > 0.0 && dalpha_right < 0.0 && phi_min_on_interval > 0.0 &&
           phi_min_sampled > 0.0 && grid_second_deriv_max < 0.0;
  }
};

/// Endpoint signs of alpha', alpha'' by central differences of alpha_prime
/// on grid_size interior points, and the minimum of phi on the interval.
/// Throws std::domain_error unless 0 < k < 1 and grid_size >= 16.
ConcavityCertificate certify_concavity(double k, int grid_size);

/// phi(t) = a t^2 - b t + c whose positivity on the interval implies alpha'' < 0.
struct PhiCoefficients {
  double a = 0.0, b = 0.0, c = 0.0;
  double delta = 0.0;  // b^2 - 4ac
  double x1 = 0.0;     // smaller root
  double x2 = 0.0;
  double operator()(double t) const noexcept { return (a * t - b) * t + c; }
};
PhiCoefficients phi_coefficients(double k);

/// Full exponent report; k = 0 uses the conformal limit alpha* = alpha0 =
/// alpha1 = 1, t* = 1.
ExponentReport exponent_report(const DistortionParams& params, double tol = kDefaultMaximizeTol);

}  // namespace qrgrad
