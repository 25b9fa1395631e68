#include "qrgrad/optimal_exponent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qrgrad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_open_k(double k) {
  if (!(k > 0.0 && k < 1.0)) {
    throw std::domain_error("k must lie in the open interval (0, 1)");
  }
}

// Bisection on a sign-change bracket [lo, hi] of N_k, then Newton polish.
double refine_root(const QuarticNk& q, double lo, double hi) {
  double flo = eval_Nk(q, lo);
  for (int it = 0; it < 200 && hi - lo >= 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    const double fmid = eval_Nk(q, mid);
    if (fmid == 0.0) {
      return mid;
    }
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  double fx = std::abs(eval_Nk(q, x));
  for (int it = 0; it < 50; ++it) {
    const double d = eval_Nk_derivative(q, x);
    if (d == 0.0 || !std::isfinite(d)) {
      break;
    }
    const double next = x - eval_Nk(q, x) / d;
    // Newton may only improve inside the guaranteed bracket.
    if (!(next >= lo && next <= hi)) {
      break;
    }
    const double fnext = std::abs(eval_Nk(q, next));
    if (fnext >= fx) {
      break;
    }
    x = next;
    fx = fnext;
  }
  return x;
}

}  // namespace

double QuarticNk::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (double c : coeffs()) {
    m = std::max(m, std::abs(c));
  }
  return m;
}

QuarticNk quartic_coeffs(double k) {
  if (!(k >= 0.0 && k < 1.0)) {
    throw std::domain_error("k must lie in [0, 1)");
  }
  const double k2 = k * k;
  const double k4 = k2 * k2;
  const double k6 = k4 * k2;
  QuarticNk q;
  q.k = k;
  q.c4 = 16.0 - 16.0 * k2 + k4;
  q.c3 = -(64.0 - 80.0 * k2 + 18.0 * k4);
  q.c2 = 96.0 - 160.0 * k2 + 69.0 * k4 - 5.0 * k6;
  q.c1 = -(64.0 - 144.0 * k2 + 96.0 * k4 - 16.0 * k6);
  q.c0 = 16.0 - 48.0 * k2 + 48.0 * k4 - 16.0 * k6;
  return q;
}

double eval_Nk(const QuarticNk& q, double t) {
  return (((q.c4 * t + q.c3) * t + q.c2) * t + q.c1) * t + q.c0;
}

double eval_Nk_derivative(const QuarticNk& q, double t) {
  return ((4.0 * q.c4 * t + 3.0 * q.c3) * t + 2.0 * q.c2) * t + q.c1;
}

std::vector<double> quartic_roots_in_interval(const QuarticNk& q) {
  std::vector<double> roots;
  const double a = 1.0 - q.k;
  const double b = 1.0 - q.k * q.k;
  if (!(b > a)) {
    return roots;
  }
  constexpr int kCells = 4096;
  const double w = b - a;
  const double inset = 1e-12 * w;
  auto node = [&](int i) {
    if (i == 0) return a + inset;
    if (i == kCells) return b - inset;
    return a + w * static_cast<double>(i) / kCells;
  };

  double x_prev = node(0);
  double f_prev = eval_Nk(q, x_prev);
  for (int i = 1; i <= kCells; ++i) {
    const double x = node(i);
    const double f = eval_Nk(q, x);
    if (f_prev == 0.0) {
      roots.push_back(x_prev);
    } else if ((f < 0.0) != (f_prev < 0.0) && f != 0.0) {
      roots.push_back(refine_root(q, x_prev, x));
    }
    x_prev = x;
    f_prev = f;
  }
  if (f_prev == 0.0) {
    roots.push_back(x_prev);
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> merged;
  for (double r : roots) {
    if (merged.empty() || r - merged.back() > 1e-10) {
      merged.push_back(r);
    }
  }
  return merged;
}

double S_prime(double k, double t) {
  const double k2 = k * k;
  const double u = 1.0 - t;
  return (2.0 * u * u - k2 * (1.0 + u * u)) / ((1.0 - k2) * u * u);
}

double P_prime(double k, double t) {
  const double k2 = k * k;
  const double u = 1.0 - t;
  return (2.0 * u * u - k2 * (2.0 - t)) * t / ((1.0 - k2) * u * u);
}

double alpha_prime(double k, double t) {
  if (t == 1.0) {
    throw std::domain_error("alpha'(t) is singular at t = 1");
  }
  const TSplit s = TSplit::make(k, t);
  const double dS = S_prime(k, t);
  const double dP = P_prime(k, t);
  const double root = std::sqrt(s.S * s.S + 12.0 * s.P);
  return 0.5 * ((s.S * dS + 6.0 * dP) / root - dS);
}

StationarityResiduals stationarity_residuals(double k, double t) {
  const TSplit s = TSplit::make(k, t);
  const double dS = S_prime(k, t);
  const double dP = P_prime(k, t);
  const double a = s.S * dS * dP;
  const double c = s.P * dS * dS;
  StationarityResiduals r;
  const double b_corrected = 3.0 * dP * dP;
  const double b_printed = 3.0 * dP;
  r.corrected = std::abs(a + b_corrected - c) / (std::abs(a) + std::abs(b_corrected) + std::abs(c));
  r.printed = std::abs(a + b_printed - c) / (std::abs(a) + std::abs(b_printed) + std::abs(c));
  return r;
}

CriticalPoint maximize_alpha(double k, double tol) {
  require_open_k(k);
  if (!(tol > 0.0)) {
    throw std::domain_error("maximize_alpha needs tol > 0");
  }
  const double left = 1.0 - k;
  const double right = 1.0 - k * k;
  const double inset = 1e-12 * (right - left);
  double lo = left + inset;
  double hi = right - inset;

  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = alpha_of_t(k, x1);
  double f2 = alpha_of_t(k, x2);
  while (hi - lo > tol) {
    // Below this gap the comparison is decided by rounding, not by alpha.
    if (std::abs(f1 - f2) <= 8.0 * kEps * std::max(std::abs(f1), std::abs(f2))) {
      break;
    }
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = alpha_of_t(k, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = alpha_of_t(k, x1);
    }
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    if (alpha_prime(k, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  CriticalPoint cp;
  cp.k = k;
  cp.t_star = 0.5 * (lo + hi);
  cp.alpha_star = alpha_of_t(k, cp.t_star);
  cp.derivative_residual = std::abs(alpha_prime(k, cp.t_star));
  cp.stationarity = stationarity_residuals(k, cp.t_star);

  const QuarticNk q = quartic_coeffs(k);
  cp.quartic_residual = std::abs(eval_Nk(q, cp.t_star)) / q.max_abs_coeff();
  cp.quartic_roots = quartic_roots_in_interval(q);
  cp.quartic_root_found = !cp.quartic_roots.empty();
  cp.agreement = std::numeric_limits<double>::quiet_NaN();
  for (double r : cp.quartic_roots) {
    const double d = std::abs(r - cp.t_star);
    if (std::isnan(cp.agreement) || d < cp.agreement) {
      cp.agreement = d;
    }
  }
  return cp;
}

PhiCoefficients phi_coefficients(double k) {
  require_open_k(k);
  const double k2 = k * k;
  const double k4 = k2 * k2;
  PhiCoefficients p;
  p.a = 16.0 - 20.0 * k2 + 5.0 * k4;
  p.b = 32.0 - 52.0 * k2 + 20.0 * k4;
  p.c = 16.0 * (1.0 - k2) * (1.0 - k2);
  p.delta = p.b * p.b - 4.0 * p.a * p.c;
  const double sq = std::sqrt(std::max(p.delta, 0.0));
  p.x1 = (p.b - sq) / (2.0 * p.a);
  p.x2 = (p.b + sq) / (2.0 * p.a);
  return p;
}

ConcavityCertificate certify_concavity(double k, int grid_size) {
  require_open_k(k);
  if (grid_size < 16) {
    throw std::domain_error("certify_concavity needs grid_size >= 16");
  }
  const double left = 1.0 - k;
  const double right = 1.0 - k * k;
  const double w = right - left;

  ConcavityCertificate cert;
  cert.k = k;
  cert.dalpha_left = alpha_prime(k, left + 1e-9 * w);
  cert.dalpha_right = alpha_prime(k, right - 1e-9 * w);

  const PhiCoefficients phi = phi_coefficients(k);
  const double vertex = std::clamp(phi.b / (2.0 * phi.a), left, right);
  cert.phi_min_on_interval = std::min({phi(left), phi(right), phi(vertex)});

  const double h = 1e-6 * w;
  cert.grid_second_deriv_max = -std::numeric_limits<double>::infinity();
  cert.phi_min_sampled = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_size; ++i) {
    const double t = left + w * static_cast<double>(i + 1) / (grid_size + 1);
    const double second = (alpha_prime(k, t + h) - alpha_prime(k, t - h)) / (2.0 * h);
    cert.grid_second_deriv_max = std::max(cert.grid_second_deriv_max, second);
    cert.phi_min_sampled = std::min(cert.phi_min_sampled, phi(t));
  }
  return cert;
}

ExponentReport exponent_report(const DistortionParams& params, double tol) {
  ExponentReport r;
  r.k = params.k();
  r.alpha_classical = alpha_classical(params);
  r.alpha2 = alpha2(params);
  if (params.k() == 0.0) {
    r.alpha1 = r.alpha0 = r.alpha_star = r.t_star = 1.0;
    return r;
  }
  r.alpha1 = alpha1(params);
  r.alpha0 = alpha0(params);
  const CriticalPoint cp = maximize_alpha(params.k(), tol);
  r.alpha_star = cp.alpha_star;
  r.t_star = cp.t_star;
  return r;
}

}  // namespace qrgrad
