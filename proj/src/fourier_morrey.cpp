#include "qrgrad/fourier_morrey.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qrgrad/optimal_exponent.hpp"
#include "qrgrad/parallel.hpp"

namespace qrgrad {

namespace {

constexpr double kPi = std::numbers::pi;

cplx ipow(cplx w, int e) {
  cplx out(1.0, 0.0);
  for (int i = 0; i < e; ++i) {
    out *= w;
  }
  return out;
}

// e^{i m theta_j} for the grid angles, exact at the symmetric angles.
std::vector<cplx> angle_table(std::size_t n_theta, int m) {
  std::vector<cplx> out(n_theta);
  const long n = static_cast<long>(n_theta);
  for (long j = 0; j < n; ++j) {
    long idx = (static_cast<long>(m) * j) % n;
    if (idx < 0) {
      idx += n;
    }
    out[static_cast<std::size_t>(j)] = std::polar(1.0, 2.0 * kPi * static_cast<double>(idx) / n);
  }
  return out;
}

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale < std::numeric_limits<double>::min()) {
    return 0.0;
  }
  return std::abs(a - b) / scale;
}

// Log-radius step of a log-uniform grid; throws if the grid is not one.
double log_step(const std::vector<double>& radii) {
  if (radii.size() < 5) {
    throw std::invalid_argument("radial quadrature needs at least 5 radii");
  }
  const double du = std::log(radii[1] / radii[0]);
  for (std::size_t i = 1; i + 1 < radii.size(); ++i) {
    const double step = std::log(radii[i + 1] / radii[i]);
    if (std::abs(step - du) > 1e-9 * du) {
      throw std::invalid_argument("radial quadrature needs log-uniform radii");
    }
  }
  return du;
}

FieldSample allocate(const PolarGrid& grid, FieldMeta meta) {
  grid.validate();
  FieldSample s;
  s.grid = grid;
  s.meta = std::move(meta);
  const std::size_t n = grid.nodes();
  s.f.resize(n);
  s.fz.resize(n);
  s.fzbar.resize(n);
  s.jac.resize(n);
  return s;
}

}  // namespace

// --- PolarGrid ----------------------------------------------------------------

PolarGrid PolarGrid::ladder(const LadderConfig& cfg) {
  if (!(cfg.r_max > 0.0 && cfg.r_max <= 1.0) || !(cfg.ratio > 0.0 && cfg.ratio < 1.0) ||
      cfg.substeps < 1 || cfg.rungs < 1 || cfg.core_rungs + 1 < cfg.rungs) {
    throw std::invalid_argument("malformed radii ladder configuration");
  }
  PolarGrid g;
  g.n_theta = cfg.n_theta;
  const int intervals = cfg.core_rungs * cfg.substeps;
  const double du = -std::log(cfg.ratio) / cfg.substeps;
  g.radii.resize(static_cast<std::size_t>(intervals) + 1);
  for (int i = 0; i <= intervals; ++i) {
    g.radii[static_cast<std::size_t>(i)] =
        i == intervals ? cfg.r_max : cfg.r_max * std::exp(-du * (intervals - i));
  }
  for (int j = cfg.rungs - 1; j >= 0; --j) {
    g.rungs.push_back(static_cast<std::size_t>((cfg.core_rungs - j) * cfg.substeps));
  }
  g.validate();
  return g;
}

void PolarGrid::validate() const {
  if (radii.empty()) {
    throw std::invalid_argument("polar grid has no radii");
  }
  if (n_theta < 64 || (n_theta & (n_theta - 1)) != 0) {
    throw std::invalid_argument("n_theta must be a power of two >= 64");
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0 && radii[i] <= 1.0)) {
      throw std::invalid_argument("radii must lie in (0, 1]");
    }
    if (i > 0 && !(radii[i] > radii[i - 1])) {
      throw std::invalid_argument("radii must be strictly increasing");
    }
  }
  for (std::size_t r : rungs) {
    if (r >= radii.size()) {
      throw std::invalid_argument("rung index out of range");
    }
  }
}

double PolarGrid::theta(std::size_t j) const {
  return 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n_theta);
}

std::size_t PolarGrid::radius_index(double r) const {
  auto it = std::lower_bound(radii.begin(), radii.end(), r * (1.0 - 1e-12));
  if (it == radii.end() || std::abs(*it - r) > 1e-12 * r) {
    throw std::invalid_argument("radius " + std::to_string(r) + " is not a grid radius");
  }
  return static_cast<std::size_t>(it - radii.begin());
}

std::vector<std::size_t> PolarGrid::rung_indices() const {
  if (!rungs.empty()) {
    return rungs;
  }
  std::vector<std::size_t> all(radii.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    all[i] = i;
  }
  return all;
}

double FieldSample::max_imag_fzbar() const {
  double worst = 0.0;
  for (const cplx& v : fzbar) {
    worst = std::max(worst, std::abs(v.imag()) / std::max(1.0, std::abs(v)));
  }
  return worst;
}

// --- Generators -------------------------------------------------------------

FieldSample gen_scaled_harmonic_combo(double Lambda, double lambda,
                                      std::span<const std::pair<int, cplx>> terms,
                                      const PolarGrid& grid) {
  if (!(lambda > 0.0) || !(Lambda >= lambda)) {
    throw std::domain_error("scaled harmonic generator needs Lambda >= lambda > 0");
  }
  if (terms.empty()) {
    throw std::domain_error("scaled harmonic generator needs at least one term");
  }
  FieldMeta meta{"scaled_harmonic", {{"Lambda", Lambda}, {"lambda", lambda}}};
  for (const auto& [m, a] : terms) {
    if (m < 2) {
      throw std::domain_error("scaled harmonic degree must be >= 2");
    }
    meta.params.emplace_back("m", m);
    meta.params.emplace_back("re_a", a.real());
    meta.params.emplace_back("im_a", a.imag());
  }
  FieldSample s = allocate(grid, std::move(meta));
  const double sL = std::sqrt(Lambda);
  const double sl = std::sqrt(lambda);
  const double sLl = std::sqrt(Lambda * lambda);
  const std::vector<cplx> rot = angle_table(grid.n_theta, 1);

  parallel_for(grid.radii.size(), [&](std::size_t ir) {
    const double r = grid.radii[ir];
    for (std::size_t j = 0; j < grid.n_theta; ++j) {
      const cplx z = r * rot[j];
      const cplx w(z.real() / sL, z.imag() / sl);
      cplx d1(0.0, 0.0);  // sum a m w^{m-1}
      cplx d2(0.0, 0.0);  // sum a m (m-1) w^{m-2}
      for (const auto& [m, a] : terms) {
        const cplx wm2 = ipow(w, m - 2);
        d1 += a * static_cast<double>(m) * wm2 * w;
        d2 += a * static_cast<double>(m * (m - 1)) * wm2;
      }
      const double phi_x = d1.real() / sL;
      const double phi_y = -d1.imag() / sl;
      const double phi_xx = d2.real() / Lambda;
      const double phi_yy = -d2.real() / lambda;
      const double phi_xy = -d2.imag() / sLl;
      const std::size_t idx = s.index(ir, j);
      s.f[idx] = cplx(phi_x, -phi_y) * 0.5;
      s.fz[idx] = cplx(phi_xx - phi_yy, -2.0 * phi_xy) * 0.25;
      s.fzbar[idx] = cplx((phi_xx + phi_yy) * 0.25, 0.0);
      s.jac[idx] = std::norm(s.fz[idx]) - std::norm(s.fzbar[idx]);
    }
  });
  return s;
}

FieldSample gen_scaled_harmonic_gradient(double Lambda, double lambda, int m, const PolarGrid& grid) {
  const std::pair<int, cplx> term{m, cplx(1.0, 0.0)};
  FieldSample s = gen_scaled_harmonic_combo(Lambda, lambda, std::span(&term, 1), grid);
  s.meta.name = "scaled_harmonic_m" + std::to_string(m);
  return s;
}

FieldSample gen_radial_power_field(double beta, std::span<const std::pair<int, cplx>> coeffs,
                                   const PolarGrid& grid) {
  if (!(beta > 0.0)) {
    throw std::domain_error("radial power generator needs beta > 0");
  }
  FieldMeta meta{"radial_power", {{"beta", beta}}};
  for (const auto& [n, a] : coeffs) {
    meta.params.emplace_back("n", n);
    meta.params.emplace_back("re_a", a.real());
    meta.params.emplace_back("im_a", a.imag());
  }
  FieldSample s = allocate(grid, std::move(meta));
  const std::vector<cplx> rot = angle_table(grid.n_theta, 1);
  std::vector<std::vector<cplx>> modes;
  for (const auto& [n, a] : coeffs) {
    modes.push_back(angle_table(grid.n_theta, n));
  }

  parallel_for(grid.radii.size(), [&](std::size_t ir) {
    const double r = grid.radii[ir];
    const double rb = std::pow(r, beta);
    const double rb1 = std::pow(r, beta - 1.0);
    for (std::size_t j = 0; j < grid.n_theta; ++j) {
      cplx f(0.0, 0.0), gz(0.0, 0.0), gzbar(0.0, 0.0);
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const auto& [n, a] = coeffs[i];
        const cplx term = a * modes[i][j];
        f += term;
        gz += (beta + n) * term;
        gzbar += (beta - n) * term;
      }
      const std::size_t idx = s.index(ir, j);
      s.f[idx] = rb * f;
      s.fz[idx] = 0.5 * rb1 * std::conj(rot[j]) * gz;
      s.fzbar[idx] = 0.5 * rb1 * rot[j] * gzbar;
      s.jac[idx] = std::norm(s.fz[idx]) - std::norm(s.fzbar[idx]);
    }
  });
  return s;
}

// --- Fourier profile ----------------------------------------------------------

cplx FourierProfile::c(std::size_t ir, int n) const {
  if (n < -N || n > N) {
    return {0.0, 0.0};
  }
  return c_table[ir * width() + static_cast<std::size_t>(n + N)];
}

cplx FourierProfile::dc(std::size_t ir, int n) const {
  if (n < -N || n > N) {
    return {0.0, 0.0};
  }
  return dc_table[ir * width() + static_cast<std::size_t>(n + N)];
}

FourierProfile fourier_profile(const FieldSample& field, int N) {
  const std::size_t nt = field.grid.n_theta;
  if (N < 0 || nt < static_cast<std::size_t>(2 * N + 2)) {
    throw std::invalid_argument("fourier_profile: n_theta must be at least 2N + 2 to avoid aliasing");
  }
  FourierProfile prof;
  prof.N = N;
  prof.radii = field.grid.radii;
  const std::size_t width = prof.width();
  prof.c_table.assign(prof.radii.size() * width, cplx(0.0, 0.0));
  prof.dc_table.assign(prof.radii.size() * width, cplx(0.0, 0.0));

  std::vector<std::vector<cplx>> twiddle;
  for (int n = -N; n <= N; ++n) {
    twiddle.push_back(angle_table(nt, -n));
  }
  const std::vector<cplx> rot = angle_table(nt, 1);
  const double inv = 1.0 / static_cast<double>(nt);

  parallel_for(prof.radii.size(), [&](std::size_t ir) {
    std::vector<cplx> fr(nt);
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t idx = field.index(ir, j);
      fr[j] = rot[j] * field.fz[idx] + std::conj(rot[j]) * field.fzbar[idx];
    }
    for (std::size_t m = 0; m < width; ++m) {
      cplx acc(0.0, 0.0), dacc(0.0, 0.0);
      const std::vector<cplx>& tw = twiddle[m];
      for (std::size_t j = 0; j < nt; ++j) {
        acc += field.f[field.index(ir, j)] * tw[j];
        dacc += fr[j] * tw[j];
      }
      prof.c_table[ir * width + m] = acc * inv;
      prof.dc_table[ir * width + m] = dacc * inv;
    }
  });
  return prof;
}

std::vector<cplx> radial_derivatives_fd(const FourierProfile& profile) {
  const double du = log_step(profile.radii);
  const std::size_t nr = profile.radii.size();
  const std::size_t width = profile.width();
  std::vector<cplx> out(profile.c_table.size());
  const double inv = 1.0 / (12.0 * du);
  for (std::size_t m = 0; m < width; ++m) {
    auto v = [&](std::size_t i) { return profile.c_table[i * width + m]; };
    for (std::size_t i = 0; i < nr; ++i) {
      cplx d;
      if (i >= 2 && i + 2 < nr) {
        d = v(i - 2) - 8.0 * v(i - 1) + 8.0 * v(i + 1) - v(i + 2);
      } else if (i == 0) {
        d = -25.0 * v(0) + 48.0 * v(1) - 36.0 * v(2) + 16.0 * v(3) - 3.0 * v(4);
      } else if (i == 1) {
        d = -3.0 * v(0) - 10.0 * v(1) + 18.0 * v(2) - 6.0 * v(3) + v(4);
      } else if (i == nr - 1) {
        d = 25.0 * v(i) - 48.0 * v(i - 1) + 36.0 * v(i - 2) - 16.0 * v(i - 3) + 3.0 * v(i - 4);
      } else {
        d = 3.0 * v(i + 1) + 10.0 * v(i) - 18.0 * v(i - 1) + 6.0 * v(i - 2) - v(i - 3);
      }
      out[i * width + m] = d * inv / profile.radii[i];
    }
  }
  return out;
}

double J_from_fourier_at(const FourierProfile& profile, std::size_t ir) {
  double sum = 0.0;
  for (int n = -profile.N; n <= profile.N; ++n) {
    sum += n * std::norm(profile.c(ir, n));
  }
  return kPi * sum;
}

double J_from_fourier(const FourierProfile& profile, double r) {
  PolarGrid probe;
  probe.radii = profile.radii;
  return J_from_fourier_at(profile, probe.radius_index(r));
}

// --- Energy and Morrey --------------------------------------------------------

EnergyProfile energy_profile(const FieldSample& field) {
  const PolarGrid& g = field.grid;
  const double du = log_step(g.radii);
  const std::size_t nr = g.radii.size();
  EnergyProfile e;
  e.radii = g.radii;
  e.J.resize(nr);
  e.dJ.resize(nr);
  std::vector<double> h(nr);  // r J'(r), the integrand in u = log r
  const double dtheta = 2.0 * kPi / static_cast<double>(g.n_theta);
  for (std::size_t ir = 0; ir < nr; ++ir) {
    double ring = 0.0;
    for (std::size_t j = 0; j < g.n_theta; ++j) {
      ring += field.jac[field.index(ir, j)];
    }
    ring *= dtheta;
    e.dJ[ir] = g.radii[ir] * ring;
    h[ir] = g.radii[ir] * e.dJ[ir];
  }

  if (!(h[0] > 0.0) || !(h[1] > 0.0)) {
    throw std::domain_error("degenerate energy at the innermost radii (J = 0)");
  }
  e.core_exponent = std::log(h[1] / h[0]) / du;
  if (!(e.core_exponent > 0.0) || !std::isfinite(e.core_exponent)) {
    throw std::domain_error("degenerate energy growth at the core");
  }
  const double core = h[0] / e.core_exponent;

  std::vector<double> even(nr, 0.0);  // Simpson partial sums at even indices
  for (std::size_t i = 2; i < nr; i += 2) {
    even[i] = even[i - 2] + du / 3.0 * (h[i - 2] + 4.0 * h[i - 1] + h[i]);
  }
  e.J[0] = core;
  for (std::size_t i = 1; i < nr; ++i) {
    double integral;
    if (i % 2 == 0) {
      integral = even[i];
    } else if (i == 1) {
      integral = du / 12.0 * (5.0 * h[0] + 8.0 * h[1] - h[2]);
    } else {
      integral = even[i - 3] + 3.0 * du / 8.0 * (h[i - 3] + 3.0 * h[i - 2] + 3.0 * h[i - 1] + h[i]);
    }
    e.J[i] = core + integral;
  }
  return e;
}

double J_direct(const FieldSample& field, double r) {
  const std::size_t ir = field.grid.radius_index(r);
  return energy_profile(field).J[ir];
}

MorreyEstimate morrey_estimate(const FieldSample& field) {
  const std::vector<std::size_t> rungs = field.grid.rung_indices();
  if (rungs.size() < 16) {
    throw std::domain_error("morrey_estimate needs at least 16 radii");
  }
  const EnergyProfile e = energy_profile(field);
  MorreyEstimate est;
  for (std::size_t i = 1; i < e.J.size(); ++i) {
    if (e.J[i] < e.J[i - 1] * (1.0 - 1e-14)) {
      est.monotone = false;
    }
  }
  est.alpha_ratio = std::numeric_limits<double>::infinity();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t ir : rungs) {
    const double r = e.radii[ir];
    if (!(e.J[ir] > 0.0)) {
      throw std::domain_error("degenerate energy: J(r) = 0 at a rung");
    }
    const double ratio = r * e.dJ[ir] / (2.0 * e.J[ir]);
    est.radii.push_back(r);
    est.J.push_back(e.J[ir]);
    est.dJ.push_back(e.dJ[ir]);
    est.per_radius.push_back(ratio);
    est.alpha_ratio = std::min(est.alpha_ratio, ratio);
    const double x = 2.0 * std::log(r);
    const double y = std::log(e.J[ir]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(rungs.size());
  est.alpha_regression = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return est;
}

// --- Parseval and coefficient relation ----------------------------------------

double ParsevalResiduals::max() const { return std::max({p2, q2, main}); }

ParsevalResiduals parseval_checks_at(const FieldSample& field, const FourierProfile& prof,
                                     std::size_t ir) {
  const PolarGrid& g = field.grid;
  const double r = g.radii[ir];
  const std::vector<cplx> rot2 = angle_table(g.n_theta, 2);
  double ip2 = 0.0, iq2 = 0.0, is2 = 0.0, iqa2 = 0.0, idq2 = 0.0;
  for (std::size_t j = 0; j < g.n_theta; ++j) {
    const std::size_t idx = field.index(ir, j);
    const cplx a = field.fzbar[idx] + rot2[j] * field.fz[idx];  // s - i q
    const cplx b = field.fzbar[idx] - rot2[j] * field.fz[idx];  // p + i q
    const double p = b.real();
    const double q = b.imag();
    const double s = a.real();
    const double qa = -a.imag();
    ip2 += p * p;
    iq2 += q * q;
    is2 += s * s;
    iqa2 += qa * qa;
    idq2 += (q - qa) * (q - qa);
  }
  const double dtheta = 2.0 * kPi / static_cast<double>(g.n_theta);
  ip2 *= dtheta;
  iq2 *= dtheta;
  is2 *= dtheta;
  iqa2 *= dtheta;
  idq2 *= dtheta;

  double sum_plus = 0.0, sum_minus = 0.0, sum_main = 0.0;
  const int N = prof.N;
  for (int m = -N - 1; m <= N + 1; ++m) {
    const cplx dp = prof.d(ir, m - 1);
    const cplx dm = std::conj(prof.d(ir, -m - 1));
    sum_plus += std::norm(dp + dm);
    sum_minus += std::norm(dp - dm);
  }
  for (int n = -N; n <= N; ++n) {
    sum_main += (n / r) * (n / r) * std::norm(prof.c(ir, n)) + std::norm(prof.dc(ir, n));
  }

  ParsevalResiduals res;
  res.p2 = relative_gap(ip2, kPi / (2.0 * r * r) * sum_plus);
  res.q2 = relative_gap(iq2, kPi / (2.0 * r * r) * sum_minus);
  res.main = relative_gap(0.5 * (iq2 + iqa2) + 0.5 * (ip2 + is2), kPi * sum_main);
  const double qscale = std::max(iq2, iqa2);
  res.q_consistency = qscale > 0.0 ? std::sqrt(idq2 / qscale) : 0.0;
  return res;
}

ParsevalResiduals parseval_checks(const FieldSample& field, const FourierProfile& profile, double r) {
  return parseval_checks_at(field, profile, field.grid.radius_index(r));
}

double coefficient_relation_check(const FourierProfile& prof, std::span<const cplx> dc) {
  if (dc.size() != prof.c_table.size()) {
    throw std::invalid_argument("radial derivative table does not match the profile");
  }
  const std::size_t width = prof.width();
  auto deriv = [&](std::size_t ir, int n) {
    if (n < -prof.N || n > prof.N) {
      return cplx(0.0, 0.0);
    }
    return dc[ir * width + static_cast<std::size_t>(n + prof.N)];
  };
  double worst = 0.0;
  for (std::size_t ir = 0; ir < prof.radii.size(); ++ir) {
    const double r = prof.radii[ir];
    for (int n = -1; n <= prof.N - 2; ++n) {
      const cplx t1 = deriv(ir, -n - 2);
      const cplx t2 = std::conj(deriv(ir, n));
      const cplx t3 = ((n + 2) / r) * prof.c(ir, -n - 2);
      const cplx t4 = (n / r) * std::conj(prof.c(ir, n));
      const double scale =
          std::max(1.0, std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4));
      worst = std::max(worst, std::abs(t1 - t2 + t3 + t4) / scale);
    }
  }
  return worst;
}

double coefficient_relation_check(const FourierProfile& profile) {
  return coefficient_relation_check(profile, profile.dc_table);
}

// --- Sandwich and bound versus measured exponent ------------------------------

double sandwich_check(const FieldSample& field, double Lambda, double lambda) {
  const double lo = lambda / (lambda + Lambda);
  const double hi = Lambda / (lambda + Lambda);
  double worst = 0.0;
  for (std::size_t i = 0; i < field.jac.size(); ++i) {
    const double grad2 = 2.0 * (std::norm(field.fz[i]) + std::norm(field.fzbar[i]));
    const double viol = std::max({lo * grad2 - field.jac[i], field.jac[i] - hi * grad2, 0.0});
    worst = std::max(worst, viol / std::max(1.0, grad2));
  }
  return worst;
}

BoundVsMeasured bound_vs_measured(const FieldSample& field, const MorreyEstimate& estimate) {
  if (!field.is_gradient_type()) {
    throw std::invalid_argument("bound_vs_measured: f_zbar is not real, not a gradient mapping");
  }
  BoundVsMeasured out;
  for (std::size_t i = 0; i < field.jac.size(); ++i) {
    const double scale = std::max(1.0, std::norm(field.fz[i]));
    if (field.jac[i] < -1e-12 * scale) {
      throw std::invalid_argument("bound_vs_measured: J_f < 0, field is not orientation preserving");
    }
    const double a = std::abs(field.fz[i]);
    if (a > 0.0) {
      out.k_emp = std::max(out.k_emp, std::abs(field.fzbar[i]) / a);
    }
  }
  if (!(out.k_emp < 1.0)) {
    throw std::invalid_argument("bound_vs_measured: empirical Beltrami bound is not below 1");
  }
  out.alpha_bound = out.k_emp < 1e-14 ? 1.0 : maximize_alpha(out.k_emp).alpha_star;
  out.alpha_ratio = estimate.alpha_ratio;
  out.alpha_measured = std::min(1.0, estimate.alpha_ratio);
  return out;
}

BoundVsMeasured bound_vs_measured(const FieldSample& field) {
  return bound_vs_measured(field, morrey_estimate(field));
}

// --- Corpus -----------------------------------------------------------------

std::vector<CorpusField> build_corpus(const LadderConfig& cfg) {
  const PolarGrid grid = PolarGrid::ladder(cfg);
  std::vector<CorpusField> corpus;

  auto radial = [&](std::string name, double beta, std::vector<std::pair<int, cplx>> modes) {
    FieldSample s = gen_radial_power_field(beta, modes, grid);
    s.meta.name = std::move(name);
    return s;
  };
  auto harmonic = [&](std::string name, double Lambda, double lambda,
                      std::vector<std::pair<int, cplx>> terms) {
    FieldSample s = gen_scaled_harmonic_combo(Lambda, lambda, terms, grid);
    s.meta.name = std::move(name);
    return s;
  };

  {
    CorpusField c;
    c.field = radial("identity", 1.0, {{1, 1.0}});
    c.ellipticity = std::make_pair(1.0, 1.0);
    c.expected_alpha = 1.0;
    c.expected_alpha_tol = 1e-8;
    corpus.push_back(std::move(c));
  }
  {
    CorpusField c;
    c.field = radial("extremal_K3", 1.0 / 3.0, {{1, 1.0}});
    c.kind = FieldKind::extremal;
    c.expected_alpha = 1.0 / 3.0;
    c.expected_alpha_tol = 1e-4;
    corpus.push_back(std::move(c));
  }
  for (const auto& [Lambda, m] : std::vector<std::pair<double, int>>{{3.0, 2}, {3.0, 3}, {3.0, 5}, {2.0, 4}}) {
    CorpusField c;
    c.field = harmonic("aniso_harmonic_L" + std::to_string(static_cast<int>(Lambda)) + "_m" +
                           std::to_string(m),
                       Lambda, 1.0, {{m, 1.0}});
    c.ellipticity = std::make_pair(Lambda, 1.0);
    // J_f is homogeneous of degree 2(m-2), so r J'/(2J) = m - 1 exactly.
    c.expected_alpha = static_cast<double>(m - 1);
    // m = 2 has constant J_f; higher degrees carry the log-r Simpson error.
    c.expected_alpha_tol = m == 2 ? 1e-8 : 1e-7;
    corpus.push_back(std::move(c));
  }
  {
    CorpusField c;
    c.field = harmonic("mixed_gradient_L3", 3.0, 1.0,
                       {{2, 1.0}, {3, cplx(0.5, -0.3)}, {4, cplx(0.0, 0.2)}, {5, -0.1}});
    c.ellipticity = std::make_pair(3.0, 1.0);
    corpus.push_back(std::move(c));
  }
  {
    CorpusField c;
    c.field = harmonic("mixed_gradient_L5", 5.0, 1.0,
                       {{2, cplx(0.7, 0.2)}, {3, -0.4}, {6, cplx(0.0, 0.15)}});
    c.ellipticity = std::make_pair(5.0, 1.0);
    corpus.push_back(std::move(c));
  }
  {
    CorpusField c;
    // f = z + (i/2) zbar: f_zbar = i/2 is not real.
    c.field = radial("nongradient_control", 1.0, {{1, 1.0}, {-1, cplx(0.0, 0.5)}});
    c.kind = FieldKind::non_gradient_control;
    corpus.push_back(std::move(c));
  }
  return corpus;
}

CorpusRow evaluate_corpus_field(const CorpusField& entry, int N) {
  const FieldSample& field = entry.field;
  CorpusRow row;
  row.name = field.meta.name;
  row.kind = entry.kind;

  const FourierProfile prof = fourier_profile(field, N);
  const EnergyProfile energy = energy_profile(field);
  const MorreyEstimate est = morrey_estimate(field);
  row.alpha_ratio = est.alpha_ratio;
  row.alpha_regression = est.alpha_regression;
  row.alpha_measured = std::min(1.0, est.alpha_ratio);
  row.monotone = est.monotone;

  for (std::size_t ir = 0; ir < prof.radii.size(); ++ir) {
    row.parseval_max = std::max(row.parseval_max, parseval_checks_at(field, prof, ir).max());
    const double jf = J_from_fourier_at(prof, ir);
    row.dual_path_max =
        std::max(row.dual_path_max, std::abs(energy.J[ir] - jf) / std::max(1.0, std::abs(energy.J[ir])));
  }
  row.coefficient_relation = coefficient_relation_check(prof);

  for (std::size_t i = 0; i < field.jac.size(); ++i) {
    const double a = std::abs(field.fz[i]);
    if (a > 0.0) {
      row.k_emp = std::max(row.k_emp, std::abs(field.fzbar[i]) / a);
    }
  }

  auto fail = [&](std::string what) { row.failures.push_back(std::move(what)); };
  if (row.parseval_max >= 1e-8) fail("parseval");
  if (row.dual_path_max >= 1e-8) fail("energy dual path");
  if (!row.monotone) fail("energy monotonicity");

  const bool gradient = field.is_gradient_type();
  if ((entry.kind == FieldKind::gradient) != gradient) fail("gradient structure");

  if (entry.kind == FieldKind::gradient) {
    if (row.coefficient_relation >= 1e-8) fail("coefficient relation");
    const BoundVsMeasured bvm = bound_vs_measured(field, est);
    row.alpha_bound = bvm.alpha_bound;
    if (!bvm.holds(1e-4)) fail("bound exceeds measured exponent");
  } else if (entry.kind == FieldKind::non_gradient_control) {
    if (row.coefficient_relation <= 1e-3) fail("negative control passed coefficient relation");
  }

  if (entry.ellipticity) {
    row.sandwich = sandwich_check(field, entry.ellipticity->first, entry.ellipticity->second);
    if (*row.sandwich > 1e-12) fail("ellipticity sandwich");
  }
  if (entry.expected_alpha) {
    if (std::abs(row.alpha_ratio - *entry.expected_alpha) > entry.expected_alpha_tol) {
      fail("measured exponent off closed form");
    }
    if (row.alpha_ratio > row.alpha_regression + 5e-3) fail("ratio above regression");
  }
  return row;
}

}  // namespace qrgrad
