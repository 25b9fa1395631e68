#include "qrgrad/pointwise_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qrgrad/exponent_core.hpp"
#include "qrgrad/optimal_exponent.hpp"

namespace qrgrad {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSingularBand = 1e-6;
constexpr double kViolationTol = 1e-12;
constexpr std::size_t kChunks = 64;

double angular_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

bool near_singular_direction(double mu, double sigma) {
  const double s0 = std::acos(mu);
  return angular_distance(sigma, s0) < kSingularBand ||
         angular_distance(sigma, kTwoPi - s0) < kSingularBand;
}

// (J_f - t1 p^2 - t2 q^2) / p^2 and J_f / p^2 from the closed forms.
struct PointMargin {
  double margin;
  double jac_over_p2;
};

PointMargin margin_at(double mu, double sigma, double t1, double t2) {
  const double c = std::cos(sigma);
  const double d = mu - c;
  const double jac = (1.0 - mu * mu) / (d * d);
  const double q_over_p = std::sin(sigma) / (c - mu);
  return {jac - t1 - t2 * q_over_p * q_over_p, jac};
}

}  // namespace

PQSSample pqs_from_polar(double mu_abs, double varsigma, double p) {
  if (!(mu_abs >= 0.0 && mu_abs < 1.0)) {
    throw std::domain_error("|mu| must lie in [0, 1)");
  }
  const double c = std::cos(varsigma);
  if (std::abs(c - mu_abs) <= 1e-12) {
    throw std::domain_error("cos(varsigma) = |mu| is a singular direction (f_z = 0)");
  }
  PQSSample out;
  out.mu_abs = mu_abs;
  out.varsigma = varsigma;
  out.p = p;
  out.s = p * (mu_abs + c) / (mu_abs - c);
  out.q = p * std::sin(varsigma) / (c - mu_abs);
  out.fzbar = cplx(0.5 * (out.s + p), 0.0);
  out.fz = cplx(0.5 * (out.s - p), -out.q);
  out.jac = out.q * out.q - p * out.s;
  return out;
}

double lemma1_identity_check(const PQSSample& x) {
  const double m2 = x.mu_abs * x.mu_abs;
  const double rhs = (1.0 - m2) / (1.0 + m2) * (x.q * x.q + 0.5 * (x.p * x.p + x.s * x.s));
  return std::abs(x.jac - rhs) / std::max(1.0, std::abs(x.jac));
}

double beltrami_residual(const PQSSample& x) {
  const double lhs = (x.s + x.p) * (x.s + x.p);
  const double rhs =
      x.mu_abs * x.mu_abs * ((x.s - x.p) * (x.s - x.p) + 4.0 * x.q * x.q);
  return std::abs(lhs - rhs) / std::max({1.0, lhs, rhs});
}

double jacobian_two_way_residual(const PQSSample& x) {
  const double fz2 = std::norm(x.fz);
  const double direct = fz2 - std::norm(x.fzbar);
  return std::abs(x.jac - direct) / std::max(1.0, fz2);
}

double beltrami_quotient(const PQSSample& x) { return std::abs(x.fzbar) / std::abs(x.fz); }

MarginReport lemma2_margin(double k, double t, GridDims grid) {
  return lemma2_margin_split(k, t1_of(k, t), t, grid);
}

MarginReport lemma2_margin_split(double k, double t1, double t2, GridDims grid) {
  if (!(k > 0.0 && k < 1.0)) {
    throw std::domain_error("lemma2_margin needs 0 < k < 1");
  }
  if (!(t1 > 0.0)) {
    throw std::domain_error("lemma2_margin needs t1 > 0");
  }
  if (grid.n_mu < 32 || grid.n_sigma < 32) {
    throw std::domain_error("lemma2_margin needs at least a 32 x 32 grid");
  }
  MarginReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  rep.min_margin_at_k = std::numeric_limits<double>::infinity();
  double argmin_sigma_at_k = 0.0;

  for (int i = 0; i < grid.n_mu; ++i) {
    const double mu = k * static_cast<double>(i) / (grid.n_mu - 1);
    for (int j = 0; j < grid.n_sigma; ++j) {
      const double sigma = kTwoPi * static_cast<double>(j) / grid.n_sigma;
      if (near_singular_direction(mu, sigma)) {
        continue;
      }
      const PointMargin pm = margin_at(mu, sigma, t1, t2);
      ++rep.samples;
      if (pm.margin < -kViolationTol * std::max(1.0, pm.jac_over_p2)) {
        ++rep.violations;
      }
      if (pm.margin < rep.min_margin) {
        rep.min_margin = pm.margin;
        rep.argmin_mu = mu;
        rep.argmin_sigma = sigma;
      }
      if (i == grid.n_mu - 1 && pm.margin < rep.min_margin_at_k) {
        rep.min_margin_at_k = pm.margin;
        argmin_sigma_at_k = sigma;
      }
    }
  }

  // Golden-section refinement on the circle |mu| = k around the grid minimum.
  auto f = [&](double sigma) {
    if (near_singular_direction(k, sigma)) {
      return std::numeric_limits<double>::infinity();
    }
    return margin_at(k, sigma, t1, t2).margin;
  };
  const double step = kTwoPi / grid.n_sigma;
  double lo = argmin_sigma_at_k - step;
  double hi = argmin_sigma_at_k + step;
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  rep.infimum_at_k = rep.min_margin_at_k;
  const double refined_sigma = f1 < f2 ? x1 : x2;
  if (std::min(f1, f2) < rep.infimum_at_k) {
    const PointMargin pm = margin_at(k, refined_sigma, t1, t2);
    rep.infimum_at_k = pm.margin;
    if (pm.margin < -kViolationTol * std::max(1.0, pm.jac_over_p2)) {
      ++rep.violations;
    }
  }
  return rep;
}

bool discriminant_condition(double k, double t1, double t2) { return t1 <= t1_of(k, t2); }

double discrete_coeff_margin(double t1, double t2, const CoeffPairSample& x, double C) {
  if (x.n < 2) {
    throw std::domain_error("the coefficient inequality is stated for n >= 2");
  }
  const cplx conj_minus = std::conj(x.d_minus);
  const double lhs = t1 * std::norm(x.d_plus + conj_minus) + t2 * std::norm(x.d_plus - conj_minus);
  const double rhs = C * (std::norm(x.d_plus) / (x.n - 1) - std::norm(x.d_minus) / (x.n + 1));
  return lhs - rhs;
}

double discrete_coeff_inequality(double k, double t, const CoeffPairSample& x, double C) {
  return discrete_coeff_margin(t1_of(k, t), t, x, C);
}

double discrete_coeff_scale(double t1, double t2, const CoeffPairSample& x, double C) {
  const cplx conj_minus = std::conj(x.d_minus);
  const double lhs = t1 * std::norm(x.d_plus + conj_minus) + t2 * std::norm(x.d_plus - conj_minus);
  const double rhs = C * (std::norm(x.d_plus) / (x.n - 1) - std::norm(x.d_minus) / (x.n + 1));
  return std::max({1.0, lhs, std::abs(rhs)});
}

double reduced_quadratic_check(double zeta, int n, double t1, double t2, double C) {
  if (n < 2) {
    throw std::domain_error("the reduced quadratic is stated for n >= 2");
  }
  const double S = t1 + t2;
  return (S + C / (n + 1)) * zeta * zeta + 2.0 * (t1 - t2) * zeta + (S - C / (n - 1));
}

double reduced_quadratic_discriminant(int n, double t1, double t2, double C) {
  const double S = t1 + t2;
  return 4.0 * (t1 - t2) * (t1 - t2) - 4.0 * (S + C / (n + 1)) * (S - C / (n - 1));
}

QuadraticMinimum reduced_quadratic_min(int n, double t1, double t2, double C) {
  const double lead = t1 + t2 + C / (n + 1);
  if (!(lead > 0.0)) {
    throw std::domain_error("reduced quadratic is not convex");
  }
  QuadraticMinimum m;
  m.zeta = -(t1 - t2) / lead;
  m.value = reduced_quadratic_check(m.zeta, n, t1, t2, C);
  return m;
}

ConstantCoeffGradient constant_coeff_gradient(double Lambda, double lambda, double a, double b) {
  if (!(lambda > 0.0) || !(Lambda >= lambda)) {
    throw std::domain_error("constant_coeff_gradient needs Lambda >= lambda > 0");
  }
  if (a == 0.0 && b == 0.0) {
    throw std::domain_error("zero Hessian: f_z vanishes");
  }
  const double m = Lambda / lambda;
  ConstantCoeffGradient g;
  g.fz = cplx((1.0 + m) * a, -2.0 * b) / 4.0;
  g.fzbar = (1.0 - m) * a / 4.0;
  g.mu_abs = std::abs(g.fzbar) / std::abs(g.fz);
  return g;
}

PointwiseSweepReport pointwise_identity_sweep(long samples, double mu_max, std::uint64_t seed) {
  if (!(mu_max >= 0.0 && mu_max < 1.0)) {
    throw std::domain_error("mu_max must lie in [0, 1)");
  }
  std::vector<PointwiseSweepReport> parts(kChunks);
  parallel_for(kChunks, [&](std::size_t chunk) {
    auto rng = chunk_stream(seed, chunk);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const long begin = samples * static_cast<long>(chunk) / static_cast<long>(kChunks);
    const long end = samples * static_cast<long>(chunk + 1) / static_cast<long>(kChunks);
    PointwiseSweepReport& r = parts[chunk];
    for (long i = begin; i < end; ++i) {
      const double mu = mu_max * unit(rng);
      const double sigma = kTwoPi * unit(rng);
      const double p = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.1 + 1.9 * unit(rng));
      if (std::abs(std::cos(sigma) - mu) <= 1e-9) {
        continue;
      }
      const PQSSample x = pqs_from_polar(mu, sigma, p);
      ++r.samples;
      const double l1 = lemma1_identity_check(x);
      if (l1 > r.max_lemma1_residual) {
        r.max_lemma1_residual = l1;
        r.worst_mu = mu;
        r.worst_sigma = sigma;
      }
      r.max_beltrami_residual = std::max(r.max_beltrami_residual, beltrami_residual(x));
      r.max_jacobian_residual = std::max(r.max_jacobian_residual, jacobian_two_way_residual(x));
      r.max_quotient_error = std::max(r.max_quotient_error, std::abs(beltrami_quotient(x) - mu));
    }
  });

  PointwiseSweepReport total;
  for (const auto& r : parts) {
    total.samples += r.samples;
    if (r.max_lemma1_residual > total.max_lemma1_residual) {
      total.max_lemma1_residual = r.max_lemma1_residual;
      total.worst_mu = r.worst_mu;
      total.worst_sigma = r.worst_sigma;
    }
    total.max_beltrami_residual = std::max(total.max_beltrami_residual, r.max_beltrami_residual);
    total.max_jacobian_residual = std::max(total.max_jacobian_residual, r.max_jacobian_residual);
    total.max_quotient_error = std::max(total.max_quotient_error, r.max_quotient_error);
  }
  return total;
}

namespace {

struct DiscreteTally {
  long samples = 0;
  long violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::optional<DiscreteWitness> witness;

  void add(double t1, double t2, const CoeffPairSample& x, double C) {
    const double m = discrete_coeff_margin(t1, t2, x, C) / discrete_coeff_scale(t1, t2, x, C);
    ++samples;
    if (m < min_margin) {
      min_margin = m;
    }
    if (m < -kViolationTol) {
      ++violations;
      if (!witness || m < witness->margin) {
        witness = DiscreteWitness{x, m};
      }
    }
  }

  void merge(const DiscreteTally& o) {
    samples += o.samples;
    violations += o.violations;
    min_margin = std::min(min_margin, o.min_margin);
    if (o.witness && (!witness || o.witness->margin < witness->margin)) {
      witness = o.witness;
    }
  }
};

cplx unit_disk(std::mt19937_64& rng, std::uniform_real_distribution<double>& unit) {
  const double r = std::sqrt(unit(rng));
  const double a = kTwoPi * unit(rng);
  return std::polar(r, a);
}

}  // namespace

std::vector<DiscreteSweepRow> discrete_inequality_sweep(const DiscreteSweepConfig& cfg) {
  if (cfg.n_min < 2 || cfg.n_max < cfg.n_min) {
    throw std::domain_error("discrete sweep needs 2 <= n_min <= n_max");
  }
  std::vector<DiscreteSweepRow> rows;
  for (std::size_t ki = 0; ki < cfg.k_values.size(); ++ki) {
    const double k = cfg.k_values[ki];
    const CriticalPoint cp = maximize_alpha(k);
    const double t1 = t1_of(k, cp.t_star);
    const double t2 = cp.t_star;
    const double C = cfg.c_scale * 2.0 * cp.alpha_star;

    std::vector<DiscreteTally> parts(kChunks);
    parallel_for(kChunks, [&](std::size_t chunk) {
      auto rng = chunk_stream(cfg.seed, ki * 4096 + chunk);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::uniform_int_distribution<int> pick_n(cfg.n_min, cfg.n_max);
      const long begin = cfg.samples_per_k * static_cast<long>(chunk) / static_cast<long>(kChunks);
      const long end = cfg.samples_per_k * static_cast<long>(chunk + 1) / static_cast<long>(kChunks);
      for (long i = begin; i < end; ++i) {
        CoeffPairSample x;
        x.n = pick_n(rng);
        x.d_plus = unit_disk(rng, unit);
        x.d_minus = unit_disk(rng, unit);
        parts[chunk].add(t1, t2, x, C);
      }
    });

    DiscreteTally tally;
    for (const auto& p : parts) {
      tally.merge(p);
    }

    // Deterministic corners: d+ = 1 and zeta = conj(d-) on real and polar grids.
    for (int n = cfg.n_min; n <= std::min(cfg.n_min + 2, cfg.n_max); ++n) {
      for (int i = -1024; i <= 1024; ++i) {
        const double zeta = static_cast<double>(i) / 512.0;
        tally.add(t1, t2, CoeffPairSample{n, 1.0, zeta}, C);
      }
      for (int i = 1; i <= 64; ++i) {
        for (int j = 0; j < 64; ++j) {
          const cplx zeta = std::polar(i / 32.0, kTwoPi * j / 64.0);
          tally.add(t1, t2, CoeffPairSample{n, 1.0, std::conj(zeta)}, C);
        }
      }
      const QuadraticMinimum qm = reduced_quadratic_min(n, t1, t2, C);
      tally.add(t1, t2, CoeffPairSample{n, 1.0, qm.zeta}, C);
    }

    DiscreteSweepRow row;
    row.k = k;
    row.t_star = cp.t_star;
    row.alpha_star = cp.alpha_star;
    row.C = C;
    row.samples = tally.samples;
    row.violations = tally.violations;
    row.min_margin = tally.min_margin;
    row.witness = tally.witness;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qrgrad
