#pragma once

// Closed-form fields sampled on polar grids, their circle-wise Fourier
// profiles, the Parseval identities linking those profiles to p, q, s, and
// an empirical Hölder exponent from the Morrey ratio r J'(r) / (2 J(r)).

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qrgrad {

using cplx = std::complex<double>;

/// Geometric radii ladder. Rungs sit at r_max * ratio^j for j < rungs; the
/// quadrature nodes refine each rung interval into `substeps` equal steps in
/// log r and continue inward to the core radius r_max * ratio^core_rungs.
struct LadderConfig {
  double r_max = 1.0;
  double ratio = 0.91700404320467122;  // 2^(-1/8)
  int rungs = 33;
  int core_rungs = 80;  // core radius 2^-10 r_max, about 1e-3 r_max
  int substeps = 32;
  std::size_t n_theta = 256;
};

struct PolarGrid {
  std::vector<double> radii;       // strictly increasing, in (0, 1]
  std::size_t n_theta = 256;       // power of two, >= 64
  std::vector<std::size_t> rungs;  // radii indices used by the Morrey estimator; empty = all

  static PolarGrid ladder(const LadderConfig& cfg = {});
  /// Throws std::invalid_argument on a malformed grid.
  void validate() const;
  double theta(std::size_t j) const;
  std::size_t nodes() const { return radii.size() * n_theta; }
  std::size_t radius_index(double r) const;  // throws if r is not a grid radius
  std::vector<std::size_t> rung_indices() const;
};

struct FieldMeta {
  std::string name;
  std::vector<std::pair<std::string, double>> params;
};

/// Node values, indexed [radius * n_theta + angle].
struct FieldSample {
  PolarGrid grid;
  std::vector<cplx> f;
  std::vector<cplx> fz;
  std::vector<cplx> fzbar;
  std::vector<double> jac;
  FieldMeta meta;

  std::size_t index(std::size_t ir, std::size_t j) const { return ir * grid.n_theta + j; }
  /// max |Im f_zbar| / max(1, |f_zbar|) over all nodes.
  double max_imag_fzbar() const;
  bool is_gradient_type(double tol = 1e-12) const { return max_imag_fzbar() <= tol; }
};

/// f = phi_z for phi = Re(sum_m a_m w^m), w = x / sqrt(Lambda) + i y / sqrt(lambda),
/// a gradient solution of Lambda phi_xx + lambda phi_yy = 0. Derivatives are
/// closed-form. Throws std::domain_error unless Lambda >= lambda > 0 and
/// every degree m >= 2.
FieldSample gen_scaled_harmonic_combo(double Lambda, double lambda,
                                      std::span<const std::pair<int, cplx>> terms,
                                      const PolarGrid& grid);
FieldSample gen_scaled_harmonic_gradient(double Lambda, double lambda, int m, const PolarGrid& grid);

/// f(r e^{i theta}) = r^beta sum_n a_n e^{i n theta}, with f_z and f_zbar
/// from the polar formulas. Throws std::domain_error unless beta > 0.
FieldSample gen_radial_power_field(double beta, std::span<const std::pair<int, cplx>> coeffs,
                                   const PolarGrid& grid);

/// c_n(r) for |n| <= N and the radial derivatives c_n'(r), the latter from
/// the DFT of f_r = e^{i theta} f_z + e^{-i theta} f_zbar.
struct FourierProfile {
  int N = 0;
  std::vector<double> radii;
  std::vector<cplx> c_table;
  std::vector<cplx> dc_table;

  std::size_t width() const { return static_cast<std::size_t>(2 * N + 1); }
  /// Zero outside |n| <= N.
  cplx c(std::size_t ir, int n) const;
  cplx dc(std::size_t ir, int n) const;
  cplx d(std::size_t ir, int n) const { return static_cast<double>(n) * c(ir, n); }
};

/// Throws std::invalid_argument when n_theta < 2N + 2 (aliasing).
FourierProfile fourier_profile(const FieldSample& field, int N);

/// c_n'(r) from 4th-order differences in log r on the radii ladder, with
/// one-sided stencils at both ends. Same layout as FourierProfile::dc_table.
std::vector<cplx> radial_derivatives_fd(const FourierProfile& profile);

/// pi sum n |c_n(r)|^2.
double J_from_fourier(const FourierProfile& profile, double r);
double J_from_fourier_at(const FourierProfile& profile, std::size_t ir);

/// Cumulative energy J(r) at every grid radius together with
/// J'(r) = r * integral of J_f over the circle. Trapezoid in theta,
/// composite Simpson in u = log r (radii must be log-uniform), and a
/// power-law closure for the punctured core inside the innermost radius.
struct EnergyProfile {
  std::vector<double> radii;
  std::vector<double> J;
  std::vector<double> dJ;
  double core_exponent = 0.0;  // local exponent of r J'(r) at the core
};
/// Throws std::domain_error when the core energy is degenerate.
EnergyProfile energy_profile(const FieldSample& field);
double J_direct(const FieldSample& field, double r);

struct ParsevalResiduals {
  double p2 = 0.0;             // integral p^2 vs (pi / 2r^2) sum |d_{n-1} + conj d_{-n-1}|^2
  double q2 = 0.0;             // integral q^2 vs (pi / 2r^2) sum |d_{n-1} - conj d_{-n-1}|^2
  double main = 0.0;           // integral (q^2 + (p^2+s^2)/2) vs pi sum ((n/r)^2 |c_n|^2 + |c_n'|^2)
  double q_consistency = 0.0;  // the two q's from f_zbar +- e^{2i theta} f_z; zero iff f_zbar is real
  double max() const;
};

/// Residuals on the circle of radius r. q is read from f_zbar - e^{2i theta} f_z.
/// The main identity uses (q_+^2 + q_-^2)/2 for q^2, which equals q^2 when
/// f_zbar is real.
ParsevalResiduals parseval_checks(const FieldSample& field, const FourierProfile& profile, double r);
ParsevalResiduals parseval_checks_at(const FieldSample& field, const FourierProfile& profile,
                                     std::size_t ir);

/// max over radii and -1 <= n <= N-2 of
/// |c'_{-n-2} - conj(c'_n) + ((n+2)/r) c_{-n-2} + (n/r) conj(c_n)|,
/// each term normalized by max(1, sum of term magnitudes).
double coefficient_relation_check(const FourierProfile& profile, std::span<const cplx> radial_derivs);
double coefficient_relation_check(const FourierProfile& profile);

struct MorreyEstimate {
  std::vector<double> radii;      // rungs
  std::vector<double> J;
  std::vector<double> dJ;
  std::vector<double> per_radius; // raw r J' / (2 J)
  double alpha_ratio = 0.0;       // min of per_radius
  double alpha_regression = 0.0;  // slope of log J against 2 log r
  bool monotone = true;           // J nondecreasing over all grid radii
};

/// Throws std::domain_error with fewer than 16 rungs or J = 0 at a rung.
MorreyEstimate morrey_estimate(const FieldSample& field);

/// max over nodes of the violation of
/// lambda/(lambda+Lambda) |grad f|^2 <= J_f <= Lambda/(lambda+Lambda) |grad f|^2,
/// normalized by max(1, |grad f|^2).
double sandwich_check(const FieldSample& field, double Lambda, double lambda);

struct BoundVsMeasured {
  double k_emp = 0.0;
  double alpha_bound = 1.0;
  double alpha_ratio = 0.0;
  double alpha_measured = 0.0;  // min(1, alpha_ratio)
  bool holds(double slack = 1e-4) const { return alpha_bound <= alpha_measured + slack; }
};

/// Throws std::invalid_argument when f_zbar is not real (not a gradient
/// mapping) or J_f < 0 at a node.
BoundVsMeasured bound_vs_measured(const FieldSample& field);
BoundVsMeasured bound_vs_measured(const FieldSample& field, const MorreyEstimate& estimate);

// --- Generator corpus -------------------------------------------------------

enum class FieldKind { gradient, extremal, non_gradient_control };

struct CorpusField {
  FieldSample field;
  FieldKind kind = FieldKind::gradient;
  std::optional<std::pair<double, double>> ellipticity;  // (Lambda, lambda)
  std::optional<double> expected_alpha;                  // closed-form Morrey exponent
  double expected_alpha_tol = 0.0;
};

std::vector<CorpusField> build_corpus(const LadderConfig& cfg = {});

struct CorpusRow {
  std::string name;
  FieldKind kind = FieldKind::gradient;
  double k_emp = 0.0;
  std::optional<double> alpha_bound;  // gradient fields only
  double alpha_ratio = 0.0;
  double alpha_regression = 0.0;
  double alpha_measured = 0.0;
  std::optional<double> sandwich;     // constant-coefficient family only
  double parseval_max = 0.0;
  double dual_path_max = 0.0;         // |J_direct - J_fourier| / max(1, J)
  double coefficient_relation = 0.0;
  bool monotone = true;
  std::vector<std::string> failures;  // contract breaches; empty = pass
  bool ok() const { return failures.empty(); }
};

inline constexpr int kDefaultFourierOrder = 16;

CorpusRow evaluate_corpus_field(const CorpusField& entry, int N = kDefaultFourierOrder);

}  // namespace qrgrad
