#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"
#include "qrgrad/exponent_core.hpp"
#include "qrgrad/fourier_morrey.hpp"
#include "qrgrad/optimal_exponent.hpp"
#include "qrgrad/parallel.hpp"
#include "qrgrad/pointwise_verifier.hpp"

namespace qrgrad::cli {

namespace {

using json = nlohmann::ordered_json;
using Cell = std::variant<std::monostate, double, long, std::string, bool>;

// Raised for bad user input that the parser cannot catch (missing k, bad grid).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<double> k;
  std::optional<double> K;
  int grid = 0;
  double tol = kDefaultMaximizeTol;
  std::uint64_t seed = kDefaultSeed;
  std::string format;
  std::string out;
  long samples = 100000;
  double t1_inflation = 1.0;
  double c_scale = 1.0;
  int n_min = 2;
};

struct Output {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  json summary = json::object();
  std::vector<std::string> notes;
  bool pass = true;
};

std::string fmt(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string cell_text(const Cell& c, int digits) {
  struct {
    int digits;
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double v) const { return fmt(v, digits); }
    std::string operator()(long v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  } visitor{digits};
  return std::visit(visitor, c);
}

json cell_json(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) {
    return std::isfinite(*d) ? json(*d) : json(nullptr);
  }
  if (const long* l = std::get_if<long>(&c)) return *l;
  if (const std::string* s = std::get_if<std::string>(&c)) return *s;
  if (const bool* b = std::get_if<bool>(&c)) return *b;
  return nullptr;
}

Cell opt_cell(const std::optional<double>& v) {
  return v ? Cell(*v) : Cell(std::monostate{});
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void render_csv(const Output& o, std::ostream& os) {
  for (std::size_t i = 0; i < o.columns.size(); ++i) {
    os << (i ? "," : "") << o.columns[i];
  }
  os << '\n';
  for (const auto& row : o.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << cell_text(row[i], 17);
    }
    os << '\n';
  }
}

void render_json(const Output& o, std::ostream& os) {
  json doc;
  doc["schema"] = 1;
  doc["command"] = o.command;
  doc["status"] = o.pass ? "pass" : "fail";
  json rows = json::array();
  for (const auto& row : o.rows) {
    json r = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      r[o.columns[i]] = cell_json(row[i]);
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  doc["summary"] = o.summary;
  doc["notes"] = o.notes;
  os << doc.dump(2) << '\n';
}

std::string summary_text(const json& v) {
  if (v.is_number_float()) return fmt(v.get<double>(), 12);
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void render_table(const Output& o, std::ostream& os) {
  std::vector<std::vector<std::string>> text;
  std::vector<std::size_t> width(o.columns.size());
  for (std::size_t i = 0; i < o.columns.size(); ++i) width[i] = o.columns[i].size();
  for (const auto& row : o.rows) {
    std::vector<std::string> line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line.push_back(cell_text(row[i], 10));
      width[i] = std::max(width[i], line.back().size());
    }
    text.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      os << (i ? "  " : "") << line[i] << std::string(width[i] - line[i].size(), ' ');
    }
    os << '\n';
  };
  emit(o.columns);
  for (const auto& line : text) emit(line);
  for (const auto& [key, value] : o.summary.items()) {
    os << key << ": " << summary_text(value) << '\n';
  }
  for (const auto& note : o.notes) os << "note: " << note << '\n';
  os << "status: " << (o.pass ? "pass" : "fail") << '\n';
}

DistortionParams require_params(const Options& opt) {
  if (opt.k) return DistortionParams::from_k(*opt.k);
  if (opt.K) return DistortionParams::from_K(*opt.K);
  throw UsageError("one of --k or --K is required");
}

const std::vector<std::string> kSweepColumns{"k",        "alpha_classical", "alpha1", "alpha0",
                                             "alpha2",   "alpha_star",      "t_star"};

std::vector<Cell> report_row(const ExponentReport& r) {
  return {r.k, r.alpha_classical, r.alpha1, r.alpha0, r.alpha2, r.alpha_star, r.t_star};
}

// --- Subcommands ------------------------------------------------------------

Output run_exponent(const Options& opt) {
  const DistortionParams params = require_params(opt);
  Output o{"exponent", kSweepColumns, {}, json::object(), {}, true};
  o.rows.push_back(report_row(exponent_report(params, opt.tol)));
  o.summary["K"] = params.K();
  o.summary["t0"] = params.k() > 0.0 ? t0_of(params.k()) : 1.0;
  return o;
}

Output run_sweep(const Options& opt) {
  const int grid = opt.grid == 0 ? 99 : opt.grid;
  if (grid < 2) throw UsageError("--grid must be at least 2");
  Output o{"sweep", kSweepColumns, {}, json::object(), {}, true};
  long broken = 0;
  for (int i = 1; i <= grid; ++i) {
    const double k = static_cast<double>(i) / (grid + 1);
    const ExponentReport r = exponent_report(DistortionParams::from_k(k), opt.tol);
    if (!(r.alpha_classical < r.alpha1 && r.alpha1 < r.alpha0 && r.alpha0 <= r.alpha_star)) {
      ++broken;
      o.notes.push_back("ordering chain broken at k=" + fmt(k, 17));
    }
    o.rows.push_back(report_row(r));
  }
  o.pass = broken == 0;
  o.summary["grid"] = grid;
  o.summary["chain_violations"] = broken;
  o.summary["alpha2_crossover"] = alpha2_crossover();
  return o;
}

Output run_quartic(const Options& opt) {
  const DistortionParams params = require_params(opt);
  const double k = params.k();
  if (!(k > 0.0)) throw UsageError("quartic needs 0 < k < 1");
  const QuarticNk q = quartic_coeffs(k);
  const CriticalPoint cp = maximize_alpha(k, opt.tol);
  const ConcavityCertificate cert = certify_concavity(k, 1000);
  const PhiCoefficients phi = phi_coefficients(k);

  Output o{"quartic", {"k", "root", "alpha_at_root", "distance_to_t_star", "Nk_at_root"}, {}, json::object(), {}, true};
  for (double root : cp.quartic_roots) {
    o.rows.push_back({k, root, alpha_of_t(k, root), std::abs(root - cp.t_star),
                      std::abs(eval_Nk(q, root)) / q.max_abs_coeff()});
  }
  const double k2 = k * k;
  const double delta_closed = 80.0 * k2 * k2 * (1.0 - k2) * (1.0 - k2);
  o.summary["coefficients"] = {q.c4, q.c3, q.c2, q.c1, q.c0};
  o.summary["interval"] = {1.0 - k, 1.0 - k2};
  o.summary["t_star"] = cp.t_star;
  o.summary["alpha_star"] = cp.alpha_star;
  o.summary["agreement"] = finite_or_null(cp.agreement);
  o.summary["quartic_residual"] = cp.quartic_residual;
  o.summary["derivative_residual"] = cp.derivative_residual;
  o.summary["stationarity_corrected"] = cp.stationarity.corrected;
  o.summary["stationarity_printed"] = cp.stationarity.printed;
  o.summary["dalpha_left"] = cert.dalpha_left;
  o.summary["dalpha_right"] = cert.dalpha_right;
  o.summary["alpha_pp_max"] = cert.grid_second_deriv_max;
  o.summary["phi_min"] = cert.phi_min_on_interval;
  o.summary["phi_delta"] = phi.delta;
  o.summary["phi_delta_closed_form"] = delta_closed;
  o.summary["concave"] = cert.holds();

  if (!cp.quartic_root_found || !(cp.agreement <= 1e-8)) {
    o.notes.push_back("discrepancy: optimizer and quartic root differ; see quartic_residual and "
                      "stationarity_corrected");
  }
  if (!(cp.stationarity.corrected < 1e-8)) {
    o.pass = false;
    o.notes.push_back("stationarity residual at t_star exceeds 1e-8");
  }
  if (!cert.holds()) {
    o.pass = false;
    o.notes.push_back("concavity certificate failed");
  }
  return o;
}

Output run_report(const Options& opt) {
  const int grid = opt.grid == 0 ? 9 : opt.grid;
  if (grid < 2) throw UsageError("--grid must be at least 2");
  Output o{"report",
           {"k", "t_star", "alpha_star", "agreement", "quartic_residual", "stationarity_corrected",
            "stationarity_printed", "dalpha_left", "dalpha_right", "alpha_pp_max", "phi_min", "concave"},
           {}, json::object(), {}, true};
  double worst_agreement = 0.0;
  double worst_stationarity = 0.0;
  for (int i = 1; i <= grid; ++i) {
    const double k = static_cast<double>(i) / (grid + 1);
    const CriticalPoint cp = maximize_alpha(k, opt.tol);
    const ConcavityCertificate cert = certify_concavity(k, 1000);
    o.rows.push_back({k, cp.t_star, cp.alpha_star, cp.agreement, cp.quartic_residual,
                      cp.stationarity.corrected, cp.stationarity.printed, cert.dalpha_left,
                      cert.dalpha_right, cert.grid_second_deriv_max, cert.phi_min_on_interval,
                      cert.holds()});
    worst_agreement = std::max(worst_agreement, std::isfinite(cp.agreement) ? cp.agreement : 1.0);
    worst_stationarity = std::max(worst_stationarity, cp.stationarity.corrected);
    if (!cert.holds()) {
      o.pass = false;
      o.notes.push_back("concavity certificate failed at k=" + fmt(k, 17));
    }
  }
  if (!(worst_stationarity < 1e-8)) o.pass = false;
  o.summary["grid"] = grid;
  o.summary["max_agreement"] = worst_agreement;
  o.summary["max_stationarity_corrected"] = worst_stationarity;
  return o;
}

Output run_verify_pointwise(const Options& opt) {
  if (!(opt.t1_inflation > 0.0)) throw UsageError("--inject-t1-inflation must be positive");
  if (opt.samples < 1) throw UsageError("--samples must be positive");
  Output o{"verify-pointwise",
           {"k", "t", "t1", "t2", "min_margin", "infimum_at_k", "samples", "violations"},
           {}, json::object(), {}, true};
  long violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  double worst_infimum = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double k = i / 10.0;
    for (int j = 1; j <= 8; ++j) {
      const double t = 1.0 - k + j / 9.0 * (k - k * k);
      const double t1 = t1_of(k, t) * opt.t1_inflation;
      const MarginReport m = lemma2_margin_split(k, t1, t);
      o.rows.push_back({k, t, t1, t, m.min_margin, m.infimum_at_k, m.samples, m.violations});
      violations += m.violations;
      worst_margin = std::min(worst_margin, m.min_margin);
      worst_infimum = std::max(worst_infimum, std::abs(m.infimum_at_k));
    }
  }
  const PointwiseSweepReport id = pointwise_identity_sweep(opt.samples, 0.95, opt.seed);
  constexpr double kIdentityTol = 1e-10;
  const double worst_identity = std::max({id.max_lemma1_residual, id.max_beltrami_residual,
                                          id.max_jacobian_residual, id.max_quotient_error});
  if (!(worst_identity < kIdentityTol)) {
    ++violations;
    o.notes.push_back("pointwise identity residual above 1e-10 near mu=" + fmt(id.worst_mu, 17) +
                      " varsigma=" + fmt(id.worst_sigma, 17));
  }
  o.pass = violations == 0;
  o.summary["seed"] = opt.seed;
  o.summary["lattice_violations"] = violations;
  o.summary["min_margin"] = worst_margin;
  o.summary["max_abs_infimum_at_k"] = worst_infimum;
  o.summary["identity_samples"] = id.samples;
  o.summary["lemma1_residual"] = id.max_lemma1_residual;
  o.summary["beltrami_residual"] = id.max_beltrami_residual;
  o.summary["jacobian_residual"] = id.max_jacobian_residual;
  o.summary["quotient_error"] = id.max_quotient_error;
  return o;
}

Output run_verify_discrete(const Options& opt) {
  if (opt.samples < 1) throw UsageError("--samples must be positive");
  if (!(opt.c_scale > 0.0)) throw UsageError("--c-scale must be positive");
  if (opt.n_min < 2) throw UsageError("--n-min must be at least 2");
  DiscreteSweepConfig cfg;
  cfg.samples_per_k = opt.samples;
  cfg.c_scale = opt.c_scale;
  cfg.n_min = opt.n_min;
  cfg.seed = opt.seed;
  if (cfg.n_min > cfg.n_max) throw UsageError("--n-min exceeds the largest mode");

  Output o{"verify-discrete",
           {"k", "t_star", "alpha_star", "C", "samples", "violations", "min_margin", "witness_n"},
           {}, json::object(), {}, true};
  long violations = 0;
  std::optional<DiscreteWitness> worst;
  double worst_k = 0.0;
  for (const DiscreteSweepRow& row : discrete_inequality_sweep(cfg)) {
    o.rows.push_back({row.k, row.t_star, row.alpha_star, row.C, row.samples, row.violations,
                      row.min_margin,
                      row.witness ? Cell(static_cast<long>(row.witness->sample.n)) : Cell(std::monostate{})});
    violations += row.violations;
    if (row.witness && (!worst || row.witness->margin < worst->margin)) {
      worst = row.witness;
      worst_k = row.k;
    }
  }
  o.pass = violations == 0;
  o.summary["seed"] = opt.seed;
  o.summary["c_scale"] = opt.c_scale;
  o.summary["n_min"] = opt.n_min;
  o.summary["violations"] = violations;
  if (worst) {
    const CoeffPairSample& s = worst->sample;
    o.summary["witness"] = {{"k", worst_k},
                            {"n", s.n},
                            {"d_plus", {s.d_plus.real(), s.d_plus.imag()}},
                            {"d_minus", {s.d_minus.real(), s.d_minus.imag()}},
                            {"margin", worst->margin}};
  }
  return o;
}

std::string kind_name(FieldKind kind) {
  switch (kind) {
    case FieldKind::gradient: return "gradient";
    case FieldKind::extremal: return "extremal";
    case FieldKind::non_gradient_control: return "non_gradient_control";
  }
  return "unknown";
}

Output run_morrey(const Options&) {
  Output o{"morrey",
           {"field", "kind", "k_emp", "alpha_bound", "alpha_ratio", "alpha_regression",
            "alpha_measured", "sandwich", "parseval_max", "dual_path_max", "coefficient_relation",
            "monotone", "ok"},
           {}, json::object(), {}, true};
  long failed = 0;
  const std::vector<CorpusField> corpus = build_corpus();
  for (const CorpusField& entry : corpus) {
    const CorpusRow row = evaluate_corpus_field(entry);
    o.rows.push_back({row.name, kind_name(row.kind), row.k_emp, opt_cell(row.alpha_bound),
                      row.alpha_ratio, row.alpha_regression, row.alpha_measured,
                      opt_cell(row.sandwich), row.parseval_max, row.dual_path_max,
                      row.coefficient_relation, row.monotone, row.ok()});
    for (const std::string& f : row.failures) {
      o.notes.push_back(row.name + ": " + f);
    }
    failed += row.ok() ? 0 : 1;
  }
  o.pass = failed == 0;
  o.summary["fields"] = static_cast<long>(corpus.size());
  o.summary["failed"] = failed;
  o.summary["fourier_order"] = kDefaultFourierOrder;
  return o;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Hölder exponents of quasiregular gradient mappings and their numerical checks",
               "qrgrad"};
  app.require_subcommand(1);

  auto add_format = [&](CLI::App* sub, const char* fallback) {
    sub->add_option("--format", opt.format, std::string("csv, json or table (default ") + fallback + ")")
        ->check(CLI::IsMember({"csv", "json", "table"}));
    sub->add_option("--out", opt.out, "write to this path instead of stdout");
  };
  auto add_k = [&](CLI::App* sub) {
    auto* ok = sub->add_option("--k", opt.k, "Beltrami bound k in [0, 1)");
    auto* oK = sub->add_option("--K", opt.K, "distortion K >= 1");
    ok->excludes(oK);
  };
  auto add_tol = [&](CLI::App* sub) {
    sub->add_option("--tol", opt.tol, "maximizer tolerance (default 1e-12)")->check(CLI::PositiveNumber);
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", opt.seed, "64-bit RNG seed (default 0x5EED)");
    sub->add_option("--samples", opt.samples, "Monte Carlo samples (default 100000)");
  };

  CLI::App* exponent = app.add_subcommand("exponent", "all exponents for one k or K");
  add_k(exponent);
  add_tol(exponent);
  add_format(exponent, "table");

  CLI::App* sweep = app.add_subcommand("sweep", "exponent table on k = i/(grid+1)");
  sweep->add_option("--grid", opt.grid, "number of k values (default 99)");
  add_tol(sweep);
  add_format(sweep, "csv");

  CLI::App* quartic = app.add_subcommand("quartic", "quartic N_k, its roots and the maximizer");
  add_k(quartic);
  add_tol(quartic);
  add_format(quartic, "table");

  CLI::App* report = app.add_subcommand("report", "optimizer and concavity diagnostics on a k grid");
  report->add_option("--grid", opt.grid, "number of k values (default 9)");
  add_tol(report);
  add_format(report, "table");

  CLI::App* pointwise = app.add_subcommand("verify-pointwise", "pointwise identity and lower-bound sweeps");
  add_seed(pointwise);
  pointwise->add_option("--inject-t1-inflation", opt.t1_inflation)->group("");
  add_format(pointwise, "table");

  CLI::App* discrete = app.add_subcommand("verify-discrete", "Fourier coefficient inequality sweep");
  add_seed(discrete);
  discrete->add_option("--c-scale", opt.c_scale)->group("");
  discrete->add_option("--n-min", opt.n_min)->group("");
  add_format(discrete, "table");

  CLI::App* morrey = app.add_subcommand("morrey", "Morrey exponent on the field corpus");
  add_format(morrey, "table");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }

  Output result;
  try {
    if (*exponent) result = run_exponent(opt);
    else if (*sweep) result = run_sweep(opt);
    else if (*quartic) result = run_quartic(opt);
    else if (*report) result = run_report(opt);
    else if (*pointwise) result = run_verify_pointwise(opt);
    else if (*discrete) result = run_verify_discrete(opt);
    else result = run_morrey(opt);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kUsage;
  }

  const std::string format =
      !opt.format.empty() ? opt.format : (result.command == "sweep" ? "csv" : "table");
  std::ostringstream buffer;
  if (format == "csv") render_csv(result, buffer);
  else if (format == "json") render_json(result, buffer);
  else render_table(result, buffer);

  if (!opt.out.empty()) {
    std::ofstream file(opt.out, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << opt.out << '\n';
      return kUsage;
    }
    file << buffer.str();
  } else {
    out << buffer.str();
  }
  return result.pass ? kPass : kViolation;
}

}  // namespace qrgrad::cli
