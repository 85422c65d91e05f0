#include "rgl/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "rgl/monotonicity_lab.hpp"
#include "rgl/random.hpp"
#include "rgl/report.hpp"

#ifndef RGL_DATA_DIR
#define RGL_DATA_DIR "data"
#endif

namespace rgl::cli {
namespace {

struct RunConfig {
  std::vector<double> alphas;
  std::string alpha_grid;
  std::vector<double> betas;
  std::vector<int> dims;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string out = "-";
  std::string format = "json";
  int threads = 0;
  bool expect_violation = false;
  // subcommand specific
  std::string rho_path, sigma_path, fixture;
  std::string variant = "rescaled";
  int rank = 0;
  bool equal = false;
};

struct Output {
  Json body;
  Table table;
  int code = kExitOk;
};

/// Failure of the run itself (not of the inputs).
class RunFailure : public Error {
 public:
  using Error::Error;
};

std::uint64_t resolve_seed(const RunConfig& cfg) {
  if (cfg.seed) return *cfg.seed;
  if (const char* env = std::getenv("RGL_SEED")) {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(env, &pos);
      if (pos != std::string(env).size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw ValidationError(std::string("RGL_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  return 0;
}

std::vector<double> alpha_list(const RunConfig& cfg, std::vector<double> fallback) {
  std::vector<double> out = cfg.alphas;
  if (!cfg.alpha_grid.empty()) {
    for (double a : parse_grid(cfg.alpha_grid)) out.push_back(a);
  }
  return out.empty() ? fallback : out;
}

int single_dim(const RunConfig& cfg, int fallback) {
  if (cfg.dims.empty()) return fallback;
  if (cfg.dims.size() > 1) throw ValidationError("this subcommand takes a single --dim");
  return cfg.dims.front();
}

DensityState load_state_file(const std::string& path) {
  if (path.empty()) throw ValidationError("a state file is required");
  return load_state(path);
}

Json fixture_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open fixture '" + path + "'");
  try {
    Json j;
    in >> j;
    return j;
  } catch (const Json::exception& e) {
    throw ValidationError("malformed fixture '" + path + "': " + e.what());
  }
}

ExperimentOptions experiment_options(const RunConfig& cfg) {
  ExperimentOptions o;
  o.parallel.threads = cfg.threads;
  if (cfg.expect_violation) o.stop_after_violations = 1;
  return o;
}

const std::vector<std::string> kExperimentHeader = {
    "claim", "variant", "parameter", "dim", "trials", "violations", "errors",
    "flagged", "resamples", "worst_margin", "counterexamples"};

void append_rows(Table& t, const ExperimentReport& r) {
  for (const auto& c : r.cells) {
    t.rows.push_back({r.claim, r.variant, c.parameter, static_cast<long long>(c.dim),
                      static_cast<long long>(c.trials), static_cast<long long>(c.violations),
                      static_cast<long long>(c.errors), static_cast<long long>(c.flagged),
                      static_cast<long long>(c.resamples), c.worst_margin,
                      static_cast<long long>(c.counterexamples.size())});
  }
}

// Expect-violation: every parameter value must have produced a violation.
// Otherwise: no violations and no per-trial errors anywhere.
Json verdict(const ExperimentReport& r, bool expect_violation, int& code) {
  std::map<double, int> per_param;
  int errors = 0;
  for (const auto& c : r.cells) {
    per_param[c.parameter] += c.violations;
    errors += c.errors;
  }
  bool ok = true;
  Json missing = Json::array();
  if (expect_violation) {
    for (const auto& [p, v] : per_param) {
      if (v == 0) {
        ok = false;
        missing.push_back(p);
      }
    }
  } else {
    ok = r.total_violations() == 0 && errors == 0;
  }
  const double reverify_gap = reverify_report(r);
  if (reverify_gap > 1e-12) ok = false;
  if (!ok) code = kExitFailed;
  return {{"expect_violation", expect_violation},
          {"passed", ok},
          {"total_violations", r.total_violations()},
          {"trial_errors", errors},
          {"parameters_without_violation", missing},
          {"counterexample_reverify_gap", reverify_gap}};
}

Output experiment_output(const std::vector<ExperimentReport>& reports, bool expect_violation) {
  Output o;
  o.table.header = kExperimentHeader;
  Json arr = Json::array();
  for (const auto& r : reports) {
    Json j = r.to_json();
    j["verdict"] = verdict(r, expect_violation, o.code);
    arr.push_back(std::move(j));
    append_rows(o.table, r);
  }
  o.body = reports.size() == 1 ? arr.front() : Json{{"experiments", arr}};
  return o;
}

// ---------------------------------------------------------------------------

Output cmd_divergence(const RunConfig& cfg) {
  const DensityState rho = load_state_file(cfg.rho_path);
  const DensityState sigma = load_state_file(cfg.sigma_path);
  if (rho.dim() != sigma.dim()) throw ValidationError("rho and sigma have different dimensions");
  Output o;
  o.table.header = {"alpha", "D_alpha", "D_tilde_alpha", "psi"};
  Json rows = Json::array();
  for (double a : alpha_list(cfg, {0.5, 1.0, 2.0})) {
    const AlphaParameter ap(a);
    const double d = alpha_divergence(rho, sigma, ap);
    const double dt = ap.is_umegaki() ? d : sandwiched_renyi(rho, sigma, a);
    const double p = psi(rho, sigma, a);
    rows.push_back({{"alpha", a}, {"D_alpha", d}, {"D_tilde_alpha", dt}, {"psi", p}});
    o.table.rows.push_back({a, d, dt, p});
  }
  o.body = {{"dim", rho.dim()}, {"rows", rows}};
  return o;
}

Output cmd_appendix_a(const RunConfig& cfg) {
  const std::string path =
      cfg.fixture.empty() ? std::string(RGL_DATA_DIR) + "/appendix_a.json" : cfg.fixture;
  const Json fx = fixture_json(path);
  const DensityState rho = state_from_json(fx.at("rho"));
  const DensityState sigma = state_from_json(fx.at("sigma"));
  const double tol = cfg.tol.value_or(1e-4);
  const double expect_above = fx.at("expected").at("limit_above").get<double>();
  const double expect_below = fx.at("expected").at("limit_below").get<double>();

  Output o;
  o.table.header = {"quantity", "alpha", "computed", "expected", "abs_error"};
  bool ok = true;
  Json limits = Json::object();
  for (auto [side, name, expected] :
       {std::tuple{ZeroSide::above, "limit_above", expect_above},
        std::tuple{ZeroSide::below, "limit_below", expect_below}}) {
    const LimitEstimate e = limit_at_zero(rho, sigma, side);
    const double err = std::abs(e.value - expected);
    ok = ok && err <= tol;
    limits[name] = {{"value", e.value},
                    {"error_bound", e.error_bound},
                    {"expected", expected},
                    {"abs_error", err},
                    {"alphas", e.alphas},
                    {"sequence", e.sequence}};
    o.table.rows.push_back({std::string(name), 0.0, e.value, expected, err});
  }

  // Closed-form eigenvalues of the sandwiched operator for this pair.
  Json eig = Json::array();
  for (double a : {0.5, 1.0, 2.0, -1.0}) {
    const RealVector mu = sandwiched_log_spectrum(rho, sigma, a).array().exp();
    const double x = std::pow(3.0, 1.0 / a);
    const double root = std::sqrt(9.0 - 3.0 * x + x * x);
    const double den = 3.0 * std::pow(4.0, 1.0 / a);
    const double lo = (3.0 + x - root) / den;
    const double hi = (3.0 + x + root) / den;
    const double err = std::max(std::abs(mu(0) - lo), std::abs(mu(1) - hi));
    ok = ok && err <= 1e-10;
    eig.push_back({{"alpha", a},
                   {"computed", {mu(0), mu(1)}},
                   {"formula", {lo, hi}},
                   {"max_abs_error", err}});
    o.table.rows.push_back({std::string("eigenvalue_low"), a, mu(0), lo, std::abs(mu(0) - lo)});
    o.table.rows.push_back({std::string("eigenvalue_high"), a, mu(1), hi, std::abs(mu(1) - hi)});
  }
  const auto bounds = detail::zero_limit_bounds(rho, sigma);
  o.body = {{"fixture", path},
            {"tolerance", tol},
            {"limits", limits},
            {"eigenvalues", eig},
            {"entropy_bounds", {{"lower", bounds.lower}, {"upper", bounds.upper}}},
            {"passed", ok}};
  if (!ok) o.code = kExitFailed;
  return o;
}

Output cmd_scan_alpha(const RunConfig& cfg) {
  const std::uint64_t seed = resolve_seed(cfg);
  const int n = single_dim(cfg, 2);
  const DensityState rho =
      cfg.rho_path.empty() ? random_state(n, derive_seed(seed, 1), 0.05) : load_state_file(cfg.rho_path);
  DensityState sigma = rho;
  if (!cfg.equal) {
    sigma = cfg.sigma_path.empty() ? random_state(rho.dim(), derive_seed(seed, 2), 0.05)
                                   : load_state_file(cfg.sigma_path);
  }
  if (rho.dim() != sigma.dim()) throw ValidationError("rho and sigma have different dimensions");
  const StateChart ch(rho.dim());

  Output o;
  o.table.header = {"alpha",          "D_alpha",          "D_tilde_alpha",
                    "psi",            "metric_eig_min",   "metric_eig_max",
                    "duality_residual", "riemann_primal", "riemann_dual"};
  Json rows = Json::array();
  Json skipped = Json::array();
  bool ok = true;
  for (double a : alpha_list(cfg, parse_grid("-3:3:0.25"))) {
    if (std::abs(a) < kAlphaSingularGuard || (a != 1.0 && std::abs(a - 1.0) < kAlphaSingularGuard)) {
      skipped.push_back(a);
      continue;
    }
    const AlphaParameter ap(a);
    const double d = alpha_divergence(rho, sigma, ap);
    const double dt = ap.is_umegaki() ? d : a * d;
    const double p = ap.is_umegaki() ? 0.0 : psi(rho, sigma, a);
    if (cfg.equal && std::max({std::abs(d), std::abs(dt), std::abs(p)}) > 1e-10) ok = false;
    const Eigen::SelfAdjointEigenSolver<RealMatrix> es(metric_matrix(rho, ch, a));
    double dual_res = NAN, rp = NAN, rd = NAN;
    try {
      dual_res = duality_residual_max(rho, ch, a);
      const CurvatureReport cr = curvature(rho, ch, a);
      rp = cr.max_abs_riemann_primal;
      rd = cr.max_abs_riemann_dual;
    } catch (const Error& e) {
      ok = false;
    }
    const double emin = es.eigenvalues().minCoeff();
    const double emax = es.eigenvalues().maxCoeff();
    rows.push_back({{"alpha", a},
                    {"D_alpha", d},
                    {"D_tilde_alpha", dt},
                    {"psi", p},
                    {"metric_eig_min", emin},
                    {"metric_eig_max", emax},
                    {"duality_residual", dual_res},
                    {"riemann_primal", rp},
                    {"riemann_dual", rd}});
    o.table.rows.push_back({a, d, dt, p, emin, emax, dual_res, rp, rd});
  }
  o.body = {{"seed", seed},
            {"dim", rho.dim()},
            {"equal_states", cfg.equal},
            {"rho", to_json(rho)},
            {"sigma", to_json(sigma)},
            {"skipped_alphas", skipped},
            {"rows", rows}};
  if (!ok) o.code = kExitFailed;
  return o;
}

Output cmd_monotone_f(const RunConfig& cfg) {
  std::vector<double> betas = cfg.betas;
  if (betas.empty()) betas = {-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0};
  std::vector<int> dims = cfg.dims;
  if (dims.empty()) dims = cfg.expect_violation ? std::vector<int>{2} : std::vector<int>{2, 3, 4};
  const int trials = cfg.trials.value_or(cfg.expect_violation ? 100000 : 1000);
  std::vector<MonotoneCandidate> cands;
  for (double b : betas) cands.push_back(MonotoneCandidate::kernel(KernelFamily::from_beta(b)));
  return experiment_output(
      {operator_monotone_test(cands, dims, trials, resolve_seed(cfg), experiment_options(cfg))},
      cfg.expect_violation);
}

Output cmd_monotone_metric(const RunConfig& cfg) {
  const auto alphas = alpha_list(cfg, {-2.0, -1.0, 0.5, 1.0, 2.0, 5.0});
  const int trials = cfg.trials.value_or(cfg.expect_violation ? 10000 : 500);
  return experiment_output({metric_monotonicity_experiment(alphas, single_dim(cfg, 2), trials,
                                                           resolve_seed(cfg), cfg.rank,
                                                           experiment_options(cfg))},
                           cfg.expect_violation);
}

Output cmd_monotone_divergence(const RunConfig& cfg) {
  const auto alphas = alpha_list(cfg, {2.0});
  const int trials = cfg.trials.value_or(cfg.expect_violation ? 10000 : 1000);
  return experiment_output(
      {divergence_monotonicity_experiment(alphas, single_dim(cfg, 2), trials, resolve_seed(cfg),
                                          divergence_variant_from_string(cfg.variant), cfg.rank,
                                          experiment_options(cfg))},
      cfg.expect_violation);
}

Output cmd_positivity(const RunConfig& cfg) {
  const auto alphas = alpha_list(cfg, {-3.0, -1.0, -0.3, 0.3, 0.5, 0.7, 1.0, 2.0, 5.0});
  return experiment_output({positivity_experiment(alphas, single_dim(cfg, 2),
                                                  cfg.trials.value_or(1000), resolve_seed(cfg),
                                                  cfg.equal, experiment_options(cfg))},
                           false);
}

Output cmd_pinching(const RunConfig& cfg) {
  const int n = single_dim(cfg, 0);
  const int trials = cfg.trials.value_or(10000);
  const std::uint64_t seed = resolve_seed(cfg);
  ExperimentOptions opts = experiment_options(cfg);
  opts.stop_after_violations = 0;
  return experiment_output({pinching_lemma_experiment(n, trials, seed, opts),
                            strict_convexity_spectra_oracle(trials, seed, n, opts)},
                           false);
}

Output cmd_flatness(const RunConfig& cfg) {
  const auto alphas = alpha_list(cfg, {0.5, 1.0, 2.0});
  const int n = single_dim(cfg, 2);
  const int states = cfg.trials.value_or(10);
  const double threshold = cfg.tol.value_or(5e-3);
  const std::uint64_t seed = resolve_seed(cfg);
  const StateChart ch(n);

  Output o;
  o.table.header = {"alpha", "state", "riemann_primal", "riemann_dual", "h"};
  // value[alpha index][state]
  std::vector<std::vector<double>> worst(alphas.size(), std::vector<double>(static_cast<std::size_t>(states)));
  Json per_alpha = Json::array();
  for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
    Json reps = Json::array();
    for (int s = 0; s < states; ++s) {
      const DensityState rho = random_state(n, derive_seed(seed, 3, static_cast<std::uint64_t>(s)), 0.05);
      const CurvatureReport r = curvature(rho, ch, alphas[ai]);
      worst[ai][static_cast<std::size_t>(s)] = std::max(r.max_abs_riemann_primal, r.max_abs_riemann_dual);
      reps.push_back(r.to_json());
      o.table.rows.push_back({alphas[ai], static_cast<long long>(s), r.max_abs_riemann_primal,
                              r.max_abs_riemann_dual, r.h});
    }
    per_alpha.push_back({{"alpha", alphas[ai]}, {"reports", reps}});
  }
  // alpha = 1 must look flat; every other alpha must stand out from it by 10x
  // at the same state and steps.
  bool ok = true;
  std::optional<std::size_t> flat;
  for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
    if (alphas[ai] == 1.0) flat = ai;
  }
  Json checks = Json::array();
  if (flat) {
    for (int s = 0; s < states; ++s) {
      const double base = worst[*flat][static_cast<std::size_t>(s)];
      if (base > threshold) ok = false;
      for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        if (ai == *flat) continue;
        const double v = worst[ai][static_cast<std::size_t>(s)];
        const bool pass = v >= 10.0 * base;
        ok = ok && pass;
        checks.push_back({{"alpha", alphas[ai]}, {"state", s}, {"value", v}, {"flat_value", base}, {"ratio_ok", pass}});
      }
    }
  }
  o.body = {{"seed", seed},
            {"dim", n},
            {"threshold", threshold},
            {"curvature", per_alpha},
            {"comparisons", checks},
            {"passed", ok}};
  if (!ok) o.code = kExitFailed;
  return o;
}

void emit(const Output& o, const std::string& command, const RunConfig& cfg, std::ostream& out) {
  std::string content;
  if (cfg.format == "csv") {
    content = to_csv(o.table);
  } else {
    content = report_document(command, o.body).dump(2) + "\n";
  }
  if (cfg.out == "-") {
    out << content;
    out.flush();
  } else {
    write_atomic(cfg.out, content);
  }
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t pos = 0;
      parts.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("malformed grid '" + spec + "', expected start:stop:step");
    }
  }
  if (parts.size() != 3) throw ValidationError("malformed grid '" + spec + "', expected start:stop:step");
  const double start = parts[0], stop = parts[1], step = parts[2];
  if (!(step > 0.0) || stop < start) throw ValidationError("grid needs step > 0 and stop >= start");
  const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 100000) throw ValidationError("grid has too many points");
  std::vector<double> out;
  for (long long k = 0; k < count; ++k) {
    // Snap to 1e-12 so 0.1-type steps land on their decimal values.
    out.push_back(std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12);
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sandwiched Renyi divergence geometry: reproductions and experiments", "rgl"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sc) {
    sc->add_option("--alpha", cfg.alphas, "alpha values");
    sc->add_option("--alpha-grid", cfg.alpha_grid, "alpha grid start:stop:step");
    sc->add_option("--beta", cfg.betas, "kernel beta values");
    sc->add_option("--dim", cfg.dims, "Hilbert space dimension(s)");
    sc->add_option("--trials", cfg.trials, "trials per cell (states for flatness)");
    sc->add_option("--seed", cfg.seed, "master seed (default: $RGL_SEED, else 0)");
    sc->add_option("--tol", cfg.tol, "tolerance override (appendix-a, flatness)");
    sc->add_option("--out", cfg.out, "output file, '-' for stdout");
    sc->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sc->add_option("--threads", cfg.threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    sc->add_flag("--expect-violation", cfg.expect_violation,
                 "succeed only if every parameter value yields a counterexample");
  };

  auto* div = app.add_subcommand("divergence", "D_alpha, D~_alpha and psi for two state files");
  div->add_option("--rho", cfg.rho_path, "state JSON")->required();
  div->add_option("--sigma", cfg.sigma_path, "state JSON")->required();
  auto* appa = app.add_subcommand("appendix-a", "one-sided alpha -> 0 limits of the two-level example");
  appa->add_option("--fixture", cfg.fixture, "fixture JSON (defaults to the bundled one)");
  auto* scan = app.add_subcommand("scan-alpha", "divergence, metric, duality and curvature over an alpha grid");
  scan->add_option("--rho", cfg.rho_path, "state JSON (default: seeded random state)");
  scan->add_option("--sigma", cfg.sigma_path, "state JSON (default: seeded random state)");
  scan->add_flag("--equal", cfg.equal, "use sigma = rho");
  auto* mf = app.add_subcommand("monotone-f", "operator monotonicity of f_beta");
  auto* mm = app.add_subcommand("monotone-metric", "metric contraction under channels");
  mm->add_option("--rank", cfg.rank, "Kraus rank (0: alternate n^2 and 2)");
  auto* md = app.add_subcommand("monotone-divergence", "divergence contraction under channels");
  md->add_option("--rank", cfg.rank, "Kraus rank (0: alternate n^2 and 2)");
  md->add_option("--variant", cfg.variant, "rescaled or sandwiched")
      ->check(CLI::IsMember({"rescaled", "sandwiched"}));
  auto* flat = app.add_subcommand("flatness", "curvature of both connections over alpha");
  auto* pos = app.add_subcommand("positivity", "nonnegativity and the pinching step");
  pos->add_flag("--equal", cfg.equal, "use sigma = rho");
  auto* pin = app.add_subcommand("pinching-lemmas", "majorization, fixed-point and strict convexity lemmas");
  for (auto* sc : {div, appa, scan, mf, mm, md, flat, pos, pin}) common(sc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  try {
    if (cfg.out != "-") check_writable(cfg.out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  Output result;
  try {
    if (name == "divergence") result = cmd_divergence(cfg);
    else if (name == "appendix-a") result = cmd_appendix_a(cfg);
    else if (name == "scan-alpha") result = cmd_scan_alpha(cfg);
    else if (name == "monotone-f") result = cmd_monotone_f(cfg);
    else if (name == "monotone-metric") result = cmd_monotone_metric(cfg);
    else if (name == "monotone-divergence") result = cmd_monotone_divergence(cfg);
    else if (name == "flatness") result = cmd_flatness(cfg);
    else if (name == "positivity") result = cmd_positivity(cfg);
    else result = cmd_pinching(cfg);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailed;
  }

  try {
    emit(result, name, cfg, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  if (result.code != kExitOk) err << name << ": expectations not met\n";
  return result.code;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"rgl"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rgl::cli
