// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "json.hpp"
#include "rgl/cli.hpp"
#include "rgl/monotonicity_lab.hpp"
#include "rgl/random.hpp"

using namespace rgl;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

constexpr std::uint64_t kSeed = 20240611;

ExperimentOptions early_stop() {
  ExperimentOptions o;
  o.stop_after_violations = 1;
  return o;
}

// ---------------------------------------------------------------------------

Verdict two_level_limits() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream out, err;
  const int code = cli::run({"appendix-a"}, out, err);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.require(code == cli::kExitOk, "exit code " + std::to_string(code) + " " + err.str());
  if (code != cli::kExitOk) return v;
  const auto doc = nlohmann::json::parse(out.str())["result"];
  const double above = doc["limits"]["limit_above"]["value"];
  const double below = doc["limits"]["limit_below"]["value"];
  const double e_above = std::abs(above - 0.5 * std::log(1.5));
  const double e_below = std::abs(below - 0.5 * std::log(2.0));
  v.require(e_above <= 1e-4, "upper-side limit off by " + fmt(e_above));
  v.require(e_below <= 1e-4, "lower-side limit off by " + fmt(e_below));
  double eig = 0.0;
  for (const auto& row : doc["eigenvalues"]) eig = std::max(eig, row["max_abs_error"].get<double>());
  v.require(eig <= 1e-10, "eigenvalue error " + fmt(eig));
  v.require(secs < 5.0, "runtime " + fmt(secs) + " s");
  v.note("limits " + fmt(above) + ", " + fmt(below) + "; eigenvalue err " + fmt(eig) + "; " + fmt(secs) + " s");
  return v;
}

Verdict kernel_fixtures() {
  Verdict v;
  const auto sld = KernelFamily::from_beta(2.0);
  const auto rld = KernelFamily::from_beta(-1.0);
  const auto bkm = KernelFamily::from_beta(1.0);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double t = std::pow(10.0, -2.0 + 4.0 * k / 49.0);
    worst = std::max(worst, std::abs(kernel_eval(sld, t) - (1 + t) / 2));
    worst = std::max(worst, std::abs(kernel_eval(rld, t) - 2 * t / (1 + t)));
    worst = std::max(worst, std::abs(kernel_eval(bkm, t) - (t - 1) / std::log(t)));
  }
  const double e = std::numbers::e;
  const double ends = std::max(std::abs(kernel_eval(rld, e) - 2 * e / (1 + e)),
                               std::abs(kernel_eval(sld, e) - (1 + e) / 2));
  v.require(worst <= 1e-12, "grid error " + fmt(worst));
  v.require(ends <= 1e-12, "t = e error " + fmt(ends));
  v.note("grid error " + fmt(worst) + ", endpoint error " + fmt(ends));
  return v;
}

Verdict operator_monotone_region() {
  Verdict v;
  std::vector<MonotoneCandidate> inside, outside;
  for (double b : {-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0}) inside.push_back(MonotoneCandidate::kernel(KernelFamily::from_beta(b)));
  for (double b : {-1.2, 2.2}) outside.push_back(MonotoneCandidate::kernel(KernelFamily::from_beta(b)));
  const auto ok = operator_monotone_test(inside, {2, 3, 4}, 1000, kSeed);
  v.require(ok.total_violations() == 0, std::to_string(ok.total_violations()) + " violations inside [-1, 2]");
  const auto bad = operator_monotone_test(outside, {2}, 100000, kSeed, early_stop());
  for (const auto& c : bad.cells) {
    v.require(c.violations > 0, "no counterexample for beta " + fmt(c.parameter));
    v.note("beta " + fmt(c.parameter) + ": first violation within " + std::to_string(c.trials) + " trials");
  }
  const double gap = reverify_report(bad);
  v.require(gap <= 1e-12, "re-verification gap " + fmt(gap));
  return v;
}

Verdict metric_monotonicity_region() {
  Verdict v;
  const auto ok = metric_monotonicity_experiment({-2.0, -1.0, 0.5, 1.0, 2.0, 5.0}, 2, 500, kSeed);
  v.require(ok.total_violations() == 0, std::to_string(ok.total_violations()) + " violations in the monotone region");
  const auto bad = metric_monotonicity_experiment({-0.5, 0.3}, 2, 10000, kSeed, 0, early_stop());
  for (const auto& c : bad.cells) {
    v.require(c.violations > 0, "no violation for alpha " + fmt(c.parameter));
    v.note("alpha " + fmt(c.parameter) + ": violation within " + std::to_string(c.trials) + " trials");
  }
  v.require(reverify_report(bad) <= 1e-12, "re-verification");
  return v;
}

Verdict divergence_monotonicity() {
  Verdict v;
  for (auto variant : {DivergenceVariant::rescaled, DivergenceVariant::sandwiched}) {
    const std::string name = to_string(variant);
    const auto ok = divergence_monotonicity_experiment({2.0}, 2, 1000, kSeed, variant);
    v.require(ok.total_violations() == 0, name + ": violations at alpha 2");
    const auto bad = divergence_monotonicity_experiment({-0.5, 0.3}, 2, 10000, kSeed, variant, 0, early_stop());
    for (const auto& c : bad.cells) {
      v.require(c.violations > 0, name + ": no violation for alpha " + fmt(c.parameter));
      v.note(name + " alpha " + fmt(c.parameter) + ": " + std::to_string(c.trials) + " trials");
    }
    v.require(reverify_report(bad) <= 1e-12, name + ": re-verification");
  }
  return v;
}

Verdict metric_cross_validation() {
  Verdict v;
  Rng rng(derive_seed(kSeed, 6));
  double worst = 0.0;
  int triples = 0;
  for (double a : {-2.0, -1.0, 0.5, 0.7, 1.0, 2.0}) {
    for (int t = 0; t < 100; ++t) {
      const int n = 2 + t % 2;
      const StateChart c(n);
      const auto rho = random_state(n, rng, 0.05);
      const auto x = random_tangent(c, rng);
      const auto y = random_tangent(c, rng);
      const double closed = metric(rho, x, y, a);
      const double fd = metric_eguchi(rho, x, y, a);
      // Relative to the Cauchy-Schwarz scale: g(X, Y) itself can vanish.
      const double scale = std::sqrt(metric(rho, x, x, a) * metric(rho, y, y, a));
      worst = std::max(worst, std::abs(closed - fd) / scale);
      ++triples;
    }
  }
  v.require(worst <= 1e-4, "relative error " + fmt(worst));
  double fisher = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + t % 3;
    RealVector p(n);
    for (int i = 0; i < n; ++i) p(i) = 0.05 + rng.uniform();
    p /= p.sum();
    const StateChart c(n);
    std::vector<RealVector> dirs;
    for (int idx : c.diagonal_indices()) dirs.push_back(c.basis(idx).matrix().diagonal().real());
    const RealMatrix want = classical_fisher_metric(p, dirs);
    for (double a : {-2.0, 0.5, 2.0}) {
      const auto pair = connections_closed_form(DensityState::diagonal(p), c, a, c.diagonal_indices());
      fisher = std::max(fisher, (pair.primal.metric_matrix - want).cwiseAbs().maxCoeff());
    }
  }
  v.require(fisher <= 1e-10, "Fisher restriction error " + fmt(fisher));
  v.note(std::to_string(triples) + " triples, worst relative error " + fmt(worst) + ", Fisher error " + fmt(fisher));
  return v;
}

Verdict connections_and_duality() {
  Verdict v;
  Rng rng(derive_seed(kSeed, 7));
  double gap = 0.0, dual = 0.0, classical = 0.0;
  for (double a : {-1.0, 0.5, 0.7, 1.0, 2.0}) {
    for (int n : {2, 3}) {
      const StateChart c(n);
      const auto rho = random_state(n, rng, 0.05);
      const auto closed = connections_closed_form(rho, c, a);
      const auto fd = connections_eguchi(rho, c, a);
      for (std::size_t q = 0; q < closed.primal.gamma.size(); ++q) {
        gap = std::max({gap, std::abs(closed.primal.gamma[q] - fd.primal.gamma[q]),
                        std::abs(closed.dual.gamma[q] - fd.dual.gamma[q])});
      }
      dual = std::max(dual, duality_residual_max(rho, c, a, &closed));
    }
    // Commutative restriction against the simplex alpha-connections, taken
    // from the finite-difference connections on the full chart.
    const StateChart c(3);
    const RealVector p = (RealVector(3) << 0.2, 0.3, 0.5).finished();
    const auto fd = connections_eguchi(DensityState::diagonal(p), c, a);
    const auto idx = c.diagonal_indices();
    std::vector<RealVector> dirs;
    for (int i : idx) dirs.push_back(c.basis(i).matrix().diagonal().real());
    const auto primal = classical_alpha_connection(p, dirs, 1 - 2 * a);
    const auto dualc = classical_alpha_connection(p, dirs, 2 * a - 1);
    const int m = static_cast<int>(idx.size());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          const auto q = static_cast<std::size_t>((i * m + j) * m + k);
          classical = std::max({classical, std::abs(fd.primal.at(idx[i], idx[j], idx[k]) - primal[q]),
                                std::abs(fd.dual.at(idx[i], idx[j], idx[k]) - dualc[q])});
        }
  }
  v.require(gap <= 1e-3, "closed form vs finite differences " + fmt(gap));
  v.require(dual <= 1e-4, "duality residual " + fmt(dual));
  v.require(classical <= 1e-3, "classical restriction " + fmt(classical));
  v.note("max |dGamma| " + fmt(gap) + ", duality " + fmt(dual) + ", classical " + fmt(classical));
  return v;
}

Verdict flatness() {
  Verdict v;
  const StateChart c(2);
  double flat = 0.0, min_ratio = INFINITY;
  for (int s = 0; s < 10; ++s) {
    const auto rho = random_state(2, derive_seed(kSeed, 8, static_cast<std::uint64_t>(s)), 0.05);
    const auto r1 = curvature(rho, c, 1.0);
    const double base = std::max(r1.max_abs_riemann_primal, r1.max_abs_riemann_dual);
    flat = std::max(flat, base);
    for (double a : {0.5, 2.0}) {
      const auto r = curvature(rho, c, a);
      min_ratio = std::min({min_ratio, r.max_abs_riemann_primal / base, r.max_abs_riemann_dual / base});
    }
  }
  v.require(flat <= 5e-3, "alpha = 1 curvature " + fmt(flat));
  v.require(min_ratio >= 10.0, "smallest ratio " + fmt(min_ratio));
  v.note("alpha = 1 max |R| " + fmt(flat) + ", smallest ratio " + fmt(min_ratio));
  return v;
}

Verdict quadrature() {
  Verdict v;
  Rng rng(derive_seed(kSeed, 9));
  double worst = 0.0;
  int instances = 0;
  for (int t = 0; t < 120; ++t) {
    const int n = 2 + t % 3;
    const auto a = random_positive(n, rng, 1.0);
    const auto b = random_hermitian(n, rng);
    for (const auto& f : {ScalarFunction::exp(), ScalarFunction::log(), ScalarFunction::power(rng.uniform(-2.0, 2.0))}) {
      const auto q = frechet_quadrature(a, b, f);
      const double err = (q.value.matrix() - frechet_derivative(a, b, f).matrix()).cwiseAbs().maxCoeff();
      worst = std::max(worst, err / std::max(1.0, frechet_derivative(a, b, f).matrix().cwiseAbs().maxCoeff()));
    }
    ++instances;
  }
  v.require(worst <= 1e-6, "worst error " + fmt(worst));
  v.note(std::to_string(instances) + " instances x 3 kinds, worst error " + fmt(worst));
  return v;
}

Verdict positivity_and_pinching() {
  Verdict v;
  const std::vector<double> grid{-3.0, -1.0, -0.3, 0.3, 0.5, 0.7, 1.0, 2.0, 5.0};
  int bad = 0;
  double lowest = INFINITY;
  for (int n : {2, 3}) {
    const auto pos = positivity_experiment(grid, n, 1000, kSeed);
    bad += pos.total_violations();
    for (const auto& c : pos.cells) bad += c.errors;
  }
  // Smallest divergence seen on unrelated random pairs.
  Rng rng(derive_seed(kSeed, 10));
  for (double a : grid) {
    for (int t = 0; t < 100; ++t) {
      const auto rho = random_state(2, rng);
      lowest = std::min(lowest, alpha_divergence(rho, random_state(2, rng), AlphaParameter(a)));
    }
  }
  v.require(bad == 0, std::to_string(bad) + " positivity violations or errors");
  v.require(lowest >= -1e-10, "negative divergence " + fmt(lowest));
  const auto pin = pinching_lemma_experiment(0, 10000, kSeed);
  const auto sc = strict_convexity_spectra_oracle(10000, kSeed);
  v.require(pin.total_violations() == 0, "pinching violations");
  v.require(sc.total_violations() == 0, "strict convexity violations");
  int pin_trials = 0, sc_trials = 0;
  for (const auto& c : pin.cells) pin_trials += c.trials;
  for (const auto& c : sc.cells) sc_trials += c.trials;
  v.note("positivity 2x9x1000 trials; pinching " + std::to_string(pin_trials) + " per-dim trials; strict convexity " +
         std::to_string(sc_trials));
  return v;
}

Verdict classical_reductions() {
  Verdict v;
  Rng rng(derive_seed(kSeed, 11));
  double worst = 0.0, ratio = 0.0;
  for (int t = 0; t < 300; ++t) {
    const int n = 2 + t % 3;
    RealVector p(n), q(n);
    for (int i = 0; i < n; ++i) {
      p(i) = 0.01 + rng.uniform();
      q(i) = 0.01 + rng.uniform();
    }
    p /= p.sum();
    q /= q.sum();
    for (double a : {-3.0, -0.5, 0.3, 0.7, 2.0, 5.0}) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += std::pow(p(i), a) * std::pow(q(i), 1 - a);
      const double want = std::log(s) / (a * (a - 1));
      worst = std::max(worst, std::abs(alpha_divergence(DensityState::diagonal(p), DensityState::diagonal(q), a) - want));
    }
    RealVector dir(n);
    for (int i = 0; i < n; ++i) dir(i) = rng.normal();
    dir.array() -= dir.mean();
    const RealVector near = q + 1e-3 * dir / dir.norm();
    for (double a : {-2.0, 0.3, 0.5, 3.0}) {
      const double r = classical_psi(near, q, a) / (a * (a - 1) * classical_alpha_divergence(near, q, a));
      ratio = std::max(ratio, std::abs(r - 1.0));
    }
  }
  v.require(worst <= 1e-12, "commuting error " + fmt(worst));
  v.require(ratio <= 1e-3, "expansion ratio deviation " + fmt(ratio));
  v.note("commuting error " + fmt(worst) + ", |ratio - 1| " + fmt(ratio));
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"two-level limits at alpha -> 0", two_level_limits},
      {"kernel fixtures", kernel_fixtures},
      {"operator monotone region of f_beta", operator_monotone_region},
      {"metric monotonicity region", metric_monotonicity_region},
      {"divergence monotonicity", divergence_monotonicity},
      {"metric cross-validation", metric_cross_validation},
      {"connections and duality", connections_and_duality},
      {"flatness only at alpha = 1", flatness},
      {"Frechet quadrature", quadrature},
      {"positivity and pinching lemmas", positivity_and_pinching},
      {"classical reductions", classical_reductions},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2zu %s  %s (%.1f s): %s\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                secs, v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
