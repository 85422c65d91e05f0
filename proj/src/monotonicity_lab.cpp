#include "rgl/monotonicity_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "rgl/random.hpp"

namespace rgl {
namespace {

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t cell_stream(const std::string& claim, double parameter, int dim) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &parameter, sizeof bits);
  return mix64(fnv1a(claim.data(), claim.size()) ^ mix64(bits) ^
               mix64(static_cast<std::uint64_t>(dim) + 0x51ULL));
}

double top_abs_eigenvalue(const HermitianOperator& a) {
  const RealVector ev = spectral(a).eigenvalues;
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

// Channel x -> (1-t) x + t gamma(x), which tends to the identity as t -> 0.
QuantumChannel towards_identity(const QuantumChannel& channel, double t) {
  std::vector<Matrix> kraus;
  const int n = channel.input_dim();
  kraus.push_back(std::sqrt(1.0 - t) * Matrix::Identity(n, n));
  for (const auto& k : channel.kraus()) kraus.push_back(std::sqrt(t) * k);
  return QuantumChannel(std::move(kraus), 1e-9);
}

// Refinement only keeps witnesses whose violation stays well clear of the
// detection tolerance.
constexpr double kRobustMargin = 1e-6;
bool robust(const TrialOutcome& o, double scale) {
  return o.violated && o.margin > kRobustMargin * scale;
}

TrialOutcome error_outcome(const std::exception& e) {
  TrialOutcome o;
  o.error = true;
  o.note = e.what();
  return o;
}

// Runs one cell and keeps the first archived counterexamples in trial order.
ExperimentCell run_cell(const std::string& claim, double parameter, int dim, int trials,
                        std::uint64_t master, const ExperimentOptions& opts,
                        const std::function<TrialOutcome(std::uint64_t index, std::uint64_t seed)>& trial) {
  const std::uint64_t stream = cell_stream(claim, parameter, dim);
  std::function<TrialOutcome(std::size_t)> fn = [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(master, stream, i);
    TrialOutcome o;
    try {
      o = trial(i, seed);
    } catch (const Error& e) {
      o = error_outcome(e);
    }
    o.index = i;
    o.seed = seed;
    return o;
  };
  std::function<bool(const std::vector<TrialOutcome>&)> stop;
  if (opts.stop_after_violations > 0) {
    stop = [&](const std::vector<TrialOutcome>& done) {
      const auto v = std::count_if(done.begin(), done.end(),
                                   [](const TrialOutcome& o) { return o.violated; });
      return v >= opts.stop_after_violations;
    };
  }
  const auto outcomes =
      run_indexed<TrialOutcome>(static_cast<std::size_t>(std::max(trials, 0)), fn, opts.parallel, stop);

  ExperimentCell cell;
  cell.parameter = parameter;
  cell.dim = dim;
  cell.trials = static_cast<int>(outcomes.size());
  for (const auto& o : outcomes) {
    cell.resamples += o.resamples;
    if (o.error) {
      ++cell.errors;
      continue;
    }
    if (o.flagged) ++cell.flagged;
    if (o.margin > cell.worst_margin) {
      cell.worst_margin = o.margin;
      cell.worst_trial = o.index;
    }
    if (o.violated) {
      ++cell.violations;
      if (static_cast<int>(cell.counterexamples.size()) < opts.max_counterexamples) {
        cell.counterexamples.push_back(
            {o.index, o.seed, o.digest, o.lhs, o.rhs, o.margin, o.inputs});
      }
    }
  }
  return cell;
}

// Re-evaluates archived inputs through their serialized form so that the
// recorded margin is exactly what a later re-verification computes.
void archive(TrialOutcome& o, const std::string& claim, const std::string& variant,
             double parameter, Json inputs) {
  Counterexample c;
  c.inputs = std::move(inputs);
  o.margin = reverify(claim, variant, parameter, c);
  o.inputs = std::move(c.inputs);
}

}  // namespace

std::string digest(const std::vector<const Matrix*>& parts) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Matrix* m : parts) {
    h = fnv1a(m->data(), static_cast<std::size_t>(m->size()) * sizeof(Complex), h);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Report

int ExperimentReport::total_violations() const {
  int v = 0;
  for (const auto& c : cells) v += c.violations;
  return v;
}

const ExperimentCell* ExperimentReport::find(double parameter, int dim) const {
  for (const auto& c : cells) {
    if (c.parameter == parameter && (dim == 0 || c.dim == dim)) return &c;
  }
  return nullptr;
}

Json ExperimentReport::to_json() const {
  Json cells_j = Json::array();
  for (const auto& c : cells) {
    Json ce = Json::array();
    for (const auto& x : c.counterexamples) {
      ce.push_back({{"trial", x.trial},
                    {"seed", x.seed},
                    {"digest", x.digest},
                    {"lhs", x.lhs},
                    {"rhs", x.rhs},
                    {"margin", x.margin},
                    {"inputs", x.inputs}});
    }
    cells_j.push_back({{"parameter", c.parameter},
                       {"dim", c.dim},
                       {"trials", c.trials},
                       {"violations", c.violations},
                       {"errors", c.errors},
                       {"flagged", c.flagged},
                       {"resamples", c.resamples},
                       {"worst_margin", std::isfinite(c.worst_margin) ? Json(c.worst_margin) : Json()},
                       {"worst_trial", c.worst_trial},
                       {"counterexamples", std::move(ce)}});
  }
  return {{"claim", claim},
          {"parameter_name", parameter_name},
          {"variant", variant},
          {"master_seed", master_seed},
          {"trials_per_cell", trials_per_cell},
          {"cells", std::move(cells_j)}};
}

ExperimentReport ExperimentReport::from_json(const Json& j) {
  try {
    ExperimentReport r;
    r.claim = j.at("claim").get<std::string>();
    r.parameter_name = j.at("parameter_name").get<std::string>();
    r.variant = j.value("variant", std::string());
    r.master_seed = j.at("master_seed").get<std::uint64_t>();
    r.trials_per_cell = j.at("trials_per_cell").get<int>();
    for (const auto& cj : j.at("cells")) {
      ExperimentCell c;
      c.parameter = cj.at("parameter").get<double>();
      c.dim = cj.at("dim").get<int>();
      c.trials = cj.at("trials").get<int>();
      c.violations = cj.at("violations").get<int>();
      c.errors = cj.at("errors").get<int>();
      c.flagged = cj.at("flagged").get<int>();
      c.resamples = cj.at("resamples").get<int>();
      c.worst_margin = cj.at("worst_margin").is_null() ? -INFINITY : cj.at("worst_margin").get<double>();
      c.worst_trial = cj.at("worst_trial").get<std::uint64_t>();
      for (const auto& x : cj.at("counterexamples")) {
        c.counterexamples.push_back({x.at("trial").get<std::uint64_t>(),
                                     x.at("seed").get<std::uint64_t>(),
                                     x.at("digest").get<std::string>(), x.at("lhs").get<double>(),
                                     x.at("rhs").get<double>(), x.at("margin").get<double>(),
                                     x.at("inputs")});
      }
      r.cells.push_back(std::move(c));
    }
    return r;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("experiment report: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Operator monotonicity

MonotoneCandidate MonotoneCandidate::kernel(const KernelFamily& family) {
  std::ostringstream name;
  name << "f_beta(" << family.beta() << ")";
  const double beta = family.beta();
  auto value = [family](double t) { return kernel_eval(family, t); };
  auto d1 = [family](double t) {
    const double h = 1e-6 * t;
    return (kernel_eval(family, t + h) - kernel_eval(family, t - h)) / (2.0 * h);
  };
  return {name.str(), beta, ScalarFunction::custom(name.str(), value, d1)};
}

MonotoneCandidate MonotoneCandidate::function(const ScalarFunction& f, double parameter) {
  return {f.name(), parameter, f};
}

TrialOutcome operator_monotone_trial(const MonotoneCandidate& f, const HermitianOperator& a,
                                     const HermitianOperator& p) {
  const HermitianOperator fa = matrix_function(a, f.fn);
  const HermitianOperator fb = matrix_function(a + p, f.fn);
  TrialOutcome o;
  o.lhs = min_eigenvalue(fb - fa);
  o.rhs = top_abs_eigenvalue(fb);
  o.margin = -o.lhs;
  o.violated = o.margin > 1e-9 * std::max(1.0, o.rhs);
  o.digest = digest({&a.matrix(), &p.matrix()});
  return o;
}

namespace {

Json candidate_json(const MonotoneCandidate& c) {
  switch (c.fn.kind()) {
    case ScalarFunction::Kind::power:
      return {{"kind", "power"}, {"exponent", c.fn.exponent()}};
    case ScalarFunction::Kind::exp:
      return {{"kind", "exp"}};
    case ScalarFunction::Kind::log:
      return {{"kind", "log"}};
    case ScalarFunction::Kind::custom:
      break;
  }
  return {{"kind", "kernel"}, {"beta", c.parameter}};
}

MonotoneCandidate candidate_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "kernel") return MonotoneCandidate::kernel(KernelFamily::from_beta(j.at("beta").get<double>()));
  if (kind == "power") {
    const double e = j.at("exponent").get<double>();
    return MonotoneCandidate::function(ScalarFunction::power(e), e);
  }
  if (kind == "exp") return MonotoneCandidate::function(ScalarFunction::exp());
  if (kind == "log") return MonotoneCandidate::function(ScalarFunction::log());
  throw ValidationError("unknown function kind '" + kind + "'");
}

}  // namespace

ExperimentReport operator_monotone_test(const std::vector<MonotoneCandidate>& candidates,
                                        const std::vector<int>& dims, int trials,
                                        std::uint64_t seed, const ExperimentOptions& opts) {
  if (trials < 1) throw ValidationError("operator_monotone_test: trials must be >= 1");
  ExperimentReport rep;
  rep.claim = "operator_monotone";
  rep.parameter_name = "beta";
  rep.master_seed = seed;
  rep.trials_per_cell = trials;
  for (const auto& cand : candidates) {
    for (int n : dims) {
      if (n < 1) throw ValidationError("operator_monotone_test: dimension must be >= 1");
      rep.cells.push_back(run_cell(
          rep.claim, cand.parameter, n, trials, seed, opts,
          [&](std::uint64_t, std::uint64_t s) {
            Rng rng(s);
            // Spread spectra and a rank-one increment of random magnitude are
            // where non-monotone kernels show up first.
            const HermitianOperator a = random_positive(n, rng, 3.0);
            Eigen::VectorXcd v(n);
            for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
            v.normalize();
            const double mag = std::pow(10.0, rng.uniform(-3.0, 3.0));
            HermitianOperator p = HermitianOperator::symmetrized(mag * v * v.adjoint());
            TrialOutcome o = operator_monotone_trial(cand, a, p);
            if (o.violated) {
              if (opts.refine) {
                for (int step = 0; step < 40; ++step) {
                  const HermitianOperator smaller = p * 0.5;
                  if (!robust(operator_monotone_trial(cand, a, smaller), std::max(1.0, o.rhs))) break;
                  p = smaller;
                }
                const std::uint64_t idx = o.index;
                o = operator_monotone_trial(cand, a, p);
                o.index = idx;
              }
              o.seed = s;
              archive(o, rep.claim, rep.variant, cand.parameter,
                      {{"function", candidate_json(cand)},
                       {"A", to_json(a)},
                       {"P", to_json(p)}});
            }
            return o;
          }));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Metric monotonicity

TrialOutcome metric_monotonicity_trial(const DensityState& rho, const TangentVector& x,
                                       const QuantumChannel& channel, double alpha) {
  const DensityState out = apply_channel(channel, rho);
  const TangentVector xo = apply_channel(channel, x);
  TrialOutcome o;
  o.lhs = metric(rho, x, x, alpha);
  o.rhs = metric(out, xo, xo, alpha);
  o.margin = o.rhs - o.lhs;
  o.violated = o.margin > kMonotoneRelTol * std::abs(o.lhs);
  o.flagged = out.min_eigenvalue() < kOutputStateFlag;
  std::vector<const Matrix*> parts{&rho.matrix(), &x.matrix()};
  for (const auto& k : channel.kraus()) parts.push_back(&k);
  o.digest = digest(parts);
  return o;
}

namespace {

constexpr int kMaxResamples = 20;

int lane_rank(int n, int rank, std::uint64_t index) {
  if (rank > 0) return rank;
  return index % 2 == 0 ? n * n : 2;
}

// Draws a channel whose output state stays faithful, resampling a bounded
// number of times.
QuantumChannel draw_channel(int n, int rank, Rng& rng, const DensityState& rho, int& resamples) {
  for (int attempt = 0; attempt <= kMaxResamples; ++attempt) {
    QuantumChannel ch = random_channel(n, n, rank, rng);
    const HermitianOperator out = apply_channel(ch, rho.op());
    if (min_eigenvalue(out) >= kOutputStateResample) return ch;
    ++resamples;
  }
  throw RangeError("channel output stayed below the faithfulness floor after resampling", 0.0);
}

}  // namespace

ExperimentReport metric_monotonicity_experiment(const std::vector<double>& alphas, int dim,
                                                int trials, std::uint64_t seed, int rank,
                                                const ExperimentOptions& opts) {
  if (trials < 1) throw ValidationError("metric_monotonicity_experiment: trials must be >= 1");
  if (dim < 2) throw ValidationError("metric_monotonicity_experiment: dimension must be >= 2");
  ExperimentReport rep;
  rep.claim = "metric_monotonicity";
  rep.parameter_name = "alpha";
  rep.variant = rank > 0 ? "rank=" + std::to_string(rank) : "rank=alternate";
  rep.master_seed = seed;
  rep.trials_per_cell = trials;
  const StateChart ch(dim);
  for (double alpha : alphas) {
    if (alpha == 0.0) throw DomainError("metric_monotonicity_experiment: alpha = 0", alpha);
    rep.cells.push_back(run_cell(
        rep.claim, alpha, dim, trials, seed, opts, [&](std::uint64_t index, std::uint64_t s) {
          Rng rng(s);
          const DensityState rho = random_state(dim, rng);
          const TangentVector x = random_tangent(ch, rng);
          int resamples = 0;
          QuantumChannel gamma = draw_channel(dim, lane_rank(dim, rank, index), rng, rho, resamples);
          TrialOutcome o = metric_monotonicity_trial(rho, x, gamma, alpha);
          if (o.violated) {
            if (opts.refine) {
              const QuantumChannel original = gamma;
              double t = 1.0;
              for (int step = 0; step < 30; ++step) {
                const QuantumChannel softer = towards_identity(original, 0.5 * t);
                if (!robust(metric_monotonicity_trial(rho, x, softer, alpha), o.lhs)) break;
                gamma = softer;
                t *= 0.5;
              }
              o = metric_monotonicity_trial(rho, x, gamma, alpha);
              if (t < 1.0) o.note = "channel mixed towards identity";
            }
            o.seed = s;
            o.index = index;
            archive(o, rep.claim, rep.variant, alpha,
                    {{"rho", to_json(rho)}, {"X", to_json(x.mrep())}, {"channel", to_json(gamma)}});
          }
          o.resamples = resamples;
          return o;
        }));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Divergence monotonicity

std::string to_string(DivergenceVariant v) {
  return v == DivergenceVariant::rescaled ? "rescaled" : "sandwiched";
}

DivergenceVariant divergence_variant_from_string(const std::string& s) {
  if (s == "rescaled") return DivergenceVariant::rescaled;
  if (s == "sandwiched") return DivergenceVariant::sandwiched;
  throw ValidationError("unknown divergence variant '" + s + "'");
}

namespace {

double variant_divergence(const DensityState& rho, const DensityState& sigma, double alpha,
                          DivergenceVariant v) {
  const double d = alpha_divergence(rho, sigma, alpha);
  return v == DivergenceVariant::rescaled ? d : alpha * d;
}

}  // namespace

TrialOutcome divergence_monotonicity_trial(const DensityState& rho, const DensityState& sigma,
                                           const QuantumChannel& channel, double alpha,
                                           DivergenceVariant variant) {
  TrialOutcome o;
  o.lhs = variant_divergence(rho, sigma, alpha, variant);
  const DensityState ro = apply_channel(channel, rho);
  const DensityState so = apply_channel(channel, sigma);
  o.rhs = variant_divergence(ro, so, alpha, variant);
  o.margin = o.rhs - o.lhs;
  o.violated = o.margin > kMonotoneRelTol * std::abs(o.lhs) + 1e-14;
  o.flagged = std::min(ro.min_eigenvalue(), so.min_eigenvalue()) < kOutputStateFlag;
  std::vector<const Matrix*> parts{&rho.matrix(), &sigma.matrix()};
  for (const auto& k : channel.kraus()) parts.push_back(&k);
  o.digest = digest(parts);
  return o;
}

ExperimentReport divergence_monotonicity_experiment(const std::vector<double>& alphas, int dim,
                                                    int trials, std::uint64_t seed,
                                                    DivergenceVariant variant, int rank,
                                                    const ExperimentOptions& opts) {
  if (trials < 1) throw ValidationError("divergence_monotonicity_experiment: trials must be >= 1");
  if (dim < 2) throw ValidationError("divergence_monotonicity_experiment: dimension must be >= 2");
  ExperimentReport rep;
  rep.claim = "divergence_monotonicity";
  rep.parameter_name = "alpha";
  rep.variant = to_string(variant);
  rep.master_seed = seed;
  rep.trials_per_cell = trials;
  const StateChart ch(dim);
  for (double alpha : alphas) {
    rep.cells.push_back(run_cell(
        rep.claim + "/" + rep.variant, alpha, dim, trials, seed, opts,
        [&](std::uint64_t index, std::uint64_t s) {
          Rng rng(s);
          const DensityState rho = random_state(dim, rng);
          // Alternate independent pairs with pairs close to each other.
          const bool near = (index / 2) % 2 == 1;
          DensityState sigma = rho;
          if (near) {
            const HermitianOperator x = random_traceless(dim, rng);
            sigma = DensityState(rho.op() + x * (0.5 * rho.min_eigenvalue()));
          } else {
            sigma = random_state(dim, rng);
          }
          int resamples = 0;
          QuantumChannel gamma = draw_channel(dim, lane_rank(dim, rank, index), rng, rho, resamples);
          for (int attempt = 0;
               min_eigenvalue(apply_channel(gamma, sigma.op())) < kOutputStateResample; ++attempt) {
            if (attempt == kMaxResamples) {
              throw RangeError("channel output stayed below the faithfulness floor", 0.0);
            }
            gamma = draw_channel(dim, lane_rank(dim, rank, index), rng, rho, resamples);
            ++resamples;
          }
          TrialOutcome o = divergence_monotonicity_trial(rho, sigma, gamma, alpha, variant);
          if (o.violated) {
            if (opts.refine) {
              const QuantumChannel original = gamma;
              double t = 1.0;
              for (int step = 0; step < 30; ++step) {
                const QuantumChannel softer = towards_identity(original, 0.5 * t);
                if (!robust(divergence_monotonicity_trial(rho, sigma, softer, alpha, variant),
                            std::abs(o.lhs) + 1e-6)) {
                  break;
                }
                gamma = softer;
                t *= 0.5;
              }
              o = divergence_monotonicity_trial(rho, sigma, gamma, alpha, variant);
            }
            o.seed = s;
            o.index = index;
            archive(o, rep.claim, rep.variant, alpha,
                    {{"rho", to_json(rho)}, {"sigma", to_json(sigma)}, {"channel", to_json(gamma)}});
          }
          o.resamples = resamples;
          return o;
        }));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Positivity

TrialOutcome positivity_trial(const DensityState& rho, const DensityState& sigma, double alpha) {
  TrialOutcome o;
  o.lhs = alpha_divergence(rho, sigma, alpha);
  const DensityState pinched(pinching(sigma, rho.op()));
  o.rhs = alpha_divergence(pinched, sigma, alpha);
  const double distance = (rho.matrix() - sigma.matrix()).norm();
  const bool negative = o.lhs < -1e-10;
  const bool spurious_zero = o.lhs < 1e-6 && distance >= 1e-4;
  const bool pinching_up = o.rhs > o.lhs + 1e-10 * std::max(1.0, std::abs(o.lhs));
  o.margin = std::max(-o.lhs, o.rhs - o.lhs);
  o.violated = negative || spurious_zero || pinching_up;
  if (spurious_zero) o.note = "divergence below 1e-6 for distinct states";
  o.digest = digest({&rho.matrix(), &sigma.matrix()});
  return o;
}

ExperimentReport positivity_experiment(const std::vector<double>& alphas, int dim, int trials,
                                       std::uint64_t seed, bool equal_pairs,
                                       const ExperimentOptions& opts) {
  if (trials < 1) throw ValidationError("positivity_experiment: trials must be >= 1");
  if (dim < 2) throw ValidationError("positivity_experiment: dimension must be >= 2");
  ExperimentReport rep;
  rep.claim = "positivity";
  rep.parameter_name = "alpha";
  rep.variant = equal_pairs ? "equal" : "random";
  rep.master_seed = seed;
  rep.trials_per_cell = trials;
  for (double alpha : alphas) {
    rep.cells.push_back(run_cell(
        rep.claim + "/" + rep.variant, alpha, dim, trials, seed, opts,
        [&](std::uint64_t index, std::uint64_t s) {
          Rng rng(s);
          const DensityState rho = random_state(dim, rng);
          DensityState sigma = rho;
          if (!equal_pairs) {
            const DensityState tau = random_state(dim, rng);
            if (index % 2 == 0) {
              sigma = tau;
            } else {
              // A pair at distance ~1e-6: D must stay nonnegative at tiny values.
              sigma = DensityState(
                  HermitianOperator::symmetrized((1.0 - 1e-6) * rho.matrix() + 1e-6 * tau.matrix()));
            }
          }
          TrialOutcome o = positivity_trial(rho, sigma, alpha);
          if (o.violated) {
            o.seed = s;
            o.index = index;
            archive(o, rep.claim, rep.variant, alpha, {{"rho", to_json(rho)}, {"sigma", to_json(sigma)}});
          }
          return o;
        }));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Pinching lemmas

TrialOutcome pinching_trial(const DensityState& sigma, const HermitianOperator& a) {
  const HermitianOperator pinched = pinching(sigma, a);
  const PinchingReport r = pinching_fixed_point_check(sigma, a);
  TrialOutcome o;
  o.lhs = r.spectral_residual;
  o.rhs = r.operator_residual;
  const bool majorized = majorizes(descending_eigenvalues(a), descending_eigenvalues(pinched));
  o.violated = !majorized || r.lemma_violation();
  o.margin = o.violated ? 1.0 : 0.0;
  if (!majorized) o.note = "majorization failed";
  if (r.lemma_violation()) o.note = "equal spectra without a fixed point";
  o.digest = digest({&sigma.matrix(), &a.matrix()});
  return o;
}

namespace {

// sigma with a repeated eigenvalue, to exercise projector grouping.
DensityState degenerate_state(int n, Rng& rng) {
  const Matrix u = haar_unitary(n, rng);
  RealVector d(n);
  for (int i = 0; i < n; ++i) d(i) = rng.uniform(0.1, 1.0);
  d(1) = d(0);
  d /= d.sum();
  return DensityState(HermitianOperator::symmetrized(u * d.cast<Complex>().asDiagonal() * u.adjoint()));
}

}  // namespace

ExperimentReport pinching_lemma_experiment(int dim, int trials, std::uint64_t seed,
                                           const ExperimentOptions& opts) {
  if (trials < 1) throw ValidationError("pinching_lemma_experiment: trials must be >= 1");
  ExperimentReport rep;
  rep.claim = "pinching";
  rep.parameter_name = "dim";
  rep.master_seed = seed;
  rep.trials_per_cell = trials;
  const std::vector<int> dims = dim > 0 ? std::vector<int>{dim} : std::vector<int>{2, 3, 4};
  for (int n : dims) {
    rep.cells.push_back(run_cell(
        rep.claim, n, n, trials, seed, opts, [&](std::uint64_t index, std::uint64_t s) {
          Rng rng(s);
          const DensityState sigma = (n >= 3 && index % 3 == 2) ? degenerate_state(n, rng)
                                                                : random_state(n, rng);
          HermitianOperator a = random_hermitian(n, rng);
          if (index % 2 == 1) a = pinching(sigma, a);  // commuting lane
          TrialOutcome o = pinching_trial(sigma, a);
          if (o.violated) {
            o.seed = s;
            o.index = index;
            archive(o, rep.claim, rep.variant, n, {{"sigma", to_json(sigma)}, {"A", to_json(a)}});
          }
          return o;
        }));
  }
  return rep;
}

TrialOutcome strict_convexity_trial(const DensityState& sigma, const HermitianOperator& a) {
  const HermitianOperator b = pinching(sigma, a);
  const auto inv = ScalarFunction::power(-1.0);
  TrialOutcome o;
  o.lhs = matrix_function(a, inv).trace();
  o.rhs = matrix_function(b, inv).trace();
  o.digest = digest({&sigma.matrix(), &a.matrix()});
  if (std::abs(o.lhs - o.rhs) < 1e-10) {
    // Premise of the lemma: the conclusion must follow.
    const PinchingReport r = pinching_fixed_point_check(sigma, a);
    o.violated = !(r.spectra_equal && r.operator_equal);
    o.margin = std::max(r.spectral_residual, r.operator_residual);
    o.note = "premise";
  } else {
    o.margin = o.rhs - o.lhs;
    o.violated = o.margin > 0.0;
  }
  return o;
}

ExperimentReport strict_convexity_spectra_oracle(int trials, std::uint64_t seed, int dim,
                                                 const ExperimentOptions& opts) {
  if (trials < 1) throw ValidationError("strict_convexity_spectra_oracle: trials must be >= 1");
  ExperimentReport rep;
  rep.claim = "strict_convexity";
  rep.parameter_name = "dim";
  rep.master_seed = seed;
  rep.trials_per_cell = trials;
  const std::vector<int> dims = dim > 0 ? std::vector<int>{dim} : std::vector<int>{2, 3, 4};
  for (int n : dims) {
    rep.cells.push_back(run_cell(
        rep.claim, n, n, trials, seed, opts, [&](std::uint64_t index, std::uint64_t s) {
          Rng rng(s);
          const DensityState sigma = random_state(n, rng, 1e-3);
          HermitianOperator a;
          if (index % 2 == 0) {
            RealVector d(n);
            for (int i = 0; i < n; ++i) d(i) = std::pow(10.0, rng.uniform(-1.0, 1.0));
            a = HermitianOperator::symmetrized(
                sigma.spectral().from_eigenbasis(d.cast<Complex>().asDiagonal()));
          } else {
            a = random_positive(n, rng, 1.0);
          }
          TrialOutcome o = strict_convexity_trial(sigma, a);
          if (o.violated) {
            o.seed = s;
            o.index = index;
            archive(o, rep.claim, rep.variant, n, {{"sigma", to_json(sigma)}, {"A", to_json(a)}});
          }
          return o;
        }));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Re-verification

double reverify(const std::string& claim, const std::string& variant, double parameter,
                const Counterexample& c) {
  const Json& in = c.inputs;
  try {
    if (claim == "operator_monotone") {
      return operator_monotone_trial(candidate_from_json(in.at("function")),
                                     hermitian_from_json(in.at("A")), hermitian_from_json(in.at("P")))
          .margin;
    }
    if (claim == "metric_monotonicity") {
      return metric_monotonicity_trial(state_from_json(in.at("rho")),
                                       TangentVector(hermitian_from_json(in.at("X"))),
                                       channel_from_json(in.at("channel")), parameter)
          .margin;
    }
    if (claim == "divergence_monotonicity") {
      return divergence_monotonicity_trial(state_from_json(in.at("rho")),
                                           state_from_json(in.at("sigma")),
                                           channel_from_json(in.at("channel")), parameter,
                                           divergence_variant_from_string(variant))
          .margin;
    }
    if (claim == "positivity") {
      return positivity_trial(state_from_json(in.at("rho")), state_from_json(in.at("sigma")),
                              parameter)
          .margin;
    }
    if (claim == "pinching") {
      return pinching_trial(state_from_json(in.at("sigma")), hermitian_from_json(in.at("A"))).margin;
    }
    if (claim == "strict_convexity") {
      return strict_convexity_trial(state_from_json(in.at("sigma")), hermitian_from_json(in.at("A")))
          .margin;
    }
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("counterexample inputs: ") + e.what());
  }
  throw ValidationError("reverify: unknown claim '" + claim + "'");
}

double reverify_report(const ExperimentReport& report) {
  double worst = 0.0;
  for (const auto& cell : report.cells) {
    for (const auto& c : cell.counterexamples) {
      worst = std::max(worst, std::abs(reverify(report.claim, report.variant, cell.parameter, c) -
                                        c.margin));
    }
  }
  return worst;
}

}  // namespace rgl
