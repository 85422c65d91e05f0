#pragma once

// Monte-Carlo experiments and counterexample searches: operator monotonicity
// of the kernel family, monotonicity of the metric and of the divergence
// under channels, positivity, and the pinching / strict convexity lemmas.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rgl/geometry.hpp"
#include "rgl/parallel.hpp"
#include "rgl/serialization.hpp"

namespace rgl {

struct TrialOutcome {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  std::string digest;   // hash of the trial inputs
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // positive means the claimed inequality failed by this much
  bool violated = false;
  bool error = false;      // a per-trial library error (recorded, not fatal)
  bool flagged = false;    // near-degenerate input (see experiment notes)
  int resamples = 0;
  std::string note;
  Json inputs;             // filled only when the trial is archived
};

struct Counterexample {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  std::string digest;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  Json inputs;
};

struct ExperimentCell {
  double parameter = 0.0;
  int dim = 0;
  int trials = 0;  // trials actually run (early stopping may cut the budget)
  int violations = 0;
  int errors = 0;
  int flagged = 0;
  int resamples = 0;
  double worst_margin = -INFINITY;
  std::uint64_t worst_trial = 0;
  std::vector<Counterexample> counterexamples;
};

struct ExperimentReport {
  std::string claim;           // experiment identifier, e.g. "operator_monotone"
  std::string parameter_name;  // "beta", "alpha", ...
  std::string variant;         // experiment-specific option, may be empty
  std::uint64_t master_seed = 0;
  int trials_per_cell = 0;
  std::vector<ExperimentCell> cells;

  int total_violations() const;
  const ExperimentCell* find(double parameter, int dim = 0) const;

  Json to_json() const;
  static ExperimentReport from_json(const Json& j);
};

struct ExperimentOptions {
  ParallelOptions parallel;
  /// Stop a cell once this many violations are found (0: run every trial).
  int stop_after_violations = 0;
  int max_counterexamples = 3;
  /// Shrink archived witnesses towards the trivial case while they still fail.
  bool refine = true;
};

// ---------------------------------------------------------------------------
// Operator monotonicity

/// Scalar function under test: a kernel f_beta or a ScalarFunction.
struct MonotoneCandidate {
  std::string name;
  double parameter = 0.0;
  ScalarFunction fn;

  static MonotoneCandidate kernel(const KernelFamily& family);
  static MonotoneCandidate function(const ScalarFunction& f, double parameter = 0.0);
};

/// min eig(f(A + P) - f(A)); margin = -min eig, violated when the margin
/// exceeds 1e-9 max(1, ||f(A + P)||).
TrialOutcome operator_monotone_trial(const MonotoneCandidate& f, const HermitianOperator& a,
                                     const HermitianOperator& p);

ExperimentReport operator_monotone_test(const std::vector<MonotoneCandidate>& candidates,
                                        const std::vector<int>& dims, int trials,
                                        std::uint64_t seed, const ExperimentOptions& opts = {});

// ---------------------------------------------------------------------------
// Metric monotonicity

inline constexpr double kMonotoneRelTol = 1e-8;
inline constexpr double kOutputStateResample = 1e-12;
inline constexpr double kOutputStateFlag = 1e-6;

/// lhs = g_rho(X, X), rhs = g_{gamma(rho)}(gamma X, gamma X); violated when
/// rhs > lhs + 1e-8 lhs.
TrialOutcome metric_monotonicity_trial(const DensityState& rho, const TangentVector& x,
                                       const QuantumChannel& channel, double alpha);

/// rank = 0 alternates full-rank (n^2) and rank-2 channels by trial parity.
ExperimentReport metric_monotonicity_experiment(const std::vector<double>& alphas, int dim,
                                                int trials, std::uint64_t seed, int rank = 0,
                                                const ExperimentOptions& opts = {});

// ---------------------------------------------------------------------------
// Divergence monotonicity

enum class DivergenceVariant { rescaled, sandwiched };
std::string to_string(DivergenceVariant v);
DivergenceVariant divergence_variant_from_string(const std::string& s);

/// lhs = D(rho||sigma), rhs = D(gamma rho || gamma sigma); violated when
/// rhs > lhs + 1e-8 |lhs| + 1e-14.
TrialOutcome divergence_monotonicity_trial(const DensityState& rho, const DensityState& sigma,
                                           const QuantumChannel& channel, double alpha,
                                           DivergenceVariant variant);

ExperimentReport divergence_monotonicity_experiment(const std::vector<double>& alphas, int dim,
                                                    int trials, std::uint64_t seed,
                                                    DivergenceVariant variant, int rank = 0,
                                                    const ExperimentOptions& opts = {});

// ---------------------------------------------------------------------------
// Positivity and the pinching step

/// lhs = D(rho||sigma), rhs = D(E_sigma(rho)||sigma). Violated when lhs < -1e-10,
/// when lhs < 1e-6 although ||rho - sigma||_F >= 1e-4, or when rhs > lhs + 1e-10.
TrialOutcome positivity_trial(const DensityState& rho, const DensityState& sigma, double alpha);

/// equal_pairs draws sigma = rho in every trial.
ExperimentReport positivity_experiment(const std::vector<double>& alphas, int dim, int trials,
                                       std::uint64_t seed, bool equal_pairs = false,
                                       const ExperimentOptions& opts = {});

// ---------------------------------------------------------------------------
// Pinching lemmas

/// Majorization lambda(A) > lambda(E_sigma(A)) and the fixed-point lemma.
TrialOutcome pinching_trial(const DensityState& sigma, const HermitianOperator& a);
ExperimentReport pinching_lemma_experiment(int dim, int trials, std::uint64_t seed,
                                           const ExperimentOptions& opts = {});

/// B = E_sigma(A), f(t) = 1/t. If |Tr f(A) - Tr f(B)| < 1e-10 the spectra and
/// the operators must coincide; otherwise Tr f(B) < Tr f(A) must hold strictly.
TrialOutcome strict_convexity_trial(const DensityState& sigma, const HermitianOperator& a);
ExperimentReport strict_convexity_spectra_oracle(int trials, std::uint64_t seed, int dim = 0,
                                                 const ExperimentOptions& opts = {});

// ---------------------------------------------------------------------------

/// Recomputes a counterexample from its serialized inputs and returns the new
/// margin. Throws ValidationError for an unknown claim.
double reverify(const std::string& claim, const std::string& variant, double parameter,
                const Counterexample& c);

/// Largest |recomputed - recorded| margin over every archived counterexample.
double reverify_report(const ExperimentReport& report);

/// Hex digest of the raw bytes of the given matrices.
std::string digest(const std::vector<const Matrix*>& parts);

}  // namespace rgl
