#pragma once

// psi, the sandwiched Renyi relative entropy, its rescaled alpha-divergence,
// the Umegaki limit, the classical alpha-divergence and one-sided limits at
// alpha = 0.

#include <vector>

#include "rgl/quantum_states.hpp"

namespace rgl {

/// Distance from 0 or 1 inside which generic evaluation is refused.
inline constexpr double kAlphaSingularGuard = 1e-8;

class AlphaParameter {
 public:
  enum class Regime { generic, umegaki_limit };

  /// alpha == 1 exactly selects the Umegaki branch; other values within
  /// kAlphaSingularGuard of 0 or 1 are refused with a DomainError.
  explicit AlphaParameter(double value);
  static AlphaParameter umegaki() { return AlphaParameter(1.0); }

  double value() const { return value_; }
  Regime regime() const { return regime_; }
  bool is_umegaki() const { return regime_ == Regime::umegaki_limit; }

 private:
  double value_;
  Regime regime_;
};

/// (1 - alpha) / (2 alpha), the exponent of sigma in the sandwich.
double sandwich_exponent(double alpha);

/// A = sigma^q rho sigma^q.
struct SandwichedOperator {
  HermitianOperator op;
};

SandwichedOperator sandwiched_operator(const DensityState& rho, const DensityState& sigma,
                                       double alpha);

/// Logarithms of the eigenvalues of A, ascending. Computed without ever
/// forming sigma^q, so it stays finite when q is large (alpha near 0) and
/// the eigenvalues themselves under- or overflow.
RealVector sandwiched_log_spectrum(const DensityState& rho, const DensityState& sigma,
                                   double alpha);

/// psi(alpha) = log Tr A^alpha.
double psi(const DensityState& rho, const DensityState& sigma, double alpha);

/// psi evaluated by forming A explicitly and taking A^alpha through its
/// eigendecomposition. An independent path for cross-checks; loses accuracy
/// when sigma^q under- or overflows.
double psi_direct(const DensityState& rho, const DensityState& sigma, double alpha);

/// psi / (alpha - 1).
double sandwiched_renyi(const DensityState& rho, const DensityState& sigma, double alpha);

/// psi / (alpha (alpha - 1)); Tr rho (log rho - log sigma) on the Umegaki branch.
double alpha_divergence(const DensityState& rho, const DensityState& sigma,
                        const AlphaParameter& alpha);
double alpha_divergence(const DensityState& rho, const DensityState& sigma, double alpha);

double umegaki_relative_entropy(const DensityState& rho, const DensityState& sigma);

/// log sum p^alpha q^(1-alpha).
double classical_psi(const RealVector& p, const RealVector& q, double alpha);
/// (1 - sum p^alpha q^(1-alpha)) / (alpha (1 - alpha)).
double classical_alpha_divergence(const RealVector& p, const RealVector& q, double alpha);

enum class ZeroSide { above, below };

struct LimitEstimate {
  double value = 0.0;
  double error_bound = 0.0;
  std::vector<double> alphas;    // side * 2^-k, k = 6..16
  std::vector<double> sequence;  // D_alpha at those alphas
};

/// Raised when the extrapolated limit does not settle; carries the raw sequence.
class ExtrapolationError : public NumericalError {
 public:
  ExtrapolationError(const std::string& what, double residual, std::vector<double> sequence)
      : NumericalError(what, residual), sequence_(std::move(sequence)) {}
  const std::vector<double>& sequence() const noexcept { return sequence_; }

 private:
  std::vector<double> sequence_;
};

/// Richardson-extrapolated one-sided limit of D_alpha as alpha -> 0.
LimitEstimate limit_at_zero(const DensityState& rho, const DensityState& sigma, ZeroSide side);

namespace detail {

double von_neumann_entropy(const DensityState& sigma);

/// -log mu - H(sigma) <= liminf, limsup <= -log lambda - H(sigma), with
/// lambda, mu the extreme eigenvalues of rho.
struct ZeroLimitBounds {
  double lower = 0.0;
  double upper = 0.0;
};
ZeroLimitBounds zero_limit_bounds(const DensityState& rho, const DensityState& sigma);

/// Smallest eigenvalue over the two matrix inequalities
///   lambda^a sigma^(1-a) <= A^a <= mu^a sigma^(1-a)   (0 < a < 1)
/// (reversed for -1 < a < 0). Nonnegative up to roundoff when they hold.
double operator_bounds_residual(const DensityState& rho, const DensityState& sigma, double alpha);

}  // namespace detail

}  // namespace rgl
