#pragma once

// Spectral calculus on small dense Hermitian matrices: matrix functions,
// first and second Frechet derivatives (divided-difference and integral
// forms), trace derivatives and majorization.

#include <complex>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rgl/errors.hpp"

namespace rgl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Module-level tolerances. Every check that uses one of these also reports
/// its residual so callers can see how close it came.
struct MatrixCoreConfig {
  double hermitian_tol = 1e-12;    // absolute, entrywise
  double degeneracy_rel = 1e-10;   // eigenvalue coincidence for divided differences
  int t_nodes = 64;                // Gauss-Legendre nodes on t in [0,1]
  int s_nodes = 128;               // nodes on u in [0,1), s = u/(1-u)
  double quadrature_tol = 1e-6;    // relative to 1 + ||B||_F
  double majorization_tol = 1e-10;
};

/// Process-wide defaults. Not synchronised; adjust before spawning workers.
MatrixCoreConfig& matrix_core_config();

/// A dim x dim complex self-adjoint matrix.
class HermitianOperator {
 public:
  HermitianOperator() = default;

  /// Validates Hermiticity within `tol` (absolute), then stores the exact
  /// Hermitian part (M + M^dagger)/2.
  explicit HermitianOperator(const Matrix& m, double tol = matrix_core_config().hermitian_tol);

  /// Stores (M + M^dagger)/2 without validation. Used after assembling a
  /// result that is Hermitian up to roundoff.
  static HermitianOperator symmetrized(const Matrix& m);
  static HermitianOperator identity(int n);
  static HermitianOperator zero(int n);
  static HermitianOperator diagonal(const RealVector& d);
  static HermitianOperator diagonal(std::initializer_list<double> d);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }
  double frobenius_norm() const { return m_.norm(); }

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator*(double s) const;
  friend HermitianOperator operator*(double s, const HermitianOperator& h) { return h * s; }

 private:
  Matrix m_;
};

/// Eigen-decomposition A = U diag(lambda) U^dagger with ascending eigenvalues.
struct SpectralDecomposition {
  RealVector eigenvalues;
  Matrix eigenvectors;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  Matrix reconstruct() const;
  /// U^dagger M U
  Matrix to_eigenbasis(const Matrix& m) const;
  /// U M U^dagger
  Matrix from_eigenbasis(const Matrix& m) const;
};

/// Real scalar function together with the derivatives needed by the Frechet
/// machinery. Power, exp and log supply derivatives up to third order; a
/// custom function supplies its first derivative and optionally the second.
class ScalarFunction {
 public:
  enum class Kind { power, exp, log, custom };
  using Fn = std::function<double(double)>;

  static ScalarFunction power(double exponent);
  static ScalarFunction exp();
  static ScalarFunction log();
  static ScalarFunction custom(std::string name, Fn value, Fn derivative,
                               Fn second_derivative = {}, bool positive_domain = true);

  Kind kind() const { return kind_; }
  double exponent() const { return exponent_; }
  const std::string& name() const { return name_; }

  bool requires_positive() const;
  bool in_domain(double x) const;

  double value(double x) const;
  /// order in {1, 2, 3}. Throws ValidationError when the custom function
  /// lacks the requested order.
  double derivative(double x, int order = 1) const;
  bool has_derivative(int order) const;

 private:
  Kind kind_ = Kind::power;
  double exponent_ = 1.0;
  std::string name_;
  Fn value_, d1_, d2_;
  bool positive_domain_ = true;
};

SpectralDecomposition spectral(const HermitianOperator& a);

/// Throws DomainError naming the first eigenvalue outside f's domain.
void check_domain(const RealVector& eigenvalues, const ScalarFunction& f);

HermitianOperator matrix_function(const HermitianOperator& a, const ScalarFunction& f);
HermitianOperator matrix_function(const SpectralDecomposition& a, const ScalarFunction& f);
/// A^p for strictly positive A.
HermitianOperator matrix_power(const HermitianOperator& a, double p);

/// f[x,y], switching to the midpoint Taylor form when x and y nearly coincide.
double divided_difference(const ScalarFunction& f, double x, double y);
/// f[x,y,z], symmetric in its arguments.
double divided_difference(const ScalarFunction& f, double x, double y, double z);

/// Matrix of first divided differences f[lambda_i, lambda_j].
RealMatrix loewner_matrix(const ScalarFunction& f, const RealVector& eigenvalues);

/// Df(A)[B] with B already expressed in A's eigenbasis; result in the same basis.
Matrix frechet_eigenbasis(const RealVector& eigenvalues, const Matrix& b_tilde,
                          const ScalarFunction& f);
/// D^2 f(A)[B, C] with B, C in A's eigenbasis; result in the same basis.
Matrix second_frechet_eigenbasis(const RealVector& eigenvalues, const Matrix& b_tilde,
                                 const Matrix& c_tilde, const ScalarFunction& f);

/// Df(A)[B] by the divided-difference kernel in A's eigenbasis.
HermitianOperator frechet_derivative(const HermitianOperator& a, const HermitianOperator& b,
                                     const ScalarFunction& f);

/// D^2 f(A)[B, C]; symmetric in (B, C) by construction.
HermitianOperator second_frechet_derivative(const HermitianOperator& a,
                                            const HermitianOperator& b,
                                            const HermitianOperator& c,
                                            const ScalarFunction& f);

struct QuadratureOptions {
  int t_nodes = matrix_core_config().t_nodes;
  int s_nodes = matrix_core_config().s_nodes;
  double tol = matrix_core_config().quadrature_tol;
};

struct QuadratureResult {
  HermitianOperator value;
  /// ||I(N) - I(N/2)||_F, the disagreement between full and half node counts.
  double residual = 0.0;
};

/// Df(A)[B] from the integral representations:
///   exp:   int_0^1 e^{(1-t)A} B e^{tA} dt
///   log:   int_0^inf (sI+A)^{-1} B (sI+A)^{-1} ds
///   power: lambda int_0^1 dt int_0^inf ds A^{(1-t)lambda} (sI+A)^{-1} B (sI+A)^{-1} A^{t lambda}
/// Resolvents are formed by linear solves, not through A's eigenbasis.
/// Throws NumericalError when the half-node estimate disagrees beyond tol.
QuadratureResult frechet_quadrature(const HermitianOperator& a, const HermitianOperator& b,
                                    const ScalarFunction& f,
                                    const QuadratureOptions& opts = QuadratureOptions{});

/// lambda Tr(A^{lambda-1} B).
double trace_power_derivative(const HermitianOperator& a, const HermitianOperator& b,
                              double lambda);

/// True iff x majorizes y: descending partial sums of x dominate those of y
/// and the totals agree within tol.
bool majorizes(std::span<const double> x, std::span<const double> y,
               double tol = matrix_core_config().majorization_tol);
bool majorizes(const RealVector& x, const RealVector& y,
               double tol = matrix_core_config().majorization_tol);

/// Eigenvalues sorted in decreasing order.
RealVector descending_eigenvalues(const HermitianOperator& a);

double min_eigenvalue(const HermitianOperator& a);

}  // namespace rgl
