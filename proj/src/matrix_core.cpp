#include "rgl/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace rgl {

MatrixCoreConfig& matrix_core_config() {
  static MatrixCoreConfig config;
  return config;
}

// ---------------------------------------------------------------------------
// HermitianOperator

HermitianOperator::HermitianOperator(const Matrix& m, double tol) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw ValidationError("HermitianOperator: matrix must be square with dim >= 1");
  }
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (!(dev <= tol)) {
    std::ostringstream os;
    os << "HermitianOperator: matrix is not Hermitian (max |M - M^dagger| = " << dev << ")";
    throw ValidationError(os.str());
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::symmetrized(const Matrix& m) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw ValidationError("HermitianOperator: matrix must be square with dim >= 1");
  }
  HermitianOperator h;
  h.m_ = 0.5 * (m + m.adjoint());
  return h;
}

HermitianOperator HermitianOperator::identity(int n) {
  return symmetrized(Matrix::Identity(n, n));
}

HermitianOperator HermitianOperator::zero(int n) { return symmetrized(Matrix::Zero(n, n)); }

HermitianOperator HermitianOperator::diagonal(const RealVector& d) {
  return symmetrized(d.cast<Complex>().asDiagonal().toDenseMatrix());
}

HermitianOperator HermitianOperator::diagonal(std::initializer_list<double> d) {
  RealVector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return diagonal(v);
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  if (dim() != o.dim()) throw ValidationError("HermitianOperator: dimension mismatch in +");
  return symmetrized(m_ + o.m_);
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  if (dim() != o.dim()) throw ValidationError("HermitianOperator: dimension mismatch in -");
  return symmetrized(m_ - o.m_);
}

HermitianOperator HermitianOperator::operator*(double s) const { return symmetrized(m_ * s); }

// ---------------------------------------------------------------------------
// SpectralDecomposition

Matrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

Matrix SpectralDecomposition::to_eigenbasis(const Matrix& m) const {
  return eigenvectors.adjoint() * m * eigenvectors;
}

Matrix SpectralDecomposition::from_eigenbasis(const Matrix& m) const {
  return eigenvectors * m * eigenvectors.adjoint();
}

SpectralDecomposition spectral(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("spectral: eigensolver did not converge", 0.0);
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// ---------------------------------------------------------------------------
// ScalarFunction

ScalarFunction ScalarFunction::power(double exponent) {
  ScalarFunction f;
  f.kind_ = Kind::power;
  f.exponent_ = exponent;
  std::ostringstream os;
  os << "power(" << exponent << ")";
  f.name_ = os.str();
  return f;
}

ScalarFunction ScalarFunction::exp() {
  ScalarFunction f;
  f.kind_ = Kind::exp;
  f.name_ = "exp";
  f.positive_domain_ = false;
  return f;
}

ScalarFunction ScalarFunction::log() {
  ScalarFunction f;
  f.kind_ = Kind::log;
  f.name_ = "log";
  return f;
}

ScalarFunction ScalarFunction::custom(std::string name, Fn value, Fn derivative,
                                      Fn second_derivative, bool positive_domain) {
  if (!value || !derivative) {
    throw ValidationError("ScalarFunction::custom: value and derivative are required");
  }
  ScalarFunction f;
  f.kind_ = Kind::custom;
  f.name_ = std::move(name);
  f.value_ = std::move(value);
  f.d1_ = std::move(derivative);
  f.d2_ = std::move(second_derivative);
  f.positive_domain_ = positive_domain;
  return f;
}

bool ScalarFunction::requires_positive() const {
  switch (kind_) {
    case Kind::power:
      // Non-negative integer powers are defined everywhere, but the library
      // only ever applies powers to strictly positive operators.
      return true;
    case Kind::exp:
      return false;
    case Kind::log:
      return true;
    case Kind::custom:
      return positive_domain_;
  }
  return true;
}

bool ScalarFunction::in_domain(double x) const {
  if (!std::isfinite(x)) return false;
  return requires_positive() ? x > 0.0 : true;
}

double ScalarFunction::value(double x) const {
  switch (kind_) {
    case Kind::power:
      return std::pow(x, exponent_);
    case Kind::exp:
      return std::exp(x);
    case Kind::log:
      return std::log(x);
    case Kind::custom:
      return value_(x);
  }
  return 0.0;
}

bool ScalarFunction::has_derivative(int order) const {
  if (kind_ != Kind::custom) return order >= 1;
  if (order == 1) return true;
  if (order == 2) return static_cast<bool>(d2_);
  return false;
}

double ScalarFunction::derivative(double x, int order) const {
  if (order < 1) throw ValidationError("ScalarFunction::derivative: order must be >= 1");
  switch (kind_) {
    case Kind::power: {
      double c = 1.0;
      for (int k = 0; k < order; ++k) c *= exponent_ - k;
      return c == 0.0 ? 0.0 : c * std::pow(x, exponent_ - order);
    }
    case Kind::exp:
      return std::exp(x);
    case Kind::log: {
      // (-1)^{k-1} (k-1)! / x^k
      double c = 1.0;
      for (int k = 2; k < order; ++k) c *= k;
      if (order % 2 == 0) c = -c;
      return c / std::pow(x, order);
    }
    case Kind::custom:
      if (order == 1) return d1_(x);
      if (order == 2 && d2_) return d2_(x);
      throw ValidationError("ScalarFunction::derivative: custom function '" + name_ +
                            "' does not provide derivative of order " + std::to_string(order));
  }
  return 0.0;
}

void check_domain(const RealVector& eigenvalues, const ScalarFunction& f) {
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (!f.in_domain(eigenvalues(i))) {
      std::ostringstream os;
      os << f.name() << ": eigenvalue " << eigenvalues(i) << " lies outside the domain";
      throw DomainError(os.str(), eigenvalues(i));
    }
  }
}

HermitianOperator matrix_function(const SpectralDecomposition& a, const ScalarFunction& f) {
  check_domain(a.eigenvalues, f);
  RealVector fv(a.dim());
  for (int i = 0; i < a.dim(); ++i) fv(i) = f.value(a.eigenvalues(i));
  return HermitianOperator::symmetrized(a.eigenvectors * fv.cast<Complex>().asDiagonal() *
                                        a.eigenvectors.adjoint());
}

HermitianOperator matrix_function(const HermitianOperator& a, const ScalarFunction& f) {
  return matrix_function(spectral(a), f);
}

HermitianOperator matrix_power(const HermitianOperator& a, double p) {
  return matrix_function(a, ScalarFunction::power(p));
}

// ---------------------------------------------------------------------------
// Divided differences

namespace {

// Window (relative) inside which the Taylor form about the mean replaces the
// difference quotient. Built-in functions expose all derivatives, so a wide
// window with a high-order expansion is accurate; custom functions fall back
// to the bare derivative limit.
constexpr double kTaylorWindow = 1e-3;
constexpr int kTaylorOrder = 6;

double scale_of(const ScalarFunction& f, double a, double b) {
  const double m = std::max(std::abs(a), std::abs(b));
  return f.requires_positive() ? m : std::max(1.0, m);
}

double window_for(const ScalarFunction& f) {
  return f.kind() == ScalarFunction::Kind::custom ? matrix_core_config().degeneracy_rel
                                                  : kTaylorWindow;
}

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

// Complete homogeneous symmetric polynomial h_k of the given values.
double complete_homogeneous(int k, std::span<const double> d) {
  if (k == 0) return 1.0;
  if (d.empty()) return 0.0;
  // h_k(d_0, rest) = sum_{j=0..k} d_0^j h_{k-j}(rest)
  double total = 0.0;
  double p = 1.0;
  for (int j = 0; j <= k; ++j) {
    total += p * complete_homogeneous(k - j, d.subspan(1));
    p *= d[0];
  }
  return total;
}

// f[x_0..x_n] = sum_k f^{(n+k)}(c)/(n+k)! h_k(x - c), c = mean.
double taylor_divided_difference(const ScalarFunction& f, std::span<const double> xs) {
  const int n = static_cast<int>(xs.size()) - 1;
  double c = 0.0;
  for (double x : xs) c += x;
  c /= static_cast<double>(xs.size());
  std::vector<double> d(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) d[i] = xs[i] - c;
  double total = f.derivative(c, n) / factorial(n);
  if (f.kind() == ScalarFunction::Kind::custom) return total;
  // h_1 vanishes about the mean.
  for (int k = 2; k <= kTaylorOrder; ++k) {
    total += f.derivative(c, n + k) / factorial(n + k) * complete_homogeneous(k, d);
  }
  return total;
}

}  // namespace

double divided_difference(const ScalarFunction& f, double x, double y) {
  const double gap = std::abs(x - y);
  if (gap <= window_for(f) * scale_of(f, x, y)) {
    const double xs[2] = {x, y};
    return taylor_divided_difference(f, xs);
  }
  return (f.value(x) - f.value(y)) / (x - y);
}

double divided_difference(const ScalarFunction& f, double x, double y, double z) {
  double v[3] = {x, y, z};
  std::sort(v, v + 3);
  const double scale = scale_of(f, v[0], v[2]);
  if (v[2] - v[0] <= window_for(f) * scale) {
    if (f.kind() == ScalarFunction::Kind::custom && !f.has_derivative(2)) {
      throw ValidationError("second divided difference at coincident points needs f''");
    }
    return taylor_divided_difference(f, v);
  }
  return (divided_difference(f, v[0], v[1]) - divided_difference(f, v[1], v[2])) /
         (v[0] - v[2]);
}

RealMatrix loewner_matrix(const ScalarFunction& f, const RealVector& eigenvalues) {
  const auto n = eigenvalues.size();
  RealMatrix l(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      l(i, j) = l(j, i) = divided_difference(f, eigenvalues(i), eigenvalues(j));
    }
  }
  return l;
}

Matrix frechet_eigenbasis(const RealVector& eigenvalues, const Matrix& b_tilde,
                          const ScalarFunction& f) {
  check_domain(eigenvalues, f);
  return loewner_matrix(f, eigenvalues).cast<Complex>().cwiseProduct(b_tilde);
}

Matrix second_frechet_eigenbasis(const RealVector& eigenvalues, const Matrix& b_tilde,
                                 const Matrix& c_tilde, const ScalarFunction& f) {
  check_domain(eigenvalues, f);
  const auto n = eigenvalues.size();
  // dd[k](i, j) = f[lambda_i, lambda_k, lambda_j]
  std::vector<RealMatrix> dd(n, RealMatrix(n, n));
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i; j < n; ++j) {
        dd[k](i, j) = dd[k](j, i) =
            divided_difference(f, eigenvalues(i), eigenvalues(k), eigenvalues(j));
      }
    }
  }
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        acc += dd[k](i, j) * (b_tilde(i, k) * c_tilde(k, j) + c_tilde(i, k) * b_tilde(k, j));
      }
      out(i, j) = acc;
    }
  }
  return out;
}

HermitianOperator frechet_derivative(const HermitianOperator& a, const HermitianOperator& b,
                                     const ScalarFunction& f) {
  if (a.dim() != b.dim()) throw ValidationError("frechet_derivative: dimension mismatch");
  const auto sd = spectral(a);
  const Matrix r = frechet_eigenbasis(sd.eigenvalues, sd.to_eigenbasis(b.matrix()), f);
  return HermitianOperator::symmetrized(sd.from_eigenbasis(r));
}

HermitianOperator second_frechet_derivative(const HermitianOperator& a,
                                            const HermitianOperator& b,
                                            const HermitianOperator& c,
                                            const ScalarFunction& f) {
  if (a.dim() != b.dim() || a.dim() != c.dim()) {
    throw ValidationError("second_frechet_derivative: dimension mismatch");
  }
  const auto sd = spectral(a);
  const Matrix r = second_frechet_eigenbasis(sd.eigenvalues, sd.to_eigenbasis(b.matrix()),
                                             sd.to_eigenbasis(c.matrix()), f);
  return HermitianOperator::symmetrized(sd.from_eigenbasis(r));
}

double trace_power_derivative(const HermitianOperator& a, const HermitianOperator& b,
                              double lambda) {
  if (a.dim() != b.dim()) throw ValidationError("trace_power_derivative: dimension mismatch");
  const auto sd = spectral(a);
  check_domain(sd.eigenvalues, ScalarFunction::power(lambda - 1.0));
  const Matrix bt = sd.to_eigenbasis(b.matrix());
  double acc = 0.0;
  for (int i = 0; i < sd.dim(); ++i) {
    acc += std::pow(sd.eigenvalues(i), lambda - 1.0) * bt(i, i).real();
  }
  return lambda * acc;
}

// ---------------------------------------------------------------------------
// Majorization

bool majorizes(std::span<const double> x, std::span<const double> y, double tol) {
  if (x.size() != y.size()) throw ValidationError("majorizes: length mismatch");
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  std::sort(xs.begin(), xs.end(), std::greater<>());
  std::sort(ys.begin(), ys.end(), std::greater<>());
  double scale = 1.0;
  for (double v : xs) scale = std::max(scale, std::abs(v));
  const double eps = tol * scale;
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    if (sx < sy - eps) return false;
  }
  return std::abs(sx - sy) <= eps;
}

bool majorizes(const RealVector& x, const RealVector& y, double tol) {
  return majorizes(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
                   std::span<const double>(y.data(), static_cast<std::size_t>(y.size())), tol);
}

RealVector descending_eigenvalues(const HermitianOperator& a) {
  return spectral(a).eigenvalues.reverse();
}

double min_eigenvalue(const HermitianOperator& a) { return spectral(a).eigenvalues(0); }

}  // namespace rgl
