// Frechet derivatives from their integral representations.

#include <cmath>
#include <sstream>

#include "rgl/gauss_legendre.hpp"
#include "rgl/matrix_core.hpp"

namespace rgl {
namespace {

// e^{tA}, A^{t} and friends are formed from A's spectrum; the resolvents are
// not, so the log and power quadratures stay independent of the divided
// difference kernel.
Matrix spectral_apply(const SpectralDecomposition& sd, const std::function<double(double)>& g) {
  RealVector v(sd.dim());
  for (int i = 0; i < sd.dim(); ++i) v(i) = g(sd.eigenvalues(i));
  return sd.eigenvectors * v.cast<Complex>().asDiagonal() * sd.eigenvectors.adjoint();
}

// int_0^1 e^{(1-t)G} M e^{tG} dt for Hermitian G given by its spectrum.
Matrix dyson_integral(const SpectralDecomposition& g, const Matrix& m, int nodes) {
  const auto rule = gauss_legendre(nodes, 0.0, 1.0);
  Matrix acc = Matrix::Zero(m.rows(), m.cols());
  for (int q = 0; q < nodes; ++q) {
    const double t = rule.nodes[q];
    const Matrix left = spectral_apply(g, [t](double x) { return std::exp((1.0 - t) * x); });
    const Matrix right = spectral_apply(g, [t](double x) { return std::exp(t * x); });
    acc += rule.weights[q] * (left * m * right);
  }
  return acc;
}

// int_0^inf (sI+A)^{-1} M (sI+A)^{-1} ds with s = u/(1-u).
Matrix resolvent_integral(const Matrix& a, const Matrix& m, int nodes) {
  const auto rule = gauss_legendre(nodes, 0.0, 1.0);
  const auto n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  Matrix acc = Matrix::Zero(n, n);
  for (int q = 0; q < nodes; ++q) {
    const double u = rule.nodes[q];
    const double s = u / (1.0 - u);
    const double jac = 1.0 / ((1.0 - u) * (1.0 - u));
    const Eigen::LLT<Matrix> llt(s * id + a);
    if (llt.info() != Eigen::Success) {
      throw DomainError("frechet_quadrature: sI + A is not positive definite", s);
    }
    const Matrix r = llt.solve(id);
    acc += (rule.weights[q] * jac) * (r * m * r);
  }
  return acc;
}

Matrix evaluate(const HermitianOperator& a, const HermitianOperator& b, const ScalarFunction& f,
                int t_nodes, int s_nodes) {
  switch (f.kind()) {
    case ScalarFunction::Kind::exp:
      return dyson_integral(spectral(a), b.matrix(), t_nodes);
    case ScalarFunction::Kind::log:
      return resolvent_integral(a.matrix(), b.matrix(), s_nodes);
    case ScalarFunction::Kind::power: {
      // A^lambda = exp(lambda log A): Dyson integral around lambda log A of
      // the log-derivative in direction B, scaled by lambda.
      const double lambda = f.exponent();
      const Matrix inner = lambda * resolvent_integral(a.matrix(), b.matrix(), s_nodes);
      auto log_a = spectral(a);
      for (int i = 0; i < log_a.dim(); ++i) {
        log_a.eigenvalues(i) = lambda * std::log(log_a.eigenvalues(i));
      }
      return dyson_integral(log_a, inner, t_nodes);
    }
    case ScalarFunction::Kind::custom:
      break;
  }
  throw ValidationError("frechet_quadrature: only exp, log and power have integral forms");
}

}  // namespace

QuadratureResult frechet_quadrature(const HermitianOperator& a, const HermitianOperator& b,
                                    const ScalarFunction& f, const QuadratureOptions& opts) {
  if (a.dim() != b.dim()) throw ValidationError("frechet_quadrature: dimension mismatch");
  if (opts.t_nodes < 2 || opts.s_nodes < 2) {
    throw ValidationError("frechet_quadrature: node counts must be >= 2");
  }
  if (f.kind() != ScalarFunction::Kind::exp) check_domain(spectral(a).eigenvalues, f);

  const Matrix full = evaluate(a, b, f, opts.t_nodes, opts.s_nodes);
  const Matrix half = evaluate(a, b, f, opts.t_nodes / 2, opts.s_nodes / 2);
  const double residual = (full - half).norm();
  if (residual > opts.tol * (1.0 + b.frobenius_norm())) {
    std::ostringstream os;
    os << "frechet_quadrature(" << f.name() << "): node-halving residual " << residual
       << " exceeds tolerance";
    throw NumericalError(os.str(), residual);
  }
  return {HermitianOperator::symmetrized(full), residual};
}

}  // namespace rgl
