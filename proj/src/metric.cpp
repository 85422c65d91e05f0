#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "rgl/geometry.hpp"

namespace rgl {

HermitianOperator e_representation(const DensityState& rho, const TangentVector& x,
                                   const KernelFamily& family) {
  if (x.base_dim() != rho.dim()) throw ValidationError("e_representation: dimension mismatch");
  const auto& sd = rho.spectral();
  const int n = sd.dim();
  Matrix xt = sd.to_eigenbasis(x.matrix());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double m = kernel_mean(family, sd.eigenvalues(i), sd.eigenvalues(j));
      if (!std::isfinite(m) || !(m > 0.0)) {
        throw NumericalError("e_representation: kernel value is not finite and positive", m);
      }
      xt(i, j) /= m;
    }
  }
  // The kernel symmetry f(t) = t f(1/t) makes the result Hermitian.
  const double asym = (xt - xt.adjoint()).norm();
  if (asym > 1e-10 * (1.0 + xt.norm())) {
    throw NumericalError("e_representation: result is not Hermitian", asym);
  }
  return HermitianOperator::symmetrized(sd.from_eigenbasis(xt));
}

double metric(const DensityState& rho, const TangentVector& x, const TangentVector& y,
              const KernelFamily& family) {
  if (y.base_dim() != rho.dim()) throw ValidationError("metric: dimension mismatch");
  const HermitianOperator xe = e_representation(rho, x, family);
  return (xe.matrix() * y.matrix()).trace().real();
}

double metric(const DensityState& rho, const TangentVector& x, const TangentVector& y,
              double alpha) {
  if (alpha == 0.0) throw DomainError("metric: alpha = 0 is outside the domain", alpha);
  return metric(rho, x, y, KernelFamily::from_alpha(alpha));
}

RealMatrix metric_matrix(const DensityState& rho, const StateChart& chart, double alpha) {
  if (alpha == 0.0) throw DomainError("metric_matrix: alpha = 0 is outside the domain", alpha);
  if (chart.dim() != rho.dim()) throw ValidationError("metric_matrix: dimension mismatch");
  const auto family = KernelFamily::from_alpha(alpha);
  const int m = chart.size();
  std::vector<Matrix> xe;
  xe.reserve(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    xe.push_back(e_representation(rho, TangentVector(chart.basis(a)), family).matrix());
  }
  RealMatrix g(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      g(a, b) = (xe[static_cast<std::size_t>(a)] * chart.basis(b).matrix()).trace().real();
      g(b, a) = g(a, b);
    }
  }
  return g;
}

namespace {

double divergence_at(const DensityState& rho, const Matrix& shift, const AlphaParameter& alpha) {
  const DensityState moved(HermitianOperator::symmetrized(rho.matrix() + shift));
  return alpha_divergence(moved, rho, alpha);
}

double second_difference(const DensityState& rho, const Matrix& x, const Matrix& y,
                         const AlphaParameter& alpha, double h) {
  auto one = [&](double hh) {
    const Matrix s = x + y;
    const Matrix d = x - y;
    return (divergence_at(rho, hh * s, alpha) - divergence_at(rho, hh * d, alpha) -
            divergence_at(rho, -hh * d, alpha) + divergence_at(rho, -hh * s, alpha)) /
           (4.0 * hh * hh);
  };
  return (4.0 * one(h / 2.0) - one(h)) / 3.0;
}

double with_shrink(const std::function<double(double)>& fn, double h) {
  try {
    return fn(h);
  } catch (const RangeError&) {
    return fn(h / 4.0);
  }
}

}  // namespace

double EguchiOptions::step(double h, const DensityState& rho) const {
  if (!scale_with_state) return h;
  return h * std::clamp(rho.min_eigenvalue() / 0.25, 0.1, 1.0);
}

double metric_eguchi(const DensityState& rho, const TangentVector& x, const TangentVector& y,
                     double alpha, const EguchiOptions& opts) {
  if (x.base_dim() != rho.dim() || y.base_dim() != rho.dim()) {
    throw ValidationError("metric_eguchi: dimension mismatch");
  }
  const AlphaParameter a(alpha);
  return with_shrink(
      [&](double h) { return second_difference(rho, x.matrix(), y.matrix(), a, h); },
      opts.step(opts.h_metric, rho));
}

double metric_eguchi(const DensityState& rho, const StateChart& chart, int i, int j, double alpha,
                     const EguchiOptions& opts) {
  if (chart.dim() != rho.dim()) throw ValidationError("metric_eguchi: dimension mismatch");
  if (i < 0 || j < 0 || i >= chart.size() || j >= chart.size()) {
    throw ValidationError("metric_eguchi: chart index out of range");
  }
  return metric_eguchi(rho, TangentVector(chart.basis(i)), TangentVector(chart.basis(j)), alpha,
                       opts);
}

}  // namespace rgl
