// Eigenvalues of A = sigma^q rho sigma^q on a log scale.
//
// Write sigma = V diag(s) V^dagger and rho^ = V^dagger rho V = L L^dagger.
// Then A is unitarily similar to G^dagger G with G = L^dagger diag(s^q), so
// the eigenvalues of A are the squared singular values of G. For alpha near
// zero |q| is huge and s^q leaves the double range, but the columns of G are
// just the columns of L^dagger scaled by s_j^q. One-sided Jacobi only ever
// combines two columns at a time, so each column is kept as a log scale times
// a unit vector and rotations are written in terms of the scale ratio r <= 1.

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rgl/divergences.hpp"

namespace rgl {
namespace {

constexpr double kOrthogonalityTol = 1e-15;
constexpr int kMaxSweeps = 100;

struct GradedColumns {
  std::vector<double> log_scale;
  Matrix unit;  // columns have unit norm
};

GradedColumns graded_factor(const DensityState& rho, const DensityState& sigma, double q) {
  const auto& sd = sigma.spectral();
  const int n = sd.dim();
  const Matrix rho_hat = sd.to_eigenbasis(rho.matrix());
  const Eigen::LLT<Matrix> llt(rho_hat);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("sandwiched_log_spectrum: Cholesky of rho failed", 0.0);
  }
  const Matrix lt = llt.matrixL().adjoint();
  GradedColumns g{std::vector<double>(static_cast<std::size_t>(n)), Matrix(n, n)};
  for (int j = 0; j < n; ++j) {
    const double norm = lt.col(j).norm();
    g.log_scale[static_cast<std::size_t>(j)] = q * std::log(sd.eigenvalues(j)) + std::log(norm);
    g.unit.col(j) = lt.col(j) / norm;
  }
  return g;
}

// One rotation of the pair (big, small) with log_scale[big] >= log_scale[small].
void rotate(GradedColumns& g, int big, int small, Complex overlap) {
  const double mag = std::abs(overlap);
  const Complex phase = overlap / mag;
  auto& ls = g.log_scale;
  const double r = std::exp(ls[static_cast<std::size_t>(small)] - ls[static_cast<std::size_t>(big)]);
  const Eigen::VectorXcd u = g.unit.col(big);
  const Eigen::VectorXcd v = g.unit.col(small) * std::conj(phase);  // u^dagger v = mag

  const double nn = r * r - 1.0;
  const double den = 2.0 * r * mag;
  const double sgn = nn >= 0.0 ? 1.0 : -1.0;
  const double t_over_r = sgn * 2.0 * mag / (std::abs(nn) + std::hypot(nn, den));
  const double t = t_over_r * r;
  const double c = 1.0 / std::sqrt(1.0 + t * t);

  const Eigen::VectorXcd wb = c * (u - (t * r) * v);
  const Eigen::VectorXcd ws = c * (t_over_r * u + v);
  const double nb = wb.norm();
  const double ns = ws.norm();
  ls[static_cast<std::size_t>(big)] += std::log(nb);
  ls[static_cast<std::size_t>(small)] += std::log(ns);
  g.unit.col(big) = wb / nb;
  g.unit.col(small) = ws / ns;
}

}  // namespace

RealVector sandwiched_log_spectrum(const DensityState& rho, const DensityState& sigma,
                                   double alpha) {
  if (rho.dim() != sigma.dim()) throw ValidationError("sandwiched_log_spectrum: dimension mismatch");
  if (alpha == 0.0) throw DomainError("sandwiched_log_spectrum: alpha = 0", alpha);
  const double q = sandwich_exponent(alpha);
  GradedColumns g = graded_factor(rho, sigma, q);
  const int n = rho.dim();

  double worst = 0.0;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    worst = 0.0;
    for (int p = 0; p < n - 1; ++p) {
      for (int k = p + 1; k < n; ++k) {
        const Complex overlap = g.unit.col(p).dot(g.unit.col(k));
        const double mag = std::abs(overlap);
        worst = std::max(worst, mag);
        if (mag <= kOrthogonalityTol) continue;
        const bool p_big = g.log_scale[static_cast<std::size_t>(p)] >=
                           g.log_scale[static_cast<std::size_t>(k)];
        if (p_big) {
          rotate(g, p, k, overlap);
        } else {
          rotate(g, k, p, std::conj(overlap));
        }
      }
    }
    if (worst <= kOrthogonalityTol) break;
  }
  if (worst > 1e-12) {
    std::ostringstream os;
    os << "sandwiched_log_spectrum: Jacobi sweeps did not converge (overlap " << worst << ")";
    throw NumericalError(os.str(), worst);
  }

  RealVector out(n);
  for (int j = 0; j < n; ++j) out(j) = 2.0 * g.log_scale[static_cast<std::size_t>(j)];
  std::sort(out.data(), out.data() + n);
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(out(j))) {
      throw NumericalError("sandwiched_log_spectrum: non-finite eigenvalue", out(j));
    }
  }
  return out;
}

}  // namespace rgl
