#include "rgl/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rgl {
namespace {

double logsumexp(const RealVector& x) {
  const double m = x.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((x.array() - m).exp().sum());
}

void check_pair(const DensityState& rho, const DensityState& sigma, const char* who) {
  if (rho.dim() != sigma.dim()) {
    throw ValidationError(std::string(who) + ": states have different dimensions");
  }
}

void check_finite(double v, const char* who) {
  if (!std::isfinite(v)) throw NumericalError(std::string(who) + ": non-finite result", v);
}

void check_probabilities(const RealVector& p, const RealVector& q, const char* who) {
  if (p.size() != q.size() || p.size() == 0) {
    throw ValidationError(std::string(who) + ": vectors must be non-empty with equal length");
  }
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!(p(i) > 0.0)) throw DomainError(std::string(who) + ": p has a non-positive entry", p(i));
    if (!(q(i) > 0.0)) throw DomainError(std::string(who) + ": q has a non-positive entry", q(i));
  }
  if (std::abs(p.sum() - 1.0) > kTraceTol || std::abs(q.sum() - 1.0) > kTraceTol) {
    throw ValidationError(std::string(who) + ": probability vectors must sum to 1");
  }
}

}  // namespace

AlphaParameter::AlphaParameter(double value) : value_(value), regime_(Regime::generic) {
  if (!std::isfinite(value)) throw DomainError("alpha must be finite", value);
  if (value == 1.0) {
    regime_ = Regime::umegaki_limit;
    return;
  }
  if (std::abs(value) < kAlphaSingularGuard) {
    throw DomainError(
        "alpha = 0: D_alpha has no continuous extension to 0 (the one-sided limits differ); "
        "use limit_at_zero",
        value);
  }
  if (std::abs(value - 1.0) < kAlphaSingularGuard) {
    throw DomainError("alpha too close to 1 for the generic formula; use alpha = 1 (Umegaki)",
                      value);
  }
}

double sandwich_exponent(double alpha) {
  if (alpha == 0.0) throw DomainError("sandwich exponent undefined at alpha = 0", alpha);
  return (1.0 - alpha) / (2.0 * alpha);
}

SandwichedOperator sandwiched_operator(const DensityState& rho, const DensityState& sigma,
                                       double alpha) {
  check_pair(rho, sigma, "sandwiched_operator");
  const HermitianOperator sq = matrix_power(sigma.op(), sandwich_exponent(alpha));
  return {HermitianOperator::symmetrized(sq.matrix() * rho.matrix() * sq.matrix())};
}

double psi(const DensityState& rho, const DensityState& sigma, double alpha) {
  check_pair(rho, sigma, "psi");
  if (alpha == 0.0) throw DomainError("psi: alpha = 0 is outside the domain", alpha);
  const RealVector log_mu = sandwiched_log_spectrum(rho, sigma, alpha);
  const double v = logsumexp(alpha * log_mu);
  check_finite(v, "psi");
  return v;
}

double psi_direct(const DensityState& rho, const DensityState& sigma, double alpha) {
  check_pair(rho, sigma, "psi_direct");
  if (alpha == 0.0) throw DomainError("psi_direct: alpha = 0 is outside the domain", alpha);
  const auto a = sandwiched_operator(rho, sigma, alpha).op;
  const RealVector mu = spectral(a).eigenvalues;
  double tr = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (!(mu(i) > 0.0)) throw NumericalError("psi_direct: sandwiched operator lost positivity", mu(i));
    tr += std::pow(mu(i), alpha);
  }
  const double v = std::log(tr);
  check_finite(v, "psi_direct");
  return v;
}

double sandwiched_renyi(const DensityState& rho, const DensityState& sigma, double alpha) {
  const AlphaParameter a(alpha);
  if (a.is_umegaki()) {
    throw DomainError("sandwiched_renyi: alpha = 1 is the Umegaki limit; use alpha_divergence",
                      alpha);
  }
  return psi(rho, sigma, alpha) / (alpha - 1.0);
}

double alpha_divergence(const DensityState& rho, const DensityState& sigma,
                        const AlphaParameter& alpha) {
  if (alpha.is_umegaki()) return umegaki_relative_entropy(rho, sigma);
  const double a = alpha.value();
  return psi(rho, sigma, a) / (a * (a - 1.0));
}

double alpha_divergence(const DensityState& rho, const DensityState& sigma, double alpha) {
  return alpha_divergence(rho, sigma, AlphaParameter(alpha));
}

double umegaki_relative_entropy(const DensityState& rho, const DensityState& sigma) {
  check_pair(rho, sigma, "umegaki_relative_entropy");
  const auto& rs = rho.spectral();
  double neg_entropy = 0.0;
  for (int i = 0; i < rs.dim(); ++i) neg_entropy += rs.eigenvalues(i) * std::log(rs.eigenvalues(i));
  const auto& ss = sigma.spectral();
  const Matrix rho_hat = ss.to_eigenbasis(rho.matrix());
  double cross = 0.0;
  for (int i = 0; i < ss.dim(); ++i) cross += rho_hat(i, i).real() * std::log(ss.eigenvalues(i));
  const double v = neg_entropy - cross;
  check_finite(v, "umegaki_relative_entropy");
  return v;
}

double classical_psi(const RealVector& p, const RealVector& q, double alpha) {
  check_probabilities(p, q, "classical_psi");
  const RealVector terms =
      alpha * p.array().log() + (1.0 - alpha) * q.array().log();
  return logsumexp(terms);
}

double classical_alpha_divergence(const RealVector& p, const RealVector& q, double alpha) {
  check_probabilities(p, q, "classical_alpha_divergence");
  if (alpha == 0.0 || alpha == 1.0) {
    throw DomainError("classical_alpha_divergence: alpha must differ from 0 and 1", alpha);
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    s += std::pow(p(i), alpha) * std::pow(q(i), 1.0 - alpha);
  }
  return (1.0 - s) / (alpha * (1.0 - alpha));
}

LimitEstimate limit_at_zero(const DensityState& rho, const DensityState& sigma, ZeroSide side) {
  check_pair(rho, sigma, "limit_at_zero");
  constexpr int kFirst = 6;
  constexpr int kLast = 16;
  const double sign = side == ZeroSide::above ? 1.0 : -1.0;

  LimitEstimate est;
  for (int k = kFirst; k <= kLast; ++k) {
    const double a = sign * std::ldexp(1.0, -k);
    est.alphas.push_back(a);
    est.sequence.push_back(psi(rho, sigma, a) / (a * (a - 1.0)));
  }
  // D_alpha = L + c1 alpha + c2 alpha^2 + ...; two Richardson levels for the
  // halving ratio remove the first two error terms (three-point stencils).
  std::vector<double> r1;
  for (std::size_t i = 0; i + 1 < est.sequence.size(); ++i) {
    r1.push_back(2.0 * est.sequence[i + 1] - est.sequence[i]);
  }
  std::vector<double> r2;
  for (std::size_t i = 0; i + 1 < r1.size(); ++i) r2.push_back((4.0 * r1[i + 1] - r1[i]) / 3.0);

  est.value = r2.back();
  est.error_bound = std::abs(r2.back() - r2[r2.size() - 2]);
  if (!std::isfinite(est.value) || est.error_bound > 1e-6 * std::max(1.0, std::abs(est.value))) {
    std::ostringstream os;
    os << "limit_at_zero: Richardson extrapolation did not settle (last change "
       << est.error_bound << ")";
    throw ExtrapolationError(os.str(), est.error_bound, est.sequence);
  }
  return est;
}

namespace detail {

double von_neumann_entropy(const DensityState& sigma) {
  double h = 0.0;
  const auto& ev = sigma.spectral().eigenvalues;
  for (Eigen::Index i = 0; i < ev.size(); ++i) h -= ev(i) * std::log(ev(i));
  return h;
}

ZeroLimitBounds zero_limit_bounds(const DensityState& rho, const DensityState& sigma) {
  check_pair(rho, sigma, "zero_limit_bounds");
  const auto& ev = rho.spectral().eigenvalues;
  const double h = von_neumann_entropy(sigma);
  return {-std::log(ev(ev.size() - 1)) - h, -std::log(ev(0)) - h};
}

double operator_bounds_residual(const DensityState& rho, const DensityState& sigma, double alpha) {
  check_pair(rho, sigma, "operator_bounds_residual");
  if (!((alpha > 0.0 && alpha < 1.0) || (alpha > -1.0 && alpha < 0.0))) {
    throw DomainError("operator_bounds_residual: alpha must lie in (-1,0) or (0,1)", alpha);
  }
  const auto& ev = rho.spectral().eigenvalues;
  const double lam = ev(0);
  const double mu = ev(ev.size() - 1);
  const HermitianOperator a_pow =
      matrix_power(sandwiched_operator(rho, sigma, alpha).op, alpha);
  const HermitianOperator s_pow = matrix_power(sigma.op(), 1.0 - alpha);
  double lo = std::pow(lam, alpha);
  double hi = std::pow(mu, alpha);
  if (alpha < 0.0) std::swap(lo, hi);
  const double r1 = min_eigenvalue(a_pow - lo * s_pow);
  const double r2 = min_eigenvalue(hi * s_pow - a_pow);
  return std::min(r1, r2);
}

}  // namespace detail

}  // namespace rgl
