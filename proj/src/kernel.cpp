// f_beta(t) = e(beta L) / e((beta-1) L) with L = log t and e(x) = (e^x - 1)/x.
// This is the defining ratio with the factors beta L and (beta-1) L cancelled,
// so beta = 0, beta = 1 and t = 1 need no separate branches: e(0) = 1.

#include <cmath>
#include <sstream>

#include "rgl/geometry.hpp"

namespace rgl {
namespace {

constexpr double kSeriesCutoff = 1e-5;

// log e(x), stable for every finite x.
double log_e(double x) {
  const double ax = std::abs(x);
  if (ax < kSeriesCutoff) return std::log1p(x / 2.0 + x * x / 6.0 + x * x * x / 24.0);
  if (ax < 700.0) return std::log(std::expm1(x) / x);
  // e^x/x for large positive x, 1/|x| for large negative x.
  return x > 0.0 ? x - std::log(x) : -std::log(-x);
}

double e_ratio(double x) {
  if (std::abs(x) < kSeriesCutoff) return 1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0;
  return std::expm1(x) / x;
}

}  // namespace

KernelFamily KernelFamily::from_alpha(double alpha) {
  if (alpha == 0.0 || !std::isfinite(alpha)) {
    throw DomainError("KernelFamily: alpha must be finite and nonzero", alpha);
  }
  KernelFamily f;
  f.beta_ = 1.0 / alpha;
  f.alpha_ = alpha;
  f.has_alpha_ = true;
  return f;
}

KernelFamily KernelFamily::from_beta(double beta) {
  if (!std::isfinite(beta)) throw DomainError("KernelFamily: beta must be finite", beta);
  KernelFamily f;
  f.beta_ = beta;
  if (beta != 0.0) f.alpha_ = 1.0 / beta;
  return f;
}

std::string KernelFamily::label() const {
  std::ostringstream os;
  if (has_alpha_) {
    os << "alpha=" << alpha_;
  } else {
    os << "beta=" << beta_;
  }
  return os.str();
}

double kernel_eval(const KernelFamily& family, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("kernel_eval: t must be positive", t);
  const double b = family.beta();
  const double l = std::log(t);
  const double x1 = b * l;
  const double x0 = (b - 1.0) * l;
  if (std::abs(x1) < 700.0 && std::abs(x0) < 700.0) return e_ratio(x1) / e_ratio(x0);
  return std::exp(log_e(x1) - log_e(x0));
}

double kernel_mean(const KernelFamily& family, double x, double y) {
  return y * kernel_eval(family, x / y);
}

}  // namespace rgl
