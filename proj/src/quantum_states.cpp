#include "rgl/quantum_states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rgl {

// ---------------------------------------------------------------------------
// DensityState

DensityState::DensityState(HermitianOperator op) : op_(std::move(op)) {
  const double tr = op_.trace();
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream os;
    os << "DensityState: trace " << tr << " differs from 1";
    throw ValidationError(os.str());
  }
  spectral_ = rgl::spectral(op_);
  if (!(spectral_.eigenvalues(0) > kFaithfulFloor)) {
    std::ostringstream os;
    os << "DensityState: minimum eigenvalue " << spectral_.eigenvalues(0)
       << " is not strictly positive";
    throw RangeError(os.str(), spectral_.eigenvalues(0));
  }
}

DensityState DensityState::maximally_mixed(int n) {
  if (n < 1) throw ValidationError("DensityState: dimension must be >= 1");
  return DensityState(HermitianOperator::identity(n) * (1.0 / n));
}

DensityState DensityState::diagonal(const RealVector& p) {
  return DensityState(HermitianOperator::diagonal(p));
}

// ---------------------------------------------------------------------------
// TangentVector

TangentVector::TangentVector(HermitianOperator mrep) : mrep_(std::move(mrep)) {
  const double tr = mrep_.trace();
  if (std::abs(tr) > kTraceTol) {
    std::ostringstream os;
    os << "TangentVector: m-representation has trace " << tr << ", expected 0";
    throw ValidationError(os.str());
  }
}

// ---------------------------------------------------------------------------
// QuantumChannel

QuantumChannel::QuantumChannel(std::vector<Matrix> kraus, double tol) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw ValidationError("QuantumChannel: no Kraus operators");
  const auto rows = kraus_.front().rows();
  const auto cols = kraus_.front().cols();
  if (rows < 1 || cols < 1) throw ValidationError("QuantumChannel: empty Kraus operator");
  for (const auto& k : kraus_) {
    if (k.rows() != rows || k.cols() != cols) {
      throw ValidationError("QuantumChannel: Kraus operators have inconsistent shapes");
    }
  }
  const double res = completeness_residual();
  if (!(res <= tol)) {
    std::ostringstream os;
    os << "QuantumChannel: sum K^dagger K deviates from identity by " << res;
    throw ValidationError(os.str());
  }
}

QuantumChannel QuantumChannel::identity(int n) { return QuantumChannel({Matrix::Identity(n, n)}); }

double QuantumChannel::completeness_residual() const {
  const auto n = kraus_.front().cols();
  Matrix acc = Matrix::Zero(n, n);
  for (const auto& k : kraus_) acc += k.adjoint() * k;
  return (acc - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

HermitianOperator apply_channel(const QuantumChannel& channel, const HermitianOperator& a) {
  if (a.dim() != channel.input_dim()) {
    throw ValidationError("apply_channel: operator dimension does not match channel input");
  }
  Matrix acc = Matrix::Zero(channel.output_dim(), channel.output_dim());
  for (const auto& k : channel.kraus()) acc += k * a.matrix() * k.adjoint();
  return HermitianOperator::symmetrized(acc);
}

DensityState apply_channel(const QuantumChannel& channel, const DensityState& rho) {
  return DensityState(apply_channel(channel, rho.op()));
}

TangentVector apply_channel(const QuantumChannel& channel, const TangentVector& x) {
  return TangentVector(apply_channel(channel, x.mrep()));
}

// ---------------------------------------------------------------------------
// StateChart

namespace {

std::vector<HermitianOperator> gell_mann_basis(int n) {
  std::vector<HermitianOperator> basis;
  basis.reserve(static_cast<std::size_t>(n * n - 1));
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      Matrix m = Matrix::Zero(n, n);
      m(j, k) = s;
      m(k, j) = s;
      basis.push_back(HermitianOperator::symmetrized(m));
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      Matrix m = Matrix::Zero(n, n);
      m(j, k) = Complex(0.0, -s);
      m(k, j) = Complex(0.0, s);
      basis.push_back(HermitianOperator::symmetrized(m));
    }
  }
  for (int l = 1; l < n; ++l) {
    RealVector d = RealVector::Zero(n);
    for (int j = 0; j < l; ++j) d(j) = 1.0;
    d(l) = -static_cast<double>(l);
    d /= d.norm();
    basis.push_back(HermitianOperator::diagonal(d));
  }
  return basis;
}

}  // namespace

StateChart::StateChart(int n)
    : n_(n),
      basis_(n >= 2 ? gell_mann_basis(n) : std::vector<HermitianOperator>{}),
      center_(DensityState::maximally_mixed(std::max(n, 1))) {
  if (n < 2) throw ValidationError("StateChart: dimension must be >= 2");
}

StateChart StateChart::recentered(const DensityState& center) const {
  if (center.dim() != n_) throw ValidationError("StateChart: center dimension mismatch");
  StateChart c = *this;
  c.center_ = center;
  return c;
}

std::vector<int> StateChart::diagonal_indices() const {
  std::vector<int> idx;
  for (int l = 1; l < n_; ++l) idx.push_back(n_ * (n_ - 1) + l - 1);
  return idx;
}

HermitianOperator StateChart::combine(std::span<const double> theta) const {
  if (static_cast<int>(theta.size()) != size()) {
    throw ValidationError("StateChart: coordinate vector has wrong length");
  }
  Matrix acc = Matrix::Zero(n_, n_);
  for (int a = 0; a < size(); ++a) acc += theta[static_cast<std::size_t>(a)] * basis_[a].matrix();
  return HermitianOperator::symmetrized(acc);
}

StateChart chart(int n) { return StateChart(n); }

DensityState state_from_coordinates(const StateChart& chart, const DensityState& center,
                                    std::span<const double> theta) {
  if (center.dim() != chart.dim()) {
    throw ValidationError("state_from_coordinates: center dimension mismatch");
  }
  const HermitianOperator op = center.op() + chart.combine(theta);
  const double lmin = min_eigenvalue(op);
  if (!(lmin > kFaithfulFloor)) {
    std::ostringstream os;
    os << "state_from_coordinates: perturbed state is not strictly positive (min eigenvalue "
       << lmin << ")";
    throw RangeError(os.str(), lmin);
  }
  return DensityState(op);
}

DensityState state_from_coordinates(const StateChart& chart, std::span<const double> theta) {
  return state_from_coordinates(chart, chart.center(), theta);
}

std::vector<double> to_coordinates(const StateChart& chart, const DensityState& center,
                                   const DensityState& state) {
  if (state.dim() != chart.dim() || center.dim() != chart.dim()) {
    throw ValidationError("to_coordinates: dimension mismatch");
  }
  const Matrix diff = state.matrix() - center.matrix();
  std::vector<double> theta(static_cast<std::size_t>(chart.size()));
  for (int a = 0; a < chart.size(); ++a) {
    theta[static_cast<std::size_t>(a)] = (chart.basis(a).matrix() * diff).trace().real();
  }
  return theta;
}

// ---------------------------------------------------------------------------
// Pinching

std::vector<Matrix> spectral_projectors(const DensityState& sigma) {
  const auto& sd = sigma.spectral();
  const int n = sd.dim();
  std::vector<Matrix> projectors;
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n && sd.eigenvalues(end) - sd.eigenvalues(end - 1) <=
                          kPinchingGroupRel * std::max(1.0, std::abs(sd.eigenvalues(end)))) {
      ++end;
    }
    const Matrix v = sd.eigenvectors.middleCols(start, end - start);
    projectors.push_back(v * v.adjoint());
    start = end;
  }
  return projectors;
}

HermitianOperator pinching(const DensityState& sigma, const HermitianOperator& a) {
  if (sigma.dim() != a.dim()) throw ValidationError("pinching: dimension mismatch");
  Matrix acc = Matrix::Zero(a.dim(), a.dim());
  for (const auto& p : spectral_projectors(sigma)) acc += p * a.matrix() * p;
  return HermitianOperator::symmetrized(acc);
}

QuantumChannel pinching_channel(const DensityState& sigma) {
  return QuantumChannel(spectral_projectors(sigma));
}

PinchingReport pinching_fixed_point_check(const DensityState& sigma, const HermitianOperator& a,
                                          double tol) {
  const HermitianOperator pinched = pinching(sigma, a);
  PinchingReport r;
  r.spectral_residual =
      (descending_eigenvalues(a) - descending_eigenvalues(pinched)).cwiseAbs().maxCoeff();
  r.operator_residual = (a.matrix() - pinched.matrix()).norm();
  r.spectra_equal = r.spectral_residual <= tol;
  r.operator_equal = r.operator_residual <= tol;
  return r;
}

}  // namespace rgl
