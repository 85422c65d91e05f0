#include "rgl/random.hpp"

#include <cmath>
#include <numbers>

namespace rgl {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  return mix64(mix64(mix64(master) ^ (stream * 0xd1b54a32d192ed03ULL)) ^ index);
}

// Distributions are hand-rolled on top of raw engine output so that streams
// are identical across standard library implementations.
double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double Rng::normal() {
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

int Rng::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

Matrix ginibre(int rows, int cols, Rng& rng) {
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
  }
  return g;
}

namespace {

// Orthonormal columns from QR with the diagonal of R made positive, which
// makes the result Haar distributed.
Matrix haar_isometry(int rows, int cols, Rng& rng) {
  const Matrix g = ginibre(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  const Matrix r = qr.matrixQR();
  for (int j = 0; j < cols; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

}  // namespace

Matrix haar_unitary(int n, Rng& rng) { return haar_isometry(n, n, rng); }

HermitianOperator random_hermitian(int n, Rng& rng) {
  const Matrix g = ginibre(n, n, rng);
  return HermitianOperator::symmetrized(g);
}

HermitianOperator random_traceless(int n, Rng& rng) {
  Matrix h = random_hermitian(n, rng).matrix();
  h -= (h.trace() / static_cast<double>(n)) * Matrix::Identity(n, n);
  const double norm = h.norm();
  return HermitianOperator::symmetrized(norm > 0.0 ? Matrix(h / norm) : h);
}

DensityState random_state(int n, Rng& rng, double floor) {
  if (n < 2) throw ValidationError("random_state: dimension must be >= 2");
  if (!(floor >= 0.0 && floor * n < 1.0)) throw ValidationError("random_state: invalid floor");
  const Matrix g = ginibre(n, n, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  HermitianOperator op = HermitianOperator::symmetrized(rho);
  const double lmin = min_eigenvalue(op);
  if (lmin < floor) {
    // Mix with I/n just enough to lift the minimum eigenvalue to the floor.
    const double w = (floor - lmin) / (1.0 / n - lmin);
    op = HermitianOperator::symmetrized((1.0 - w) * op.matrix() +
                                        (w / n) * Matrix::Identity(n, n));
  }
  return DensityState(op);
}

DensityState random_state(int n, std::uint64_t seed, double floor) {
  Rng rng(seed);
  return random_state(n, rng, floor);
}

QuantumChannel random_channel(int n_in, int n_out, int rank, Rng& rng) {
  if (n_in < 1 || n_out < 1 || rank < 1) {
    throw ValidationError("random_channel: dimensions and rank must be positive");
  }
  if (n_out * rank < n_in) {
    throw ValidationError("random_channel: n_out * rank must be at least n_in");
  }
  const Matrix v = haar_isometry(n_out * rank, n_in, rng);
  std::vector<Matrix> kraus;
  kraus.reserve(static_cast<std::size_t>(rank));
  for (int i = 0; i < rank; ++i) kraus.push_back(v.middleRows(i * n_out, n_out));
  return QuantumChannel(std::move(kraus));
}

QuantumChannel random_channel(int n, int rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_channel(n, n, rank, rng);
}

TangentVector random_tangent(const StateChart& chart, Rng& rng) {
  std::vector<double> theta(static_cast<std::size_t>(chart.size()));
  for (auto& t : theta) t = rng.normal();
  return TangentVector(chart.combine(theta));
}

TangentVector random_tangent(const StateChart& chart, std::uint64_t seed) {
  Rng rng(seed);
  return random_tangent(chart, rng);
}

HermitianOperator random_positive(int n, Rng& rng, double log_spread) {
  const Matrix u = haar_unitary(n, rng);
  RealVector d(n);
  for (int i = 0; i < n; ++i) d(i) = std::pow(10.0, rng.uniform(-log_spread, log_spread));
  return HermitianOperator::symmetrized(u * d.cast<Complex>().asDiagonal() * u.adjoint());
}

}  // namespace rgl
