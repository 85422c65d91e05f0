#pragma once

// Seeded generators for states, channels, tangents and positive operators.
// Every generator takes an explicit seed; trial sub-seeds come from
// derive_seed so that parallel runs reproduce sequential ones.

#include <cstdint>
#include <random>

#include "rgl/quantum_states.hpp"

namespace rgl {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Counter-based sub-seed: identical (master, stream, index) always gives the
/// same value, independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  double uniform(double lo = 0.0, double hi = 1.0);
  double normal();
  Complex complex_normal();
  int uniform_int(int lo, int hi);  // inclusive
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline constexpr double kRandomStateFloor = 1e-6;

Matrix ginibre(int rows, int cols, Rng& rng);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
Matrix haar_unitary(int n, Rng& rng);
/// Random Hermitian matrix (GUE-like, unit scale).
HermitianOperator random_hermitian(int n, Rng& rng);
/// Random traceless Hermitian with unit Frobenius norm.
HermitianOperator random_traceless(int n, Rng& rng);

/// G G^dagger / Tr with complex Gaussian G, mixed towards I/n when needed so
/// that the minimum eigenvalue is at least `floor`.
DensityState random_state(int n, std::uint64_t seed, double floor = kRandomStateFloor);
DensityState random_state(int n, Rng& rng, double floor = kRandomStateFloor);

/// Channel from a Haar-random isometry C^{n_in} -> C^{n_out} (x) C^{rank}.
QuantumChannel random_channel(int n, int rank, std::uint64_t seed);
QuantumChannel random_channel(int n_in, int n_out, int rank, Rng& rng);

/// Random coordinates in the chart; traceless by construction.
TangentVector random_tangent(const StateChart& chart, std::uint64_t seed);
TangentVector random_tangent(const StateChart& chart, Rng& rng);

/// Strictly positive operator U diag(10^u) U^dagger with u uniform in
/// [-log_spread, log_spread].
HermitianOperator random_positive(int n, Rng& rng, double log_spread);

}  // namespace rgl
