#pragma once

// Faithful density operators, tangent vectors in the mixture (m-)
// representation, affine coordinate charts, CPTP channels in Kraus form and
// the pinching map.

#include <cstdint>
#include <span>
#include <vector>

#include "rgl/matrix_core.hpp"

namespace rgl {

inline constexpr double kTraceTol = 1e-10;
inline constexpr double kFaithfulFloor = 1e-12;
inline constexpr double kKrausTol = 1e-10;
inline constexpr double kPinchingGroupRel = 1e-10;

/// Strictly positive, unit-trace Hermitian operator with its spectrum cached.
class DensityState {
 public:
  explicit DensityState(HermitianOperator op);

  static DensityState maximally_mixed(int n);
  /// Diagonal state with the given probabilities.
  static DensityState diagonal(const RealVector& p);

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  const SpectralDecomposition& spectral() const { return spectral_; }
  double min_eigenvalue() const { return spectral_.eigenvalues(0); }

 private:
  HermitianOperator op_;
  SpectralDecomposition spectral_;
};

/// Tangent vector at a state, stored as its m-representation (a traceless
/// Hermitian matrix: the direction in which the density operator moves).
class TangentVector {
 public:
  explicit TangentVector(HermitianOperator mrep);

  int base_dim() const { return mrep_.dim(); }
  const HermitianOperator& mrep() const { return mrep_; }
  const Matrix& matrix() const { return mrep_.matrix(); }

 private:
  HermitianOperator mrep_;
};

/// CPTP map A -> sum_i K_i A K_i^dagger. Each K_i is output_dim x input_dim.
class QuantumChannel {
 public:
  explicit QuantumChannel(std::vector<Matrix> kraus, double tol = kKrausTol);

  static QuantumChannel identity(int n);

  int input_dim() const { return static_cast<int>(kraus_.front().cols()); }
  int output_dim() const { return static_cast<int>(kraus_.front().rows()); }
  int rank() const { return static_cast<int>(kraus_.size()); }
  const std::vector<Matrix>& kraus() const { return kraus_; }

  /// || sum K_i^dagger K_i - I ||_max
  double completeness_residual() const;

 private:
  std::vector<Matrix> kraus_;
};

HermitianOperator apply_channel(const QuantumChannel& channel, const HermitianOperator& a);
DensityState apply_channel(const QuantumChannel& channel, const DensityState& rho);
/// Pushforward of a tangent vector; for an affine channel this is the
/// channel applied to the m-representation.
TangentVector apply_channel(const QuantumChannel& channel, const TangentVector& x);

/// Orthonormal (under Tr(AB)) traceless Hermitian basis of size n^2 - 1 used
/// as affine coordinates around a center state.
class StateChart {
 public:
  /// Generalized Gell-Mann basis: symmetric off-diagonals (j<k), antisymmetric
  /// off-diagonals (j<k), then diagonals, each scaled to unit Frobenius norm.
  /// Centered at the maximally mixed state.
  explicit StateChart(int n);

  StateChart recentered(const DensityState& center) const;

  int dim() const { return n_; }
  int size() const { return static_cast<int>(basis_.size()); }
  const HermitianOperator& basis(int a) const { return basis_.at(static_cast<std::size_t>(a)); }
  const std::vector<HermitianOperator>& basis() const { return basis_; }
  const DensityState& center() const { return center_; }
  /// Indices of the diagonal basis elements (the commutative directions).
  std::vector<int> diagonal_indices() const;

  /// sum_a theta_a basis_a
  HermitianOperator combine(std::span<const double> theta) const;

 private:
  int n_;
  std::vector<HermitianOperator> basis_;
  DensityState center_;
};

StateChart chart(int n);

/// center + sum theta_a basis_a. Throws RangeError when the result is not
/// strictly positive.
DensityState state_from_coordinates(const StateChart& chart, const DensityState& center,
                                    std::span<const double> theta);
DensityState state_from_coordinates(const StateChart& chart, std::span<const double> theta);
std::vector<double> to_coordinates(const StateChart& chart, const DensityState& center,
                                   const DensityState& state);

/// Projectors onto the eigenspaces of sigma, eigenvalues grouped within a
/// relative gap of kPinchingGroupRel.
std::vector<Matrix> spectral_projectors(const DensityState& sigma);

/// E_sigma(A) = sum_i E_i A E_i.
HermitianOperator pinching(const DensityState& sigma, const HermitianOperator& a);
QuantumChannel pinching_channel(const DensityState& sigma);

struct PinchingReport {
  bool spectra_equal = false;
  bool operator_equal = false;
  double spectral_residual = 0.0;  // max |lambda_down(A) - lambda_down(E(A))|
  double operator_residual = 0.0;  // ||A - E(A)||_F
  /// Equal spectra without A being a fixed point contradicts the fixed-point lemma.
  bool lemma_violation() const { return spectra_equal && !operator_equal; }
};

PinchingReport pinching_fixed_point_check(const DensityState& sigma, const HermitianOperator& a,
                                          double tol = 1e-8);

}  // namespace rgl
