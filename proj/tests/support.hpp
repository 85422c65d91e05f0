#pragma once

// Small helpers shared by the test files. Oracles here deliberately avoid the
// library's divided-difference code paths.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "rgl/random.hpp"

namespace rgl::test {

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

/// f(A) through a fresh eigendecomposition, independent of matrix_function.
template <class F>
Matrix apply_spectral(const Matrix& a, F f) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  RealVector v = es.eigenvalues();
  for (int i = 0; i < v.size(); ++i) v(i) = f(v(i));
  return es.eigenvectors() * v.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

inline Matrix power_of(const Matrix& a, double p) {
  return apply_spectral(a, [p](double x) { return std::pow(x, p); });
}

inline HermitianOperator herm(const Matrix& m) { return HermitianOperator::symmetrized(m); }

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

}  // namespace rgl::test
