#pragma once

// Induced metric, e-representation, the kernel family f_beta, the dual pair
// of affine connections and curvature diagnostics.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rgl/divergences.hpp"

namespace rgl {

/// f_beta(t) = ((beta-1)/beta) (t^beta - 1) / (t^(beta-1) - 1), extended by
/// continuity to beta in {0, 1} and t = 1. The divergence D_alpha induces the
/// member beta = 1/alpha.
class KernelFamily {
 public:
  static KernelFamily from_alpha(double alpha);
  static KernelFamily from_beta(double beta);

  double beta() const { return beta_; }
  bool from_alpha_parameter() const { return has_alpha_; }
  /// Only meaningful when constructed from alpha.
  double alpha() const { return alpha_; }
  std::string label() const;

 private:
  double beta_ = 1.0;
  double alpha_ = 1.0;
  bool has_alpha_ = false;
};

double kernel_eval(const KernelFamily& family, double t);
/// y f(x/y); symmetric in (x, y).
double kernel_mean(const KernelFamily& family, double x, double y);

/// (X^(e))_ij = (X^(m))_ij / (p_j f(p_i/p_j)) in rho's eigenbasis.
HermitianOperator e_representation(const DensityState& rho, const TangentVector& x,
                                   const KernelFamily& family);

/// g_rho(X, Y) = Tr X^(e) Y^(m) with the kernel induced by D_alpha.
double metric(const DensityState& rho, const TangentVector& x, const TangentVector& y,
              double alpha);
/// Same metric for an arbitrary kernel (used by the monotonicity experiments).
double metric(const DensityState& rho, const TangentVector& x, const TangentVector& y,
              const KernelFamily& family);
RealMatrix metric_matrix(const DensityState& rho, const StateChart& chart, double alpha);

struct EguchiOptions {
  double h_metric = 1e-3;      // step for second derivatives
  double h_connection = 5e-3;  // step for third derivatives
  /// Shrink both steps by lambda_min / 0.25 (never below a tenth) so that the
  /// stencil stays well inside the cone for badly conditioned states.
  bool scale_with_state = true;
  double step(double h, const DensityState& rho) const;
};

/// d_i d_j D_alpha(rho_theta || rho) at theta = 0, along chart directions.
/// Central differences with one Richardson halving; the step is shrunk once
/// if a stencil point leaves the state space.
double metric_eguchi(const DensityState& rho, const StateChart& chart, int i, int j, double alpha,
                     const EguchiOptions& opts = {});
/// Same along arbitrary traceless directions.
double metric_eguchi(const DensityState& rho, const TangentVector& x, const TangentVector& y,
                     double alpha, const EguchiOptions& opts = {});

enum class ConnectionKind { primal, dual };

/// Gamma_{ij,k} = g(nabla_i d_j, d_k) in the affine chart at a state.
struct ConnectionCoefficients {
  ConnectionKind which = ConnectionKind::primal;
  int state_dim = 0;
  int size = 0;                // number of chart directions m
  std::vector<int> directions; // chart indices spanned
  std::vector<double> gamma;   // m^3, index (i*m + j)*m + k
  RealMatrix metric_matrix;    // m x m

  double& at(int i, int j, int k) { return gamma[static_cast<std::size_t>((i * size + j) * size + k)]; }
  double at(int i, int j, int k) const {
    return gamma[static_cast<std::size_t>((i * size + j) * size + k)];
  }
  /// max |Gamma_{ij,k} - Gamma_{ji,k}|
  double torsion_residual() const;
  nlohmann::json to_json() const;
};

struct ConnectionPair {
  ConnectionCoefficients primal;
  ConnectionCoefficients dual;
};

/// Product-stencil finite differences of D_alpha:
///   Gamma_{ij,k}  = -d_i d_j [first slot] d_k [second slot] D
///   Gamma*_{ij,k} = -d_i d_j [second slot] d_k [first slot] D
ConnectionPair connections_eguchi(const DensityState& rho, const StateChart& chart, double alpha,
                                  const EguchiOptions& opts = {});

/// Closed expressions built from first and second Frechet derivatives of
/// t^(alpha-1) at A = rho^(1/alpha) and of rho^q. `directions` restricts the
/// chart (all directions when empty).
ConnectionPair connections_closed_form(const DensityState& rho, const StateChart& chart,
                                       double alpha, const std::vector<int>& directions = {});

/// |d_i g_jk - Gamma_{ij,k} - Gamma*_{ik,j}|, d_i g by central differences of
/// the closed-form metric. Uses the closed-form connections unless a pair is given.
double duality_residual(const DensityState& rho, const StateChart& chart, double alpha, int i,
                        int j, int k, const ConnectionPair* pair = nullptr);
/// Maximum over all index triples.
double duality_residual_max(const DensityState& rho, const StateChart& chart, double alpha,
                            const ConnectionPair* pair = nullptr);

struct CurvatureOptions {
  double h = 5e-3;
  bool richardson = true;
  std::vector<int> directions;  // empty: the full chart
  bool keep_tensors = false;
  double max_condition = 1e8;
};

struct CurvatureReport {
  double alpha = 0.0;
  Matrix state;
  double max_abs_riemann_primal = 0.0;
  double max_abs_riemann_dual = 0.0;
  double h = 0.0;
  bool richardson = true;
  int size = 0;
  /// R^l_{kij} at index ((l*m + k)*m + i)*m + j, when requested.
  std::vector<double> riemann_primal;
  std::vector<double> riemann_dual;

  nlohmann::json to_json() const;
};

/// Riemann tensors of both connections from one central difference of the
/// closed-form Christoffel symbols of the second kind. Throws NumericalError
/// when the metric is ill-conditioned.
CurvatureReport curvature(const DensityState& rho, const StateChart& chart, double alpha,
                          const CurvatureOptions& opts = {});

/// Riemann tensor R^l_{kij} from Christoffel symbols of the second kind at a
/// point and their central-difference derivatives. Exposed for the oracle tests.
std::vector<double> riemann_from_christoffel(int m, const std::vector<double>& gamma2,
                                             const std::vector<std::vector<double>>& d_gamma2);

// Classical oracles on the probability simplex, in mixture coordinates
// (directions v_a with sum_i v_a(i) = 0).

/// sum_i v_a(i) v_b(i) / p_i
RealMatrix classical_fisher_metric(const RealVector& p, const std::vector<RealVector>& v);

/// a-connection -(1+a)/2 sum_i v_a v_b v_c / p_i^2 (a = -1 mixture, a = 1 exponential).
std::vector<double> classical_alpha_connection(const RealVector& p,
                                               const std::vector<RealVector>& v, double a);

}  // namespace rgl
