#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>

#include "rgl/geometry.hpp"

namespace rgl {
namespace {

// Tr(A B) for square matrices of equal size.
double tr_prod(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b.transpose()).sum().real();
}

std::vector<int> resolve_directions(const StateChart& chart, const std::vector<int>& directions) {
  if (directions.empty()) {
    std::vector<int> all(static_cast<std::size_t>(chart.size()));
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  for (int d : directions) {
    if (d < 0 || d >= chart.size()) throw ValidationError("chart direction index out of range");
  }
  return directions;
}

ConnectionCoefficients empty_coefficients(ConnectionKind which, int n,
                                          const std::vector<int>& dirs) {
  ConnectionCoefficients c;
  c.which = which;
  c.state_dim = n;
  c.size = static_cast<int>(dirs.size());
  c.directions = dirs;
  c.gamma.assign(static_cast<std::size_t>(c.size * c.size * c.size), 0.0);
  return c;
}

Matrix scale_both(const RealVector& d, const Matrix& x) {
  return d.cast<Complex>().asDiagonal() * x * d.cast<Complex>().asDiagonal();
}

}  // namespace

double ConnectionCoefficients::torsion_residual() const {
  double worst = 0.0;
  for (int i = 0; i < size; ++i) {
    for (int j = i + 1; j < size; ++j) {
      for (int k = 0; k < size; ++k) worst = std::max(worst, std::abs(at(i, j, k) - at(j, i, k)));
    }
  }
  return worst;
}

nlohmann::json ConnectionCoefficients::to_json() const {
  nlohmann::json g = nlohmann::json::array();
  for (Eigen::Index a = 0; a < metric_matrix.rows(); ++a) {
    for (Eigen::Index b = 0; b < metric_matrix.cols(); ++b) g.push_back(metric_matrix(a, b));
  }
  return {{"which", which == ConnectionKind::primal ? "primal" : "dual"},
          {"state_dim", state_dim},
          {"shape", {size, size, size}},
          {"index_order", "i,j,k -> (i*m+j)*m+k"},
          {"directions", directions},
          {"gamma", gamma},
          {"metric_shape", {size, size}},
          {"metric", std::move(g)}};
}

// ---------------------------------------------------------------------------
// Closed form

ConnectionPair connections_closed_form(const DensityState& rho, const StateChart& chart,
                                       double alpha, const std::vector<int>& directions) {
  if (chart.dim() != rho.dim()) throw ValidationError("connections_closed_form: dimension mismatch");
  const AlphaParameter ap(alpha);
  const std::vector<int> dirs = resolve_directions(chart, directions);
  const int m = static_cast<int>(dirs.size());
  const int n = rho.dim();
  const auto& sd = rho.spectral();
  const RealVector& p = sd.eigenvalues;

  std::vector<Matrix> x(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    x[static_cast<std::size_t>(a)] = sd.to_eigenbasis(chart.basis(dirs[static_cast<std::size_t>(a)]).matrix());
  }
  auto X = [&](int a) -> const Matrix& { return x[static_cast<std::size_t>(a)]; };

  ConnectionPair out{empty_coefficients(ConnectionKind::primal, n, dirs),
                     empty_coefficients(ConnectionKind::dual, n, dirs)};
  RealMatrix g(m, m);

  if (ap.is_umegaki()) {
    // Umegaki: the primal connection is the mixture connection (zero in this
    // chart); the dual is Tr Z D^2 log(rho)[X, Y].
    const auto log_f = ScalarFunction::log();
    for (int a = 0; a < m; ++a) {
      const Matrix dl = frechet_eigenbasis(p, X(a), log_f);
      for (int b = 0; b < m; ++b) g(b, a) = tr_prod(X(b), dl);
    }
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        const Matrix d2 = second_frechet_eigenbasis(p, X(i), X(j), log_f);
        for (int k = 0; k < m; ++k) {
          const double v = tr_prod(X(k), d2);
          out.dual.at(i, j, k) = v;
          out.dual.at(j, i, k) = v;
        }
      }
    }
  } else {
    const double q = sandwich_exponent(alpha);
    const double inv = 1.0 / (alpha - 1.0);
    const RealVector rq = p.array().pow(q);
    const RealVector a_ev = p.array().pow(1.0 / alpha);  // rho^(1/alpha) at sigma = rho
    const auto h_fn = ScalarFunction::power(alpha - 1.0);
    const auto pow_q = ScalarFunction::power(q);
    const auto pow_inv = ScalarFunction::power(1.0 / alpha);
    const Matrix r = rq.cast<Complex>().asDiagonal();

    std::vector<Matrix> b(static_cast<std::size_t>(m)), mm(b.size()), pz(b.size()), qz(b.size());
    for (int a = 0; a < m; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      b[ua] = scale_both(rq, X(a));
      mm[ua] = frechet_eigenbasis(a_ev, b[ua], h_fn);
      pz[ua] = frechet_eigenbasis(p, X(a), pow_q);
      qz[ua] = frechet_eigenbasis(p, X(a), pow_inv);
    }
    for (int a = 0; a < m; ++a) {
      const Matrix na = scale_both(rq, mm[static_cast<std::size_t>(a)]);
      for (int c = 0; c < m; ++c) g(a, c) = inv * tr_prod(na, X(c));
    }

    // s[k][i] = D^2 h(A)[B_k, B_i]; w[z][x] = Z_z[N_x], the derivative of
    // rho^q Dh(rho^(1/alpha))[rho^q X rho^q] rho^q along Z.
    std::vector<std::vector<Matrix>> s(static_cast<std::size_t>(m),
                                       std::vector<Matrix>(static_cast<std::size_t>(m)));
    auto w = s;
    for (int z = 0; z < m; ++z) {
      const auto uz = static_cast<std::size_t>(z);
      for (int xi = 0; xi < m; ++xi) {
        const auto ux = static_cast<std::size_t>(xi);
        if (xi >= z) {
          s[uz][ux] = second_frechet_eigenbasis(a_ev, b[uz], b[ux], h_fn);
        } else {
          s[uz][ux] = s[ux][uz];
        }
        const Matrix inner = pz[uz] * X(xi) * r + r * X(xi) * pz[uz];
        const Matrix m_prime = second_frechet_eigenbasis(a_ev, qz[uz], b[ux], h_fn) +
                               frechet_eigenbasis(a_ev, inner, h_fn);
        w[uz][ux] = pz[uz] * mm[ux] * r + r * mm[ux] * pz[uz] + r * m_prime * r;
      }
    }
    for (int i = 0; i < m; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      for (int j = 0; j < m; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        for (int k = 0; k < m; ++k) {
          const auto uk = static_cast<std::size_t>(k);
          out.primal.at(i, j, k) = inv * (tr_prod(s[uk][ui], b[uj]) - tr_prod(X(j), w[uk][ui]));
          out.dual.at(i, j, k) = inv * (-tr_prod(s[uj][ui], b[uk]) + tr_prod(X(k), w[ui][uj]) +
                                        tr_prod(X(k), w[uj][ui]));
        }
      }
    }
  }
  // Symmetrize the metric against roundoff.
  const RealMatrix gs = 0.5 * (g + g.transpose());
  out.primal.metric_matrix = gs;
  out.dual.metric_matrix = gs;
  return out;
}

// ---------------------------------------------------------------------------
// Eguchi finite differences

namespace {

// -d_i d_j [slot A] d_k [slot B] D at coincidence, product stencil with step h.
double third_mixed(const DensityState& rho, const Matrix& xi, const Matrix& xj, const Matrix& xk,
                   const AlphaParameter& alpha, bool second_on_first_slot, double h) {
  const std::array<std::pair<double, double>, 4> pairs{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
  double acc = 0.0;
  for (const auto& [si, sj] : pairs) {
    const Matrix two = h * (si * xi + sj * xj);
    const double w2 = si * sj;
    for (double sk : {1.0, -1.0}) {
      const Matrix one = (sk * h) * xk;
      const DensityState s_two(HermitianOperator::symmetrized(rho.matrix() + two));
      const DensityState s_one(HermitianOperator::symmetrized(rho.matrix() + one));
      const double d = second_on_first_slot ? alpha_divergence(s_two, s_one, alpha)
                                            : alpha_divergence(s_one, s_two, alpha);
      acc += w2 * sk * d;
    }
  }
  return -acc / (8.0 * h * h * h);
}

}  // namespace

ConnectionPair connections_eguchi(const DensityState& rho, const StateChart& chart, double alpha,
                                  const EguchiOptions& opts) {
  if (chart.dim() != rho.dim()) throw ValidationError("connections_eguchi: dimension mismatch");
  const AlphaParameter ap(alpha);
  const std::vector<int> dirs = resolve_directions(chart, {});
  const int m = chart.size();
  ConnectionPair out{empty_coefficients(ConnectionKind::primal, rho.dim(), dirs),
                     empty_coefficients(ConnectionKind::dual, rho.dim(), dirs)};

  auto fill = [&](double h) {
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
          const Matrix& xi = chart.basis(i).matrix();
          const Matrix& xj = chart.basis(j).matrix();
          const Matrix& xk = chart.basis(k).matrix();
          auto est = [&](bool first) {
            return (4.0 * third_mixed(rho, xi, xj, xk, ap, first, h / 2.0) -
                    third_mixed(rho, xi, xj, xk, ap, first, h)) /
                   3.0;
          };
          const double gp = est(true);
          const double gd = est(false);
          out.primal.at(i, j, k) = out.primal.at(j, i, k) = gp;
          out.dual.at(i, j, k) = out.dual.at(j, i, k) = gd;
        }
      }
    }
  };
  try {
    fill(opts.step(opts.h_connection, rho));
  } catch (const RangeError&) {
    fill(opts.step(opts.h_connection, rho) / 4.0);
  }

  RealMatrix g(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      g(i, j) = g(j, i) = metric_eguchi(rho, chart, i, j, alpha, opts);
    }
  }
  out.primal.metric_matrix = g;
  out.dual.metric_matrix = g;
  return out;
}

// ---------------------------------------------------------------------------
// Duality

namespace {

constexpr double kDualityStep = 1e-3;

// d_i g at rho along chart direction i, Richardson-refined central difference.
RealMatrix metric_derivative(const DensityState& rho, const StateChart& chart, double alpha,
                             int i) {
  auto diff = [&](double h) {
    const Matrix shift = h * chart.basis(i).matrix();
    const DensityState plus(HermitianOperator::symmetrized(rho.matrix() + shift));
    const DensityState minus(HermitianOperator::symmetrized(rho.matrix() - shift));
    return RealMatrix((metric_matrix(plus, chart, alpha) - metric_matrix(minus, chart, alpha)) /
                      (2.0 * h));
  };
  return (4.0 * diff(kDualityStep / 2.0) - diff(kDualityStep)) / 3.0;
}

}  // namespace

double duality_residual(const DensityState& rho, const StateChart& chart, double alpha, int i,
                        int j, int k, const ConnectionPair* pair) {
  const int m = chart.size();
  if (i < 0 || j < 0 || k < 0 || i >= m || j >= m || k >= m) {
    throw ValidationError("duality_residual: index out of range");
  }
  std::optional<ConnectionPair> own;
  if (pair == nullptr) {
    own = connections_closed_form(rho, chart, alpha);
    pair = &*own;
  }
  const RealMatrix dg = metric_derivative(rho, chart, alpha, i);
  return std::abs(dg(j, k) - pair->primal.at(i, j, k) - pair->dual.at(i, k, j));
}

double duality_residual_max(const DensityState& rho, const StateChart& chart, double alpha,
                            const ConnectionPair* pair) {
  std::optional<ConnectionPair> own;
  if (pair == nullptr) {
    own = connections_closed_form(rho, chart, alpha);
    pair = &*own;
  }
  const int m = chart.size();
  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    const RealMatrix dg = metric_derivative(rho, chart, alpha, i);
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        worst = std::max(worst,
                         std::abs(dg(j, k) - pair->primal.at(i, j, k) - pair->dual.at(i, k, j)));
      }
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Classical oracles

RealMatrix classical_fisher_metric(const RealVector& p, const std::vector<RealVector>& v) {
  const int m = static_cast<int>(v.size());
  RealMatrix g(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      g(a, b) = (v[static_cast<std::size_t>(a)].array() * v[static_cast<std::size_t>(b)].array() /
                 p.array())
                    .sum();
    }
  }
  return g;
}

std::vector<double> classical_alpha_connection(const RealVector& p,
                                               const std::vector<RealVector>& v, double a) {
  const int m = static_cast<int>(v.size());
  std::vector<double> out(static_cast<std::size_t>(m * m * m));
  const double c = -(1.0 + a) / 2.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        out[static_cast<std::size_t>((i * m + j) * m + k)] =
            c * (v[static_cast<std::size_t>(i)].array() * v[static_cast<std::size_t>(j)].array() *
                 v[static_cast<std::size_t>(k)].array() / p.array().square())
                    .sum();
      }
    }
  }
  return out;
}

}  // namespace rgl
