#include <cmath>
#include <sstream>

#include "rgl/geometry.hpp"

namespace rgl {
namespace {

// Gamma^l_{ij} = sum_k (G^-1)_{lk} Gamma_{ij,k}, index (l*m + i)*m + j.
std::vector<double> second_kind(const ConnectionCoefficients& c, const RealMatrix& g_inv) {
  const int m = c.size;
  std::vector<double> out(static_cast<std::size_t>(m * m * m), 0.0);
  for (int l = 0; l < m; ++l) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        double acc = 0.0;
        for (int k = 0; k < m; ++k) acc += g_inv(l, k) * c.at(i, j, k);
        out[static_cast<std::size_t>((l * m + i) * m + j)] = acc;
      }
    }
  }
  return out;
}

struct SecondKindPair {
  std::vector<double> primal;
  std::vector<double> dual;
};

SecondKindPair christoffels_at(const DensityState& rho, const StateChart& chart, double alpha,
                               const std::vector<int>& dirs, double max_condition) {
  const ConnectionPair pair = connections_closed_form(rho, chart, alpha, dirs);
  const Eigen::SelfAdjointEigenSolver<RealMatrix> es(pair.primal.metric_matrix);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > max_condition) {
    std::ostringstream os;
    os << "curvature: metric matrix is ill-conditioned (eigenvalues " << lo << " .. " << hi << ")";
    throw NumericalError(os.str(), lo > 0.0 ? hi / lo : INFINITY);
  }
  const RealMatrix g_inv = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                           es.eigenvectors().transpose();
  return {second_kind(pair.primal, g_inv), second_kind(pair.dual, g_inv)};
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<double> riemann_from_christoffel(int m, const std::vector<double>& gamma2,
                                             const std::vector<std::vector<double>>& d_gamma2) {
  const auto m3 = static_cast<std::size_t>(m * m * m);
  bool ok = m > 0 && gamma2.size() == m3 && d_gamma2.size() == static_cast<std::size_t>(m);
  for (const auto& d : d_gamma2) ok = ok && d.size() == m3;
  if (!ok) throw ValidationError("riemann_from_christoffel: arrays do not match m");
  auto G = [&](int l, int i, int j) { return gamma2[static_cast<std::size_t>((l * m + i) * m + j)]; };
  auto dG = [&](int d, int l, int i, int j) {
    return d_gamma2[static_cast<std::size_t>(d)][static_cast<std::size_t>((l * m + i) * m + j)];
  };
  std::vector<double> r(static_cast<std::size_t>(m * m * m * m), 0.0);
  for (int l = 0; l < m; ++l) {
    for (int k = 0; k < m; ++k) {
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          double v = dG(i, l, j, k) - dG(j, l, i, k);
          for (int s = 0; s < m; ++s) v += G(l, i, s) * G(s, j, k) - G(l, j, s) * G(s, i, k);
          r[static_cast<std::size_t>(((l * m + k) * m + i) * m + j)] = v;
        }
      }
    }
  }
  return r;
}

CurvatureReport curvature(const DensityState& rho, const StateChart& chart, double alpha,
                          const CurvatureOptions& opts) {
  if (chart.dim() != rho.dim()) throw ValidationError("curvature: dimension mismatch");
  if (!(opts.h > 0.0)) throw ValidationError("curvature: step must be positive");
  std::vector<int> dirs = opts.directions;
  if (dirs.empty()) {
    for (int a = 0; a < chart.size(); ++a) dirs.push_back(a);
  }
  const int m = static_cast<int>(dirs.size());

  const SecondKindPair center = christoffels_at(rho, chart, alpha, dirs, opts.max_condition);

  auto derivatives = [&](double h) {
    std::vector<std::vector<double>> dp(static_cast<std::size_t>(m)), dd(dp.size());
    for (int d = 0; d < m; ++d) {
      const Matrix shift = h * chart.basis(dirs[static_cast<std::size_t>(d)]).matrix();
      const DensityState plus(HermitianOperator::symmetrized(rho.matrix() + shift));
      const DensityState minus(HermitianOperator::symmetrized(rho.matrix() - shift));
      const auto gp = christoffels_at(plus, chart, alpha, dirs, opts.max_condition);
      const auto gm = christoffels_at(minus, chart, alpha, dirs, opts.max_condition);
      auto& outp = dp[static_cast<std::size_t>(d)];
      auto& outd = dd[static_cast<std::size_t>(d)];
      outp.resize(gp.primal.size());
      outd.resize(gp.dual.size());
      for (std::size_t x = 0; x < outp.size(); ++x) {
        outp[x] = (gp.primal[x] - gm.primal[x]) / (2.0 * h);
        outd[x] = (gp.dual[x] - gm.dual[x]) / (2.0 * h);
      }
    }
    return std::make_pair(dp, dd);
  };

  auto [dp, dd] = derivatives(opts.h);
  if (opts.richardson) {
    const auto [dp2, dd2] = derivatives(opts.h / 2.0);
    for (int d = 0; d < m; ++d) {
      const auto ud = static_cast<std::size_t>(d);
      for (std::size_t x = 0; x < dp[ud].size(); ++x) {
        dp[ud][x] = (4.0 * dp2[ud][x] - dp[ud][x]) / 3.0;
        dd[ud][x] = (4.0 * dd2[ud][x] - dd[ud][x]) / 3.0;
      }
    }
  }

  CurvatureReport rep;
  rep.alpha = alpha;
  rep.state = rho.matrix();
  rep.h = opts.h;
  rep.richardson = opts.richardson;
  rep.size = m;
  auto rp = riemann_from_christoffel(m, center.primal, dp);
  auto rd = riemann_from_christoffel(m, center.dual, dd);
  rep.max_abs_riemann_primal = max_abs(rp);
  rep.max_abs_riemann_dual = max_abs(rd);
  if (opts.keep_tensors) {
    rep.riemann_primal = std::move(rp);
    rep.riemann_dual = std::move(rd);
  }
  return rep;
}

nlohmann::json CurvatureReport::to_json() const {
  nlohmann::json j = {{"alpha", alpha},
                      {"max_abs_riemann_primal", max_abs_riemann_primal},
                      {"max_abs_riemann_dual", max_abs_riemann_dual},
                      {"h", h},
                      {"richardson", richardson},
                      {"size", size}};
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index a = 0; a < state.rows(); ++a) {
    for (Eigen::Index b = 0; b < state.cols(); ++b) {
      re.push_back(state(a, b).real());
      im.push_back(state(a, b).imag());
    }
  }
  j["state"] = {{"dim", state.rows()}, {"re_flat", std::move(re)}, {"im_flat", std::move(im)}};
  if (!riemann_primal.empty()) {
    j["riemann_shape"] = {size, size, size, size};
    j["riemann_primal"] = riemann_primal;
    j["riemann_dual"] = riemann_dual;
  }
  return j;
}

}  // namespace rgl
