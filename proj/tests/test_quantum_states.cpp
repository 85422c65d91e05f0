#include "doctest.h"

#include <cmath>

#include "rgl/serialization.hpp"
#include "support.hpp"

using namespace rgl;
using rgl::test::max_abs;

TEST_CASE("density state invariants") {
  CHECK_THROWS_AS(DensityState(HermitianOperator::diagonal({0.6, 0.6})), ValidationError);
  CHECK_THROWS_AS(DensityState(HermitianOperator::diagonal({1.0, 0.0})), RangeError);
  CHECK_NOTHROW(DensityState::maximally_mixed(4));
  Matrix m(2, 2);
  m << 0.5, 0.0, 0.0, 0.5;
  m(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityState(HermitianOperator(m)), ValidationError);
  CHECK_THROWS_AS(TangentVector(HermitianOperator::diagonal({1.0, 0.0})), ValidationError);
}

TEST_CASE("chart basis") {
  CHECK_THROWS_AS(StateChart(1), ValidationError);
  for (int n : {2, 3, 4}) {
    const StateChart c(n);
    REQUIRE(c.size() == n * n - 1);
    for (int a = 0; a < c.size(); ++a) {
      CHECK(std::abs(c.basis(a).trace()) < 1e-14);
      for (int b = 0; b < c.size(); ++b) {
        const double g = (c.basis(a).matrix() * c.basis(b).matrix()).trace().real();
        CHECK(std::abs(g - (a == b ? 1.0 : 0.0)) < 1e-12);
      }
    }
  }
  // Qubit basis: Pauli matrices over sqrt 2.
  const StateChart q(2);
  CHECK(std::abs(q.basis(0).matrix()(0, 1) - 1.0 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("coordinates") {
  const StateChart c(2);
  const std::vector<double> theta{0.2, 0.0, 0.0};
  const auto rho = state_from_coordinates(c, theta);
  const double off = 0.2 / std::sqrt(2.0);
  CHECK(std::abs(rho.spectral().eigenvalues(0) - (0.5 - off)) < 1e-14);
  CHECK(std::abs(rho.spectral().eigenvalues(1) - (0.5 + off)) < 1e-14);

  const std::vector<double> zero(3, 0.0);
  CHECK(max_abs(state_from_coordinates(c, zero).matrix() - c.center().matrix()) == 0.0);

  const StateChart c3(3);
  Rng rng(3);
  const auto center = random_state(3, rng, 0.1);
  std::vector<double> t(8);
  for (auto& x : t) x = 0.02 * rng.normal();
  const auto s = state_from_coordinates(c3, center, t);
  const auto back = to_coordinates(c3, center, s);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(std::abs(back[i] - t[i]) < 1e-12);

  const std::vector<double> big{0.0, 0.0, 2.0};
  try {
    state_from_coordinates(c, big);
    FAIL("expected a range error");
  } catch (const RangeError& e) {
    CHECK(e.min_eigenvalue() < 0.0);
  }
}

TEST_CASE("pinching") {
  Rng rng(4);
  const auto a = random_hermitian(3, rng);
  const auto diag = DensityState::diagonal((RealVector(3) << 0.2, 0.3, 0.5).finished());
  const Matrix p = pinching(diag, a).matrix();
  CHECK(max_abs(p - Matrix(a.matrix().diagonal().asDiagonal())) < 1e-15);
  CHECK(max_abs(pinching(DensityState::maximally_mixed(3), a).matrix() - a.matrix()) < 1e-14);

  Matrix r(2, 2);
  r << 0.5, 0.25, 0.25, 0.5;
  const DensityState rho{HermitianOperator(r)};
  const auto sigma = DensityState::diagonal((RealVector(2) << 0.75, 0.25).finished());
  CHECK(max_abs(pinching(sigma, rho.op()).matrix() - 0.5 * Matrix::Identity(2, 2)) < 1e-15);
  CHECK(max_abs(apply_channel(pinching_channel(sigma), rho.op()).matrix() - 0.5 * Matrix::Identity(2, 2)) <
        1e-15);

  for (int t = 0; t < 100; ++t) {
    const int n = 2 + t % 3;
    const auto s = random_state(n, rng);
    const auto x = random_hermitian(n, rng);
    const auto once = pinching(s, x);
    CHECK(max_abs(pinching(s, once).matrix() - once.matrix()) < 1e-12);
    CHECK(rgl::test::commutator(once.matrix(), s.matrix()).norm() < 1e-10);
    CHECK(std::abs(once.trace() - x.trace()) < 1e-12);
    CHECK(max_abs(apply_channel(pinching_channel(s), x).matrix() - once.matrix()) < 1e-12);
  }
}

TEST_CASE("pinching with a degenerate sigma keeps the block") {
  const auto sigma = DensityState::diagonal((RealVector(3) << 0.25, 0.25, 0.5).finished());
  Matrix m = Matrix::Zero(3, 3);
  m(0, 1) = m(1, 0) = 0.3;
  m(0, 2) = m(2, 0) = 0.2;
  const Matrix p = pinching(sigma, HermitianOperator::symmetrized(m)).matrix();
  CHECK(std::abs(p(0, 1) - 0.3) < 1e-15);
  CHECK(std::abs(p(0, 2)) < 1e-15);
}

TEST_CASE("pinching fixed point check") {
  const auto sigma = DensityState::diagonal((RealVector(2) << 0.3, 0.7).finished());
  const auto commuting = pinching_fixed_point_check(sigma, HermitianOperator::diagonal({2.0, -1.0}));
  CHECK(commuting.spectra_equal);
  CHECK(commuting.operator_equal);
  Matrix m(2, 2);
  m << 1.0, 0.4, 0.4, 2.0;
  const auto off = pinching_fixed_point_check(sigma, HermitianOperator(m));
  CHECK_FALSE(off.spectra_equal);
  CHECK_FALSE(off.operator_equal);
  CHECK_FALSE(off.lemma_violation());
}

TEST_CASE("channels") {
  Rng rng(5);
  const auto rho = random_state(3, rng);
  CHECK(max_abs(apply_channel(QuantumChannel::identity(3), rho.op()).matrix() - rho.matrix()) == 0.0);

  std::vector<Matrix> bad{Matrix::Identity(2, 2) * 0.9};
  CHECK_THROWS_AS(QuantumChannel{bad}, ValidationError);
  CHECK_THROWS_AS(QuantumChannel(std::vector<Matrix>{}), ValidationError);

  const StateChart c(3);
  for (int t = 0; t < 1000; ++t) {
    const auto ch = random_channel(3, 3, 1 + t % 9, rng);
    CHECK(ch.completeness_residual() < 1e-10);
    const auto out = apply_channel(ch, rho.op());
    CHECK(std::abs(out.trace() - 1.0) < 1e-10);
    CHECK(min_eigenvalue(out) >= -1e-12);
    const auto x = random_tangent(c, rng);
    CHECK(std::abs(apply_channel(ch, x).mrep().trace()) < 1e-10);
  }

  // Unequal dimensions: qutrit to qubit.
  const auto down = random_channel(3, 2, 3, rng);
  CHECK(down.output_dim() == 2);
  CHECK(apply_channel(down, rho).dim() == 2);
  CHECK_THROWS_AS(apply_channel(down, random_state(2, rng).op()), ValidationError);
}

TEST_CASE("generators") {
  CHECK(max_abs(random_state(3, 42).matrix() - random_state(3, 42).matrix()) == 0.0);
  CHECK(max_abs(random_state(3, 42).matrix() - random_state(3, 43).matrix()) > 0.0);
  const auto c1 = random_channel(2, 3, 9);
  const auto c2 = random_channel(2, 3, 9);
  for (int i = 0; i < 3; ++i) CHECK(max_abs(c1.kraus()[i] - c2.kraus()[i]) == 0.0);
  CHECK(max_abs(random_tangent(StateChart(2), 5).matrix() - random_tangent(StateChart(2), 5).matrix()) == 0.0);

  Rng rng(6);
  for (int t = 0; t < 1000; ++t) {
    const auto s = random_state(2 + t % 4, rng);
    CHECK(s.min_eigenvalue() >= 1e-6 * (1 - 1e-9));
    CHECK(std::abs(s.op().trace() - 1.0) < 1e-10);
  }
  CHECK(random_state(4, rng, 0.2).min_eigenvalue() >= 0.2 - 1e-12);
  CHECK_THROWS_AS(random_state(1, rng), ValidationError);
  CHECK_THROWS_AS(random_channel(2, 0, 1), ValidationError);
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
}

TEST_CASE("serialization round trip") {
  Rng rng(7);
  const auto rho = random_state(3, rng);
  const auto back = state_from_json(Json::parse(to_json(rho).dump()));
  CHECK(max_abs(back.matrix() - rho.matrix()) <= 1e-15 * max_abs(rho.matrix()));
  const auto ch = random_channel(3, 2, 2, rng);
  const auto ch2 = channel_from_json(Json::parse(to_json(ch).dump()));
  REQUIRE(ch2.rank() == 2);
  CHECK(ch2.output_dim() == 2);
  CHECK(max_abs(ch2.kraus()[1] - ch.kraus()[1]) < 1e-15);

  CHECK_THROWS_AS(state_from_json(Json::parse(R"({"dim": 2, "re": [[1, 0]], "im": [[0, 0]]})")),
                  ValidationError);
  CHECK_THROWS_AS(state_from_json(Json::parse(R"({"dim": 2})")), ValidationError);
  CHECK_THROWS_AS(load_state("/nonexistent/state.json"), ValidationError);
}
