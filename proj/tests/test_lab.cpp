#include "doctest.h"

#include <cmath>

#include "rgl/monotonicity_lab.hpp"
#include "support.hpp"

using namespace rgl;

namespace {

ExperimentOptions single_thread() {
  ExperimentOptions o;
  o.parallel.threads = 1;
  return o;
}

}  // namespace

TEST_CASE("operator monotone trial") {
  const auto sqrt_fn = MonotoneCandidate::function(ScalarFunction::power(0.5), 0.5);
  const auto square = MonotoneCandidate::function(ScalarFunction::power(2.0), 2.0);
  Matrix a(2, 2), p(2, 2);
  a << 1.0, 0.0, 0.0, 0.0001;
  p << 1.0, 1.0, 1.0, 1.0;
  a(1, 1) = 1e-3;
  const auto ah = HermitianOperator(a);
  const auto ph = HermitianOperator(p);
  CHECK_FALSE(operator_monotone_trial(sqrt_fn, ah, ph).violated);
  // t^2 is monotone on scalars but not on matrices.
  Matrix a2(2, 2), p2(2, 2);
  a2 << 1.0, 1.0, 1.0, 1.0;
  a2 += 1e-3 * Matrix::Identity(2, 2);
  p2 << 1.0, 0.0, 0.0, 0.0;
  CHECK(operator_monotone_trial(square, HermitianOperator(a2), HermitianOperator(p2)).violated);
}

TEST_CASE("operator monotone search") {
  std::vector<MonotoneCandidate> inside, outside;
  for (double b : {-1.0, 0.5, 2.0}) inside.push_back(MonotoneCandidate::kernel(KernelFamily::from_beta(b)));
  for (double b : {-1.2, 2.2}) outside.push_back(MonotoneCandidate::kernel(KernelFamily::from_beta(b)));
  const auto ok = operator_monotone_test(inside, {2, 3}, 200, 1, single_thread());
  CHECK(ok.total_violations() == 0);
  CHECK(ok.cells.size() == 6);
  auto opts = single_thread();
  opts.stop_after_violations = 1;
  const auto bad = operator_monotone_test(outside, {2}, 100000, 1, opts);
  for (const auto& c : bad.cells) {
    CHECK(c.violations > 0);
    CHECK(c.trials < 100000);
    CHECK_FALSE(c.counterexamples.empty());
  }
  CHECK(reverify_report(bad) <= 1e-12);
}

TEST_CASE("reports are reproducible and thread-count independent") {
  auto one = single_thread();
  auto four = single_thread();
  four.parallel.threads = 4;
  const auto a = metric_monotonicity_experiment({0.3, 2.0}, 2, 300, 17, 0, one);
  const auto b = metric_monotonicity_experiment({0.3, 2.0}, 2, 300, 17, 0, four);
  CHECK(a.to_json().dump() == b.to_json().dump());
  const auto c = metric_monotonicity_experiment({0.3, 2.0}, 2, 300, 18, 0, one);
  CHECK(a.to_json().dump() != c.to_json().dump());
}

TEST_CASE("identity channel is never a counterexample") {
  Rng rng(3);
  const StateChart c(3);
  const auto id = QuantumChannel::identity(3);
  for (double a : {-0.5, 0.3, 2.0}) {
    const auto rho = random_state(3, rng);
    const auto x = random_tangent(c, rng);
    const auto t = metric_monotonicity_trial(rho, x, id, a);
    CHECK(t.margin == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK_FALSE(t.violated);
    const auto d = divergence_monotonicity_trial(rho, random_state(3, rng), id, a, DivergenceVariant::rescaled);
    CHECK(std::abs(d.margin) < 1e-12);
    CHECK_FALSE(d.violated);
  }
}

TEST_CASE("metric monotonicity region") {
  auto opts = single_thread();
  const auto good = metric_monotonicity_experiment({-2.0, 0.5, 1.0, 5.0}, 2, 300, 5, 0, opts);
  CHECK(good.total_violations() == 0);
  opts.stop_after_violations = 1;
  const auto bad = metric_monotonicity_experiment({-0.5, 0.3}, 2, 10000, 5, 0, opts);
  for (const auto& c : bad.cells) CHECK(c.violations > 0);
  CHECK(reverify_report(bad) <= 1e-12);
}

TEST_CASE("divergence monotonicity") {
  auto opts = single_thread();
  for (auto v : {DivergenceVariant::rescaled, DivergenceVariant::sandwiched}) {
    const auto good = divergence_monotonicity_experiment({2.0}, 2, 300, 9, v, 0, opts);
    CHECK(good.total_violations() == 0);
    CHECK(good.variant == to_string(v));
  }
  opts.stop_after_violations = 1;
  const auto bad = divergence_monotonicity_experiment({0.3}, 2, 10000, 9, DivergenceVariant::sandwiched, 0, opts);
  CHECK(bad.total_violations() > 0);
  CHECK(reverify_report(bad) <= 1e-12);
  CHECK(divergence_variant_from_string("rescaled") == DivergenceVariant::rescaled);
  CHECK_THROWS_AS(divergence_variant_from_string("petz"), ValidationError);
}

TEST_CASE("positivity and pinching experiments") {
  auto opts = single_thread();
  const auto pos = positivity_experiment({-1.0, 0.5, 2.0}, 2, 200, 4, false, opts);
  CHECK(pos.total_violations() == 0);
  const auto eq = positivity_experiment({0.5}, 2, 50, 4, true, opts);
  CHECK(eq.total_violations() == 0);
  const auto pin = pinching_lemma_experiment(0, 300, 4, opts);
  CHECK(pin.total_violations() == 0);
  CHECK(pin.cells.size() == 3);
  const auto sc = strict_convexity_spectra_oracle(300, 4, 3, opts);
  CHECK(sc.total_violations() == 0);
}

TEST_CASE("strict convexity trial branches") {
  const auto sigma = DensityState::diagonal((RealVector(2) << 0.3, 0.7).finished());
  // Commuting A: traces agree and so must the operators.
  const auto same = strict_convexity_trial(sigma, HermitianOperator::diagonal({1.0, 2.0}));
  CHECK_FALSE(same.violated);
  Matrix m(2, 2);
  m << 1.0, 0.3, 0.3, 2.0;
  const auto strict = strict_convexity_trial(sigma, HermitianOperator(m));
  CHECK_FALSE(strict.violated);
  CHECK(strict.lhs > strict.rhs);
}

TEST_CASE("report JSON round trip") {
  auto opts = single_thread();
  opts.stop_after_violations = 1;
  const auto r = metric_monotonicity_experiment({0.3}, 2, 2000, 21, 0, opts);
  const auto back = ExperimentReport::from_json(Json::parse(r.to_json().dump()));
  CHECK(back.to_json() == r.to_json());
  CHECK(back.find(0.3, 2) != nullptr);
  CHECK(back.find(0.7, 2) == nullptr);
  CHECK(reverify_report(back) <= 1e-12);

  Counterexample ce = r.cells.front().counterexamples.front();
  CHECK_THROWS_AS(reverify("no_such_claim", "", 0.3, ce), ValidationError);
  ce.inputs.erase("rho");
  CHECK_THROWS(reverify(r.claim, r.variant, 0.3, ce));
}

TEST_CASE("digest") {
  const Matrix a = Matrix::Identity(2, 2);
  const Matrix b = 2.0 * a;
  CHECK(digest({&a}) == digest({&a}));
  CHECK(digest({&a}) != digest({&b}));
  CHECK(digest({&a}).size() == 16);
}

TEST_CASE("parallel runner") {
  ParallelOptions po;
  po.threads = 3;
  po.batch = 10;
  const auto out = run_indexed<int>(95, [](std::size_t i) { return static_cast<int>(i * i); }, po);
  REQUIRE(out.size() == 95);
  CHECK(out[94] == 94 * 94);
  const auto cut = run_indexed<int>(
      95, [](std::size_t i) { return static_cast<int>(i); }, po,
      [](const std::vector<int>& v) { return v.size() >= 20; });
  CHECK(cut.size() == 20);
  CHECK_THROWS_AS(run_indexed<int>(
                      5, [](std::size_t i) -> int { if (i == 3) throw NumericalError("boom", 1.0); return 0; }, po),
                  NumericalError);
  CHECK(resolve_threads(0) >= 1);
}
