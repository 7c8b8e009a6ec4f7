#include "doctest.h"

#include "lusin/approx.hpp"
#include "lusin/generators.hpp"
#include "lusin/verify.hpp"

using namespace lusin;

namespace {

ApproxParams default_params() {
  ApproxParams params;
  params.smoothness.s = 0.5;
  params.smoothness.p = 1.0;
  params.smoothness.q = 1.0;
  params.smoothness.family = SmoothnessParams::Family::Besov;
  params.beta = 0.25;
  params.median.gamma = 0.5;
  return params;
}

}  // namespace

TEST_CASE("parameter validation mirrors the theorem hypotheses") {
  ApproxParams p = default_params();
  CHECK_NOTHROW(p.validate());
  SUBCASE("besov needs s < 1") {
    p.smoothness.s = 1.0;
    p.beta = 0.5;
    CHECK_THROWS_AS(p.validate(), InputError);
  }
  SUBCASE("besov with beta = s needs q <= p") {
    p.beta = p.smoothness.s;
    p.smoothness.q = 2.0;
    p.smoothness.p = 1.0;
    CHECK_THROWS_AS(p.validate(), InputError);
    p.smoothness.q = 0.5;
    CHECK_NOTHROW(p.validate());
  }
  SUBCASE("TL with s = 1 needs q = infinity") {
    p.smoothness.family = SmoothnessParams::Family::TriebelLizorkin;
    p.smoothness.s = 1.0;
    p.beta = 0.5;
    CHECK_THROWS_AS(p.validate(), InputError);
    p.smoothness.q = std::numeric_limits<double>::infinity();
    CHECK_NOTHROW(p.validate());
  }
  SUBCASE("beta above s is rejected") {
    p.beta = 0.9;
    CHECK_THROWS_AS(p.validate(), InputError);
  }
}

TEST_CASE("bad set on fixtures") {
  const auto sp = MetricMeasureSpace::build(gen_line(9), unit_weights(9));
  const ApproxParams params = default_params();
  SUBCASE("constant function has an empty bad set at every lambda") {
    const ArrayXd sharp = bad_set_sharp(sp, ArrayXd::Constant(9, 2.0), params);
    CHECK(sharp.maxCoeff() == 0.0);
    CHECK(bad_set(sharp, 1e-12).empty());
  }
  SUBCASE("a step function concentrates the bad set near the jump as lambda grows") {
    const ArrayXd u = fn_step(9);
    const ArrayXd sharp = bad_set_sharp(sp, u, params);
    const auto e1 = bad_set(sharp, sharp.maxCoeff() / 16.0);
    const auto e2 = bad_set(sharp, sharp.maxCoeff() / 2.0);
    CHECK(e2.size() <= e1.size());
    for (Index x : e2) CHECK(std::find(e1.begin(), e1.end(), x) != e1.end());
    CHECK(bad_set(sharp, sharp.maxCoeff() + 1.0).empty());
  }
}

TEST_CASE("lambda_zero formula and support validation") {
  Rng rng(31);
  const MetricSpec spec = gen_cloud(20, rng, 2, 4.0);
  const auto sp = MetricMeasureSpace::build(spec, random_weights(20, rng));
  ApproxParams params = default_params();
  SUBCASE("zero function gives lambda0 = 0") {
    CHECK(lambda_zero(sp, ArrayXd::Zero(20), 0, params) == 0.0);
  }
  SUBCASE("singleton support matches the closed form") {
    const ArrayXd u = fn_indicator(20, 0);
    const double c_D = estimate_doubling_constant(sp);
    const double expect = std::pow(2.0 * c_D, 1.0) *
                          std::pow(sp.ball_measure(0, 1.0), -1.0) *
                          lp_norm(sp, u, 1.0);
    CHECK(lambda_zero(sp, u, 0, params) == doctest::Approx(expect).epsilon(1e-12));
  }
  SUBCASE("support outside B(x0,1) is rejected") {
    ArrayXd u = ArrayXd::Zero(20);
    Index far = 1;
    for (Index x = 0; x < 20; ++x)
      if (sp.distance(0, x) > sp.distance(0, far)) far = x;
    u[far] = 1.0;
    if (sp.distance(0, far) >= 1.0) CHECK_THROWS_AS(lambda_zero(sp, u, 0, params), InputError);
  }
}

TEST_CASE("whitney extension fixtures") {
  const auto sp = MetricMeasureSpace::build(gen_line(9), unit_weights(9));
  Rng rng(13);
  const ArrayXd u = fn_random(9, rng);
  SUBCASE("empty bad set returns u unchanged") {
    const ArrayXd v = whitney_extension(sp, u, std::vector<Index>{}, 0.5);
    for (Index x = 0; x < 9; ++x) CHECK(v[x] == u[x]);
  }
  SUBCASE("constant functions are preserved") {
    const ArrayXd c = ArrayXd::Constant(9, 4.5);
    const ArrayXd v = whitney_extension(sp, c, std::vector<Index>{3, 4, 5}, 0.5);
    for (Index x = 0; x < 9; ++x) CHECK(v[x] == doctest::Approx(4.5).epsilon(1e-12));
  }
  SUBCASE("E = X is rejected") {
    std::vector<Index> all;
    for (Index x = 0; x < 9; ++x) all.push_back(x);
    CHECK_THROWS_AS(whitney_extension(sp, u, all, 0.5), InputError);
  }
  SUBCASE("independent re-evaluation agrees bitwise") {
    const auto violations = verify::extension_oracle(sp, u, {3, 4, 5}, 0.5);
    CAPTURE(violations);
    CHECK(violations.empty());
  }
}

TEST_CASE("zero gradient yields a zero extension gradient") {
  const auto sp = MetricMeasureSpace::build(gen_line(6), unit_weights(6));
  const auto Z = FractionalGradient::zero(scale_grid(sp), 6);
  CHECK(extension_gradient(sp, Z, 0.5, 0.5).values.isZero(0.0));
}

TEST_CASE("extension gradient on a single-level gradient decays geometrically") {
  const auto sp = MetricMeasureSpace::build(gen_line(9), unit_weights(9));
  const ScaleGrid grid = scale_grid(sp);
  REQUIRE(grid.levels() >= 3);
  auto G = FractionalGradient::zero(grid, 9);
  const int mid = grid.k_min + grid.levels() / 2;
  G.values(grid.row(mid), 4) = 8.0;
  const double s = 0.5, gamma = 0.5;
  const auto gt = extension_gradient(sp, G, s, gamma);
  const ArrayXd base = G.values.row(grid.row(mid)).transpose().array();
  const ArrayXd M = median_maximal(sp, base, gamma);
  const double delta = std::min(s, 1.0 - s);
  for (int k = grid.k_min; k <= grid.k_max; ++k)
    for (Index x = 0; x < 9; ++x)
      CHECK(gt.at(k, x) ==
            doctest::Approx(std::pow(2.0, -std::abs(k - mid) * delta) * M[x]).epsilon(1e-12));
}

TEST_CASE("difference gradient is the restriction to the bad set") {
  const auto sp = MetricMeasureSpace::build(gen_line(5), unit_weights(5));
  auto G = FractionalGradient::zero(scale_grid(sp), 5);
  G.values.setConstant(1.0);
  std::vector<char> mask = {0, 1, 0, 1, 0};
  const auto h = difference_gradient(G, mask);
  for (Index x = 0; x < 5; ++x)
    CHECK(h.values.col(x).isZero(0.0) == (mask[static_cast<size_t>(x)] == 0));
}

TEST_CASE("holder seminorm") {
  MatrixXd coords(2, 1);
  coords << 0.0, 2.0;
  const auto sp = MetricMeasureSpace::build(MetricSpec::euclidean(coords), unit_weights(2));
  ArrayXd v(2);
  v << 0.0, 3.0;
  CHECK(holder_seminorm(sp, ArrayXd::Constant(2, 1.0), 0.5) == 0.0);
  CHECK(holder_seminorm(sp, v, 0.5) == doctest::Approx(3.0 / std::sqrt(2.0)));
  CHECK(holder_seminorm_on(sp, v, 0.5, {0}) == 0.0);
}

TEST_CASE("pipeline on the zero function is trivial") {
  const auto sp = MetricMeasureSpace::build(gen_line(9), unit_weights(9));
  ApproxParams params = default_params();
  params.support_center = 4;
  const auto sched = approximate(sp, ArrayXd::Zero(9), params, {1.0});
  REQUIRE(sched.runs.size() == 1);
  const auto& run = sched.runs.front();
  CHECK(run.omega.empty());
  CHECK(run.v.abs().maxCoeff() == 0.0);
  CHECK(run.report.content_upper == 0.0);
  CHECK(run.report.holder_seminorm == 0.0);
  CHECK(run.report.diff_norm_upper == 0.0);
}

TEST_CASE("pipeline property pack on compact instances") {
  const auto reports = verify::run_suites("approx", 4242, 20);
  for (const auto& rep : reports) {
    CAPTURE(rep.violations);
    CHECK(rep.ok());
  }
}

TEST_CASE("localization path is exercised when the diameter forces several balls") {
  const auto sp = MetricMeasureSpace::build(gen_line(12), unit_weights(12));
  ApproxParams params = default_params();  // no support center: Step-2 path
  Rng rng(8);
  const ArrayXd u = fn_random(12, rng);
  const ArrayXd sharp = bad_set_sharp(sp, u, params);
  const double lambda = sharp.maxCoeff() / 2.0;
  REQUIRE(lambda > 0.0);
  const auto sched = approximate(sp, u, params, {lambda});
  CHECK(sched.identity_all);
  CHECK(sched.claim1_all);
  const auto& run = sched.runs.front();
  for (Index x = 0; x < 12; ++x)
    if (!run.omega_mask[static_cast<size_t>(x)]) CHECK(run.v[x] == u[x]);

  SUBCASE("epsilon mode meets its budgets") {
    const double epsilon = 0.25;
    const auto res = approximate_epsilon(sp, u, params, epsilon);
    CHECK(res.report.identity_off_omega);
    CHECK(res.report.diff_norm_upper <= epsilon);
    CHECK(res.report.content_upper <= epsilon);
  }
}

TEST_CASE("TL with q = infinity matches the Hajlasz route") {
  Rng rng(55);
  for (int t = 0; t < 5; ++t) {
    const Index n = static_cast<Index>(rng.uniform_int(8, 24));
    const MetricSpec spec = gen_cloud(n, rng, 2, 4.0);
    const auto sp = MetricMeasureSpace::build(spec, random_weights(n, rng));
    ApproxParams params = default_params();
    params.support_center = 0;
    ArrayXd u = ArrayXd::Zero(n);
    for (Index x = 0; x < n; ++x)
      if (sp.distance(0, x) < 1.0) u[x] = rng.uniform(-1.0, 1.0);
    const double l0 = lambda_zero(sp, u, 0, params);
    const auto violations =
        verify::tl_hajlasz_consistency(sp, u, params, std::max(1e-3, l0 * 1.1));
    CAPTURE(violations);
    CHECK(violations.empty());
  }
}
