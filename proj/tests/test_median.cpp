#include "doctest.h"

#include "lusin/generators.hpp"
#include "lusin/median.hpp"
#include "lusin/verify.hpp"

using namespace lusin;

namespace {

MetricMeasureSpace line_space(Index n, ArrayXd weights = ArrayXd()) {
  if (weights.size() == 0) weights = unit_weights(n);
  return MetricMeasureSpace::build(gen_line(n), weights);
}

std::vector<Index> all_points(const MetricMeasureSpace& sp) {
  std::vector<Index> out(static_cast<size_t>(sp.size()));
  for (Index i = 0; i < sp.size(); ++i) out[static_cast<size_t>(i)] = i;
  return out;
}

}  // namespace

TEST_CASE("gamma median on hand-computed fixtures") {
  SUBCASE("constant function") {
    const auto sp = line_space(5);
    const ArrayXd u = ArrayXd::Constant(5, 3.25);
    for (double g : {0.5, 0.25, 0.1})
      CHECK(gamma_median(sp, u, all_points(sp), g) == 3.25);
  }
  SUBCASE("unit weights, values 1..4, gamma = 1/2 gives 3") {
    const auto sp = line_space(4);
    ArrayXd u(4);
    u << 1, 2, 3, 4;
    CHECK(gamma_median(sp, u, all_points(sp), 0.5) == 3.0);
  }
  SUBCASE("weights 0.7/0.1/0.1/0.1 give the heavy value") {
    ArrayXd w(4);
    w << 0.7, 0.1, 0.1, 0.1;
    const auto sp = line_space(4, w);
    ArrayXd u(4);
    u << 0, 10, 20, 30;
    CHECK(gamma_median(sp, u, all_points(sp), 0.5) == 0.0);
  }
  SUBCASE("empty set is rejected") {
    const auto sp = line_space(2);
    CHECK_THROWS_AS(gamma_median(sp, ArrayXd::Zero(2), {}, 0.5), InputError);
    CHECK_THROWS_AS(gamma_median(sp, ArrayXd::Zero(2), all_points(sp), 0.75), InputError);
  }
}

TEST_CASE("min median deviation on fixtures") {
  SUBCASE("constant gives zero") {
    const auto sp = line_space(6);
    CHECK(min_median_deviation(sp, ArrayXd::Constant(6, -1.5), all_points(sp), 0.5) == 0.0);
  }
  SUBCASE("two unit-weight values 0 and 1 give 1/2") {
    const auto sp = line_space(2);
    ArrayXd u(2);
    u << 0, 1;
    CHECK(min_median_deviation(sp, u, all_points(sp), 0.5) == 0.5);
  }
  SUBCASE("a 0.9-heavy point swallows the outlier") {
    ArrayXd w(2);
    w << 0.9, 0.1;
    const auto sp = line_space(2, w);
    ArrayXd u(2);
    u << 0, 100;
    CHECK(min_median_deviation(sp, u, all_points(sp), 0.5) == 0.0);
  }
}

TEST_CASE("median maximal function on the integer line") {
  const auto sp = line_space(5);
  ArrayXd u(5);
  u << 0, 0, 5, 0, 0;
  const ArrayXd M = median_maximal(sp, u, 0.5);
  CHECK(M[2] == 5.0);  // singleton ball at the spike
  CHECK(M[0] == 0.0);  // every ball at 0 holds spike mass strictly below half
  CHECK(median_maximal_at(sp, u, 2, 0.5) == 5.0);
  CHECK(median_maximal_at(sp, u, 0, 0.5) == 0.0);
  SUBCASE("constant function") {
    const ArrayXd Mc = median_maximal(sp, ArrayXd::Constant(5, -2.0), 0.25);
    for (Index x = 0; x < 5; ++x) CHECK(Mc[x] == 2.0);
  }
  SUBCASE("per-point maximal agrees with the all-points sweep") {
    Rng rng(7);
    const ArrayXd v = fn_random(5, rng);
    const ArrayXd Mv = median_maximal(sp, v, 0.375);
    for (Index x = 0; x < 5; ++x)
      CHECK(Mv[x] == doctest::Approx(median_maximal_at(sp, v, x, 0.375)).epsilon(1e-12));
  }
}

TEST_CASE("sharp median maximal functions") {
  const auto sp = line_space(5);
  SUBCASE("constant function vanishes in both variants") {
    const ArrayXd u = ArrayXd::Constant(5, 4.0);
    const ArrayXd cen = sharp_median_maximal(sp, u, {0.5, 64.0, true}, {0.5});
    const ArrayXd unc = sharp_median_maximal(sp, u, {0.5, 64.0, false}, {0.5});
    CHECK(cen.maxCoeff() == 0.0);
    CHECK(unc.maxCoeff() == 0.0);
  }
  SUBCASE("centered value is an exhaustive supremum over the radius family") {
    ArrayXd u(5);
    u << 0, 0, 1, 1, 1;
    const double beta = 0.5, R = 64.0, gamma = 0.5;
    const ArrayXd cen = sharp_median_maximal(sp, u, {beta, R, true}, {gamma});
    // oracle: exhaust every family radius at the center
    for (Index x = 0; x < 5; ++x) {
      double best = 0.0;
      for (double rho : sharp_radius_family(sp)) {
        if (rho > R) continue;
        const auto B = sp.ball(x, rho);
        best = std::max(best,
                        std::pow(rho, -beta) * min_median_deviation(sp, u, B, gamma));
      }
      CHECK(cen[x] == doctest::Approx(best).epsilon(1e-12));
    }
  }
  SUBCASE("uncentered dominates centered everywhere") {
    Rng rng(3);
    const ArrayXd u = fn_random(5, rng);
    const ArrayXd cen = sharp_median_maximal(sp, u, {0.25, 8.0, true}, {0.5});
    const ArrayXd unc = sharp_median_maximal(sp, u, {0.25, 8.0, false}, {0.5});
    for (Index x = 0; x < 5; ++x) CHECK(cen[x] <= unc[x] + 1e-15);
  }
}

TEST_CASE("median property suite (criterion-1 shape)") {
  const auto reports = verify::run_suites("median", 2024, 60);
  for (const auto& rep : reports) {
    CAPTURE(rep.violations);
    CHECK(rep.ok());
  }
}

TEST_CASE("negative control: a tampered median is caught") {
  const auto reports = verify::run_suites("median", 2024, 5, verify::Fault::TamperMedian);
  REQUIRE(reports.size() == 1);
  CHECK_FALSE(reports.front().ok());
}

TEST_CASE("deviation sweep equals brute force on small instances") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = static_cast<Index>(rng.uniform_int(2, 14));
    const MetricSpec spec = gen_cloud(n, rng, 2, 3.0);
    const auto sp = MetricMeasureSpace::build(spec, random_weights(n, rng));
    const ArrayXd u = fn_random(n, rng, -5.0, 5.0);
    const auto violations = verify::deviation_oracle(sp, u, 0.5);
    CAPTURE(violations);
    CHECK(violations.empty());
  }
}
