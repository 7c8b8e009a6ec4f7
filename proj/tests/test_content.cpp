#include "doctest.h"

#include "lusin/content.hpp"
#include "lusin/generators.hpp"
#include "lusin/verify.hpp"

using namespace lusin;

TEST_CASE("radius classes follow the dyadic convention") {
  CHECK(radius_class(1.0) == 0);
  CHECK(radius_class(1.5) == 0);
  CHECK(radius_class(2.0) == -1);
  CHECK(radius_class(0.5) == 1);
  CHECK(radius_class(0.75) == 1);
}

TEST_CASE("whole-space cover at d=0, theta=1 equals the total mass") {
  Rng rng(21);
  const MetricSpec spec = gen_cloud(10, rng, 2, 2.0);
  const auto sp = MetricMeasureSpace::build(spec, random_weights(10, rng));
  std::vector<Index> E;
  for (Index i = 0; i < 10; ++i) E.push_back(i);
  const auto cover = netrusov_content_upper(sp, E, {0.0, 1.0, 64.0});
  CHECK(cover.value == doctest::Approx(sp.total_weight()).epsilon(1e-12));
  CHECK(cover_covers(sp, cover, E));
}

TEST_CASE("isolated unit-weight point with neighbor at distance 2") {
  MatrixXd coords(2, 1);
  coords << 0.0, 2.0;
  const auto sp = MetricMeasureSpace::build(MetricSpec::euclidean(coords), unit_weights(2));
  const auto cover = netrusov_content_upper(sp, {0}, {1.0, 1.0, 64.0});
  // The radius-2 ball (strict membership excludes the neighbor) is worth 1/2;
  // the greedy must do at least as well, and must match the exhaustive
  // single-ball oracle over dyadic radii and the isolation radius.
  CHECK(cover.value <= 0.5);
  double oracle = sp.ball_measure(0, 2.0) / 2.0;
  for (double r = 64.0; r >= 0.5; r /= 2.0)
    oracle = std::min(oracle, sp.ball_measure(0, r) / r);
  CHECK(cover.value == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(cover.balls.size() == 1);
}

TEST_CASE("content value never drops below the trivial mass bound at d=0") {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const Index n = static_cast<Index>(rng.uniform_int(2, 16));
    const MetricSpec spec = gen_cloud(n, rng, 2, 3.0);
    const auto sp = MetricMeasureSpace::build(spec, random_weights(n, rng));
    const std::vector<Index> E = {0, n - 1};
    const auto cover = netrusov_content_upper(sp, E, {0.0, 1.0, 64.0});
    double muE = 0.0;
    for (Index e : E) muE += sp.weight(e);
    CHECK(cover.value >= muE - 1e-12);  // covers overcount measure when d = 0
  }
}

TEST_CASE("combine covers") {
  const auto sp = MetricMeasureSpace::build(gen_line(8), unit_weights(8));
  SUBCASE("an empty cover leaves the value unchanged") {
    const auto c1 = make_cover(sp, {{0, 1.0}, {4, 2.0}}, {0.5, 2.0, 64.0});
    const auto empty = make_cover(sp, {}, {0.5, 2.0, 64.0});
    CHECK(empty.value == 0.0);
    const auto both = combine_covers(sp, {c1, empty});
    CHECK(both.value == doctest::Approx(c1.value));
  }
  SUBCASE("same-class balls add linearly at theta = 1") {
    const auto c1 = make_cover(sp, {{0, 1.0}}, {0.0, 1.0, 64.0});
    const auto c2 = make_cover(sp, {{4, 1.0}}, {0.0, 1.0, 64.0});
    const auto both = combine_covers(sp, {c1, c2});
    CHECK(both.value == doctest::Approx(c1.value + c2.value));
  }
  SUBCASE("different classes aggregate by the l^theta rule at theta = 2") {
    const auto c1 = make_cover(sp, {{0, 1.0}}, {0.0, 2.0, 64.0});
    const auto c2 = make_cover(sp, {{4, 2.5}}, {0.0, 2.0, 64.0});
    const auto both = combine_covers(sp, {c1, c2});
    CHECK(both.value ==
          doctest::Approx(std::sqrt(c1.value * c1.value + c2.value * c2.value)));
    CHECK(both.value <= c1.value + c2.value + 1e-12);
  }
  SUBCASE("mismatched parameters are rejected") {
    const auto c1 = make_cover(sp, {{0, 1.0}}, {0.0, 1.0, 64.0});
    const auto c2 = make_cover(sp, {{4, 1.0}}, {0.5, 1.0, 64.0});
    CHECK_THROWS_AS(combine_covers(sp, {c1, c2}), InputError);
  }
}

TEST_CASE("hausdorff content upper relaxes with the radius cap") {
  Rng rng(17);
  for (int t = 0; t < 15; ++t) {
    const Index n = static_cast<Index>(rng.uniform_int(3, 14));
    const MetricSpec spec = gen_cloud(n, rng, 2, 2.0);
    const auto sp = MetricMeasureSpace::build(spec, random_weights(n, rng));
    std::vector<Index> E = {0, 1};
    const double d = 0.7;
    const auto tight = hausdorff_content_upper(sp, E, d, 1.0);
    const auto loose =
        hausdorff_content_upper(sp, E, d, std::numeric_limits<double>::infinity());
    CHECK(loose.value <= tight.value + 1e-12);
  }
}

TEST_CASE("five_r on a chain of overlapping balls along the line") {
  const auto sp = MetricMeasureSpace::build(gen_line(11), unit_weights(11));
  std::vector<CoverBall> family;
  for (Index i = 0; i < 11; ++i) family.push_back({i, 1.2});  // B(i,1.2) = {i-1, i, i+1}
  const auto kept = five_r_cover(sp, family);
  CHECK(kept == std::vector<int>{0, 3, 6, 9});
  SUBCASE("single ball family keeps itself") {
    const auto one = five_r_cover(sp, {{5, 2.0}});
    CHECK(one == std::vector<int>{0});
  }
  SUBCASE("two overlapping equal balls keep the first") {
    const auto two = five_r_cover(sp, {{4, 2.0}, {5, 2.0}});
    CHECK(two == std::vector<int>{0});
  }
}

TEST_CASE("measure bound constant cases") {
  CHECK(measure_bound_constant({0.0, 1.0, std::numeric_limits<double>::infinity()}) == 1.0);
  CHECK(measure_bound_constant({1.0, 1.0, 64.0}) == doctest::Approx(128.0));
  CHECK(measure_bound_constant({1.0, 0.5, 2.0}) == doctest::Approx(4.0));
  CHECK(std::isfinite(measure_bound_constant({1.0, 2.0, 2.0})));
  CHECK(std::isinf(measure_bound_constant({0.0, 2.0, 2.0})));
}

TEST_CASE("content property suite") {
  const auto reports = verify::run_suites("content", 5150, 40);
  for (const auto& rep : reports) {
    CAPTURE(rep.violations);
    CHECK(rep.ok());
  }
}
