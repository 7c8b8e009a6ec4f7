#include "doctest.h"

#include "lusin/generators.hpp"
#include "lusin/verify.hpp"
#include "lusin/whitney.hpp"

using namespace lusin;

TEST_CASE("whitney cover on a singleton U") {
  MatrixXd coords(2, 1);
  coords << 0.0, 10.0;
  const auto sp = MetricMeasureSpace::build(MetricSpec::euclidean(coords), unit_weights(2));
  const auto W = whitney_cover(sp, {0});
  REQUIRE(W.ball_count() == 1);
  CHECK(W.centers[0] == 0);
  CHECK(W.radii[0] == 1.0);  // dist to the complement is 10, over 10
  CHECK(W.anchors[0] == 1);
  CHECK(W.overlap_constant == 1);
}

TEST_CASE("whitney cover of the middle of the integer line") {
  const auto sp = MetricMeasureSpace::build(gen_line(11), unit_weights(11));
  const std::vector<Index> U = {3, 4, 5, 6, 7};
  const auto W = whitney_cover(sp, U);
  // radii r(x) = dist(x, complement)/10 make every ball a singleton here,
  // so every point of U is its own center.
  REQUIRE(W.ball_count() == 5);
  std::vector<double> radii_by_center(11, -1.0);
  for (Index i = 0; i < W.ball_count(); ++i)
    radii_by_center[static_cast<size_t>(W.centers[static_cast<size_t>(i)])] =
        W.radii[static_cast<size_t>(i)];
  CHECK(radii_by_center[5] == doctest::Approx(0.3));
  CHECK(radii_by_center[4] == doctest::Approx(0.2));
  CHECK(radii_by_center[3] == doctest::Approx(0.1));
  // 5B_5 = B(5, 1.5) = {4,5,6} overlaps 5B_4 and 5B_6 at their centers.
  CHECK(W.overlap_constant == 2);

  const auto P = partition_of_unity(sp, W);
  for (Index x = 0; x < 11; ++x) {
    double sum = 0.0;
    for (Index i = 0; i < W.ball_count(); ++i) sum += P.phi(i, x);
    CHECK(sum == doctest::Approx(W.in_u[static_cast<size_t>(x)] ? 1.0 : 0.0).epsilon(1e-12));
  }
}

TEST_CASE("two far-apart singleton balls give indicator partition functions") {
  MatrixXd coords(4, 1);
  coords << 0.0, 1.0, 100.0, 101.0;
  const auto sp = MetricMeasureSpace::build(MetricSpec::euclidean(coords), unit_weights(4));
  const auto W = whitney_cover(sp, {0, 2});
  REQUIRE(W.ball_count() == 2);
  const auto P = partition_of_unity(sp, W);
  for (Index i = 0; i < 2; ++i) {
    const Index c = W.centers[static_cast<size_t>(i)];
    CHECK(P.phi(i, c) == 1.0);
    CHECK(std::isfinite(P.K_i[static_cast<size_t>(i)]));
  }
}

TEST_CASE("degenerate inputs are rejected") {
  const auto sp = MetricMeasureSpace::build(gen_line(3), unit_weights(3));
  CHECK_THROWS_AS(whitney_cover(sp, {}), InputError);
  CHECK_THROWS_AS(whitney_cover(sp, {0, 1, 2}), InputError);
}

TEST_CASE("whitney property suite (criterion-4 shape)") {
  const auto reports = verify::run_suites("whitney", 9001, 60);
  for (const auto& rep : reports) {
    CAPTURE(rep.violations);
    CHECK(rep.ok());
  }
}
