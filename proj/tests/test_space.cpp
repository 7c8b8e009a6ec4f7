#include "doctest.h"

#include "lusin/generators.hpp"
#include "lusin/space.hpp"
#include "lusin/verify.hpp"

using namespace lusin;

namespace {

MetricMeasureSpace line(Index n) {
  return MetricMeasureSpace::build(gen_line(n), unit_weights(n));
}

}  // namespace

TEST_CASE("singleton space") {
  const auto sp = MetricMeasureSpace::build(gen_line(1), unit_weights(1));
  CHECK(sp.size() == 1);
  CHECK(sp.diameter() == 0.0);
  CHECK(scale_grid(sp).empty());
  const auto rep = annulus_density(sp);
  CHECK(rep.spheres_ok == 0.0);
}

TEST_CASE("three collinear points satisfy triangle equality") {
  const auto sp = line(3);
  CHECK(sp.distance(0, 1) == 1.0);
  CHECK(sp.distance(0, 2) == 2.0);
  CHECK(sp.realized_distances() == std::vector<double>{1.0, 2.0});
}

TEST_CASE("triangle violation is rejected with the offending triple") {
  MatrixXd m(3, 3);
  m << 0, 1, 3,
       1, 0, 1,
       3, 1, 0;
  CHECK_THROWS_WITH_AS(MetricMeasureSpace::build(MetricSpec::from_matrix(m), unit_weights(3)),
                       doctest::Contains("triangle inequality violated on (0,1,2)"),
                       InputError);
}

TEST_CASE("asymmetric matrix and nonpositive weights are rejected") {
  MatrixXd m(2, 2);
  m << 0, 1,
       2, 0;
  CHECK_THROWS_AS(MetricMeasureSpace::build(MetricSpec::from_matrix(m), unit_weights(2)),
                  InputError);
  ArrayXd w(2);
  w << 1.0, 0.0;
  MatrixXd ok(2, 2);
  ok << 0, 1,
        1, 0;
  CHECK_THROWS_AS(MetricMeasureSpace::build(MetricSpec::from_matrix(ok), w), InputError);
}

TEST_CASE("ball queries use strict membership") {
  const auto sp = line(11);
  CHECK(sp.ball(5, 2.0) == std::vector<Index>{4, 5, 6});
  CHECK(sp.ball(5, 0.5) == std::vector<Index>{5});
  CHECK(sp.ball(5, sp.diameter() + 1.0).size() == 11);
  CHECK(sp.ball_measure(5, 2.0) == 3.0);
  CHECK_THROWS_AS(sp.ball(5, 0.0), InputError);
  CHECK_THROWS_AS(sp.index_of(99), InputError);
}

TEST_CASE("doubling constant on small fixtures") {
  SUBCASE("singleton") {
    CHECK(estimate_doubling_constant(line(1)) == 1.0);
  }
  SUBCASE("two equal-weight points at distance 1") {
    CHECK(estimate_doubling_constant(line(2)) == 2.0);
  }
  SUBCASE("uniform integer line stays at most 4") {
    CHECK(estimate_doubling_constant(line(101)) <= 4.0);
  }
}

TEST_CASE("annulus density on fixtures") {
  SUBCASE("interior point of the integer line has a nonempty annulus at r=1") {
    const auto sp = line(11);
    // B(5,4) \ B(5,2) = {y : 2 <= |y-5| < 4}
    CHECK(sp.ball_count(5, 4.0) - sp.ball_count(5, 2.0) == 4);
  }
  SUBCASE("16x16 grid reports a finite annulus constant") {
    const Index side = 16;
    const auto sp = MetricMeasureSpace::build(gen_grid(side), unit_weights(side * side));
    const auto rep = annulus_density(sp);
    CHECK(rep.spheres_ok == 1.0);
    CHECK(std::isfinite(rep.c_A));
    CHECK(rep.c_A >= 1.0);
  }
}

TEST_CASE("scale grid brackets") {
  SUBCASE("all distances equal 1 classify at k = -1") {
    const auto sp = line(2);
    CHECK(level_of(1.0) == -1);
    const auto g = scale_grid(sp);
    CHECK(g.k_min == -1);
    CHECK(g.k_max == -1);
    CHECK(g.levels() == 1);
  }
  SUBCASE("min distance 0.1, diameter 10 spans about 7 levels") {
    MatrixXd coords(3, 1);
    coords << 0.0, 0.1, 10.0;
    const auto sp = MetricMeasureSpace::build(MetricSpec::euclidean(coords), unit_weights(3));
    const auto g = scale_grid(sp);
    CHECK(g.levels() >= 7);
    CHECK(g.levels() <= 9);
    for (double t : sp.realized_distances()) {
      const int k = level_of(t);
      CHECK(g.contains(k));
      CHECK(std::ldexp(1.0, -k - 1) <= t);
      CHECK(t < std::ldexp(1.0, -k));
    }
  }
}

TEST_CASE("cantor generator: 2^level points with the gap metric") {
  const auto spec = gen_cantor(4);
  REQUIRE(spec.coords.rows() == 16);
  const auto sp = MetricMeasureSpace::build(spec, unit_weights(16));
  CHECK(sp.diameter() == doctest::Approx(80.0 / 81.0));
  CHECK(sp.min_positive_distance() == doctest::Approx(2.0 / 81.0));
  // jump across the level-1 middle-third gap
  CHECK(sp.distance(7, 8) == doctest::Approx(28.0 / 81.0));
}

TEST_CASE("graph metric via shortest paths") {
  std::vector<MetricSpec::Edge> edges = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 3.0}};
  const auto sp = MetricMeasureSpace::build(MetricSpec::graph(edges), unit_weights(3));
  CHECK(sp.distance(0, 2) == 2.0);  // shortest path through 1 beats the direct edge
  std::vector<MetricSpec::Edge> disconnected = {{0, 1, 1.0}};
  CHECK_THROWS_AS(MetricMeasureSpace::build(MetricSpec::graph(disconnected), unit_weights(3)),
                  InputError);
}

TEST_CASE("space property suite on random instances") {
  const auto reports = verify::run_suites("space", 42, 25);
  for (const auto& rep : reports) {
    CAPTURE(rep.violations);
    CHECK(rep.ok());
  }
}
