#include "doctest.h"

#include "lusin/generators.hpp"
#include "lusin/gradient.hpp"
#include "lusin/verify.hpp"

using namespace lusin;

TEST_CASE("canonical gradient on the two-point space") {
  const auto sp = MetricMeasureSpace::build(gen_line(2), unit_weights(2));
  ArrayXd u(2);
  u << 0, 1;
  const auto G = canonical_fractional_gradient(sp, u, 0.5);
  REQUIRE(G.grid.levels() == 1);
  CHECK(G.grid.k_min == -1);
  CHECK(G.at(-1, 0) == 0.5);
  CHECK(G.at(-1, 1) == 0.5);
  CHECK(verify_fractional_gradient(sp, u, G, 0.5).empty());

  SUBCASE("the corresponding homogeneous norm at p=q=1 is 1.0") {
    CHECK(sequence_norm(sp, G, 1.0, 1.0, NormMode::LqOfLp) == doctest::Approx(1.0));
    CHECK(sequence_norm(sp, G, 1.0, 1.0, NormMode::LpOfLq) == doctest::Approx(1.0));
  }
}

TEST_CASE("constant functions have identically zero canonical gradients") {
  const auto sp = MetricMeasureSpace::build(gen_line(6), unit_weights(6));
  const auto G = canonical_fractional_gradient(sp, ArrayXd::Constant(6, -3.5), 0.5);
  CHECK(G.values.isZero(0.0));
}

TEST_CASE("holder functions have bounded canonical gradients") {
  Rng rng(5);
  const MetricSpec spec = gen_cloud(12, rng, 2, 3.0);
  const auto sp = MetricMeasureSpace::build(spec, unit_weights(12));
  const double s = 0.5, L = 2.0;
  ArrayXd u(12);
  for (Index i = 0; i < 12; ++i) u[i] = L * std::pow(sp.distance(i, 0), s);
  const auto G = canonical_fractional_gradient(sp, u, s);
  CHECK(G.values.maxCoeff() <= L + 1e-12);
}

TEST_CASE("gradient verification reports violations") {
  const auto sp = MetricMeasureSpace::build(gen_line(3), unit_weights(3));
  ArrayXd u(3);
  u << 0, 0, 1;
  const auto Z = FractionalGradient::zero(scale_grid(sp), 3);
  const auto bad = verify_fractional_gradient(sp, u, Z, 0.5);
  REQUIRE_FALSE(bad.empty());
  CHECK(bad.front().lhs > bad.front().rhs);
  CHECK(verify_s_gradient(sp, ArrayXd::Constant(3, 7.0), ArrayXd::Zero(3), 0.5).empty());
  CHECK_FALSE(verify_s_gradient(sp, u, ArrayXd::Zero(3), 0.5).empty());
}

TEST_CASE("sequence norms on simple gradients") {
  const auto sp = MetricMeasureSpace::build(gen_line(4), unit_weights(4));
  auto G = FractionalGradient::zero(scale_grid(sp), 4);
  REQUIRE(G.grid.levels() >= 2);
  SUBCASE("all-zero gradient") {
    CHECK(sequence_norm(sp, G, 1.0, 1.0, NormMode::LqOfLp) == 0.0);
    CHECK(sequence_norm(sp, G, 1.0, 1.0, NormMode::LpOfLq) == 0.0);
  }
  SUBCASE("a single nonzero level collapses both modes to its L^p norm") {
    G.values(0, 1) = 2.0;
    G.values(0, 3) = 1.0;
    const double lp = lp_norm(sp, G.values.row(0).transpose().array(), 2.0);
    CHECK(sequence_norm(sp, G, 2.0, 0.5, NormMode::LqOfLp) == doctest::Approx(lp));
    CHECK(sequence_norm(sp, G, 2.0, 0.5, NormMode::LpOfLq) == doctest::Approx(lp));
  }
  SUBCASE("two levels on disjoint points at p=q=1 sum the weighted mass") {
    G.values(0, 0) = 1.5;
    G.values(1, 2) = 2.5;
    CHECK(sequence_norm(sp, G, 1.0, 1.0, NormMode::LqOfLp) == doctest::Approx(4.0));
    CHECK(sequence_norm(sp, G, 1.0, 1.0, NormMode::LpOfLq) == doctest::Approx(4.0));
  }
  SUBCASE("p <= 0 is rejected") {
    CHECK_THROWS_AS(sequence_norm(sp, G, 0.0, 1.0, NormMode::LqOfLp), InputError);
  }
}

TEST_CASE("function norm upper bound") {
  const auto sp = MetricMeasureSpace::build(gen_line(2), unit_weights(2));
  SmoothnessParams params;
  params.s = 0.5;
  params.p = 1.0;
  params.q = 1.0;
  SUBCASE("zero function") {
    CHECK(function_norm_upper(sp, ArrayXd::Zero(2), params) == 0.0);
  }
  SUBCASE("homogeneous part scales exactly with |a|") {
    ArrayXd u(2);
    u << 0, 1;
    const double base = function_norm_upper(sp, u, params) - lp_norm(sp, u, 1.0);
    const double scaled = function_norm_upper(sp, ArrayXd(-3.0 * u), params) -
                          lp_norm(sp, ArrayXd(-3.0 * u), 1.0);
    CHECK(scaled == doctest::Approx(3.0 * base).epsilon(1e-12));
  }
  SUBCASE("two-point fixture at s=1/2, p=q=1 has homogeneous part 1.0") {
    ArrayXd u(2);
    u << 0, 1;
    CHECK(function_norm_upper(sp, u, params) - lp_norm(sp, u, 1.0) == doctest::Approx(1.0));
  }
}

TEST_CASE("leibniz gradient: declared support is enforced") {
  const auto sp = MetricMeasureSpace::build(gen_line(4), unit_weights(4));
  ArrayXd u(4);
  u << 0, 1, 2, 3;
  const auto G = canonical_fractional_gradient(sp, u, 0.5);
  ArrayXd phi(4);
  phi << 1, 1, 0, 0;
  CHECK_THROWS_AS(leibniz_gradient(sp, u, G, phi, {0}, 0.5), InputError);
  const auto Gl = leibniz_gradient(sp, u, G, phi, {0, 1}, 0.5);
  CHECK(verify_fractional_gradient(sp, ArrayXd(u * phi), Gl, 0.5, 1e-9).empty());
}

TEST_CASE("summing lemma ratio and constant") {
  SUBCASE("single nonzero entry reproduces the truncated geometric sum") {
    std::vector<double> c = {0.0, 0.0, 5.0, 0.0, 0.0};
    const double a = 2.0, b = 1.0;
    double expect = 0.0;
    for (int k = 0; k < 5; ++k) expect += std::pow(a, -std::abs(k - 2) * b);
    CHECK(summing_lemma_check(a, b, c) == doctest::Approx(expect));
    CHECK(expect <= summing_lemma_constant(a, b));
  }
  SUBCASE("zero sequence gives ratio zero") {
    CHECK(summing_lemma_check(2.0, 1.0, {0.0, 0.0}) == 0.0);
  }
  SUBCASE("random sequences stay below the frozen constants") {
    CHECK(summing_lemma_constant(2.0, 1.0) == doctest::Approx(3.0));
    Rng rng(9);
    for (int t = 0; t < 1000; ++t) {
      std::vector<double> c(static_cast<size_t>(rng.uniform_int(1, 24)));
      for (auto& v : c) v = rng.uniform(0.0, 4.0);
      const double a = t % 2 == 0 ? 2.0 : 4.0;
      const double b = t % 3 == 0 ? 1.0 : (t % 3 == 1 ? 0.5 : 1.7);
      CHECK(summing_lemma_check(a, b, c) <= summing_lemma_constant(a, b) + 1e-12);
    }
  }
}

TEST_CASE("gradient property suite") {
  const auto reports = verify::run_suites("gradient", 77, 40);
  for (const auto& rep : reports) {
    CAPTURE(rep.violations);
    CHECK(rep.ok());
  }
}
