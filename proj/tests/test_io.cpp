#include "doctest.h"

#include "lusin/generators.hpp"
#include "lusin/io.hpp"

using namespace lusin;

TEST_CASE("space JSON round trip") {
  SpaceFile f;
  f.spec = gen_line(4);
  f.weights = unit_weights(4);
  f.ids = {0, 1, 2, 3};
  f.u = fn_step(4);
  const Json j = space_file_to_json(f);
  const SpaceFile g = space_file_from_json(j);
  CHECK(g.ids == f.ids);
  CHECK(g.weights.isApprox(f.weights));
  REQUIRE(g.u.has_value());
  CHECK(g.u->isApprox(*f.u));
  const auto sp = g.build();
  CHECK(sp.size() == 4);
  CHECK(sp.distance(0, 3) == 3.0);
}

TEST_CASE("schema violations carry a JSON path") {
  Json j;
  j["points"] = {0, 1};
  j["metric"] = {{"type", "euclidean"}};
  j["weights"] = {1.0, 1.0};
  CHECK_THROWS_WITH_AS(space_file_from_json(j), doctest::Contains("$.metric.coords"),
                       InputError);

  Json bad = j;
  bad["metric"] = {{"type", "sphere"}};
  CHECK_THROWS_WITH_AS(space_file_from_json(bad), doctest::Contains("$.metric.type"),
                       InputError);

  Json short_w = j;
  short_w["metric"] = {{"type", "euclidean"}, {"coords", {{0.0}, {1.0}}}};
  short_w["weights"] = {1.0};
  CHECK_THROWS_WITH_AS(space_file_from_json(short_w), doctest::Contains("$.weights"),
                       InputError);
}

TEST_CASE("matrix and graph metrics load") {
  Json j;
  j["points"] = {10, 20, 30};
  j["metric"] = {{"type", "matrix"},
                 {"matrix", {{0.0, 1.0, 2.0}, {1.0, 0.0, 1.0}, {2.0, 1.0, 0.0}}}};
  j["weights"] = {1.0, 2.0, 1.0};
  const auto f = space_file_from_json(j);
  const auto sp = f.build();
  CHECK(sp.index_of(20) == 1);
  CHECK(sp.distance(0, 2) == 2.0);

  Json g;
  g["points"] = {0, 1, 2};
  g["metric"] = {{"type", "graph"}, {"edges", {{0, 1, 1.0}, {1, 2, 0.5}}}};
  g["weights"] = {1.0, 1.0, 1.0};
  CHECK(space_file_from_json(g).build().distance(0, 2) == 1.5);
}

TEST_CASE("CSV loads coordinates, weight and function") {
  const std::string text =
      "id,x1,x2,weight,u\n"
      "0,0.0,0.0,1.0,0.0\n"
      "1,1.0,0.0,2.0,1.0\n"
      "2,0.0,1.0,1.0,0.5\n";
  const auto f = space_file_from_csv(text);
  const auto sp = f.build();
  CHECK(sp.size() == 3);
  CHECK(sp.weight(1) == 2.0);
  REQUIRE(f.u.has_value());
  CHECK((*f.u)[2] == 0.5);
  CHECK_THROWS_AS(space_file_from_csv("id,x1\n0,1\n"), InputError);
}

TEST_CASE("cover serialization") {
  const auto sp = MetricMeasureSpace::build(gen_line(4), unit_weights(4));
  const auto cover = netrusov_content_upper(sp, {0, 1}, {0.5, 1.0, 64.0});
  const Json j = cover_to_json(sp, cover);
  CHECK(j.contains("balls"));
  CHECK(j["value"].get<double>() == doctest::Approx(cover.value));
  CHECK(j["params"]["theta"].get<double>() == 1.0);
}
