#include <doctest.h>

#include <cmath>

#include "dk/critical.hpp"

using namespace dk;

TEST_CASE("quadratic a=4 structure: cloud {0,1}, U = [0.4,0.6]") {
  const MapModel m = MapModel::quadratic(4.0);
  const CriticalStructure cs = build_critical_structure(m, {0.1}, 100);
  REQUIRE(cs.cp.size() == 1);
  CHECK(cs.cp[0] == doctest::Approx(0.5));
  CHECK(cs.gamma[0] == doctest::Approx(2.0));
  CHECK(cs.values[0] == doctest::Approx(1.0));
  REQUIRE(cs.postcritical.size() == 2); // f(1/2)=1, f(1)=0, then fixed
  CHECK(cs.postcritical[0] == doctest::Approx(0.0));
  CHECK(cs.postcritical[1] == doctest::Approx(1.0));
  CHECK_FALSE(cs.shrunk[0]);
  CHECK(cs.U[0].lo == doctest::Approx(0.4));
  CHECK(cs.U[0].hi == doctest::Approx(0.6));
  REQUIRE(cs.V_components.size() == 2);
  CHECK(cs.V_components[0].lo == doctest::Approx(0.0));
  CHECK(cs.V_components[0].hi == doctest::Approx(0.4));
  CHECK(cs.V_components[1].lo == doctest::Approx(0.6));
  CHECK(cs.V_components[1].hi == doctest::Approx(1.0));
}

TEST_CASE("oversized radius is halved until the cloud gap holds") {
  const MapModel m = MapModel::quadratic(4.0);
  const CriticalStructure cs = build_critical_structure(m, {0.45}, 100);
  // 0.45 fails (gap 0.05), 0.225 clears (gap 0.275 >= 0.225)
  CHECK(cs.radii[0] == doctest::Approx(0.225));
  CHECK(cs.shrunk[0]);
}

TEST_CASE("region tags: points and certified intervals") {
  const MapModel m = MapModel::quadratic(4.0);
  const CriticalStructure cs = build_critical_structure(m, {0.1}, 100);

  auto t = cs.region_of(0.45);
  REQUIRE(t.has_value());
  CHECK(t->str() == "W1-");
  t = cs.region_of(0.55);
  REQUIRE(t.has_value());
  CHECK(t->str() == "W1+");
  t = cs.region_of(0.2);
  REQUIRE(t.has_value());
  CHECK(t->str() == "V");

  auto ti = cs.region_of(Interval{0.42, 0.48});
  REQUIRE(ti.has_value());
  CHECK(ti->str() == "W1-");
  CHECK_FALSE(cs.region_of(Interval{0.45, 0.55}).has_value()); // straddles c
  CHECK_FALSE(cs.region_of(Interval{0.35, 0.45}).has_value()); // straddles U edge
}

TEST_CASE("distance to the post-critical cloud") {
  const MapModel m = MapModel::quadratic(4.0);
  const CriticalStructure cs = build_critical_structure(m, {0.1}, 100);
  CHECK(cs.distance_to_postcritical(0.3) == doctest::Approx(0.3));
  CHECK(cs.distance_to_postcritical(0.8) == doctest::Approx(0.2));
}

TEST_CASE("a critical value equal to a critical point is rejected") {
  // f(x) = c + (x - c)^2 with c = 0.5: f(c) = c
  const MapModel m = MapModel::custom(
      [](double x) { return 0.5 + (x - 0.5) * (x - 0.5); },
      [](double x, Side) { return 2.0 * (x - 0.5); }, {0.0, 1.0},
      {{0.5, 2.0, 2.0}});
  CHECK_THROWS_AS(build_critical_structure(m, {0.1}, 10), Error);
  try {
    build_critical_structure(m, {0.1}, 10);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SemiGoodViolation);
  }
}

TEST_CASE("a recurrent critical orbit is rejected with its iterate index") {
  // f(x) = 0.75 - 2 (x - 0.25)^2 on [0, 0.8]: 0.25 -> 0.75 -> 0.25
  const MapModel m = MapModel::custom(
      [](double x) { return 0.75 - 2.0 * (x - 0.25) * (x - 0.25); },
      [](double x, Side) { return -4.0 * (x - 0.25); }, {0.0, 0.8},
      {{0.25, 2.0, 2.0}});
  try {
    build_critical_structure(m, {0.05}, 10);
    FAIL("expected a not-very-good error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotVeryGood);
    CHECK(e.index() == 2); // second iterate returns to the critical point
  }
}

TEST_CASE("radius count must match the declared critical points") {
  const MapModel m = MapModel::quadratic(4.0);
  CHECK_THROWS_AS(build_critical_structure(m, {0.1, 0.1}, 10), Error);
  CHECK_THROWS_AS(build_critical_structure(m, {-0.1}, 10), Error);
}

TEST_CASE("a map without critical points has V equal to the whole domain") {
  const MapModel m = MapModel::polynomial({0.1, 0.7}, {0.0, 1.0});
  const CriticalStructure cs = build_critical_structure(m, {}, 10);
  CHECK_FALSE(cs.has_criticals());
  REQUIRE(cs.V_components.size() == 1);
  CHECK(cs.V_components[0].lo == doctest::Approx(0.0));
  CHECK(cs.V_components[0].hi == doctest::Approx(1.0));
  CHECK(std::isinf(cs.distance_to_postcritical(0.5)));
}

TEST_CASE("postcritical_start shifts the first iterate included") {
  const MapModel m = MapModel::quadratic(4.0);
  const CriticalStructure cs = build_critical_structure(m, {0.1}, 100, 2);
  // iterates 2..101 of 1/2: 0, 0, ... so the cloud is just {0}
  REQUIRE(cs.postcritical.size() == 1);
  CHECK(cs.postcritical[0] == doctest::Approx(0.0));
}
