#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ghf/model.hpp"

using namespace ghf;

namespace {
const double pi = 2.0 * std::asin(1.0);
}

TEST_CASE("coupling tables match the closed-form entries") {
  SUBCASE("N=2, theta=pi/4, alpha=1") {
    auto t = build_couplings(ModelSpec::power_law(2, pi / 4, 1.0));
    const double r2h = std::sqrt(2.0) / 2.0;
    CHECK(t.h(0) == doctest::Approx(r2h).epsilon(1e-15));
    CHECK(t.h(1) == doctest::Approx(r2h).epsilon(1e-15));
    CHECK(t.J(0, 1) == doctest::Approx(r2h).epsilon(1e-15));
  }
  SUBCASE("N=3, theta=0, alpha=2: field only") {
    auto t = build_couplings(ModelSpec::power_law(3, 0.0, 2.0));
    for (int p = 0; p < 3; ++p) CHECK(t.h(p) == 1.0);
    CHECK(t.J.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("N=3, theta=pi/2, alpha=2") {
    auto t = build_couplings(ModelSpec::power_law(3, pi / 2, 2.0));
    CHECK(t.J(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.J(1, 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.J(0, 2) == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("nearest-neighbour sentinel") {
    auto t = build_couplings(ModelSpec::nearest(4, 0.3 * pi));
    const double j0 = std::sin(0.3 * pi);
    CHECK(t.J(0, 1) == doctest::Approx(j0));
    CHECK(t.J(1, 2) == doctest::Approx(j0));
    CHECK(t.J(0, 2) == 0.0);
    CHECK(t.J(0, 3) == 0.0);
  }
}

TEST_CASE("couplings depend only on distance and decay with it") {
  auto t = build_couplings(ModelSpec::power_law(8, 0.31 * pi, 1.3));
  for (int p = 0; p < 8; ++p) {
    for (int q = p + 1; q < 8; ++q) {
      const int d = q - p;
      CHECK(t.J(p, q) == doctest::Approx(t.J(0, d)).epsilon(1e-15));
      CHECK(t.J(p, q) > 0.0);
      if (d > 1) CHECK(t.J(0, d) < t.J(0, d - 1));
    }
  }
  // strictly upper triangular storage
  for (int p = 0; p < 8; ++p) {
    for (int q = 0; q <= p; ++q) CHECK(t.J(p, q) == 0.0);
  }
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS_AS(ModelSpec::power_law(1, 0.3, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelSpec::power_law(4, 0.3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelSpec::power_law(4, 0.3, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelSpec::power_law(4, -0.1, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelSpec::power_law(4, 0.51 * pi, 2.0),
                  std::invalid_argument);
  CHECK_NOTHROW(ModelSpec::power_law(4, 0.0, 2.0));  // test fixture limit
}
