#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hjmlevy/quadrature.hpp"

using namespace hjmlevy;

TEST_CASE("adaptive panel integral matches analytic values") {
  const QuadResult cubic = integrate([](double x) { return x * x * x; }, 0.0, 2.0);
  REQUIRE(cubic.converged);
  REQUIRE_FALSE(cubic.divergent);
  CHECK(cubic.value == Catch::Approx(4.0).epsilon(1e-10));

  const QuadResult osc = integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
  REQUIRE(osc.converged);
  CHECK(osc.value == Catch::Approx(2.0).epsilon(1e-10));

  const QuadResult empty = integrate([](double x) { return x; }, 1.0, 1.0);
  REQUIRE(empty.converged);
  CHECK(empty.value == 0.0);
}

TEST_CASE("integrate requires an ordered interval") {
  REQUIRE_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("origin panels resolve an integrable singularity") {
  // int_0^1 y^{-1/2} dy = 2
  const QuadResult r = integrate_to_zero([](double y) { return 1.0 / std::sqrt(y); }, 1.0);
  REQUIRE(r.converged);
  REQUIRE_FALSE(r.divergent);
  CHECK(r.value == Catch::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("origin panels flag a divergent singularity") {
  // int_0^1 1/y dy diverges: panel contributions never decay
  const QuadResult r = integrate_to_zero([](double y) { return 1.0 / y; }, 1.0);
  CHECK(r.divergent);

  // int_0^1 y^{-1.5} dy diverges by magnitude
  const QuadResult hard = integrate_to_zero([](double y) { return std::pow(y, -1.5); }, 1.0);
  CHECK(hard.divergent);
}

TEST_CASE("tail panels integrate to infinity") {
  const QuadResult r = integrate_to_infinity([](double y) { return std::exp(-y); }, 1.0);
  REQUIRE(r.converged);
  CHECK(r.value == Catch::Approx(std::exp(-1.0)).epsilon(1e-9));

  // int_1^inf y^{-2} dy = 1
  const QuadResult poly = integrate_to_infinity([](double y) { return 1.0 / (y * y); }, 1.0);
  REQUIRE(poly.converged);
  CHECK(poly.value == Catch::Approx(1.0).epsilon(1e-8));

  REQUIRE_THROWS_AS(integrate_to_infinity([](double) { return 0.0; }, 0.0),
                    std::invalid_argument);
}

TEST_CASE("tail panels flag a divergent tail") {
  const QuadResult r = integrate_to_infinity([](double y) { return 1.0 / y; }, 1.0);
  CHECK(r.divergent);
}

TEST_CASE("power substitution removes the origin singularity exactly") {
  // int_0^x y^{-p} dy = x^{1-p}/(1-p)
  for (double p : {0.3, 0.5, 0.9}) {
    for (double x : {0.25, 1.0}) {
      const QuadResult r = integrate_power_singularity([](double) { return 1.0; }, p, x);
      REQUIRE(r.converged);
      CHECK(r.value == Catch::Approx(std::pow(x, 1.0 - p) / (1.0 - p)).epsilon(1e-9));
    }
  }
  // bounded rest factor: int_0^1 y^{-1/2} e^{-y} dy = sqrt(pi) erf(1)
  const QuadResult damped =
      integrate_power_singularity([](double y) { return std::exp(-y); }, 0.5, 1.0);
  REQUIRE(damped.converged);
  CHECK(damped.value == Catch::Approx(std::sqrt(M_PI) * std::erf(1.0)).epsilon(1e-8));

  REQUIRE_THROWS_AS(integrate_power_singularity([](double) { return 1.0; }, 1.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("non finite samples mark the result divergent") {
  const QuadResult r =
      integrate([](double x) { return x == 0.5 ? INFINITY : 1.0; }, 0.0, 1.0);
  CHECK(r.divergent);
}
