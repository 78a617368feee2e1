#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "hjmlevy/laplace_exponent.hpp"

using namespace hjmlevy;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LevyModel pure_jump(LevyMeasureSpec nu) { return LevyModel{0.0, 0.0, std::move(nu)}; }

struct ExponentRow {
  double p, z, value, deriv, second;
};

// 50-digit quadrature of the compensated pieces over (0,1) with density y^{-1-p}:
//   value  = int (e^{-zy} - 1 + zy) y^{-1-p} dy
//   deriv  = int (1 - e^{-zy}) y^{-p} dy
//   second = int y^{1-p} e^{-zy} dy
constexpr ExponentRow kStableRows[] = {
    {0.5, 0.5, 0.0756898967904355464, 0.288751216215702394, 0.498187464359030759},
    {0.5, 3.0, 1.84830314048700643, 0.991312879537122386, 0.151518830621191621},
    {0.5, 50.0, 76.933717253689995, 1.74933717253689995, 0.0025066282746310005},
    {0.5, 1e-5, 3.33332666667857141e-11, 6.66664666671428562e-6, 0.666662666680952344},
    {1.0, 0.5, 0.115390379846240758, 0.443842079117748363, 0.786938680574733153},
    {1.0, 3.0, 3.01684193562365483, 1.68887633466383959, 0.316737643877378686},
    {1.0, 50.0, 175.461933516483946, 4.48923867032967892, 0.02},
    {1.0, 1e-5, 4.99999166668055553e-11, 9.99997500005555545e-6, 0.999995000016666625},
    {1.5, 0.5, 0.237082927928099202, 0.924310103209564454, 1.71124878378429761},
    {1.5, 3.0, 6.93686900678074451, 4.15169685951299357, 1.00868712046287761},
    {1.5, 50.0, 736.209424877000167, 23.066282746310005, 0.25066282746310005},
    {1.5, 1e-5, 9.99998888890555553e-11, 0.0000199999666667333332, 1.99999333335333329},
};

}  // namespace

TEST_CASE("truncated stable exponent matches the frozen oracle table") {
  for (const ExponentRow& row : kStableRows) {
    CAPTURE(row.p, row.z);
    const LaplaceExponent j(pure_jump(LevyMeasureSpec::truncated_stable(row.p)));
    CHECK(j.value(row.z) == Catch::Approx(row.value).epsilon(1e-11));
    CHECK(j.deriv(row.z) == Catch::Approx(row.deriv).epsilon(1e-11));
    CHECK(j.second_deriv(row.z) == Catch::Approx(row.second).epsilon(1e-11));
  }
}

TEST_CASE("drift and gaussian terms add linearly") {
  const LevyModel model{0.2, 2.0, LevyMeasureSpec::truncated_stable(0.5)};
  const LaplaceExponent full(model);
  const LaplaceExponent jumps(pure_jump(LevyMeasureSpec::truncated_stable(0.5)));
  const double z = 3.0;
  CHECK(full.value(z) == Catch::Approx(-0.2 * z + z * z + jumps.value(z)).epsilon(1e-13));
  CHECK(full.deriv(z) == Catch::Approx(-0.2 + 2.0 * z + jumps.deriv(z)).epsilon(1e-13));
  CHECK(full.second_deriv(z) == Catch::Approx(2.0 + jumps.second_deriv(z)).epsilon(1e-13));
  CHECK(full.deriv_at_zero() == Catch::Approx(-0.2));

  const LaplaceExponent empty(LevyModel{0.1, 0.5, LevyMeasureSpec::none()});
  CHECK(empty.value(2.0) == Catch::Approx(-0.2 + 1.0));
  CHECK(empty.second_deriv(7.0) == 0.5);
}

TEST_CASE("exponent preconditions") {
  const LaplaceExponent j(pure_jump(LevyMeasureSpec::truncated_stable(0.5)));
  CHECK_THROWS_AS(j.value(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(j.deriv(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(j.second_deriv(-1.0), std::invalid_argument);
  CHECK(j.value(0.0) == 0.0);

  CHECK_THROWS_AS(LaplaceExponent(LevyModel{0.0, -1.0, LevyMeasureSpec::none()}),
                  std::invalid_argument);
  // first moment on [1, inf) must be finite for the compensator split
  CHECK_THROWS_AS(
      LaplaceExponent(pure_jump(LevyMeasureSpec::user_density(
          [](double y) { return std::pow(y, -2.0); }, 0.5, kInf))),
      std::invalid_argument);
}

TEST_CASE("atom exponents are exact exponential sums") {
  const LevyMeasureSpec nu = LevyMeasureSpec::finite_atoms({-0.5, 0.3, 1.5}, {1.0, 2.0, 3.0});
  const LaplaceExponent j(pure_jump(nu));
  const auto em1p = [](double w) { return std::expm1(-w) + w; };
  for (double z : {0.25, 1.0, 8.0}) {
    CAPTURE(z);
    // jumps inside (-1,1) carry the compensator; the tail atom does not
    const double v = 1.0 * em1p(-0.5 * z) + 2.0 * em1p(0.3 * z) + 3.0 * std::expm1(-1.5 * z);
    const double d = 1.0 * -0.5 * (1.0 - std::exp(0.5 * z)) +
                     2.0 * 0.3 * (1.0 - std::exp(-0.3 * z)) +
                     3.0 * -1.5 * std::exp(-1.5 * z);
    const double s = 1.0 * 0.25 * std::exp(0.5 * z) + 2.0 * 0.09 * std::exp(-0.3 * z) +
                     3.0 * 2.25 * std::exp(-1.5 * z);
    CHECK(j.value(z) == Catch::Approx(v).epsilon(1e-14));
    CHECK(j.deriv(z) == Catch::Approx(d).epsilon(1e-14));
    CHECK(j.second_deriv(z) == Catch::Approx(s).epsilon(1e-14));
  }
  CHECK(j.deriv_at_zero() == Catch::Approx(-4.5));
  CHECK(j.deriv(0.0) == Catch::Approx(-4.5));
}

TEST_CASE("slope at the origin subtracts the large-jump first moment") {
  const LaplaceExponent u(pure_jump(LevyMeasureSpec::uniform_density(1.0, 1.0, 2.0)));
  CHECK(u.deriv_at_zero() == Catch::Approx(-1.5));
  CHECK(u.deriv(0.0) == Catch::Approx(-1.5));
  CHECK(u.value(0.0) == 0.0);
}

TEST_CASE("density window split agrees with closed antiderivatives") {
  // support straddles the compensation cutoff at 1
  const double c = 2.0, lo = -0.5, hi = 1.5;
  const LaplaceExponent j(pure_jump(LevyMeasureSpec::uniform_density(c, lo, hi)));
  const auto value_closed = [&](double z) {
    const auto piece = [&](double a, double b, bool comp) {
      double out = -(std::exp(-z * b) - std::exp(-z * a)) / z - (b - a);
      if (comp) out += z * (b * b - a * a) / 2.0;
      return c * out;
    };
    return piece(lo, 1.0, true) + piece(1.0, hi, false);
  };
  const auto deriv_closed = [&](double z) {
    const auto ye = [&](double y) { return std::exp(-z * y) * (z * y + 1.0) / (z * z); };
    const auto piece = [&](double a, double b, bool comp) {
      double out = ye(b) - ye(a);  // -int y e^{-zy}
      if (comp) out += (b * b - a * a) / 2.0;
      return c * out;
    };
    return piece(lo, 1.0, true) + piece(1.0, hi, false);
  };
  for (double z : {0.7, 4.0}) {
    CAPTURE(z);
    CHECK(j.value(z) == Catch::Approx(value_closed(z)).epsilon(1e-8));
    CHECK(j.deriv(z) == Catch::Approx(deriv_closed(z)).epsilon(1e-8));
  }
  CHECK(j.deriv_at_zero() == Catch::Approx(-c * (hi * hi - 1.0) / 2.0));
}

TEST_CASE("curvature at zero is infinite when the square moment diverges") {
  const LaplaceExponent heavy(pure_jump(LevyMeasureSpec::user_density(
      [](double y) { return std::pow(y, -2.5); }, 0.5, kInf)));
  CHECK(heavy.second_deriv(0.0) == kInf);
  CHECK(std::isfinite(heavy.second_deriv(1.0)));

  const LaplaceExponent light(pure_jump(LevyMeasureSpec::finite_atoms({0.3}, {2.0})));
  CHECK(light.second_deriv(0.0) == Catch::Approx(0.18));
}

TEST_CASE("synthetic exponents expose only the supplied callables") {
  CHECK_THROWS_AS(LaplaceExponent::from_functions({}), std::invalid_argument);
  const LaplaceExponent only_deriv =
      LaplaceExponent::from_functions([](double z) { return 2.0 * z; });
  CHECK(only_deriv.deriv(3.0) == 6.0);
  CHECK(only_deriv.deriv_at_zero() == 0.0);
  CHECK_THROWS_AS(only_deriv.value(1.0), std::logic_error);
  CHECK_THROWS_AS(only_deriv.second_deriv(1.0), std::logic_error);

  const LaplaceExponent all = LaplaceExponent::from_functions(
      [](double z) { return 2.0 * z; }, [](double z) { return z * z; },
      [](double) { return 2.0; });
  CHECK(all.value(3.0) == 9.0);
  CHECK(all.second_deriv(0.1) == 2.0);
}

TEST_CASE("exponent derivative is nondecreasing with nonnegative curvature") {
  const LevyModel models[] = {
      LevyModel{0.1, 0.0, LevyMeasureSpec::truncated_stable(0.5)},
      pure_jump(LevyMeasureSpec::finite_atoms({-0.5, 0.3, 1.5}, {1.0, 2.0, 1.0})),
      pure_jump(LevyMeasureSpec::uniform_density(2.0, -0.5, 1.5)),
  };
  for (const LevyModel& m : models) {
    const LaplaceExponent j(m);
    double prev = -kInf;
    for (int i = 0; i < 100; ++i) {
      const double z = 50.0 * i / 99.0;
      CAPTURE(z);
      const double d = j.deriv(z);
      CHECK(d >= prev - 1e-12 * std::max(1.0, std::abs(prev)));
      CHECK(j.second_deriv(z) >= 0.0);
      prev = d;
    }
  }
}

TEST_CASE("finite differences confirm the derivative chain") {
  for (double p : {0.5, 1.0, 1.5}) {
    CAPTURE(p);
    const LaplaceExponent j(pure_jump(LevyMeasureSpec::truncated_stable(p)));
    for (double z : {0.5, 3.0, 20.0}) {
      CAPTURE(z);
      const double h = 1e-5 * z;
      const double fd1 = (j.value(z + h) - j.value(z - h)) / (2.0 * h);
      const double fd2 = (j.deriv(z + h) - j.deriv(z - h)) / (2.0 * h);
      CHECK(j.deriv(z) == Catch::Approx(fd1).epsilon(1e-5));
      CHECK(j.second_deriv(z) == Catch::Approx(fd2).epsilon(1e-5));
    }
  }
}

TEST_CASE("growth scan separates slow and fast derivative growth") {
  // log-growth derivative: J'(z) = egamma + ln z - Ei(-z), scaled by 1/2
  const LaplaceExponent log_like(pure_jump(LevyMeasureSpec::truncated_stable(1.0)));
  const GrowthReport slow = growth_classify(log_like, 0.5, 1.0);
  CHECK(slow.verdict == GrowthClass::Sublogarithmic);
  CHECK(slow.gap_monotone);
  CHECK(slow.scale == Catch::Approx(0.5));
  // gap at z_max: ln z - (egamma + ln z)/2 = (ln 1e12 - egamma)/2
  CHECK(slow.gap_top == Catch::Approx(13.527).margin(0.01));
  CHECK(slow.z.size() == 111);

  // root-growth derivative dominates ln^3 z on the top half
  const LaplaceExponent fast(pure_jump(LevyMeasureSpec::truncated_stable(1.5)));
  const GrowthReport cube = growth_classify(fast, 1.0, 1.0);
  CHECK(cube.verdict == GrowthClass::SuperCubeLog);
  CHECK(cube.min_cube_ratio >= 0.05);

  // ln^2 growth sits between the two calls: neither test fires
  const LaplaceExponent mid = LaplaceExponent::from_functions(
      [](double z) { return std::pow(std::log(z), 2.0); });
  CHECK(growth_classify(mid, 1.0, 1.0).verdict == GrowthClass::Inconclusive);
}

TEST_CASE("growth scan stops at the first overflowed sample") {
  const LaplaceExponent hot =
      LaplaceExponent::from_functions([](double z) { return std::exp(z); });
  const GrowthReport r = growth_classify(hot, 1.0, 1.0);
  CHECK(r.verdict == GrowthClass::Inconclusive);
  CHECK(r.z.size() < 111);
  CHECK(r.z.size() == r.jprime.size());
  CHECK(r.z.size() == r.gap.size());
  CHECK_FALSE(std::isfinite(r.jprime.back()));
}

TEST_CASE("growth scan preconditions") {
  const LaplaceExponent j = LaplaceExponent::from_functions([](double z) { return z; });
  CHECK_THROWS_AS(growth_classify(j, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(growth_classify(j, 1.0, 0.0), std::invalid_argument);
  GrowthOptions bad;
  bad.z_min = 0.5;
  CHECK_THROWS_AS(growth_classify(j, 1.0, 1.0, bad), std::invalid_argument);
  bad = GrowthOptions{};
  bad.z_max = bad.z_min;
  CHECK_THROWS_AS(growth_classify(j, 1.0, 1.0, bad), std::invalid_argument);
  bad = GrowthOptions{};
  bad.points = 4;
  CHECK_THROWS_AS(growth_classify(j, 1.0, 1.0, bad), std::invalid_argument);
}
