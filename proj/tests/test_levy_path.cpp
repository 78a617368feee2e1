#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "hjmlevy/levy_path.hpp"

using namespace hjmlevy;

namespace {

LevyModel atom_model(double drift = 0.0) {
  return LevyModel{drift, 0.0, LevyMeasureSpec::finite_atoms({0.3}, {2.0})};
}

}  // namespace

TEST_CASE("substream seeds are reproducible and spread out") {
  CHECK(substream_seed(20240801, 7) == substream_seed(20240801, 7));
  CHECK(substream_seed(20240801, 7) != substream_seed(20240801, 8));
  CHECK(substream_seed(20240801, 7) != substream_seed(20240802, 7));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(substream_seed(1, i));
  CHECK(seen.size() == 1000);
}

TEST_CASE("path simulation preconditions") {
  const LevyModel model = atom_model();
  CHECK_THROWS_AS(simulate_path(model, 0.0, 1, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(simulate_path(model, 1.0, 1, 0.0), std::invalid_argument);

  const LevyModel gaussian{0.0, 0.5, LevyMeasureSpec::finite_atoms({0.3}, {2.0})};
  CHECK_THROWS_WITH(simulate_path(gaussian, 1.0, 1, 1e-3),
                    Catch::Matchers::ContainsSubstring("existence rules"));

  const LevyModel negative{0.0, 0.0, LevyMeasureSpec::finite_atoms({-0.2, 0.3}, {1.0, 1.0})};
  CHECK_THROWS_WITH(simulate_path(negative, 1.0, 1, 1e-3),
                    Catch::Matchers::ContainsSubstring("existence rules"));
}

TEST_CASE("atom paths carry the exact compensator and sizes") {
  const JumpPath path = simulate_path(atom_model(), 1.0, 20240801, 1e-3);
  CHECK(path.horizon == 1.0);
  CHECK(path.epsilon_cut == 1e-3);
  CHECK(path.model_drift == 0.0);
  // kept jumps in [eps, 1) have mean rate 2 * 0.3
  CHECK(path.effective_drift == -0.6);
  REQUIRE(path.compensator_adjustment.finite);
  CHECK(path.compensator_adjustment.value == 0.0);
  REQUIRE_FALSE(path.jump_times.empty());
  for (double y : path.jump_sizes) CHECK(y == 0.3);
  for (std::size_t k = 0; k < path.jump_times.size(); ++k) {
    CHECK(path.jump_times[k] > 0.0);
    CHECK(path.jump_times[k] <= 1.0);
    if (k > 0) CHECK(path.jump_times[k] > path.jump_times[k - 1]);
  }
}

TEST_CASE("path values step at the exact jump times") {
  JumpPath path;
  path.horizon = 1.0;
  path.effective_drift = 1.0;
  path.jump_times = {0.5};
  path.jump_sizes = {2.0};
  CHECK(path.value(0.4) == Catch::Approx(0.4));
  CHECK(path.value(0.5) == Catch::Approx(2.5));  // the jump counts at its own time
  CHECK(path.value(1.0) == Catch::Approx(3.0));
}

TEST_CASE("equal seeds give bitwise equal paths") {
  const LevyModel model{0.1, 0.0, LevyMeasureSpec::truncated_stable(0.5)};
  const JumpPath a = simulate_path(model, 2.0, 998877, 0.01);
  const JumpPath b = simulate_path(model, 2.0, 998877, 0.01);
  CHECK(a.jump_times == b.jump_times);
  CHECK(a.jump_sizes == b.jump_sizes);
  CHECK(a.effective_drift == b.effective_drift);

  const JumpPath c = simulate_path(model, 2.0, 998878, 0.01);
  CHECK(a.jump_times != c.jump_times);
}

TEST_CASE("stable cutoffs shift the drift by the kept compensator") {
  const LevyModel model{0.0, 0.0, LevyMeasureSpec::truncated_stable(0.5)};
  const JumpPath path = simulate_path(model, 1.0, 4321, 0.01);
  // int_eps^1 y^{-0.5} dy = 2 - 2 sqrt(eps)
  CHECK(path.effective_drift == Catch::Approx(-1.8).epsilon(1e-12));
  REQUIRE(path.compensator_adjustment.finite);
  CHECK(path.compensator_adjustment.value == Catch::Approx(0.2).epsilon(1e-12));
  for (double y : path.jump_sizes) {
    CHECK(y >= 0.01);
    CHECK(y <= 1.0);
  }

  // p > 1: the small-jump mean below any cutoff diverges and stays flagged
  const LevyModel wild{0.0, 0.0, LevyMeasureSpec::truncated_stable(1.5)};
  const JumpPath heavy = simulate_path(wild, 1.0, 4321, 0.01);
  CHECK_FALSE(heavy.compensator_adjustment.finite);
  // int_eps^1 y^{-1.5} dy = 2 (eps^{-1/2} - 1)
  CHECK(heavy.effective_drift == Catch::Approx(-18.0).epsilon(1e-12));
}

TEST_CASE("coarsening keeps a subset of jumps and rebalances the drift") {
  const LevyModel model{0.0, 0.0, LevyMeasureSpec::truncated_stable(0.5)};
  const JumpPath fine = simulate_path(model, 1.0, 777, 0.005);
  const JumpPath coarse = truncate_to_epsilon(fine, model, 0.05);

  CHECK(coarse.epsilon_cut == 0.05);
  CHECK(coarse.jump_times.size() <= fine.jump_times.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < fine.jump_times.size(); ++i) {
    if (fine.jump_sizes[i] >= 0.05) {
      REQUIRE(k < coarse.jump_times.size());
      CHECK(coarse.jump_times[k] == fine.jump_times[i]);
      CHECK(coarse.jump_sizes[k] == fine.jump_sizes[i]);
      ++k;
    }
  }
  CHECK(k == coarse.jump_times.size());
  // dropped mean rate moves back into the drift: int_{0.005}^{0.05} y^{-0.5} dy
  const double dropped = 2.0 * (std::sqrt(0.05) - std::sqrt(0.005));
  CHECK(coarse.effective_drift ==
        Catch::Approx(fine.effective_drift + dropped).epsilon(1e-12));
  CHECK(coarse.compensator_adjustment.value == Catch::Approx(2.0 * std::sqrt(0.05)));

  CHECK_THROWS_AS(truncate_to_epsilon(coarse, model, 0.005), std::invalid_argument);
  // equal cutoff is the identity coarsening
  const JumpPath same = truncate_to_epsilon(fine, model, 0.005);
  CHECK(same.jump_times == fine.jump_times);
  CHECK(same.effective_drift == fine.effective_drift);
}

TEST_CASE("driving field multiplies jump factors at exact times") {
  JumpPath path;
  path.horizon = 1.0;
  path.effective_drift = 0.0;
  path.jump_times = {0.25};
  path.jump_sizes = {0.5};

  const TriangularGrid grid(4, 1.0);
  const DrivingField a =
      driving_field(path, VolatilitySurface::constant(1.0), InitialCurve::constant(1.0), grid);
  for (int j = 0; j <= 4; ++j) {
    CHECK(a.at(0, j) == 1.0);
    for (int i = 1; i <= j; ++i) CHECK(a.at(i, j) == Catch::Approx(1.5));  // 1 + 1 * 0.5
  }
}

TEST_CASE("driving field compounds several jumps") {
  JumpPath path;
  path.horizon = 1.0;
  path.effective_drift = 0.0;
  path.jump_times = {0.1, 0.6};
  path.jump_sizes = {0.2, 0.3};

  const TriangularGrid grid(2, 1.0);
  const DrivingField a =
      driving_field(path, VolatilitySurface::constant(2.0), InitialCurve::constant(1.0), grid);
  CHECK(a.at(0, 2) == 1.0);
  CHECK(a.at(1, 2) == Catch::Approx(1.4));         // 1 + 2 * 0.2
  CHECK(a.at(2, 2) == Catch::Approx(1.4 * 1.6));   // both jumps by t = 1
}

TEST_CASE("driving field integrates the drift against the volatility") {
  JumpPath path;
  path.horizon = 1.0;
  path.effective_drift = -0.6;

  const TriangularGrid grid(8, 1.0);
  const DrivingField flat =
      driving_field(path, VolatilitySurface::constant(1.0), InitialCurve::constant(2.0), grid);
  CHECK(flat.at(8, 8) == Catch::Approx(2.0 * std::exp(-0.6)).epsilon(1e-12));
  CHECK(flat.at(4, 8) == Catch::Approx(2.0 * std::exp(-0.3)).epsilon(1e-12));

  // linear-in-t volatility: the trapezoid of lam(s,T) = s + T is exact
  const VolatilitySurface lam = VolatilitySurface::custom(
      [](double t, double T) { return t + T; }, 0.1, 2.0);
  const DrivingField ramp = driving_field(path, lam, InitialCurve::constant(1.0), grid);
  for (int j = 1; j <= 8; ++j) {
    const double T = grid.node(j);
    for (int i = 0; i <= j; ++i) {
      const double t = grid.node(i);
      const double integral = 0.5 * t * t + T * t;
      CHECK(ramp.at(i, j) == Catch::Approx(std::exp(-0.6 * integral)).epsilon(1e-12));
    }
  }
}

TEST_CASE("driving field rejects degenerate inputs") {
  JumpPath path;
  path.horizon = 0.5;
  const VolatilitySurface lam = VolatilitySurface::constant(1.0);
  // grid runs past the simulated horizon
  CHECK_THROWS_AS(driving_field(path, lam, InitialCurve::constant(1.0), TriangularGrid(2, 1.0)),
                  std::invalid_argument);
  // nonpositive initial curve
  path.horizon = 1.0;
  CHECK_THROWS_AS(driving_field(path, lam, InitialCurve::constant(0.0), TriangularGrid(2, 1.0)),
                  std::invalid_argument);

  // a jump that wipes out the stochastic exponential factor
  path.jump_times = {0.5};
  path.jump_sizes = {-1.0};
  CHECK_THROWS_AS(driving_field(path, lam, InitialCurve::constant(1.0), TriangularGrid(2, 1.0)),
                  std::runtime_error);
}

TEST_CASE("simulated field stays positive and starts on the initial curve") {
  const LevyModel model{0.05, 0.0, LevyMeasureSpec::truncated_stable(0.5)};
  const JumpPath path = simulate_path(model, 1.0, substream_seed(20240801, 0), 1e-3);
  const TriangularGrid grid(20, 1.0);
  const InitialCurve f0 = InitialCurve::affine(0.02, 0.01);
  const DrivingField a =
      driving_field(path, VolatilitySurface::constant(0.5), f0, grid);
  for (int j = 0; j <= grid.n; ++j) {
    CHECK(a.at(0, j) == f0(grid.node(j)));
    for (int i = 0; i <= j; ++i) CHECK(a.at(i, j) > 0.0);
  }
}
