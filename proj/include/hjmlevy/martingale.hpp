#pragma once

#include <cstdint>
#include <vector>

#include "hjmlevy/curves.hpp"
#include "hjmlevy/field_solver.hpp"
#include "hjmlevy/grid.hpp"
#include "hjmlevy/laplace_exponent.hpp"
#include "hjmlevy/levy_model.hpp"

namespace hjmlevy {

// Max over grid nodes (t, T) of |int_t^T alpha(t,u) du - J(int_t^T sigma(t,u) du)|
// where sigma = lam * f and alpha = J'(int_t^u sigma dv) * sigma, all integrals by
// trapezoid on the grid. Zero in the continuum for the compensated drift.
double drift_consistency(const TriField& field, const VolatilitySurface& lam,
                         const LaplaceExponent& exponent);

// P(t,T) = exp(-int_t^T f(t,u) du) with t, T on grid nodes. For T < t the curve is
// flat-extended, f(t,u) = f(u,u), so the price accretes at the past short rates.
double bond_price(const TriField& field, double t, double maturity);

// P^(t,T) = exp(-int_0^t f(s,s) ds) * P(t,T), same conventions.
double discounted_bond(const TriField& field, double t, double maturity);

struct MartingaleCell {
  double t = 0.0;
  double maturity = 0.0;
  double mean = 0.0;
  double se = 0.0;
  double reference = 0.0;  // P(0,T) from the initial curve
  double z = 0.0;
};

struct MartingaleOptions {
  double epsilon_cut = 1e-3;
  double jprime_scale = 1.0;  // scale on J' in the solver; != 1 breaks the drift on purpose
  SolveOptions solver;
  double bias_tol = 1e-9;     // zero-variance cells pass when |mean - ref| <= bias_tol
  int threads = 0;            // 0 = hardware concurrency
};

struct MartingaleReport {
  std::vector<MartingaleCell> cells;  // (t_i, T) for every grid t_i <= T, per maturity
  bool pass = false;                  // every |z| <= 3
  double in_band_fraction = 0.0;      // fraction of cells with |z| <= 3
  bool structural_failure = false;    // in_band_fraction < 0.95
  int n_paths = 0;
  std::uint64_t seed = 0;
  double min_price = 0.0;             // extremes of P^ over all paths and cells
  double max_price = 0.0;
  double dt = 0.0;                    // bias attribution: grid step and cutoff tail mass
  double epsilon_cut = 0.0;
  ExtReal cutoff_tail_moment;         // int_0^eps y nu(dy) folded into the drift
  double jump_intensity = 0.0;        // nu([eps, inf)), jumps per unit time
};

// Monte Carlo check that discounted bond prices are constant in mean: simulates
// n_paths driving paths, solves the fixed point on each, and compares the sample
// mean of P^(t,T) against P(0,T) at every grid time t <= T for each maturity.
// Deterministic for a fixed seed regardless of thread count. Throws if any path
// fails to converge, naming the path seed.
MartingaleReport martingale_test(const LevyModel& model, const VolatilitySurface& lam,
                                 const InitialCurve& f0, const TriangularGrid& grid,
                                 const std::vector<double>& maturities, int n_paths,
                                 std::uint64_t seed, const MartingaleOptions& opt = {});

}  // namespace hjmlevy
