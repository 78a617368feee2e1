#pragma once

#include <functional>

namespace hjmlevy {

using ScalarFn = std::function<double(double)>;

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;  // floor used when the integral is near zero
  int max_depth = 48;      // adaptive bisection depth per panel
  long max_evals = 1000000;
  double divergence_threshold = 1e12;  // partial sums beyond this flag divergence
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = false;
  bool divergent = false;  // integral deemed infinite (trend or magnitude)
  long evals = 0;
};

// Adaptive Simpson on [a, b]. The integrand must be finite on [a, b]; a non-finite
// sample marks the result divergent. Requires a <= b.
QuadResult integrate(const ScalarFn& f, double a, double b, const QuadOptions& opt = {});

// Integral of f over (0, b] where f may blow up at 0. Geometric panels
// [b/2^{k+1}, b/2^k] are summed toward the origin; divergence is flagged when the
// partial sums exceed the threshold or the panel contributions stop decaying.
QuadResult integrate_to_zero(const ScalarFn& f, double b, const QuadOptions& opt = {});

// Integral of f over [a, infinity), a > 0, by geometric panels [a 2^k, a 2^{k+1}].
QuadResult integrate_to_infinity(const ScalarFn& f, double a, const QuadOptions& opt = {});

// Integral over (0, x] of y^{-power} * rest(y) dy with power < 1, singularity removed
// by the substitution u = y^{1-power}; rest must be bounded near 0.
QuadResult integrate_power_singularity(const ScalarFn& rest, double power, double x,
                                       const QuadOptions& opt = {});

}  // namespace hjmlevy
