#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hjmlevy/curves.hpp"
#include "hjmlevy/grid.hpp"
#include "hjmlevy/quadrature.hpp"

namespace hjmlevy {

// One application of the fixed-point map: given the current iterate h, returns
//   (A h)(t, T) = a(t, T) * exp( int_0^t J'( int_s^T lam(s,u) h(s,u) du ) lam(s,T) ds ).
// Both integrals use the trapezoid rule on the shared triangular grid. Nodes whose
// inner integral is not finite propagate to +infinity without evaluating jprime.
// Requires matching grids, a finite nonnegative a, and finite jprime(0).
TriField apply_A(const TriField& h, const DrivingField& a, const VolatilitySurface& lam,
                 const ScalarFn& jprime);

enum class SolveStatus { Converged, Diverged, Stalled };

std::string to_string(SolveStatus s);

struct SolveOptions {
  double tol = 1e-9;               // sup-norm residual for convergence
  int max_iters = 500;
  double blowup_threshold = 1e12;  // any node above this means divergence
  double c_max = 1e30;             // search ceiling for the a priori bound
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::Stalled;
  TriField field;                       // last computed iterate
  int iterations = 0;                   // applications of the map performed
  double sup_residual = 0.0;            // last sup-norm step size
  std::vector<double> residual_history; // one entry per iteration
  int blowup_i = -1;                    // node that crossed the threshold, if any
  int blowup_j = -1;
  std::optional<double> bound_c;        // a priori sup bound when one exists
};

// Smallest c in [K, c_max] with  log K + lambda_bar * t_star * jprime(lambda_bar * c * t_star)
// <= log c.  Any such c is a sup bound for every iterate started below K.  Returns
// nullopt when no c up to c_max works. Requires K > 0.
std::optional<double> bound_constant_c(double K, const ScalarFn& jprime, double lambda_bar,
                                       double t_star, double c_max);

// Monotone iteration h_{k+1} = A h_k from h_0 = 0. Stops on sup-residual <= tol
// (Converged), on any node exceeding blowup_threshold (Diverged, node recorded),
// or after max_iters (Stalled).
SolveOutcome solve_fixed_point(const DrivingField& a, const VolatilitySurface& lam,
                               const ScalarFn& jprime, const SolveOptions& opt = {});

// Singular comparison kernel exp(1/(x - t + y - T)); +infinity on and past the
// ridge t + T >= x + y. On its comparison domain, the corner rectangle
// {0 <= t <= x, t <= T <= y}, the ridge is touched only at the apex (x, y).
double minorant_h(double x, double y, double t, double T);

// Cube-log growth envelope R(z) = alpha * log(gamma * (z + e^2))^3 and its global
// Lipschitz constant on [0, inf), which is R'(0) by concavity (needs gamma >= 1).
double cube_log_envelope(double alpha, double gamma, double z);
double cube_log_lipschitz(double alpha, double gamma);

// Parameter window for the divergence construction; throws std::invalid_argument
// naming the violated inequality.
void validate_minorant_regime(double alpha, double gamma, double x, double y, double t_star);

// Damped comparison field g(t,T) = h(t,T) * exp(-int_0^t R(int_s^T h(s,u) du) ds)
// evaluated by trapezoid rules on the corner rectangle {t <= x, T <= y}, where g
// is continuous with value 0 at the apex (x, y); zero outside the rectangle.
TriField damped_minorant_field(double x, double y, double alpha, double gamma,
                               const TriangularGrid& grid);

struct DominanceReport {
  bool hypothesis_ok = false;      // exp(beta t) a >= g on the rectangle {t<=x, T<=y}
  double hypothesis_margin = 0.0;  // min of exp(beta t) a - g over that rectangle
  std::size_t nodes_checked = 0;   // nodes of the trimmed rectangle {t<=x, T<=y-delta}
  std::size_t nodes_satisfied = 0;
  double max_violation = 0.0;      // max of h - f over the trimmed rectangle
  bool dominated = false;          // hypothesis_ok and every checked node has f >= h
};

// Checks the divergence certificate: under exp(beta t) a >= g on {t<=x, T<=y} the
// final iterate must dominate the singular kernel on {t<=x, T<=y-delta}, where the
// kernel is bounded by e^{1/delta}. Without the hypothesis there is no verdict
// (dominated stays false). Requires 0 < delta < y.
DominanceReport verify_minorant_dominance(const SolveOutcome& outcome, const DrivingField& a,
                                          double x, double y, double alpha, double gamma,
                                          double beta, double delta);

}  // namespace hjmlevy
