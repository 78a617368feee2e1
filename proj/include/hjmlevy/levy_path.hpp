#pragma once

#include <cstdint>
#include <vector>

#include "hjmlevy/curves.hpp"
#include "hjmlevy/grid.hpp"
#include "hjmlevy/levy_model.hpp"

namespace hjmlevy {

// One trajectory of the driver with jumps below epsilon_cut replaced by their mean
// rate: L(t) = effective_drift * t + sum of jumps up to t. effective_drift equals
// the model drift minus the compensator of the retained jumps in [eps, 1), which is
// the same as adding int_0^eps y nu(dy) to the fully uncompensated drift when that
// integral is finite.
struct JumpPath {
  double horizon = 0.0;
  double model_drift = 0.0;
  double effective_drift = 0.0;
  double epsilon_cut = 0.0;
  ExtReal compensator_adjustment;  // int_0^eps y nu(dy); flagged infinite when it is
  std::vector<double> jump_times;  // strictly increasing in (0, horizon]
  std::vector<double> jump_sizes;  // positive, aligned with jump_times

  double value(double t) const;  // L(t), jumps counted at their exact times
};

// Deterministic substream derived from (seed, path index); equal inputs give equal
// streams regardless of thread scheduling.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t path_index);

// Compound-Poisson draw of the jumps of size >= epsilon_cut on (0, horizon].
// Requires q = 0, support in [0, inf), A4 at the implied bound, epsilon_cut > 0.
JumpPath simulate_path(const LevyModel& model, double horizon, std::uint64_t seed,
                       double epsilon_cut);

// Coarsens a path to a larger cutoff by dropping jumps below new_eps and folding
// their mean rate back into the drift; couples refinement studies on one draw.
JumpPath truncate_to_epsilon(const JumpPath& path, const LevyModel& model, double new_eps);

// Stochastic-exponential driver on the grid:
//   field(t_i, T_j) = f0(T_j) * exp(effective_drift * int_0^{t_i} lam(s, T_j) ds)
//                   * prod_{jumps at tau <= t_i} (1 + lam(tau, T_j) * Y)
// The time integral is a composite trapezoid on the s-nodes; jumps enter at their
// exact times. Throws if any factor 1 + lam*Y fails to be positive.
DrivingField driving_field(const JumpPath& path, const VolatilitySurface& lam,
                           const InitialCurve& f0, const TriangularGrid& grid);

}  // namespace hjmlevy
