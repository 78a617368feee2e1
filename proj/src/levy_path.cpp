#include "hjmlevy/levy_path.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace hjmlevy {

double JumpPath::value(double t) const {
  double v = effective_drift * t;
  for (std::size_t k = 0; k < jump_times.size() && jump_times[k] <= t; ++k) {
    v += jump_sizes[k];
  }
  return v;
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t path_index) {
  // splitmix64 of the pair; full-period mixing keeps substreams decorrelated.
  std::uint64_t x = seed + 0x9E3779B97F4A7C15ull * (path_index + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

JumpPath simulate_path(const LevyModel& model, double horizon, std::uint64_t seed,
                       double epsilon_cut) {
  if (!(horizon > 0.0)) throw std::invalid_argument("simulate_path: requires horizon > 0");
  if (!(epsilon_cut > 0.0)) {
    throw std::invalid_argument("simulate_path: requires epsilon_cut > 0 (jump activity "
                                "below the cutoff is folded into the drift)");
  }
  if (model.gaussian_q != 0.0) {
    throw std::invalid_argument("simulate_path: Brownian part present; such models have "
                                "no bounded field, see the existence rules");
  }
  if (!model.measure.support_nonnegative()) {
    throw std::invalid_argument("simulate_path: negative jumps present; such models have "
                                "no bounded field, see the existence rules");
  }

  JumpPath path;
  path.horizon = horizon;
  path.model_drift = model.drift;
  path.epsilon_cut = epsilon_cut;
  path.compensator_adjustment = model.measure.moment_on(1, 0.0, epsilon_cut);

  // Mean of the compensated jumps kept in [eps, 1): moving it into the drift makes
  // the truncated path unbiased for L.
  const ExtReal kept = model.measure.moment_on(1, epsilon_cut, 1.0);
  if (!kept.finite) throw std::runtime_error("simulate_path: first moment on [eps,1) diverged");
  path.effective_drift = model.drift - kept.value;

  if (model.measure.is_zero()) return path;

  const JumpSampler sampler(model.measure, epsilon_cut);
  const double intensity = sampler.total_intensity();
  if (intensity <= 0.0) return path;

  // Draw order is fixed: count, then times, then sizes.
  std::mt19937_64 eng(seed);
  std::poisson_distribution<long> count_law(intensity * horizon);
  const long count = count_law(eng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> times(static_cast<std::size_t>(count));
  for (double& t : times) t = horizon * (1.0 - unit(eng));  // lands in (0, horizon]
  std::sort(times.begin(), times.end());
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (times[k] <= times[k - 1]) {
      times[k] = std::nextafter(times[k - 1], horizon * 2.0);
    }
  }

  path.jump_times = std::move(times);
  path.jump_sizes.resize(path.jump_times.size());
  for (double& y : path.jump_sizes) y = sampler.sample(unit(eng));
  return path;
}

JumpPath truncate_to_epsilon(const JumpPath& path, const LevyModel& model, double new_eps) {
  if (!(new_eps >= path.epsilon_cut)) {
    throw std::invalid_argument("truncate_to_epsilon: cutoff can only grow");
  }
  JumpPath out;
  out.horizon = path.horizon;
  out.model_drift = path.model_drift;
  out.epsilon_cut = new_eps;
  out.compensator_adjustment = model.measure.moment_on(1, 0.0, new_eps);

  // Jumps in [old eps, new eps) are dropped; their mean rate returns to the drift.
  const ExtReal dropped = model.measure.moment_on(1, path.epsilon_cut, new_eps);
  if (!dropped.finite) throw std::runtime_error("truncate_to_epsilon: dropped moment diverged");
  out.effective_drift = path.effective_drift + dropped.value;

  for (std::size_t k = 0; k < path.jump_times.size(); ++k) {
    if (path.jump_sizes[k] >= new_eps) {
      out.jump_times.push_back(path.jump_times[k]);
      out.jump_sizes.push_back(path.jump_sizes[k]);
    }
  }
  return out;
}

DrivingField driving_field(const JumpPath& path, const VolatilitySurface& lam,
                           const InitialCurve& f0, const TriangularGrid& grid) {
  if (!(grid.t_star <= path.horizon)) {
    throw std::invalid_argument("driving_field: grid extends past the simulated horizon");
  }
  DrivingField field(grid);
  const double dt = grid.dt();
  const std::size_t m = path.jump_times.size();

  for (int j = 0; j <= grid.n; ++j) {
    const double maturity = grid.node(j);
    const double base = f0(maturity);
    if (!(base > 0.0)) {
      throw std::invalid_argument("driving_field: initial curve must be positive");
    }
    double lam_prev = lam(0.0, maturity);
    double drift_integral = 0.0;  // trapezoid of lam(s, T_j) over [0, t_i]
    double jump_sum = 0.0;        // sum of ln(1 + lam(tau, T_j) Y) for tau <= t_i
    std::size_t k = 0;
    for (int i = 0; i <= j; ++i) {
      if (i > 0) {
        const double lam_cur = lam(grid.node(i), maturity);
        drift_integral += 0.5 * dt * (lam_prev + lam_cur);
        lam_prev = lam_cur;
      }
      const double t = grid.node(i);
      for (; k < m && path.jump_times[k] <= t; ++k) {
        const double factor = lam(path.jump_times[k], maturity) * path.jump_sizes[k];
        if (!(1.0 + factor > 0.0)) {
          throw std::runtime_error("driving_field: jump factor 1 + lam*Y not positive");
        }
        jump_sum += std::log1p(factor);
      }
      field.at(i, j) = base * std::exp(path.effective_drift * drift_integral + jump_sum);
    }
  }
  return field;
}

}  // namespace hjmlevy
