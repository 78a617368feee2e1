#include "hjmlevy/field_solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace hjmlevy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double checked_at(const TriField& f, int i, int j) { return f.at(i, j); }

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "CONVERGED";
    case SolveStatus::Diverged: return "DIVERGED";
    case SolveStatus::Stalled: return "STALLED";
  }
  return "UNKNOWN";
}

TriField apply_A(const TriField& h, const DrivingField& a, const VolatilitySurface& lam,
                 const ScalarFn& jprime) {
  if (!h.grid().same_shape(a.grid())) {
    throw std::invalid_argument("apply_A: iterate and coefficient field use different grids");
  }
  if (!jprime) throw std::invalid_argument("apply_A: requires a derivative function");
  const double jp0 = jprime(0.0);
  if (!std::isfinite(jp0)) {
    throw std::invalid_argument("apply_A: requires finite jprime(0)");
  }
  if (!a.all_finite() || a.min_value() < 0.0) {
    throw std::invalid_argument("apply_A: coefficient field must be finite and nonnegative");
  }

  const TriangularGrid& grid = h.grid();
  const double dt = grid.dt();
  TriField exponent_rate(grid);  // jprime(int_s^T lam h du) * lam(s, T) at (s, T)

  for (int k = 0; k <= grid.n; ++k) {
    const double t_k = grid.node(k);
    double inner = 0.0;  // running trapezoid of lam(t_k, u) h(t_k, u) in u
    double g_prev = lam(t_k, t_k) * checked_at(h, k, k);
    exponent_rate.at(k, k) = jp0 * lam(t_k, t_k);
    for (int j = k + 1; j <= grid.n; ++j) {
      const double g_cur = lam(t_k, grid.node(j)) * checked_at(h, k, j);
      inner += 0.5 * dt * (g_prev + g_cur);
      g_prev = g_cur;
      if (std::isfinite(inner)) {
        exponent_rate.at(k, j) = jprime(inner) * lam(t_k, grid.node(j));
      } else {
        exponent_rate.at(k, j) = kInf;
      }
    }
  }

  TriField out(grid);
  for (int j = 0; j <= grid.n; ++j) {
    double accum = 0.0;  // running trapezoid of exponent_rate(s, T_j) in s
    out.at(0, j) = a.at(0, j);
    for (int i = 1; i <= j; ++i) {
      accum += 0.5 * dt * (exponent_rate.at(i - 1, j) + exponent_rate.at(i, j));
      const double v = a.at(i, j) * std::exp(accum);
      out.at(i, j) = std::isnan(v) ? kInf : v;
    }
  }
  return out;
}

std::optional<double> bound_constant_c(double K, const ScalarFn& jprime, double lambda_bar,
                                       double t_star, double c_max) {
  if (!(K > 0.0)) throw std::invalid_argument("bound_constant_c: requires K > 0");
  if (!(lambda_bar > 0.0)) throw std::invalid_argument("bound_constant_c: requires lambda_bar > 0");
  if (!(t_star > 0.0)) throw std::invalid_argument("bound_constant_c: requires t_star > 0");
  if (!(c_max >= K)) throw std::invalid_argument("bound_constant_c: requires c_max >= K");
  if (!jprime) throw std::invalid_argument("bound_constant_c: requires a derivative function");

  const double log_k = std::log(K);
  const auto admissible = [&](double c) {
    const double rhs = jprime(lambda_bar * c * t_star);
    return log_k + lambda_bar * t_star * rhs <= std::log(c);
  };

  if (admissible(K)) return K;

  double lo = K;  // known inadmissible
  double hi = K;
  bool found = false;
  while (hi < c_max) {
    hi = std::min(hi * 2.0, c_max);
    if (admissible(hi)) {
      found = true;
      break;
    }
    lo = hi;
  }
  if (!found) return std::nullopt;

  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (admissible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

SolveOutcome solve_fixed_point(const DrivingField& a, const VolatilitySurface& lam,
                               const ScalarFn& jprime, const SolveOptions& opt) {
  if (!(opt.tol > 0.0)) throw std::invalid_argument("solve_fixed_point: requires tol > 0");
  if (opt.max_iters < 1) throw std::invalid_argument("solve_fixed_point: requires max_iters >= 1");
  if (!(opt.blowup_threshold > 0.0)) {
    throw std::invalid_argument("solve_fixed_point: requires blowup_threshold > 0");
  }

  SolveOutcome out;
  out.field = TriField(a.grid());  // iteration starts from the zero field

  const double peak = a.max_value();
  if (peak > 0.0) {
    out.bound_c = bound_constant_c(peak, jprime, lam.upper_bound(), a.grid().t_star, opt.c_max);
  }

  TriField cur = out.field;
  for (int iter = 1; iter <= opt.max_iters; ++iter) {
    TriField next = apply_A(cur, a, lam, jprime);

    double residual = 0.0;
    int bad_i = -1, bad_j = -1;
    for (int i = 0; i <= a.grid().n; ++i) {
      for (int j = i; j <= a.grid().n; ++j) {
        const double v = next.at(i, j);
        const double step = std::fabs(v - cur.at(i, j));
        if (std::isnan(step)) {
          residual = kInf;
        } else if (step > residual) {
          residual = step;
        }
        if (!(v <= opt.blowup_threshold) && bad_i < 0) {
          bad_i = i;
          bad_j = j;
        }
      }
    }

    out.iterations = iter;
    out.sup_residual = residual;
    out.residual_history.push_back(residual);
    out.field = std::move(next);

    if (bad_i >= 0) {
      out.status = SolveStatus::Diverged;
      out.blowup_i = bad_i;
      out.blowup_j = bad_j;
      return out;
    }
    if (residual <= opt.tol) {
      out.status = SolveStatus::Converged;
      return out;
    }
    cur = out.field;
  }
  out.status = SolveStatus::Stalled;
  return out;
}

double minorant_h(double x, double y, double t, double T) {
  const double w = x - t + y - T;
  if (!(w > 0.0)) return kInf;
  return std::exp(1.0 / w);
}

double cube_log_envelope(double alpha, double gamma, double z) {
  if (!(alpha > 0.0)) throw std::invalid_argument("cube_log_envelope: requires alpha > 0");
  if (!(gamma >= 1.0)) throw std::invalid_argument("cube_log_envelope: requires gamma >= 1");
  if (!(z >= 0.0)) throw std::invalid_argument("cube_log_envelope: requires z >= 0");
  const double u = std::log(gamma * (z + std::exp(2.0)));
  return alpha * u * u * u;
}

double cube_log_lipschitz(double alpha, double gamma) {
  if (!(alpha > 0.0)) throw std::invalid_argument("cube_log_lipschitz: requires alpha > 0");
  if (!(gamma >= 1.0)) throw std::invalid_argument("cube_log_lipschitz: requires gamma >= 1");
  // Concavity for gamma >= 1 puts the largest slope at zero.
  const double s = 2.0 + std::log(gamma);
  return 3.0 * alpha * s * s / std::exp(2.0);
}

void validate_minorant_regime(double alpha, double gamma, double x, double y, double t_star) {
  if (!(alpha > 0.0)) throw std::invalid_argument("minorant regime: requires alpha > 0");
  if (!(gamma >= 1.0)) throw std::invalid_argument("minorant regime: requires gamma >= 1");
  if (!(alpha * gamma > 2.0)) throw std::invalid_argument("minorant regime: requires alpha*gamma > 2");
  if (!(gamma * t_star > 1.0)) {
    throw std::invalid_argument("minorant regime: requires gamma*t_star > 1");
  }
  if (!(x > 0.0)) throw std::invalid_argument("minorant regime: requires x > 0");
  if (!(x < y)) throw std::invalid_argument("minorant regime: requires x < y");
  if (!(y < 0.5 * alpha)) throw std::invalid_argument("minorant regime: requires y < alpha/2");
  if (!(y < t_star)) throw std::invalid_argument("minorant regime: requires y < t_star");
  if (!(gamma * (y - x) > 1.0)) {
    throw std::invalid_argument("minorant regime: requires gamma*(y - x) > 1");
  }
}

TriField damped_minorant_field(double x, double y, double alpha, double gamma,
                               const TriangularGrid& grid) {
  validate_minorant_regime(alpha, gamma, x, y, grid.t_star);
  const double dt = grid.dt();
  const double slack = 1e-9 * grid.t_star;
  TriField g(grid);

  // The comparison lives on the corner rectangle {t <= x, T <= y} of the triangle,
  // where the kernel is singular only at the apex (x, y); there g extends by its
  // continuity value 0. Nodes outside the rectangle stay 0 and are never compared.
  std::vector<double> rate(std::size_t(grid.n) + 1, 0.0);
  for (int j = 0; j <= grid.n; ++j) {
    const double maturity = grid.node(j);
    if (maturity > y + slack) break;

    int top = -1;  // last row of the rectangle in this column
    for (int k = 0; k <= j && grid.node(k) <= x + slack; ++k) top = k;

    for (int k = 0; k <= top; ++k) {
      const double s = grid.node(k);
      double mass = 0.0;  // trapezoid of h(s, u) for u in [s, T_j]
      double prev = minorant_h(x, y, s, s);
      for (int m = k + 1; m <= j; ++m) {
        const double cur = minorant_h(x, y, s, grid.node(m));
        mass += 0.5 * dt * (prev + cur);
        prev = cur;
      }
      rate[std::size_t(k)] = cube_log_envelope(alpha, gamma, mass);
    }

    double damping = 0.0;  // trapezoid of rate(s) for s in [0, t_i]
    for (int i = 0; i <= top; ++i) {
      if (i > 0) damping += 0.5 * dt * (rate[std::size_t(i) - 1] + rate[std::size_t(i)]);
      const double h_val = minorant_h(x, y, grid.node(i), maturity);
      // an overflowed kernel value only happens against the apex, where the
      // damping wins and the continuous extension is 0
      g.at(i, j) = std::isfinite(h_val) ? h_val * std::exp(-damping) : 0.0;
    }
  }
  return g;
}

DominanceReport verify_minorant_dominance(const SolveOutcome& outcome, const DrivingField& a,
                                          double x, double y, double alpha, double gamma,
                                          double beta, double delta) {
  if (!(delta > 0.0 && delta < y)) {
    throw std::invalid_argument("verify_minorant_dominance: requires 0 < delta < y");
  }
  if (!outcome.field.grid().same_shape(a.grid())) {
    throw std::invalid_argument("verify_minorant_dominance: outcome and coefficient grids differ");
  }
  const TriangularGrid& grid = a.grid();
  const double slack = 1e-9 * grid.t_star;
  const TriField g = damped_minorant_field(x, y, alpha, gamma, grid);

  DominanceReport report;
  report.hypothesis_margin = kInf;
  for (int i = 0; i <= grid.n && grid.node(i) <= x + slack; ++i) {
    for (int j = i; j <= grid.n && grid.node(j) <= y + slack; ++j) {
      const double lhs = std::exp(beta * grid.node(i)) * a.at(i, j);
      const double margin = lhs - g.at(i, j);
      if (margin < report.hypothesis_margin) report.hypothesis_margin = margin;
    }
  }
  report.hypothesis_ok = report.hypothesis_margin >= 0.0;

  // Domination is claimed on the delta-trimmed rectangle {t <= x, T <= y - delta},
  // where the kernel is bounded by e^{1/delta}.
  for (int i = 0; i <= grid.n && grid.node(i) <= x + slack; ++i) {
    for (int j = i; j <= grid.n && grid.node(j) <= y - delta + slack; ++j) {
      ++report.nodes_checked;
      const double h_val = minorant_h(x, y, grid.node(i), grid.node(j));
      const double f_val = outcome.field.at(i, j);
      if (f_val >= h_val) {
        ++report.nodes_satisfied;
      } else if (h_val - f_val > report.max_violation) {
        report.max_violation = h_val - f_val;
      }
    }
  }
  report.dominated = report.hypothesis_ok && report.nodes_checked > 0 &&
                     report.nodes_satisfied == report.nodes_checked;
  return report;
}

}  // namespace hjmlevy
