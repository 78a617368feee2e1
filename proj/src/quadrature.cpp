#include "hjmlevy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hjmlevy {

namespace {

struct AdaptState {
  const ScalarFn& f;
  const QuadOptions& opt;
  long evals = 0;
  bool bad_sample = false;  // non-finite integrand value seen
  bool budget_ok = true;

  double eval(double x) {
    ++evals;
    if (evals > opt.max_evals) budget_ok = false;
    const double v = f(x);
    if (!std::isfinite(v)) bad_sample = true;
    return v;
  }
};

double simpson(double fa, double fm, double fb, double width) {
  return width / 6.0 * (fa + 4.0 * fm + fb);
}

// Classic adaptive Simpson with Richardson extrapolation; accumulates an error
// estimate in err.
double adapt(AdaptState& st, double a, double b, double fa, double fm, double fb,
             double whole, double tol, int depth, double& err) {
  if (st.bad_sample || !st.budget_ok) return whole;
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.eval(lm);
  const double frm = st.eval(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return adapt(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, err) +
         adapt(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, err);
}

QuadResult integrate_impl(AdaptState& st, double a, double b) {
  QuadResult res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  const double m = 0.5 * (a + b);
  const double fa = st.eval(a);
  const double fm = st.eval(m);
  const double fb = st.eval(b);
  const double whole = simpson(fa, fm, fb, b - a);
  const double tol = std::max(st.opt.abs_tol, st.opt.rel_tol * std::abs(whole));
  double err = 0.0;
  res.value = adapt(st, a, b, fa, fm, fb, whole, tol, st.opt.max_depth, err);
  res.abs_error = err;
  res.evals = st.evals;
  if (st.bad_sample) {
    res.divergent = true;
    return res;
  }
  res.converged = st.budget_ok &&
                  err <= 2.0 * std::max(st.opt.abs_tol, st.opt.rel_tol * std::abs(res.value)) * 16.0;
  return res;
}

// Shared panel-summing loop. next_panel(k) yields [lo_k, hi_k]; panels must tile the
// domain in order of decreasing expected contribution for the stopping rule to apply.
template <typename PanelFn>
QuadResult sum_panels(const ScalarFn& f, const QuadOptions& opt, PanelFn next_panel,
                      int max_panels) {
  QuadResult res;
  double prev_mag = 0.0;
  int quiet = 0;      // consecutive panels below the relative cutoff
  int no_decay = 0;   // consecutive panels failing to decay
  for (int k = 0; k < max_panels; ++k) {
    auto [lo, hi] = next_panel(k);
    AdaptState st{f, opt};
    QuadResult panel = integrate_impl(st, lo, hi);
    res.evals += panel.evals;
    res.abs_error += panel.abs_error;
    if (panel.divergent) {
      res.divergent = true;
      return res;
    }
    res.value += panel.value;
    const double mag = std::abs(panel.value);
    if (std::abs(res.value) > opt.divergence_threshold) {
      res.divergent = true;
      return res;
    }
    if (k > 0 && mag >= 0.9995 * prev_mag && mag > opt.abs_tol) {
      if (++no_decay >= 24) {
        res.divergent = true;
        return res;
      }
    } else {
      no_decay = 0;
    }
    prev_mag = mag;
    const double cutoff = std::max(opt.abs_tol, opt.rel_tol * std::abs(res.value));
    if (mag <= cutoff) {
      if (++quiet >= 3) {
        res.converged = true;
        res.abs_error += mag;  // geometric tail allowance
        return res;
      }
    } else {
      quiet = 0;
    }
    if (res.evals > opt.max_evals) return res;  // budget exhausted, not converged
  }
  return res;
}

}  // namespace

QuadResult integrate(const ScalarFn& f, double a, double b, const QuadOptions& opt) {
  if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");
  AdaptState st{f, opt};
  return integrate_impl(st, a, b);
}

QuadResult integrate_to_zero(const ScalarFn& f, double b, const QuadOptions& opt) {
  if (!(b > 0.0)) throw std::invalid_argument("integrate_to_zero: requires b > 0");
  return sum_panels(
      f, opt,
      [b](int k) {
        const double hi = b * std::ldexp(1.0, -k);
        return std::pair<double, double>(0.5 * hi, hi);
      },
      900);
}

QuadResult integrate_to_infinity(const ScalarFn& f, double a, const QuadOptions& opt) {
  if (!(a > 0.0)) throw std::invalid_argument("integrate_to_infinity: requires a > 0");
  return sum_panels(
      f, opt,
      [a](int k) {
        const double lo = a * std::ldexp(1.0, k);
        return std::pair<double, double>(lo, 2.0 * lo);
      },
      900);
}

QuadResult integrate_power_singularity(const ScalarFn& rest, double power, double x,
                                       const QuadOptions& opt) {
  if (!(power < 1.0)) {
    throw std::invalid_argument("integrate_power_singularity: requires power < 1");
  }
  if (!(x > 0.0)) throw std::invalid_argument("integrate_power_singularity: requires x > 0");
  // u = y^{1-power}:  int_0^x y^{-power} rest(y) dy = 1/(1-power) int_0^{x^{1-power}} rest(u^{1/(1-power)}) du
  const double q = 1.0 - power;
  const double ub = std::pow(x, q);
  auto g = [&rest, q](double u) { return u > 0.0 ? rest(std::pow(u, 1.0 / q)) : rest(0.0); };
  QuadResult res = integrate(g, 0.0, ub, opt);
  res.value /= q;
  res.abs_error /= q;
  return res;
}

}  // namespace hjmlevy
