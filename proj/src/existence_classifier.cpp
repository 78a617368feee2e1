#include "hjmlevy/existence_classifier.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hjmlevy {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = double(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  LineFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    f.max_residual = std::max(f.max_residual, std::abs(ys[i] - (f.intercept + f.slope * xs[i])));
  }
  return f;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string ext_str(const ExtReal& v) { return v.finite ? fmt(v.value) : "inf"; }

std::vector<double> default_x_grid() {
  std::vector<double> g;
  const int points = 21;
  for (int i = 0; i < points; ++i) {
    // geometric from 1e-2 down to 1e-12
    g.push_back(std::pow(10.0, -2.0 - 10.0 * double(i) / double(points - 1)));
  }
  return g;
}

}  // namespace

std::string to_string(Existence v) {
  switch (v) {
    case Existence::Exists: return "EXISTS";
    case Existence::NotExists: return "NOT_EXISTS";
    case Existence::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

TauberEstimate estimate_rho(const LevyModel& model, const std::vector<double>& x_grid) {
  if (!model.measure.support_nonnegative()) {
    throw std::invalid_argument("estimate_rho: requires nonnegative jump support");
  }
  if (x_grid.size() < 4) throw std::invalid_argument("estimate_rho: needs >= 4 grid points");
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    if (!(x_grid[i] > 0.0)) throw std::invalid_argument("estimate_rho: grid must be positive");
    if (i > 0 && !(x_grid[i] < x_grid[i - 1])) {
      throw std::invalid_argument("estimate_rho: grid must be strictly decreasing");
    }
  }
  if (!(x_grid.front() / x_grid.back() >= 100.0)) {
    throw std::invalid_argument("estimate_rho: grid must span at least two decades");
  }

  TauberEstimate est;
  est.x = x_grid;
  est.u.reserve(x_grid.size());
  std::vector<double> lnx, lnu;
  for (double x : x_grid) {
    const double u = u_nu(model, x);
    if (!(u > 0.0)) throw std::invalid_argument("estimate_rho: U must be positive on the grid");
    est.u.push_back(u);
    lnx.push_back(std::log(x));
    lnu.push_back(std::log(u));
  }

  const LineFit fit = least_squares(lnx, lnu);
  est.rho_hat = fit.slope;
  est.fit_residual = fit.max_residual;

  est.slow_variation_ok = true;
  std::vector<double> lnlninv, ln_m1;
  for (std::size_t i = 0; i < est.x.size(); ++i) {
    const double m = est.u[i] / std::pow(est.x[i], est.rho_hat);
    est.m.push_back(m);
    const double band = std::pow(est.x[i], 0.1);
    if (!(m > band && m < 1.0 / band)) est.slow_variation_ok = false;

    est.m1.push_back(est.u[i] / est.x[i]);
    lnlninv.push_back(std::log(std::log(1.0 / est.x[i])));
    ln_m1.push_back(std::log(est.m1.back()));
  }

  // Decay of m1 on the iterated-log scale: slope s means m1 ~ (ln 1/x)^{-s}, for
  // which int m1/x dx diverges at 0 exactly when s <= 1.
  const LineFit decay = least_squares(lnlninv, ln_m1);
  est.m1_decay_fit = -decay.slope;
  est.m1_to_zero = est.m1_decay_fit >= 0.1 && est.m1.back() < est.m1.front();
  est.m1_integral_divergent = est.m1_decay_fit <= 0.9;

  // Running trapezoid of int m1(x)/x dx = int m1 d(ln x) from the largest x down.
  double acc = 0.0;
  est.m1_integral_partial.push_back(0.0);
  for (std::size_t i = 1; i < est.x.size(); ++i) {
    acc += 0.5 * (est.m1[i] + est.m1[i - 1]) * (lnx[i - 1] - lnx[i]);
    est.m1_integral_partial.push_back(acc);
  }
  return est;
}

ExistenceVerdict classify(const LevyModel& model, double lambda_lo, double lambda_bar,
                          double t_star, const ClassifyOptions& opt) {
  if (!(lambda_lo > 0.0)) throw std::invalid_argument("classify: requires lambda_lo > 0");
  if (!(lambda_bar >= lambda_lo)) {
    throw std::invalid_argument("classify: requires lambda_bar >= lambda_lo");
  }
  if (!(t_star > 0.0)) throw std::invalid_argument("classify: requires t_star > 0");
  if (model.gaussian_q < 0.0) throw std::invalid_argument("classify: gaussian_q negative");

  // Standing assumptions at this volatility bound; violations are not verdicts.
  {
    AssumptionReport rep;
    rep.lambda_bar = lambda_bar;
    rep.t_star = t_star;
    rep.a1_ok = true;
    rep.a3_note = "not part of this check";
    rep.f0_min = kInf;
    rep.support_lo = model.measure.support_lo();
    rep.support_hi = model.measure.support_hi();
    const double barrier = -1.0 / lambda_bar;
    rep.a2_ok = model.measure.is_zero() || rep.support_lo > barrier ||
                (rep.support_lo == barrier && model.measure.open_at_lo());
    const MomentIntegrals mom = moment_integrals(model, lambda_bar);
    rep.a4_square_part = mom.small_square;
    rep.a4_tail_part = mom.tail_first;
    rep.a4_ok = mom.small_square.finite && mom.tail_first.finite;
    if (!rep.a2_ok || !rep.a4_ok) throw AssumptionError(rep);
  }

  ExistenceVerdict out;
  const MomentIntegrals mom = moment_integrals(model, lambda_bar);

  auto conclude = [&out](RuleRecord rec, Existence verdict) {
    rec.conclusive = true;
    rec.outcome = verdict;
    out.evidence.push_back(std::move(rec));
    out.verdict = verdict;
  };
  auto pass_through = [&out](RuleRecord rec) {
    rec.conclusive = false;
    rec.outcome = Existence::Inconclusive;
    out.evidence.push_back(std::move(rec));
  };

  {
    RuleRecord r{"gaussian_part",
                 "a Brownian component forces unbounded oscillation of any candidate field",
                 "q = " + fmt(model.gaussian_q)};
    if (model.gaussian_q > 0.0) {
      conclude(std::move(r), Existence::NotExists);
      return out;
    }
    pass_through(std::move(r));
  }

  {
    const bool infinite = !mom.neg_mass.finite;
    const double mass = infinite ? kInf : mom.neg_mass.value;
    RuleRecord r{"negative_jumps",
                 "downward jumps admitted by the support bound kill positivity",
                 "nu((-1/lambda_bar, 0)) = " + ext_str(mom.neg_mass)};
    if (infinite || mass > 0.0) {
      conclude(std::move(r), Existence::NotExists);
      return out;
    }
    pass_through(std::move(r));
  }

  {
    RuleRecord r{"bounded_drift",
                 "nonnegative jumps with summable small jumps keep J' bounded above",
                 "int_0^1 y nu = " + ext_str(mom.small_first) +
                     ", support_lo = " + fmt(model.measure.support_lo())};
    if (model.measure.support_nonnegative() && mom.small_first.finite) {
      conclude(std::move(r), Existence::Exists);
      return out;
    }
    pass_through(std::move(r));
  }

  // Reaching this point the support is nonnegative (negative mass concluded above)
  // and the measure is nonzero (zero measure concluded at the previous rule).
  {
    const std::vector<double> grid = opt.x_grid.empty() ? default_x_grid() : opt.x_grid;
    TauberEstimate est = estimate_rho(model, grid);
    std::ostringstream diag;
    diag << "rho_hat = " << est.rho_hat << ", fit residual = " << est.fit_residual
         << ", m1 decay fit = " << est.m1_decay_fit
         << ", m1 to zero = " << (est.m1_to_zero ? "yes" : "no")
         << ", int m1/x divergent = " << (est.m1_integral_divergent ? "yes" : "no");
    RuleRecord r{"variation_index",
                 "index of regular variation of the small-jump second moment at 0",
                 diag.str()};
    const double lo_band = 1.0 - opt.rho_margin, hi_band = 1.0 + opt.rho_margin;
    const bool to_zero = est.m1_decay_fit >= opt.decay_floor && est.m1.back() < est.m1.front();
    const bool divergent = est.m1_decay_fit <= opt.decay_ceiling;
    Existence verdict = Existence::Inconclusive;
    if (est.rho_hat > hi_band) {
      verdict = Existence::Exists;
    } else if (est.rho_hat < lo_band) {
      verdict = Existence::NotExists;
    } else if (model.measure.has_density() && to_zero && divergent) {
      verdict = Existence::Exists;
    }
    out.tauber = std::move(est);
    if (verdict != Existence::Inconclusive) {
      conclude(std::move(r), verdict);
      return out;
    }
    pass_through(std::move(r));
  }

  {
    const LaplaceExponent exponent(model);
    GrowthReport rep = growth_classify(exponent, lambda_bar, t_star, opt.growth);
    std::ostringstream diag;
    diag << "gap at top = " << rep.gap_top << ", gap monotone = "
         << (rep.gap_monotone ? "yes" : "no") << ", min J'/ln^3 z = " << rep.min_cube_ratio;
    RuleRecord r{"derivative_growth",
                 "growth of J' at infinity against the logarithm and its cube",
                 diag.str()};
    const GrowthClass kind = rep.verdict;
    out.growth = std::move(rep);
    if (kind == GrowthClass::Sublogarithmic) {
      conclude(std::move(r), Existence::Exists);
    } else if (kind == GrowthClass::SuperCubeLog) {
      conclude(std::move(r), Existence::NotExists);
    } else {
      pass_through(std::move(r));
      out.verdict = Existence::Inconclusive;
    }
  }
  return out;
}

}  // namespace hjmlevy
