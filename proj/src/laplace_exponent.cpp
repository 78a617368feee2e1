#include "hjmlevy/laplace_exponent.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hjmlevy {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// e^{-w} - 1 + w without cancellation near 0.
double em1p(double w) {
  if (std::abs(w) < 1e-3) {
    return w * w *
           (0.5 + w * (-1.0 / 6.0 + w * (1.0 / 24.0 + w * (-1.0 / 120.0 + w / 720.0))));
  }
  return std::expm1(-w) + w;
}

// Truncated-stable pieces over (0,1) with density y^{-1-p}. Small z switches to the
// alternating series; the closed forms cancel badly there.

// int_0^1 y^{-p} (1 - e^{-zy}) dy
double ts_deriv_part(double z, double p) {
  if (z <= 1e-3) {
    double term = z;  // z^n / n!
    double sum = 0.0;
    for (int n = 1; n <= 6; ++n) {
      sum += (n % 2 ? term : -term) / (double(n) + 1.0 - p);
      term *= z / double(n + 1);
    }
    return sum;
  }
  if (p == 1.0) {
    // int_0^z (1 - e^{-u})/u du
    return std::numbers::egamma + std::log(z) - std::expint(-z);
  }
  const double g = boost::math::tgamma_lower(2.0 - p, z);
  return (-std::expm1(-z) - std::pow(z, p - 1.0) * g) / (1.0 - p);
}

// int_0^1 (e^{-zy} - 1 + zy) y^{-1-p} dy
double ts_value_part(double z, double p) {
  if (z <= 1e-3) {
    double term = z * z / 2.0;  // z^n / n!
    double sum = 0.0;
    for (int n = 2; n <= 7; ++n) {
      sum += (n % 2 ? -term : term) / (double(n) - p);
      term *= z / double(n + 1);
    }
    return sum;
  }
  return (z * ts_deriv_part(z, p) - em1p(z)) / p;
}

// int_0^1 y^{1-p} e^{-zy} dy
double ts_second_part(double z, double p) {
  if (z <= 1e-3) {
    double term = 1.0;  // z^n / n!
    double sum = 0.0;
    for (int n = 0; n <= 5; ++n) {
      sum += (n % 2 ? -term : term) / (double(n) + 2.0 - p);
      term *= z / double(n + 1);
    }
    return sum;
  }
  return std::pow(z, p - 2.0) * boost::math::tgamma_lower(2.0 - p, z);
}

// Window of the support strictly inside (-1, 1): compensated jumps.
bool compensated(double y) { return y > -1.0 && y < 1.0; }

double require(const QuadResult& q, const char* what) {
  if (q.divergent || !q.converged) {
    throw std::runtime_error(std::string("quadrature did not settle for ") + what);
  }
  return q.value;
}

// Integrates g(y) dens(y) over [a, b] where 0 <= a < b; a == 0 routes through the
// origin-refining path.
double center_piece(const LevyMeasureSpec& nu, const ScalarFn& g, double a, double b) {
  auto integrand = [&nu, &g](double y) { return g(y) * nu.density(y); };
  if (a > 0.0) return require(integrate(integrand, a, b), "exponent center");
  return require(integrate_to_zero(integrand, b), "exponent center");
}

// Same over [a, b] with a < b <= 0, mirrored onto the positive axis.
double center_piece_neg(const LevyMeasureSpec& nu, const ScalarFn& g, double a, double b) {
  auto integrand = [&nu, &g](double s) { return g(-s) * nu.density(-s); };
  if (b < 0.0) return require(integrate(integrand, -b, -a), "exponent center");
  return require(integrate_to_zero(integrand, -a), "exponent center");
}

// g(y) dens(y) over the support window within (-1, 1).
double center_integral(const LevyMeasureSpec& nu, const ScalarFn& g) {
  const double a = std::max(nu.support_lo(), -1.0);
  const double b = std::min(nu.support_hi(), 1.0);
  if (!(a < b)) return 0.0;
  if (a >= 0.0) return center_piece(nu, g, a, b);
  if (b <= 0.0) return center_piece_neg(nu, g, a, b);
  return center_piece_neg(nu, g, a, 0.0) + center_piece(nu, g, 0.0, b);
}

// g(y) dens(y) over the support window in [1, inf); the integrand must decay if the
// window is unbounded.
double pos_tail_integral(const LevyMeasureSpec& nu, const ScalarFn& g) {
  const double a = std::max(nu.support_lo(), 1.0);
  const double b = nu.support_hi();
  if (!(a < b)) return 0.0;
  auto integrand = [&nu, &g](double y) { return g(y) * nu.density(y); };
  if (b == kInf) return require(integrate_to_infinity(integrand, a), "exponent tail");
  return require(integrate(integrand, a, b), "exponent tail");
}

// g(y) dens(y) over the support window in (-inf, -1]; support_lo is always finite.
double neg_tail_integral(const LevyMeasureSpec& nu, const ScalarFn& g) {
  const double a = nu.support_lo();
  const double b = std::min(nu.support_hi(), -1.0);
  if (!(a < b)) return 0.0;
  auto integrand = [&nu, &g](double y) { return g(y) * nu.density(y); };
  return require(integrate(integrand, a, b), "exponent tail");
}

}  // namespace

LaplaceExponent::LaplaceExponent(const LevyModel& model) : model_(model) {
  if (model.gaussian_q < 0.0) throw std::invalid_argument("gaussian_q must be nonnegative");
  const auto& nu = model_.measure;
  if (nu.is_zero()) return;

  const ExtReal pos = nu.moment_on(1, 1.0, kInf);
  if (!pos.finite) {
    throw std::invalid_argument("exponent undefined: first moment of nu on [1,inf) diverges");
  }
  const ExtReal neg = nu.moment_on(1, -kInf, std::nextafter(-1.0, 0.0));
  if (!neg.finite) throw std::invalid_argument("first moment of nu below -1 diverges");
  tail_first_ = pos.value + neg.value;

  // Window flags steer the density quadrature; atom families sum directly.
  has_center_ = std::max(nu.support_lo(), -1.0) < std::min(nu.support_hi(), 1.0);
  has_pos_tail_ = nu.support_hi() > 1.0;
  has_neg_tail_ = nu.support_lo() < -1.0;
}

LaplaceExponent LaplaceExponent::from_functions(ScalarFn deriv, ScalarFn value,
                                                ScalarFn second) {
  if (!deriv) throw std::invalid_argument("from_functions: requires a derivative callable");
  LaplaceExponent j;
  j.user_ = true;
  j.user_deriv_ = std::move(deriv);
  j.user_value_ = std::move(value);
  j.user_second_ = std::move(second);
  return j;
}

double LaplaceExponent::value(double z) const {
  if (user_) {
    if (!user_value_) throw std::logic_error("synthetic exponent has no value callable");
    return user_value_(z);
  }
  if (z < 0.0) throw std::invalid_argument("value: requires z >= 0");
  double out = -model_.drift * z + 0.5 * model_.gaussian_q * z * z;
  if (z == 0.0) return 0.0;
  const auto& nu = model_.measure;
  if (nu.is_zero()) return out;

  switch (nu.family()) {
    case MeasureFamily::FiniteAtoms: {
      const auto& ys = nu.atom_points();
      const auto& ms = nu.atom_masses();
      for (std::size_t i = 0; i < ys.size(); ++i) {
        out += ms[i] * (compensated(ys[i]) ? em1p(z * ys[i]) : std::expm1(-z * ys[i]));
      }
      return out;
    }
    case MeasureFamily::TruncatedStable:
      return out + ts_value_part(z, nu.param_p());
    default:
      break;
  }

  if (has_center_) out += center_integral(nu, [z](double y) { return em1p(z * y); });
  auto uncomp = [z](double y) { return std::expm1(-z * y); };
  if (has_pos_tail_) out += pos_tail_integral(nu, uncomp);
  if (has_neg_tail_) out += neg_tail_integral(nu, uncomp);
  return out;
}

double LaplaceExponent::deriv(double z) const {
  if (user_) return user_deriv_(z);
  if (z < 0.0) throw std::invalid_argument("deriv: requires z >= 0");
  double out = -model_.drift + model_.gaussian_q * z;
  const auto& nu = model_.measure;
  if (nu.is_zero()) return out;
  if (z == 0.0) return out - tail_first_;

  switch (nu.family()) {
    case MeasureFamily::FiniteAtoms: {
      const auto& ys = nu.atom_points();
      const auto& ms = nu.atom_masses();
      for (std::size_t i = 0; i < ys.size(); ++i) {
        const double y = ys[i], w = std::exp(-z * y);
        out += ms[i] * (compensated(y) ? y * (1.0 - w) : -y * w);
      }
      return out;
    }
    case MeasureFamily::TruncatedStable:
      return out + ts_deriv_part(z, nu.param_p());
    default:
      break;
  }

  if (has_center_) {
    out += center_integral(nu, [z](double y) { return y * -std::expm1(-z * y); });
  }
  auto uncomp = [z](double y) { return -y * std::exp(-z * y); };
  if (has_pos_tail_) out += pos_tail_integral(nu, uncomp);
  if (has_neg_tail_) out += neg_tail_integral(nu, uncomp);
  return out;
}

double LaplaceExponent::second_deriv(double z) const {
  if (user_) {
    if (!user_second_) throw std::logic_error("synthetic exponent has no curvature callable");
    return user_second_(z);
  }
  if (z < 0.0) throw std::invalid_argument("second_deriv: requires z >= 0");
  const auto& nu = model_.measure;
  if (nu.is_zero()) return model_.gaussian_q;
  if (z == 0.0) {
    const ExtReal m2 = nu.moment_on(2, -kInf, kInf);
    return m2.finite ? model_.gaussian_q + m2.value : kInf;
  }

  switch (nu.family()) {
    case MeasureFamily::FiniteAtoms: {
      double out = model_.gaussian_q;
      const auto& ys = nu.atom_points();
      const auto& ms = nu.atom_masses();
      for (std::size_t i = 0; i < ys.size(); ++i) {
        out += ms[i] * ys[i] * ys[i] * std::exp(-z * ys[i]);
      }
      return out;
    }
    case MeasureFamily::TruncatedStable:
      return model_.gaussian_q + ts_second_part(z, nu.param_p());
    default:
      break;
  }

  auto g = [z](double y) { return y * y * std::exp(-z * y); };
  double out = model_.gaussian_q;
  if (has_center_) out += center_integral(nu, g);
  if (has_pos_tail_) out += pos_tail_integral(nu, g);
  if (has_neg_tail_) out += neg_tail_integral(nu, g);
  return out;
}

double LaplaceExponent::deriv_at_zero() const {
  if (user_) return user_deriv_(0.0);
  return -model_.drift - tail_first_;
}

GrowthReport growth_classify(const LaplaceExponent& exponent, double lambda_bar,
                             double t_star, const GrowthOptions& opt) {
  if (!(lambda_bar > 0.0) || !(t_star > 0.0)) {
    throw std::invalid_argument("growth_classify: requires lambda_bar > 0 and t_star > 0");
  }
  if (!(opt.z_min >= 1.0)) throw std::invalid_argument("growth_classify: requires z_min >= 1");
  if (!(opt.z_max > opt.z_min)) throw std::invalid_argument("growth_classify: z_max <= z_min");
  if (opt.points < 8) throw std::invalid_argument("growth_classify: too few grid points");

  GrowthReport r;
  const double scale = lambda_bar * t_star;
  r.scale = scale;
  const int n = opt.points;
  const double step = std::log(opt.z_max / opt.z_min) / double(n - 1);
  r.z.resize(n);
  r.jprime.resize(n);
  r.gap.resize(n);
  for (int i = 0; i < n; ++i) {
    r.z[i] = opt.z_min * std::exp(step * i);
    r.jprime[i] = exponent.deriv(r.z[i]);
    if (!std::isfinite(r.jprime[i])) {
      // Overflowed exponent: no asymptotic call can be made from this grid.
      r.gap[i] = -kInf;
      r.verdict = GrowthClass::Inconclusive;
      r.z.resize(i + 1);
      r.jprime.resize(i + 1);
      r.gap.resize(i + 1);
      return r;
    }
    r.gap[i] = std::log(r.z[i]) - scale * r.jprime[i];
  }

  const int half = n / 2;
  r.gap_monotone = true;
  for (int i = half; i + 1 < n; ++i) {
    const double slack = opt.monotone_slack * std::max(1.0, std::abs(r.gap[i]));
    if (r.gap[i + 1] < r.gap[i] - slack) {
      r.gap_monotone = false;
      break;
    }
  }
  r.gap_top = r.gap.back();

  r.min_cube_ratio = kInf;
  for (int i = half; i < n; ++i) {
    const double l = std::log(r.z[i]);
    r.min_cube_ratio = std::min(r.min_cube_ratio, r.jprime[i] / (l * l * l));
  }

  if (r.gap_monotone && r.gap_top >= opt.sub_margin) {
    r.verdict = GrowthClass::Sublogarithmic;
  } else if (r.min_cube_ratio >= opt.cube_floor) {
    r.verdict = GrowthClass::SuperCubeLog;
  } else {
    r.verdict = GrowthClass::Inconclusive;
  }
  return r;
}

}  // namespace hjmlevy
