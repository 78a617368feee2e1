#include "hjmlevy/levy_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace hjmlevy {
namespace {

std::string ext_to_string(const ExtReal& v) {
  if (!v.finite) return "inf";
  std::ostringstream os;
  os << v.value;
  return os.str();
}

}  // namespace

std::string AssumptionReport::summary() const {
  std::ostringstream os;
  os << "a1(initial curve > 0): " << (a1_ok ? "ok" : "FAIL") << " (min " << f0_min << ")\n";
  os << "a2(support above -1/lambda_bar): " << (a2_ok ? "ok" : "FAIL") << " (support ["
     << support_lo << ", " << support_hi << "), -1/lambda_bar = " << -1.0 / lambda_bar << ")\n";
  os << "a4(moment bounds): " << (a4_ok ? "ok" : "FAIL")
     << " (square part " << ext_to_string(a4_square_part)
     << ", tail part " << ext_to_string(a4_tail_part) << ")\n";
  os << "a3(volatility structure): " << a3_note;
  return os.str();
}

AssumptionError::AssumptionError(AssumptionReport report)
    : std::runtime_error("model assumptions violated:\n" + report.summary()),
      report_(std::move(report)) {}

MomentIntegrals moment_integrals(const LevyModel& model, double lambda_bar) {
  if (!(lambda_bar > 0.0)) throw std::invalid_argument("lambda_bar must be positive");
  const double lo = -1.0 / lambda_bar;
  MomentIntegrals m;
  m.tail_first = model.measure.moment_on(1, 1.0, std::numeric_limits<double>::infinity());
  m.small_square = model.measure.moment_on(2, lo, 1.0);
  m.small_first = model.measure.moment_on(1, 0.0, 1.0);
  m.neg_mass = model.measure.moment_on(0, lo, 0.0);
  return m;
}

namespace {

AssumptionReport build_report(const LevyModel& model, double lambda_bar, const std::string& a3_note,
                              const InitialCurve& f0, double t_star) {
  if (!(lambda_bar > 0.0)) throw std::invalid_argument("lambda_bar must be positive");
  if (!(t_star > 0.0)) throw std::invalid_argument("t_star must be positive");
  if (model.gaussian_q < 0.0) throw std::invalid_argument("gaussian_q must be nonnegative");

  AssumptionReport r;
  r.lambda_bar = lambda_bar;
  r.t_star = t_star;
  r.a3_note = a3_note;

  r.f0_min = f0.min_on(t_star);
  r.a1_ok = r.f0_min > 0.0;

  r.support_lo = model.measure.support_lo();
  r.support_hi = model.measure.support_hi();
  const double barrier = -1.0 / lambda_bar;
  // Open left endpoint at the barrier itself is admissible.
  r.a2_ok = model.measure.is_zero() || r.support_lo > barrier ||
            (r.support_lo == barrier && model.measure.open_at_lo());

  const MomentIntegrals m = moment_integrals(model, lambda_bar);
  r.a4_square_part = m.small_square;
  r.a4_tail_part = m.tail_first;
  r.a4_ok = m.small_square.finite && m.tail_first.finite;
  return r;
}

}  // namespace

AssumptionReport validate_assumptions(const LevyModel& model, const VolatilitySurface& lam,
                                      const InitialCurve& f0, double t_star) {
  std::string note = lam.separable_form()
                         ? "separable product form with positive factors: ok"
                         : "custom surface: positivity bounds supplied, product form not checked";
  return build_report(model, lam.upper_bound(), note, f0, t_star);
}

AssumptionReport validate_assumptions(const LevyModel& model, double lambda_bar,
                                      const InitialCurve& f0, double t_star) {
  return build_report(model, lambda_bar, "not checked (bound-only validation)", f0, t_star);
}

double u_nu(const LevyMeasureSpec& measure, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("u_nu requires x > 0");
  if (measure.is_zero()) return 0.0;
  if (measure.has_closed_u()) return measure.u_closed(x);

  if (measure.family() == MeasureFamily::LogModified) {
    // U(x) = int_0^x (ln 1/y)^{-g} dy = x * int_0^inf e^{-w} (L+w)^{-g} dw, L = ln 1/x.
    // The rescaled integrand has unit scale, so tiny x keeps full relative accuracy.
    const double xm = std::min(x, measure.support_hi());
    const double ell = std::log(1.0 / xm);
    const double g = measure.param_gamma();
    auto integrand = [ell, g](double w) { return std::exp(-w) * std::pow(ell + w, -g); };
    QuadResult head = integrate(integrand, 0.0, 1.0);
    QuadResult tail = integrate_to_infinity(integrand, 1.0);
    if (!head.converged || !tail.converged || head.divergent || tail.divergent) {
      throw std::runtime_error("u_nu: rescaled quadrature did not settle");
    }
    return xm * (head.value + tail.value);
  }

  const ExtReal v = measure.moment_on(2, 0.0, std::nextafter(x, std::numeric_limits<double>::infinity()));
  if (!v.finite) throw std::runtime_error("second moment below x diverged");
  return v.value;
}

double u_nu(const LevyModel& model, double x) { return u_nu(model.measure, x); }

}  // namespace hjmlevy
