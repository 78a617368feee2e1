#pragma once

#include <stdexcept>
#include <string>

#include "hjmlevy/curves.hpp"
#include "hjmlevy/levy_measure.hpp"

namespace hjmlevy {

// Driving-noise triplet: deterministic drift, Brownian coefficient q >= 0 and jump
// measure. The process is L(t) = drift*t + sqrt(q) W(t) + jumps (small jumps
// compensated at |y| < 1).
struct LevyModel {
  double drift = 0.0;
  double gaussian_q = 0.0;
  LevyMeasureSpec measure = LevyMeasureSpec::none();
};

// First/second jump moments split the way the structural checks need them.
// Divergent integrals are flagged, never overflowed.
struct MomentIntegrals {
  ExtReal tail_first;    // int_{[1,inf)} y nu(dy)
  ExtReal small_square;  // int_{(-1/lambda_bar, 1)} y^2 nu(dy)
  ExtReal small_first;   // int_{(0,1)} y nu(dy)
  ExtReal neg_mass;      // nu((-1/lambda_bar, 0))
};

struct AssumptionReport {
  bool a1_ok = false;  // f0 positive on the sampled maturity grid
  bool a2_ok = false;  // support(nu) inside (-1/lambda_bar, inf)
  bool a4_ok = false;  // y^2 mass below 1 and first tail moment both finite
  std::string a3_note; // structural note on the volatility representation
  double lambda_bar = 0.0;
  double t_star = 0.0;
  double f0_min = 0.0;
  double support_lo = 0.0, support_hi = 0.0;
  ExtReal a4_square_part;  // int_{(-1/lambda_bar,1)} y^2 nu(dy)
  ExtReal a4_tail_part;    // int_{[1,inf)} y nu(dy)

  bool all_ok() const { return a1_ok && a2_ok && a4_ok; }
  std::string summary() const;
};

// Thrown by operations whose preconditions include a clean AssumptionReport.
class AssumptionError : public std::runtime_error {
 public:
  explicit AssumptionError(AssumptionReport report);
  const AssumptionReport& report() const { return report_; }

 private:
  AssumptionReport report_;
};

MomentIntegrals moment_integrals(const LevyModel& model, double lambda_bar);

AssumptionReport validate_assumptions(const LevyModel& model, const VolatilitySurface& lam,
                                      const InitialCurve& f0, double t_star);
// Overload without the surface: the structural volatility note reports "not checked".
AssumptionReport validate_assumptions(const LevyModel& model, double lambda_bar,
                                      const InitialCurve& f0, double t_star);

// U(x) = int_{(0,x]} y^2 nu(dy); closed form when the family has one, quadrature
// otherwise. Finite for every jump measure and x <= 1. Mass below 0 is ignored.
double u_nu(const LevyModel& model, double x);
double u_nu(const LevyMeasureSpec& measure, double x);

}  // namespace hjmlevy
