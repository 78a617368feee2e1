#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hjmlevy/laplace_exponent.hpp"
#include "hjmlevy/levy_model.hpp"

namespace hjmlevy {

enum class Existence { Exists, NotExists, Inconclusive };

std::string to_string(Existence v);

// Regular-variation index of U(x) = int_0^x y^2 nu(dy) near 0, with the diagnostics
// backing the index-one branch of the decision rules.
struct TauberEstimate {
  double rho_hat = 0.0;
  double fit_residual = 0.0;     // max |ln U - fitted line| over the grid
  std::vector<double> x;         // decreasing sample grid
  std::vector<double> u;         // U on the grid
  std::vector<double> m;         // U(x) / x^rho_hat, the slowly varying residual
  bool slow_variation_ok = false;  // x^0.1 < m < x^{-0.1} across the grid

  // Index pinned to one: m1 = U(x)/x. Decay measured against ln ln(1/x), the natural
  // scale for logarithmic correction factors.
  std::vector<double> m1;
  double m1_decay_fit = 0.0;
  bool m1_to_zero = false;            // decay fit >= 0.1 and the values actually drop
  std::vector<double> m1_integral_partial;  // running int m1/x dx from x.front() down
  bool m1_integral_divergent = false;       // decay fit <= 0.9
};

// Least-squares fit of ln U against ln x over x_grid (strictly decreasing, positive,
// >= 4 points spanning >= 2 decades). Requires nonnegative support and U > 0 on the
// grid; violations throw std::invalid_argument.
TauberEstimate estimate_rho(const LevyModel& model, const std::vector<double>& x_grid);

struct ClassifyOptions {
  double rho_margin = 0.05;       // half-width of the index band around 1
  double decay_floor = 0.1;       // m1 counts as vanishing above this fit slope
  double decay_ceiling = 0.9;     // int m1/x counts as divergent below this fit slope
  std::vector<double> x_grid;     // Tauber grid; empty = geometric 1e-2 .. 1e-12
  GrowthOptions growth;
};

struct RuleRecord {
  std::string rule;        // stable identifier, e.g. "gaussian_part"
  std::string statement;   // what the rule checked, in words
  std::string diagnostics; // the numbers the decision used
  bool conclusive = false;
  Existence outcome = Existence::Inconclusive;
};

struct ExistenceVerdict {
  Existence verdict = Existence::Inconclusive;
  std::vector<RuleRecord> evidence;          // every evaluated rule, in order
  std::optional<TauberEstimate> tauber;
  std::optional<GrowthReport> growth;
};

// Decision procedure, rules in fixed priority order:
//   1. gaussian_part:       q > 0                                -> no bounded field
//   2. negative_jumps:      nu((-1/lambda_bar, 0)) > 0           -> no bounded field
//   3. bounded_drift:       support >= 0 and int_0^1 y nu finite -> bounded field
//   4. variation_index:     rho_hat beyond the band decides; inside the band a
//      density with vanishing m1 and divergent int m1/x decides existence
//   5. derivative_growth:   sub-logarithmic / super-cube-log scan of J'
// The first conclusive rule wins. Assumption failures (A2/A4 at lambda_bar) throw
// AssumptionError instead of returning a verdict.
ExistenceVerdict classify(const LevyModel& model, double lambda_lo, double lambda_bar,
                          double t_star, const ClassifyOptions& opt = {});

}  // namespace hjmlevy
