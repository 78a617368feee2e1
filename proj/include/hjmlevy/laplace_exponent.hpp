#pragma once

#include <vector>

#include "hjmlevy/levy_model.hpp"

namespace hjmlevy {

// Exponent of the driving process under z >= 0:
//   J(z) = -drift z + q z^2/2 + int (e^{-zy} - 1 + zy 1_{(-1,1)}(y)) nu(dy).
// Convex; J'(0) = -drift - int_{|y|>=1} y nu(dy). Construction requires the first
// moment of nu on [1, inf) to be finite.
class LaplaceExponent {
 public:
  explicit LaplaceExponent(const LevyModel& model);

  // Synthetic exponent from raw callables; missing pieces throw std::logic_error
  // when evaluated.
  static LaplaceExponent from_functions(ScalarFn deriv, ScalarFn value = {},
                                        ScalarFn second = {});

  double value(double z) const;
  double deriv(double z) const;
  // second_deriv(0) is +infinity when the tail second moment diverges.
  double second_deriv(double z) const;

  double deriv_at_zero() const;

 private:
  LaplaceExponent() = default;

  bool user_ = false;
  ScalarFn user_value_, user_deriv_, user_second_;

  LevyModel model_;
  double tail_first_ = 0.0;        // int over support ∩ ([1,inf) ∪ (-inf,-1]) of y nu(dy)
  bool has_center_ = false;        // support meets (-1, 1)
  bool has_pos_tail_ = false;      // support meets [1, inf)
  bool has_neg_tail_ = false;      // support meets (-inf, -1]
};

enum class GrowthClass { Sublogarithmic, SuperCubeLog, Inconclusive };

struct GrowthOptions {
  double z_min = 10.0;
  double z_max = 1e12;
  int points = 111;
  double sub_margin = 10.0;     // required gap ln z - scale J'(z) at z_max
  double cube_floor = 0.05;     // required floor for J'(z)/ln^3 z on the top half
  double monotone_slack = 1e-9; // tolerated wiggle in the gap monotonicity check
};

struct GrowthReport {
  GrowthClass verdict = GrowthClass::Inconclusive;
  double scale = 0.0;
  double gap_top = 0.0;         // ln z - scale J'(z) at z_max
  bool gap_monotone = false;    // nondecreasing over the top half of the grid
  double min_cube_ratio = 0.0;  // min of J'(z)/ln^3 z over the top half
  std::vector<double> z, jprime, gap;
};

// Scans J' on a geometric grid and classifies its growth. The gap statistic weights
// J' by lambda_bar * t_star. Non-finite J' samples force Inconclusive.
GrowthReport growth_classify(const LaplaceExponent& exponent, double lambda_bar,
                             double t_star, const GrowthOptions& opt = {});

}  // namespace hjmlevy
