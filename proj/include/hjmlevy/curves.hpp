#pragma once

#include <functional>
#include <string>
#include <vector>

namespace hjmlevy {

// Initial forward curve T -> f0(T). All representations are continuous; positivity is
// checked on a sampling grid by validate_assumptions.
class InitialCurve {
 public:
  static InitialCurve constant(double v);
  static InitialCurve affine(double v0, double slope);  // v0 + slope * T
  // Piecewise-linear through (maturity, value) samples, flat beyond the ends.
  // Maturities must be strictly increasing.
  static InitialCurve sampled(std::vector<double> maturities, std::vector<double> values);

  double operator()(double T) const;
  double min_on(double t_star, int samples = 512) const;
  std::string describe() const;

 private:
  enum class Kind { Constant, Affine, Sampled } kind_ = Kind::Constant;
  double v0_ = 0.0, slope_ = 0.0;
  std::vector<double> ts_, vs_;
};

// Volatility coefficient lambda(t, T) on the triangle 0 <= t <= T <= t_star.
// Bounds 0 < lower <= lambda <= upper are part of the contract; separable surfaces
// get their bounds from a dense sample of the triangle.
class VolatilitySurface {
 public:
  struct SeparableTerm {
    double a0 = 0.0, a1 = 0.0;  // a(t) = a0 + a1 t
    double b0 = 0.0, b1 = 0.0;  // b(T) = b0 + b1 T
  };

  static VolatilitySurface constant(double v);
  static VolatilitySurface separable(std::vector<SeparableTerm> terms, double t_star);
  // Caller supplies the bounds; the surface cannot verify structural separability.
  static VolatilitySurface custom(std::function<double(double, double)> fn, double lower,
                                  double upper);

  double operator()(double t, double T) const;
  double lower_bound() const { return lower_; }
  double upper_bound() const { return upper_; }
  // True when the representation is a finite sum a_n(t) b_n(T) (constant included),
  // the structural form under which the driving stochastic integral is well behaved.
  bool separable_form() const { return kind_ != Kind::Custom; }
  std::string describe() const;

 private:
  enum class Kind { Constant, Separable, Custom } kind_ = Kind::Constant;
  double value_ = 0.0;
  std::vector<SeparableTerm> terms_;
  std::function<double(double, double)> fn_;
  double lower_ = 0.0, upper_ = 0.0;
};

}  // namespace hjmlevy
