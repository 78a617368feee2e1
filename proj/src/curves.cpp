#include "hjmlevy/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hjmlevy {

InitialCurve InitialCurve::constant(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("InitialCurve: non-finite level");
  InitialCurve c;
  c.kind_ = Kind::Constant;
  c.v0_ = v;
  return c;
}

InitialCurve InitialCurve::affine(double v0, double slope) {
  if (!std::isfinite(v0) || !std::isfinite(slope)) {
    throw std::invalid_argument("InitialCurve: non-finite coefficients");
  }
  InitialCurve c;
  c.kind_ = Kind::Affine;
  c.v0_ = v0;
  c.slope_ = slope;
  return c;
}

InitialCurve InitialCurve::sampled(std::vector<double> maturities, std::vector<double> values) {
  if (maturities.size() != values.size() || maturities.size() < 2) {
    throw std::invalid_argument("InitialCurve: need >= 2 samples with matching sizes");
  }
  for (std::size_t i = 1; i < maturities.size(); ++i) {
    if (!(maturities[i] > maturities[i - 1])) {
      throw std::invalid_argument("InitialCurve: maturities must be strictly increasing");
    }
  }
  InitialCurve c;
  c.kind_ = Kind::Sampled;
  c.ts_ = std::move(maturities);
  c.vs_ = std::move(values);
  return c;
}

double InitialCurve::operator()(double T) const {
  switch (kind_) {
    case Kind::Constant:
      return v0_;
    case Kind::Affine:
      return v0_ + slope_ * T;
    case Kind::Sampled: {
      if (T <= ts_.front()) return vs_.front();
      if (T >= ts_.back()) return vs_.back();
      auto it = std::upper_bound(ts_.begin(), ts_.end(), T);
      const std::size_t i = std::size_t(it - ts_.begin());
      const double w = (T - ts_[i - 1]) / (ts_[i] - ts_[i - 1]);
      return vs_[i - 1] + w * (vs_[i] - vs_[i - 1]);
    }
  }
  return v0_;
}

double InitialCurve::min_on(double t_star, int samples) const {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= samples; ++i) {
    m = std::min(m, (*this)(t_star * double(i) / double(samples)));
  }
  return m;
}

std::string InitialCurve::describe() const {
  switch (kind_) {
    case Kind::Constant: return "constant " + std::to_string(v0_);
    case Kind::Affine: return "affine " + std::to_string(v0_) + " + " + std::to_string(slope_) + "*T";
    case Kind::Sampled: return "sampled (" + std::to_string(ts_.size()) + " knots)";
  }
  return {};
}

VolatilitySurface VolatilitySurface::constant(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument("VolatilitySurface: constant level must be positive");
  }
  VolatilitySurface s;
  s.kind_ = Kind::Constant;
  s.value_ = v;
  s.lower_ = s.upper_ = v;
  return s;
}

VolatilitySurface VolatilitySurface::separable(std::vector<SeparableTerm> terms, double t_star) {
  if (terms.empty()) throw std::invalid_argument("VolatilitySurface: no separable terms");
  if (!(t_star > 0.0)) throw std::invalid_argument("VolatilitySurface: requires t_star > 0");
  VolatilitySurface s;
  s.kind_ = Kind::Separable;
  s.terms_ = std::move(terms);
  // Bounds sampled on a dense triangle grid; continuity of the affine terms keeps the
  // sampling error immaterial for the bound checks these feed.
  constexpr int kSamples = 200;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kSamples; ++i) {
    const double t = t_star * double(i) / double(kSamples);
    for (int j = i; j <= kSamples; ++j) {
      const double T = t_star * double(j) / double(kSamples);
      const double v = s(t, T);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(lo > 0.0)) {
    throw std::invalid_argument("VolatilitySurface: separable surface not positive on the triangle");
  }
  s.lower_ = lo;
  s.upper_ = hi;
  return s;
}

VolatilitySurface VolatilitySurface::custom(std::function<double(double, double)> fn,
                                            double lower, double upper) {
  if (!fn) throw std::invalid_argument("VolatilitySurface: missing callable");
  if (!(lower > 0.0) || !(upper >= lower)) {
    throw std::invalid_argument("VolatilitySurface: requires 0 < lower <= upper");
  }
  VolatilitySurface s;
  s.kind_ = Kind::Custom;
  s.fn_ = std::move(fn);
  s.lower_ = lower;
  s.upper_ = upper;
  return s;
}

double VolatilitySurface::operator()(double t, double T) const {
  switch (kind_) {
    case Kind::Constant:
      return value_;
    case Kind::Separable: {
      double v = 0.0;
      for (const auto& term : terms_) {
        v += (term.a0 + term.a1 * t) * (term.b0 + term.b1 * T);
      }
      return v;
    }
    case Kind::Custom:
      return fn_(t, T);
  }
  return value_;
}

std::string VolatilitySurface::describe() const {
  switch (kind_) {
    case Kind::Constant: return "constant " + std::to_string(value_);
    case Kind::Separable: return "separable (" + std::to_string(terms_.size()) + " terms)";
    case Kind::Custom: return "custom callable";
  }
  return {};
}

}  // namespace hjmlevy
