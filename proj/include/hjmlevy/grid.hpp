#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hjmlevy {

// Uniform discretization of the triangle {0 <= t <= T <= t_star}: nodes
// (t_i, T_j) = (i dt, j dt) for 0 <= i <= j <= n.
struct TriangularGrid {
  int n = 0;
  double t_star = 0.0;

  TriangularGrid() = default;
  TriangularGrid(int n_, double t_star_) : n(n_), t_star(t_star_) {
    if (n < 1) throw std::invalid_argument("TriangularGrid: requires n >= 1");
    if (!(t_star > 0.0)) throw std::invalid_argument("TriangularGrid: requires t_star > 0");
  }

  double dt() const { return t_star / double(n); }
  double node(int k) const { return t_star * double(k) / double(n); }
  std::size_t node_count() const {
    return std::size_t(n + 1) * std::size_t(n + 2) / 2;
  }
  // Row-major over i with shrinking rows: index of (i, j), 0 <= i <= j <= n.
  std::size_t index(int i, int j) const {
    if (i < 0 || j < i || j > n) throw std::out_of_range("TriangularGrid: node outside triangle");
    // row i starts after rows 0..i-1, row k holding (n+1-k) entries
    const std::size_t row_start =
        std::size_t(i) * std::size_t(n + 1) - std::size_t(i) * std::size_t(i - 1) / 2;
    return row_start + std::size_t(j - i);
  }
  bool same_shape(const TriangularGrid& o) const { return n == o.n && t_star == o.t_star; }
};

// Values on the triangular grid nodes. +infinity marks an overflowed node.
class TriField {
 public:
  TriField() = default;
  TriField(const TriangularGrid& grid, double fill = 0.0)
      : grid_(grid), values_(grid.node_count(), fill) {}

  const TriangularGrid& grid() const { return grid_; }
  double& at(int i, int j) { return values_[grid_.index(i, j)]; }
  double at(int i, int j) const { return values_[grid_.index(i, j)]; }
  const std::vector<double>& values() const { return values_; }

  double max_value() const {
    double m = -1e308;
    for (double v : values_) m = v > m ? v : m;
    return m;
  }
  double min_value() const {
    double m = 1e308;
    for (double v : values_) m = v < m ? v : m;
    return m;
  }
  bool all_finite() const {
    for (double v : values_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

 private:
  TriangularGrid grid_;
  std::vector<double> values_;
};

// Stochastic driver evaluated on the grid (positive node values).
using DrivingField = TriField;
// Candidate or converged forward-rate field (nonnegative node values).
using ForwardField = TriField;

}  // namespace hjmlevy
