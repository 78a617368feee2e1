#include "hjmlevy/martingale.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "hjmlevy/levy_path.hpp"

namespace hjmlevy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int grid_index(const TriangularGrid& grid, double t, const char* what) {
  const double dt = grid.dt();
  const long idx = std::lround(t / dt);
  if (idx < 0 || idx > grid.n || std::fabs(t - double(idx) * dt) > 1e-9 * std::max(1.0, grid.t_star)) {
    throw std::invalid_argument(std::string(what) + ": time must lie on a grid node");
  }
  return int(idx);
}

double finite_node(const TriField& field, int i, int j, const char* what) {
  const double v = field.at(i, j);
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + ": infinite node in the integration range");
  }
  return v;
}

// Trapezoid of the diagonal f(s,s) for s in [0, t_i].
double diagonal_integral(const TriField& field, int i, const char* what) {
  const double dt = field.grid().dt();
  double acc = 0.0;
  for (int k = 1; k <= i; ++k) {
    acc += 0.5 * dt * (finite_node(field, k - 1, k - 1, what) + finite_node(field, k, k, what));
  }
  return acc;
}

// Trapezoid of f(t_i, u) for u in [t_i, T_j].
double row_integral(const TriField& field, int i, int j, const char* what) {
  const double dt = field.grid().dt();
  double acc = 0.0;
  for (int m = i + 1; m <= j; ++m) {
    acc += 0.5 * dt * (finite_node(field, i, m - 1, what) + finite_node(field, i, m, what));
  }
  return acc;
}

}  // namespace

double drift_consistency(const TriField& field, const VolatilitySurface& lam,
                         const LaplaceExponent& exponent) {
  if (!field.all_finite()) {
    throw std::invalid_argument("drift_consistency: field must be finite");
  }
  const TriangularGrid& grid = field.grid();
  const double dt = grid.dt();
  const double jp0 = exponent.deriv(0.0);

  double max_residual = 0.0;
  for (int i = 0; i <= grid.n; ++i) {
    const double t = grid.node(i);
    double sigma_prev = lam(t, t) * field.at(i, i);
    double alpha_prev = jp0 * sigma_prev;
    double sigma_int = 0.0;  // int_t^u sigma dv
    double alpha_int = 0.0;  // int_t^u alpha dv
    for (int j = i + 1; j <= grid.n; ++j) {
      const double u = grid.node(j);
      const double sigma_cur = lam(t, u) * field.at(i, j);
      sigma_int += 0.5 * dt * (sigma_prev + sigma_cur);
      const double alpha_cur = exponent.deriv(sigma_int) * sigma_cur;
      alpha_int += 0.5 * dt * (alpha_prev + alpha_cur);
      const double residual = std::fabs(alpha_int - exponent.value(sigma_int));
      if (residual > max_residual) max_residual = residual;
      sigma_prev = sigma_cur;
      alpha_prev = alpha_cur;
    }
  }
  return max_residual;
}

double bond_price(const TriField& field, double t, double maturity) {
  const TriangularGrid& grid = field.grid();
  const int i = grid_index(grid, t, "bond_price");
  const int j = grid_index(grid, maturity, "bond_price");
  if (j >= i) return std::exp(-row_integral(field, i, j, "bond_price"));
  // Past maturity the flat extension f(t,u) = f(u,u) leaves the price accreting
  // at the realized short rates.
  const double past = diagonal_integral(field, i, "bond_price") -
                      diagonal_integral(field, j, "bond_price");
  return std::exp(past);
}

double discounted_bond(const TriField& field, double t, double maturity) {
  const TriangularGrid& grid = field.grid();
  const int i = grid_index(grid, t, "discounted_bond");
  const int j = grid_index(grid, maturity, "discounted_bond");
  if (j < i) return std::exp(-diagonal_integral(field, j, "discounted_bond"));
  return std::exp(-diagonal_integral(field, i, "discounted_bond") -
                  row_integral(field, i, j, "discounted_bond"));
}

namespace {

struct CellAccum {
  std::vector<double> sum;
  std::vector<double> sumsq;
  std::vector<double> cmin;
  std::vector<double> cmax;
  explicit CellAccum(std::size_t n)
      : sum(n, 0.0), sumsq(n, 0.0), cmin(n, kInf), cmax(n, -kInf) {}
};

}  // namespace

MartingaleReport martingale_test(const LevyModel& model, const VolatilitySurface& lam,
                                 const InitialCurve& f0, const TriangularGrid& grid,
                                 const std::vector<double>& maturities, int n_paths,
                                 std::uint64_t seed, const MartingaleOptions& opt) {
  if (n_paths < 1000) {
    throw std::invalid_argument("martingale_test: requires n_paths >= 1000");
  }
  if (maturities.empty()) {
    throw std::invalid_argument("martingale_test: requires at least one maturity");
  }
  if (!(opt.jprime_scale != 0.0)) {
    throw std::invalid_argument("martingale_test: requires a nonzero jprime_scale");
  }

  const LaplaceExponent exponent(model);
  const double scale = opt.jprime_scale;
  const ScalarFn jp = [scale, &exponent](double z) { return scale * exponent.deriv(z); };

  // Cell layout: for each maturity, every grid time t_i <= T in row order.
  struct CellKey { int i; int j; };
  std::vector<CellKey> keys;
  std::vector<double> references;
  for (double maturity : maturities) {
    const int j = grid_index(grid, maturity, "martingale_test");
    double ref_int = 0.0;  // same trapezoid as the per-path bond integral
    for (int m = 1; m <= j; ++m) {
      ref_int += 0.5 * grid.dt() * (f0(grid.node(m - 1)) + f0(grid.node(m)));
    }
    const double reference = std::exp(-ref_int);
    for (int i = 0; i <= j; ++i) {
      keys.push_back({i, j});
      references.push_back(reference);
    }
  }
  const std::size_t n_cells = keys.size();

  constexpr int kChunk = 256;
  const int n_chunks = (n_paths + kChunk - 1) / kChunk;
  std::vector<CellAccum> chunks(static_cast<std::size_t>(n_chunks), CellAccum(n_cells));

  std::atomic<int> next_chunk{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::string error_message;

  const auto record_failure = [&](const std::string& message) {
    std::lock_guard<std::mutex> hold(error_mutex);
    if (error_message.empty()) error_message = message;
    failed.store(true);
  };

  const auto run_chunk = [&](int chunk) {
    CellAccum& acc = chunks[std::size_t(chunk)];
    const int lo = chunk * kChunk;
    const int hi = std::min(n_paths, lo + kChunk);
    std::vector<double> diag(std::size_t(grid.n) + 1, 0.0);
    for (int p = lo; p < hi && !failed.load(); ++p) {
      const std::uint64_t path_seed = substream_seed(seed, std::uint64_t(p));
      const JumpPath path = simulate_path(model, grid.t_star, path_seed, opt.epsilon_cut);
      const DrivingField a = driving_field(path, lam, f0, grid);
      const SolveOutcome outcome = solve_fixed_point(a, lam, jp, opt.solver);
      if (outcome.status != SolveStatus::Converged) {
        std::ostringstream msg;
        msg << "martingale_test: path " << p << " (seed " << path_seed << ") "
            << to_string(outcome.status) << " after " << outcome.iterations << " iterations";
        record_failure(msg.str());
        return;
      }
      const TriField& f = outcome.field;
      for (int k = 0; k <= grid.n; ++k) {
        diag[std::size_t(k)] = k == 0 ? 0.0
                                      : diag[std::size_t(k) - 1] +
                                            0.5 * grid.dt() * (f.at(k - 1, k - 1) + f.at(k, k));
      }
      for (std::size_t c = 0; c < n_cells; ++c) {
        const int i = keys[c].i;
        const int j = keys[c].j;
        double row = 0.0;
        for (int m = i + 1; m <= j; ++m) {
          row += 0.5 * grid.dt() * (f.at(i, m - 1) + f.at(i, m));
        }
        const double price = std::exp(-diag[std::size_t(i)] - row);
        acc.sum[c] += price;
        acc.sumsq[c] += price * price;
        acc.cmin[c] = std::min(acc.cmin[c], price);
        acc.cmax[c] = std::max(acc.cmax[c], price);
      }
    }
  };

  const auto worker = [&]() {
    for (;;) {
      const int chunk = next_chunk.fetch_add(1);
      if (chunk >= n_chunks || failed.load()) return;
      try {
        run_chunk(chunk);
      } catch (const std::exception& e) {
        record_failure(std::string("martingale_test: ") + e.what());
        return;
      }
    }
  };

  int n_threads = opt.threads > 0 ? opt.threads : int(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min(n_threads, n_chunks));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(n_threads));
    for (int w = 0; w < n_threads; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (failed.load()) throw std::runtime_error(error_message);

  MartingaleReport report;
  report.n_paths = n_paths;
  report.seed = seed;
  report.dt = grid.dt();
  report.epsilon_cut = opt.epsilon_cut;
  report.cutoff_tail_moment = model.measure.moment_on(1, 0.0, opt.epsilon_cut);
  report.jump_intensity = model.measure.is_zero() ? 0.0 : model.measure.tail_intensity(opt.epsilon_cut);
  report.min_price = kInf;
  report.max_price = -kInf;

  std::size_t in_band = 0;
  bool all_in = true;
  for (std::size_t c = 0; c < n_cells; ++c) {
    double sum = 0.0, sumsq = 0.0, cmin = kInf, cmax = -kInf;
    for (int chunk = 0; chunk < n_chunks; ++chunk) {  // fixed order, thread-count independent
      sum += chunks[std::size_t(chunk)].sum[c];
      sumsq += chunks[std::size_t(chunk)].sumsq[c];
      cmin = std::min(cmin, chunks[std::size_t(chunk)].cmin[c]);
      cmax = std::max(cmax, chunks[std::size_t(chunk)].cmax[c]);
    }
    MartingaleCell cell;
    cell.t = grid.node(keys[c].i);
    cell.maturity = grid.node(keys[c].j);
    cell.reference = references[c];
    const double n = double(n_paths);
    if (cmin == cmax) {
      // Every sample identical: SE is exactly zero and the mean is the sample.
      cell.mean = cmin;
      cell.se = 0.0;
      cell.z = std::fabs(cell.mean - cell.reference) <= opt.bias_tol
                   ? 0.0
                   : (cell.mean > cell.reference ? kInf : -kInf);
    } else {
      cell.mean = sum / n;
      const double var = std::max(0.0, (sumsq - n * cell.mean * cell.mean) / (n - 1.0));
      cell.se = std::sqrt(var / n);
      cell.z = cell.se > 0.0 ? (cell.mean - cell.reference) / cell.se
                             : (std::fabs(cell.mean - cell.reference) <= opt.bias_tol
                                    ? 0.0
                                    : (cell.mean > cell.reference ? kInf : -kInf));
    }
    report.min_price = std::min(report.min_price, cmin);
    report.max_price = std::max(report.max_price, cmax);
    if (std::fabs(cell.z) <= 3.0) {
      ++in_band;
    } else {
      all_in = false;
    }
    report.cells.push_back(cell);
  }
  report.pass = all_in;
  report.in_band_fraction = n_cells == 0 ? 0.0 : double(in_band) / double(n_cells);
  report.structural_failure = report.in_band_fraction < 0.95;
  return report;
}

}  // namespace hjmlevy
