#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjmlevy/curves.hpp"
#include "hjmlevy/existence_classifier.hpp"
#include "hjmlevy/grid.hpp"
#include "hjmlevy/levy_model.hpp"

namespace hjmlevy {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Flat key = value configuration with dotted keys. Every field has a default;
// unknown keys are rejected with the offending key path.
struct RunConfig {
  // model block
  std::string model_family = "atoms";  // none|truncated_stable|log_modified|log_power|uniform|atoms
  double model_p = 0.5;
  double model_gamma = 2.0;
  double model_c = 1.0;
  double model_lo = 0.5;
  double model_hi = 1.0;
  std::vector<double> model_atom_points{0.3};
  std::vector<double> model_atom_masses{2.0};
  double model_drift = 0.0;
  double model_q = 0.0;

  // lambda block
  std::string lambda_kind = "constant";  // constant|separable
  double lambda_value = 0.2;
  std::vector<double> lambda_terms;      // flattened (a0, a1, b0, b1) quadruples

  // f0 block
  std::string f0_kind = "constant";      // constant|affine|samples
  double f0_value = 0.03;
  double f0_intercept = 0.03;
  double f0_slope = 0.0;
  std::vector<double> f0_times;
  std::vector<double> f0_values;

  // grid
  int grid_n = 50;
  double t_star = 1.0;

  // solver block
  double solver_tol = 1e-9;
  int solver_max_iters = 500;
  double solver_blowup_threshold = 1e12;

  // mc block
  int mc_paths = 1000;
  std::uint64_t mc_seed = 20240801;
  double mc_epsilon_cut = 1e-3;
  std::vector<double> mc_maturities{0.5, 1.0};

  // growth block
  double growth_z_max = 1e12;
  double growth_margin = 10.0;

  // output block
  std::string output_dir = "out";
};

// Applies one "key = value" assignment; throws ConfigError on unknown key or
// unparsable value.
void apply_assignment(RunConfig& cfg, const std::string& key, const std::string& value);

// Parses a config file of key = value lines ('#' starts a comment).
RunConfig parse_config_file(const std::string& path);

// Parses a single "key=value" override as passed on the command line.
void apply_override(RunConfig& cfg, const std::string& assignment);

// Canonical serialization: every numbers-shaping key in fixed order with full
// precision. The output block is excluded so a run's identity does not depend on
// where its files are written. The text is echoed into the output directory and
// hashed for output naming.
std::string effective_config_text(const RunConfig& cfg);

// FNV-1a over the canonical text, as 16 hex digits.
std::string config_content_hash(const RunConfig& cfg);

LevyModel build_model(const RunConfig& cfg);
VolatilitySurface build_lambda(const RunConfig& cfg);
InitialCurve build_f0(const RunConfig& cfg);
TriangularGrid build_grid(const RunConfig& cfg);
ClassifyOptions build_classify_options(const RunConfig& cfg);

}  // namespace hjmlevy
