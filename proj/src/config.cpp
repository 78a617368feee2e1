#include "hjmlevy/config.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace hjmlevy {

namespace {

std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (trim(value.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (trim(value.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (trim(value.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "': expected an unsigned integer, got '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) {
      throw ConfigError("config key '" + key + "': empty list entry");
    }
    out.push_back(parse_double(key, item));
  }
  return out;
}

std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

std::string format_list(const std::vector<double>& v) {
  std::ostringstream out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k > 0) out << ",";
    out << std::setprecision(17) << v[k];
  }
  return out.str();
}

}  // namespace

void apply_assignment(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key.empty()) throw ConfigError("config: empty key");

  if (key == "model.family") cfg.model_family = value;
  else if (key == "model.p") cfg.model_p = parse_double(key, value);
  else if (key == "model.gamma") cfg.model_gamma = parse_double(key, value);
  else if (key == "model.c") cfg.model_c = parse_double(key, value);
  else if (key == "model.lo") cfg.model_lo = parse_double(key, value);
  else if (key == "model.hi") cfg.model_hi = parse_double(key, value);
  else if (key == "model.atom_points") cfg.model_atom_points = parse_list(key, value);
  else if (key == "model.atom_masses") cfg.model_atom_masses = parse_list(key, value);
  else if (key == "model.drift") cfg.model_drift = parse_double(key, value);
  else if (key == "model.q") cfg.model_q = parse_double(key, value);
  else if (key == "lambda.kind") cfg.lambda_kind = value;
  else if (key == "lambda.value") cfg.lambda_value = parse_double(key, value);
  else if (key == "lambda.terms") cfg.lambda_terms = parse_list(key, value);
  else if (key == "f0.kind") cfg.f0_kind = value;
  else if (key == "f0.value") cfg.f0_value = parse_double(key, value);
  else if (key == "f0.intercept") cfg.f0_intercept = parse_double(key, value);
  else if (key == "f0.slope") cfg.f0_slope = parse_double(key, value);
  else if (key == "f0.times") cfg.f0_times = parse_list(key, value);
  else if (key == "f0.values") cfg.f0_values = parse_list(key, value);
  else if (key == "grid.n") cfg.grid_n = int(parse_int(key, value));
  else if (key == "t_star") cfg.t_star = parse_double(key, value);
  else if (key == "solver.tol") cfg.solver_tol = parse_double(key, value);
  else if (key == "solver.max_iters") cfg.solver_max_iters = int(parse_int(key, value));
  else if (key == "solver.blowup_threshold") cfg.solver_blowup_threshold = parse_double(key, value);
  else if (key == "mc.paths") cfg.mc_paths = int(parse_int(key, value));
  else if (key == "mc.seed") cfg.mc_seed = parse_uint(key, value);
  else if (key == "mc.epsilon_cut") cfg.mc_epsilon_cut = parse_double(key, value);
  else if (key == "mc.maturities") cfg.mc_maturities = parse_list(key, value);
  else if (key == "growth.z_max") cfg.growth_z_max = parse_double(key, value);
  else if (key == "growth.margin") cfg.growth_margin = parse_double(key, value);
  else if (key == "output.dir") cfg.output_dir = value;
  else throw ConfigError("config: unknown key '" + key + "'");
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  RunConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(line_no) + " of '" + path +
                        "' is not a key = value assignment");
    }
    apply_assignment(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  }
  apply_assignment(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::string effective_config_text(const RunConfig& cfg) {
  std::ostringstream out;
  out << "model.family = " << cfg.model_family << "\n";
  out << "model.p = " << format_double(cfg.model_p) << "\n";
  out << "model.gamma = " << format_double(cfg.model_gamma) << "\n";
  out << "model.c = " << format_double(cfg.model_c) << "\n";
  out << "model.lo = " << format_double(cfg.model_lo) << "\n";
  out << "model.hi = " << format_double(cfg.model_hi) << "\n";
  out << "model.atom_points = " << format_list(cfg.model_atom_points) << "\n";
  out << "model.atom_masses = " << format_list(cfg.model_atom_masses) << "\n";
  out << "model.drift = " << format_double(cfg.model_drift) << "\n";
  out << "model.q = " << format_double(cfg.model_q) << "\n";
  out << "lambda.kind = " << cfg.lambda_kind << "\n";
  out << "lambda.value = " << format_double(cfg.lambda_value) << "\n";
  out << "lambda.terms = " << format_list(cfg.lambda_terms) << "\n";
  out << "f0.kind = " << cfg.f0_kind << "\n";
  out << "f0.value = " << format_double(cfg.f0_value) << "\n";
  out << "f0.intercept = " << format_double(cfg.f0_intercept) << "\n";
  out << "f0.slope = " << format_double(cfg.f0_slope) << "\n";
  out << "f0.times = " << format_list(cfg.f0_times) << "\n";
  out << "f0.values = " << format_list(cfg.f0_values) << "\n";
  out << "grid.n = " << cfg.grid_n << "\n";
  out << "t_star = " << format_double(cfg.t_star) << "\n";
  out << "solver.tol = " << format_double(cfg.solver_tol) << "\n";
  out << "solver.max_iters = " << cfg.solver_max_iters << "\n";
  out << "solver.blowup_threshold = " << format_double(cfg.solver_blowup_threshold) << "\n";
  out << "mc.paths = " << cfg.mc_paths << "\n";
  out << "mc.seed = " << cfg.mc_seed << "\n";
  out << "mc.epsilon_cut = " << format_double(cfg.mc_epsilon_cut) << "\n";
  out << "mc.maturities = " << format_list(cfg.mc_maturities) << "\n";
  out << "growth.z_max = " << format_double(cfg.growth_z_max) << "\n";
  out << "growth.margin = " << format_double(cfg.growth_margin) << "\n";
  return out.str();
}

std::string config_content_hash(const RunConfig& cfg) {
  const std::string text = effective_config_text(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char byte : text) {
    h ^= byte;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

LevyModel build_model(const RunConfig& cfg) {
  LevyModel model;
  model.drift = cfg.model_drift;
  model.gaussian_q = cfg.model_q;
  if (cfg.model_family == "none") {
    model.measure = LevyMeasureSpec::none();
  } else if (cfg.model_family == "truncated_stable") {
    model.measure = LevyMeasureSpec::truncated_stable(cfg.model_p);
  } else if (cfg.model_family == "log_modified") {
    model.measure = LevyMeasureSpec::log_modified(cfg.model_gamma);
  } else if (cfg.model_family == "log_power") {
    model.measure = LevyMeasureSpec::log_power(cfg.model_gamma);
  } else if (cfg.model_family == "uniform") {
    model.measure = LevyMeasureSpec::uniform_density(cfg.model_c, cfg.model_lo, cfg.model_hi);
  } else if (cfg.model_family == "atoms") {
    model.measure = LevyMeasureSpec::finite_atoms(cfg.model_atom_points, cfg.model_atom_masses);
  } else {
    throw ConfigError("config key 'model.family': unknown family '" + cfg.model_family + "'");
  }
  return model;
}

VolatilitySurface build_lambda(const RunConfig& cfg) {
  if (cfg.lambda_kind == "constant") {
    return VolatilitySurface::constant(cfg.lambda_value);
  }
  if (cfg.lambda_kind == "separable") {
    if (cfg.lambda_terms.empty() || cfg.lambda_terms.size() % 4 != 0) {
      throw ConfigError("config key 'lambda.terms': expected (a0,a1,b0,b1) quadruples");
    }
    std::vector<VolatilitySurface::SeparableTerm> terms;
    for (std::size_t k = 0; k + 3 < cfg.lambda_terms.size(); k += 4) {
      terms.push_back({cfg.lambda_terms[k], cfg.lambda_terms[k + 1], cfg.lambda_terms[k + 2],
                       cfg.lambda_terms[k + 3]});
    }
    return VolatilitySurface::separable(terms, cfg.t_star);
  }
  throw ConfigError("config key 'lambda.kind': unknown kind '" + cfg.lambda_kind + "'");
}

InitialCurve build_f0(const RunConfig& cfg) {
  if (cfg.f0_kind == "constant") return InitialCurve::constant(cfg.f0_value);
  if (cfg.f0_kind == "affine") return InitialCurve::affine(cfg.f0_intercept, cfg.f0_slope);
  if (cfg.f0_kind == "samples") return InitialCurve::sampled(cfg.f0_times, cfg.f0_values);
  throw ConfigError("config key 'f0.kind': unknown kind '" + cfg.f0_kind + "'");
}

TriangularGrid build_grid(const RunConfig& cfg) {
  if (cfg.grid_n < 1) throw ConfigError("config key 'grid.n': must be >= 1");
  if (!(cfg.t_star > 0.0)) throw ConfigError("config key 't_star': must be > 0");
  return TriangularGrid{cfg.grid_n, cfg.t_star};
}

ClassifyOptions build_classify_options(const RunConfig& cfg) {
  ClassifyOptions opt;
  opt.growth.z_max = cfg.growth_z_max;
  opt.growth.sub_margin = cfg.growth_margin;
  return opt;
}

}  // namespace hjmlevy
