#include "gradflow/driver/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gradflow::driver {

double TimeRamp::dt_at(int step) const {
  if (step >= steps || steps <= 1) return dt_end;
  const double f = static_cast<double>(step - 1) / (steps - 1);
  return dt_begin * std::pow(dt_end / dt_begin, f);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(v, &pos);
  } catch (...) {
    throw ConfigError("invalid number for '" + key + "': " + v);
  }
  if (pos != v.size())
    throw ConfigError("invalid number for '" + key + "': " + v);
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  int x = 0;
  try {
    x = std::stoi(v, &pos);
  } catch (...) {
    throw ConfigError("invalid integer for '" + key + "': " + v);
  }
  if (pos != v.size())
    throw ConfigError("invalid integer for '" + key + "': " + v);
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("invalid boolean for '" + key + "': " + v);
}

TimeRamp parse_ramp(const std::string& v) {
  // "dt0:dt1:steps"
  const auto c1 = v.find(':');
  const auto c2 = v.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw ConfigError("dt_ramp expects 'dt0:dt1:steps', got: " + v);
  TimeRamp ramp;
  ramp.dt_begin = to_double("dt_ramp", v.substr(0, c1));
  ramp.dt_end = to_double("dt_ramp", v.substr(c1 + 1, c2 - c1 - 1));
  ramp.steps = to_int("dt_ramp", v.substr(c2 + 1));
  if (!(ramp.dt_begin > 0) || !(ramp.dt_end > 0) || ramp.steps < 1)
    throw ConfigError("dt_ramp values must be positive");
  return ramp;
}

}  // namespace

void apply_config_entry(ProblemConfig& cfg, const std::string& key,
                        const std::string& value) {
  cfg.raw[key] = value;
  if (key == "scenario") {
    cfg.scenario = value;
  } else if (key == "mesh.nx") {
    cfg.nx = to_int(key, value);
  } else if (key == "mesh.ny") {
    cfg.ny = to_int(key, value);
  } else if (key == "mesh.xmin") {
    cfg.xmin = to_double(key, value);
  } else if (key == "mesh.xmax") {
    cfg.xmax = to_double(key, value);
  } else if (key == "mesh.ymin") {
    cfg.ymin = to_double(key, value);
  } else if (key == "mesh.ymax") {
    cfg.ymax = to_double(key, value);
  } else if (key == "mesh.bc") {
    if (value != "neumann" && value != "periodic")
      throw ConfigError("mesh.bc must be neumann or periodic");
    cfg.bc = value;
  } else if (key == "space.degree") {
    cfg.degree = to_int(key, value);
  } else if (key == "time.dt") {
    cfg.dt = to_double(key, value);
  } else if (key == "time.dt_ramp") {
    cfg.ramp = parse_ramp(value);
  } else if (key == "time.T") {
    cfg.T = to_double(key, value);
  } else if (key == "time.steps") {
    cfg.steps = to_int(key, value);
  } else if (key == "alg2.r") {
    cfg.r = to_double(key, value);
  } else if (key == "alg2.iters") {
    cfg.alg_iters = to_int(key, value);
  } else if (key == "alg2.early_exit") {
    cfg.early_exit = to_bool(key, value);
  } else if (key == "alg2.early_exit_tol") {
    cfg.early_exit_tol = to_double(key, value);
  } else if (key == "alg2.newton_tol") {
    cfg.newton_tol = to_double(key, value);
  } else if (key == "alg2.newton_maxit") {
    cfg.newton_maxit = to_int(key, value);
  } else if (key == "alg2.rho_min") {
    cfg.rho_min = to_double(key, value);
  } else if (key == "linsolve.method") {
    if (value != "pcg" && value != "pcg-mg" && value != "direct")
      throw ConfigError("linsolve.method must be pcg, pcg-mg or direct");
    cfg.lin_method = value;
  } else if (key == "linsolve.tol") {
    cfg.lin_tol = to_double(key, value);
  } else if (key == "linsolve.maxit") {
    cfg.lin_maxit = to_int(key, value);
  } else if (key == "convolution.mode") {
    if (value != "fft" && value != "direct")
      throw ConfigError("convolution.mode must be fft or direct");
    cfg.conv_mode = value;
  } else if (key == "system.split") {
    if (value != "jacobi" && value != "gauss-seidel" && value != "gs")
      throw ConfigError("system.split must be jacobi or gauss-seidel");
    cfg.split = (value == "gs") ? "gauss-seidel" : value;
  } else if (key == "output.dir") {
    cfg.out_dir = value;
  } else if (key == "output.every") {
    cfg.output_every = to_int(key, value);
  } else if (key == "output.vtk") {
    cfg.vtk = to_bool(key, value);
  } else if (key == "output.lattice") {
    cfg.lattice = to_int(key, value);
  } else if (key == "scenario.mu") {
    cfg.mu = to_double(key, value);
  } else if (key == "scenario.m") {
    cfg.m_exponent = to_int(key, value);
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

ProblemConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  ProblemConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    if (!section.empty()) key = section + "." + key;
    try {
      apply_config_entry(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (cfg.scenario.empty())
    throw ConfigError("config must name a scenario ('scenario = ...')");
  return cfg;
}

}  // namespace gradflow::driver
