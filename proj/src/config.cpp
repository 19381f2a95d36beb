#include "blowup/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace blowup {

double RunConfig::gamma_or_default() const {
  if (lyapunov_gamma > 0.0) return lyapunov_gamma;
  return 4.0 * (p + 1.0) / ((p - 1.0) * (p - 1.0));
}

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  size_t pos = 0;
  double x;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad numeric value for '" + key + "'");
  }
  if (pos != v.size())
    throw std::invalid_argument("config: trailing junk in value for '" + key + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  double x = to_double(key, v);
  if (x != std::floor(x))
    throw std::invalid_argument("config: '" + key + "' must be an integer");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: '" + key + "' must be true or false");
}

} // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not of the form key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw std::invalid_argument("config: empty key or value at line " +
                                  std::to_string(lineno));

    if (key == "p") cfg.p = to_double(key, val);
    else if (key == "a") cfg.a = to_double(key, val);
    else if (key == "mu") cfg.mu = to_double(key, val);
    else if (key == "hbar") cfg.hbar = to_double(key, val);
    else if (key == "c_delta") cfg.c_delta = to_double(key, val);
    else if (key == "lambda_inv") cfg.lambda_inv = to_int(key, val);
    else if (key == "alpha") cfg.alpha = to_double(key, val);
    else if (key == "phases") cfg.phases = to_int(key, val);
    else if (key == "initial_data") cfg.initial_data = val;
    else if (key == "amplitude") cfg.amplitude = to_double(key, val);
    else if (key == "similarity") cfg.similarity = to_bool(key, val);
    else if (key == "snapshot_cadence") cfg.snapshot_cadence = to_int(key, val);
    else if (key == "checkpoint_cadence") cfg.checkpoint_cadence = to_int(key, val);
    else if (key == "lyapunov_gamma") cfg.lyapunov_gamma = to_double(key, val);
    else if (key == "lyapunov_theta") cfg.lyapunov_theta = to_double(key, val);
    else if (key == "output_dir") cfg.output_dir = val;
    else
      throw std::invalid_argument("config: unknown key '" + key + "'");
  }

  if (cfg.p <= 1.0) throw std::invalid_argument("config: p must exceed 1");
  if (cfg.a <= 0.0) throw std::invalid_argument("config: a must be positive");
  if (cfg.mu < 0.0) throw std::invalid_argument("config: mu must be nonnegative");
  if (cfg.hbar <= 0.0 || cfg.hbar >= 1.0)
    throw std::invalid_argument("config: hbar must lie in (0,1)");
  if (cfg.c_delta <= 0.0 || cfg.c_delta > 0.5)
    throw std::invalid_argument(
        "config: c_delta must lie in (0, 0.5]; the explicit scheme is "
        "unstable beyond 0.5");
  if (cfg.lambda_inv < 2)
    throw std::invalid_argument("config: lambda_inv must be at least 2");
  if (cfg.alpha <= 0.0 || cfg.alpha >= 1.0)
    throw std::invalid_argument("config: alpha must lie in (0,1)");
  if (cfg.phases < 1)
    throw std::invalid_argument("config: phases must be at least 1");
  if (cfg.initial_data != "cosine" && cfg.initial_data != "parabola")
    throw std::invalid_argument("config: initial_data must be cosine or parabola");
  if (cfg.amplitude <= 0.0)
    throw std::invalid_argument("config: amplitude must be positive");
  if (cfg.snapshot_cadence < 1 || cfg.checkpoint_cadence < 1)
    throw std::invalid_argument("config: cadences must be at least 1");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {
std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
} // namespace

std::string emit_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "p = " << fmt(cfg.p) << "\n";
  os << "a = " << fmt(cfg.a) << "\n";
  os << "mu = " << fmt(cfg.mu) << "\n";
  os << "hbar = " << fmt(cfg.hbar) << "\n";
  os << "c_delta = " << fmt(cfg.c_delta) << "\n";
  os << "lambda_inv = " << cfg.lambda_inv << "\n";
  os << "alpha = " << fmt(cfg.alpha) << "\n";
  os << "phases = " << cfg.phases << "\n";
  os << "initial_data = " << cfg.initial_data << "\n";
  os << "amplitude = " << fmt(cfg.amplitude) << "\n";
  os << "similarity = " << (cfg.similarity ? "true" : "false") << "\n";
  os << "snapshot_cadence = " << cfg.snapshot_cadence << "\n";
  os << "checkpoint_cadence = " << cfg.checkpoint_cadence << "\n";
  os << "lyapunov_gamma = " << fmt(cfg.lyapunov_gamma) << "\n";
  os << "lyapunov_theta = " << fmt(cfg.lyapunov_theta) << "\n";
  os << "output_dir = " << cfg.output_dir << "\n";
  return os.str();
}

std::vector<double> build_initial_values(const RunConfig& cfg) {
  const int n = static_cast<int>(std::llround(2.0 / cfg.hbar)) + 1;
  if (std::abs(2.0 / cfg.hbar - (n - 1)) > 1e-9)
    throw std::invalid_argument("config: hbar must divide the domain width 2");
  std::vector<double> u(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < n; ++i) {
    const double x = -1.0 + i * cfg.hbar;
    if (cfg.initial_data == "cosine")
      u[i] = cfg.amplitude * (1.0 + std::cos(pi * x));
    else
      u[i] = cfg.amplitude * (1.0 - x * x);
  }
  u.front() = 0.0;
  u.back() = 0.0;
  return u;
}

SimulationConfig make_simulation_config(const RunConfig& cfg) {
  SimulationConfig sim;
  sim.params.p = cfg.p;
  sim.params.a = cfg.a;
  sim.params.mu = cfg.mu;
  sim.params.lambda_inv = cfg.lambda_inv;
  sim.params.alpha = cfg.alpha;
  sim.params.c_delta = cfg.c_delta;
  sim.params.hbar = cfg.hbar;
  sim.initial_values = build_initial_values(cfg);
  sim.phases = cfg.phases;
  sim.snapshot_cadence = cfg.snapshot_cadence;
  sim.checkpoint_cadence = cfg.checkpoint_cadence;
  return sim;
}

} // namespace blowup
