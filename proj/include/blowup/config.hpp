#pragma once

#include <string>
#include <vector>

#include "blowup/hierarchy.hpp"

namespace blowup {

// Everything a run needs, as read from a flat key = value file.
struct RunConfig {
  double p = 3.0;
  double a = 1.0;
  double mu = 1.0;
  double hbar = 0.04;
  double c_delta = 0.25;
  int lambda_inv = 2;
  double alpha = 0.6;
  int phases = 40;
  std::string initial_data = "cosine"; // cosine | parabola
  double amplitude = 2.0;
  bool similarity = true;
  int snapshot_cadence = 1;
  int checkpoint_cadence = 5;
  double lyapunov_gamma = 0.0; // 0 means use the default 4(p+1)/(p-1)^2
  double lyapunov_theta = 1.0;
  std::string output_dir = "out";

  double gamma_or_default() const;
  bool operator==(const RunConfig&) const = default;
};

// Throws std::invalid_argument with the offending key or constraint in the
// message. Unknown keys are rejected rather than ignored.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

std::string emit_config(const RunConfig& cfg);

std::vector<double> build_initial_values(const RunConfig& cfg);

// Assembles the solver-facing config: model parameters, initial values,
// thresholds derived from the data.
SimulationConfig make_simulation_config(const RunConfig& cfg);

} // namespace blowup
