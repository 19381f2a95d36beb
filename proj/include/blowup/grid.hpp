#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "blowup/model.hpp"

namespace blowup {

/// One grid level of the refinement hierarchy: uniform nodes
/// y_i = y_min + i h, values at the nodes, and the level's local clock.
struct LevelState {
  int k = 0;          // level index
  double h = 0.0;     // space step, h_k = lambda^k hbar
  double tau = 0.0;   // time step, tau = c_delta * h^2
  double y_min = 0.0; // left endpoint (level 0: -1)
  double clock = 0.0; // local time since the level's birth
  std::vector<double> values;

  int n() const { return static_cast<int>(values.size()); }
  double y_max() const { return y_min + (n() - 1) * h; }
  double node(int i) const { return y_min + i * h; }
  // scaled amplitude h^{2/(p-1)} * max(values)
  double scaled_sup(const ModelParams& params) const;
  double sup() const;
};

// Hooks for the oracle tests; the public stepping path uses the defaults.
struct StepOptions {
  bool diffusion = true;
  bool reaction = true;
};

// One explicit Euler step of u_t = u_xx + F(u) with Dirichlet data supplied
// at the endpoints.  Throws on non-finite results (threshold misconfigured).
LevelState step_explicit(const LevelState& state, double boundary_left,
                         double boundary_right, const ModelParams& params,
                         const StepOptions& opts = {});

// If the scaled sup crossed M between prev and next, the linearly
// interpolated crossing time tau*; empty otherwise.
std::optional<double> detect_threshold_crossing(const LevelState& prev,
                                                const LevelState& next,
                                                const ModelParams& params);

// Outermost nodes around the global maximizer whose scaled value is
// >= alpha M.  Throws on disconnected super-level sets.
std::pair<double, double> find_refine_interval(const LevelState& state,
                                               const ModelParams& params);

// Piecewise-linear interpolation of the level's values at the given points.
std::vector<double> interp_space(const LevelState& coarse,
                                 const std::vector<double>& fine_nodes);
double interp_space_at(const LevelState& coarse, double x);

// Linear-in-time interpolation of a parent node value between two
// bracketing snapshots.
double interp_time(const LevelState& before, const LevelState& after,
                   double t_query, double location);

} // namespace blowup
