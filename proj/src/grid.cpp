#include "blowup/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blowup {

double LevelState::sup() const {
  return *std::max_element(values.begin(), values.end());
}

double LevelState::scaled_sup(const ModelParams& params) const {
  return std::pow(h, params.scaling_exp()) * sup();
}

LevelState step_explicit(const LevelState& state, double boundary_left,
                         double boundary_right, const ModelParams& params,
                         const StepOptions& opts) {
  if (!std::isfinite(boundary_left) || !std::isfinite(boundary_right))
    throw std::domain_error("step_explicit: non-finite boundary value");

  const int n = state.n();
  LevelState out = state;
  const double cd = opts.diffusion ? params.c_delta : 0.0;
  const double tau = state.tau;
  const double p = params.p;
  const double a = params.a;
  const double mu = params.mu;
  const bool cubic = (p == 3.0);
  const std::vector<double>& u = state.values;

  for (int i = 1; i < n - 1; ++i) {
    double v = u[i] + cd * (u[i - 1] - 2.0 * u[i] + u[i + 1]);
    if (opts.reaction && u[i] != 0.0) {
      const double up = cubic ? u[i] * u[i] * u[i] : std::pow(u[i], p);
      const double f =
          up + mu * up / std::pow(std::log(2.0 + u[i] * u[i]), a);
      v += tau * f;
    }
    out.values[i] = v;
  }
  out.values[0] = boundary_left;
  out.values[n - 1] = boundary_right;
  out.clock = state.clock + tau;

  for (double v : out.values)
    if (!std::isfinite(v))
      throw std::overflow_error(
          "step_explicit: non-finite value (blow-up overflow; threshold too lax)");
  return out;
}

std::optional<double> detect_threshold_crossing(const LevelState& prev,
                                                const LevelState& next,
                                                const ModelParams& params) {
  const double sp = prev.scaled_sup(params);
  const double sn = next.scaled_sup(params);
  if (sp >= params.m || sn < params.m) return std::nullopt;
  if (sn == params.m) return next.clock;
  const double frac = (params.m - sp) / (sn - sp);
  return prev.clock + frac * (next.clock - prev.clock);
}

std::pair<double, double> find_refine_interval(const LevelState& state,
                                               const ModelParams& params) {
  const int n = state.n();
  const double scale = std::pow(state.h, params.scaling_exp());
  const double cut = params.alpha * params.m;

  int imax = 0;
  for (int i = 1; i < n; ++i)
    if (state.values[i] > state.values[imax]) imax = i;
  if (scale * state.values[imax] < cut)
    throw std::runtime_error(
        "find_refine_interval: alpha*M never attained (degenerate profile)");

  int lo = imax, hi = imax;
  while (hi + 1 < n && scale * state.values[hi + 1] >= cut) ++hi;
  while (lo - 1 >= 0 && scale * state.values[lo - 1] >= cut) --lo;
  for (int i = hi + 1; i < n; ++i)
    if (scale * state.values[i] >= cut)
      throw std::runtime_error(
          "find_refine_interval: disconnected super-level set");
  for (int i = 0; i < lo; ++i)
    if (scale * state.values[i] >= cut)
      throw std::runtime_error(
          "find_refine_interval: disconnected super-level set");
  return {state.node(lo), state.node(hi)};
}

double interp_space_at(const LevelState& coarse, double x) {
  const double tol = 1e-9 * coarse.h;
  if (x < coarse.y_min - tol || x > coarse.y_max() + tol)
    throw std::out_of_range("interp_space: point outside the level domain");
  double t = (x - coarse.y_min) / coarse.h;
  int i = std::clamp(static_cast<int>(std::floor(t)), 0, coarse.n() - 2);
  double frac = t - i;
  frac = std::clamp(frac, 0.0, 1.0);
  return (1.0 - frac) * coarse.values[i] + frac * coarse.values[i + 1];
}

std::vector<double> interp_space(const LevelState& coarse,
                                 const std::vector<double>& fine_nodes) {
  std::vector<double> out;
  out.reserve(fine_nodes.size());
  for (double x : fine_nodes) out.push_back(interp_space_at(coarse, x));
  return out;
}

double interp_time(const LevelState& before, const LevelState& after,
                   double t_query, double location) {
  const double eps = 1e-9 * std::max(after.tau, 1e-300);
  if (t_query < before.clock - eps || t_query > after.clock + eps)
    throw std::logic_error(
        "interp_time: query outside bracket (level clocks desynchronized)");
  const double idxf = (location - before.y_min) / before.h;
  const int i = static_cast<int>(std::llround(idxf));
  if (i < 0 || i >= before.n() || std::abs(idxf - i) > 1e-6)
    throw std::out_of_range("interp_time: location is not a grid node");
  const double span = after.clock - before.clock;
  if (span <= 0.0) return after.values[i];
  double frac = std::clamp((t_query - before.clock) / span, 0.0, 1.0);
  return (1.0 - frac) * before.values[i] + frac * after.values[i];
}

} // namespace blowup
