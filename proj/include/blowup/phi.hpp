#pragma once

#include <vector>

#include "blowup/model.hpp"

namespace blowup {

/// Sampled solution of the similarity ODE
///   phi_s = -phi/(p-1) + phi^p + e^{-ps/(p-1)} h(e^{s/(p-1)} phi)
/// with phi(s) -> kappa as s -> +infinity.
struct PhiSolution {
  std::vector<double> s_grid;   // increasing, uniform spacing
  std::vector<double> values;   // phi(s) samples, positive
  std::vector<double> derivs;   // phi'(s) samples (ODE right-hand side)
  double kappa = 0.0;
  ModelParams params;

  double s_min() const { return s_grid.front(); }
  double s_max() const { return s_grid.back(); }

  // Cubic-Hermite evaluation inside the sample range.
  double eval(double s) const;
  double eval_deriv(double s) const;
};

// Right-hand side of the phi ODE.
double phi_rhs(double s, double phi, const ModelParams& params);

// C_* = mu ((p-1)/2)^a, the leading coefficient of eta_a(s) ~ C_*/s^a.
double phi_cstar(const ModelParams& params);

// Integrates the ODE backward from s_max, seeded with the one-term
// asymptotic expansion kappa (1 + C_*/s_max^a)^{-1/(p-1)}.
PhiSolution solve_phi(double s_min, double s_max, const ModelParams& params,
                      double step = 0.002);

// omega(s) = p (phi^{p-1} - kappa^{p-1}) + e^{-s} h'(e^{s/(p-1)} phi(s))
double omega(double s, const PhiSolution& phi, const ModelParams& params);

// beta(s) = exp(-int_s^inf omega); the tail beyond s_max is closed with a
// fitted C/s^{a+1} envelope.
double beta_factor(double s, const PhiSolution& phi, const ModelParams& params);

} // namespace blowup
