#include "blowup/phi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blowup {

double phi_rhs(double s, double phi, const ModelParams& params) {
  const double p = params.p;
  const double pert =
      params.mu * std::pow(phi, p) /
      std::pow(std::log(2.0 + std::exp(2.0 * s / (p - 1.0)) * phi * phi),
               params.a);
  return -phi / (p - 1.0) + std::pow(phi, p) + pert;
}

double phi_cstar(const ModelParams& params) {
  return params.mu * std::pow(0.5 * (params.p - 1.0), params.a);
}

namespace {
int bracket_index(const std::vector<double>& grid, double s) {
  if (s < grid.front() - 1e-12 || s > grid.back() + 1e-12)
    throw std::out_of_range("phi evaluation outside sample range");
  auto it = std::upper_bound(grid.begin(), grid.end(), s);
  int i = static_cast<int>(it - grid.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(grid.size()) - 2);
}
} // namespace

double PhiSolution::eval(double s) const {
  const int i = bracket_index(s_grid, s);
  const double dl = s_grid[i + 1] - s_grid[i];
  const double t = (s - s_grid[i]) / dl;
  const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
  const double h10 = t * (1.0 - t) * (1.0 - t);
  const double h01 = t * t * (3.0 - 2.0 * t);
  const double h11 = t * t * (t - 1.0);
  return h00 * values[i] + h10 * dl * derivs[i] + h01 * values[i + 1] +
         h11 * dl * derivs[i + 1];
}

double PhiSolution::eval_deriv(double s) const {
  const int i = bracket_index(s_grid, s);
  const double dl = s_grid[i + 1] - s_grid[i];
  const double t = (s - s_grid[i]) / dl;
  const double g00 = 6.0 * t * (t - 1.0) / dl;
  const double g10 = (1.0 - t) * (1.0 - 3.0 * t);
  const double g01 = -g00;
  const double g11 = t * (3.0 * t - 2.0);
  return g00 * values[i] + g10 * derivs[i] + g01 * values[i + 1] +
         g11 * derivs[i + 1];
}

PhiSolution solve_phi(double s_min, double s_max, const ModelParams& params,
                      double step) {
  if (s_min < 1.0) throw std::invalid_argument("solve_phi: s_min must be >= 1");
  const double cstar = phi_cstar(params);
  // One-term seed kappa (1 + C*/s^a)^{-1/(p-1)}; the first neglected
  // correction is smaller by a factor ~ a/s, so the seed error is
  // ~ (C*/s^a)(a/s).
  const double seed_err =
      std::abs(cstar) / std::pow(s_max, params.a) * params.a / s_max;
  if (seed_err >= 0.01)
    throw std::invalid_argument(
        "solve_phi: s_max too small for the asymptotic seed");

  const int n = static_cast<int>(std::ceil((s_max - s_min) / step)) + 1;
  const double dl = (s_max - s_min) / (n - 1);

  PhiSolution sol;
  sol.params = params;
  sol.kappa = kappa(params);
  sol.s_grid.resize(n);
  sol.values.resize(n);
  sol.derivs.resize(n);

  // one-term asymptotic seed at s_max
  double phi = sol.kappa * std::pow(1.0 + cstar / std::pow(s_max, params.a),
                                    -1.0 / (params.p - 1.0));
  for (int i = n - 1; i >= 0; --i) {
    const double s = s_min + i * dl;
    sol.s_grid[i] = s;
    sol.values[i] = phi;
    sol.derivs[i] = phi_rhs(s, phi, params);
    if (i == 0) break;
    // classic RK4, backward step of size dl
    const double h = -dl;
    const double k1 = phi_rhs(s, phi, params);
    const double k2 = phi_rhs(s + 0.5 * h, phi + 0.5 * h * k1, params);
    const double k3 = phi_rhs(s + 0.5 * h, phi + 0.5 * h * k2, params);
    const double k4 = phi_rhs(s + h, phi + h * k3, params);
    phi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!(phi > 0.0) || !std::isfinite(phi))
      throw std::runtime_error(
          "solve_phi: backward integration lost positivity (s_max too small)");
  }
  return sol;
}

double omega(double s, const PhiSolution& phi, const ModelParams& params) {
  const double ph = phi.eval(s);
  const double kp = std::pow(phi.kappa, params.p - 1.0);
  const double arg = std::exp(s / (params.p - 1.0)) * ph;
  return params.p * (std::pow(ph, params.p - 1.0) - kp) +
         std::exp(-s) * eval_h_prime(arg, params);
}

double beta_factor(double s, const PhiSolution& phi,
                   const ModelParams& params) {
  if (params.mu == 0.0) return 1.0;
  const double s_max = phi.s_max();
  if (s > s_max)
    throw std::out_of_range("beta_factor: s beyond the phi sample range");

  // composite Simpson on an even number of subintervals of [s, s_max]
  const double span = s_max - s;
  double integral = 0.0;
  if (span > 0.0) {
    int m = std::max(2, 2 * static_cast<int>(std::ceil(span / 0.02)));
    const double dl = span / m;
    double acc = omega(s, phi, params) + omega(s_max, phi, params);
    for (int i = 1; i < m; ++i)
      acc += (i % 2 ? 4.0 : 2.0) * omega(s + i * dl, phi, params);
    integral = acc * dl / 3.0;
  }

  // Lemma-type tail: omega ~ C / s^{a+1};  fit C on the last 20% of the
  // window, then int_{s_max}^inf = C / (a s_max^a).
  const double fit_lo = phi.s_min() + 0.8 * (s_max - phi.s_min());
  int cnt = 0;
  double csum = 0.0;
  for (double t = fit_lo; t <= s_max; t += 0.1 * (s_max - fit_lo) + 1e-12) {
    csum += omega(t, phi, params) * std::pow(t, params.a + 1.0);
    ++cnt;
  }
  const double c_fit = csum / cnt;
  const double tail = c_fit / (params.a * std::pow(s_max, params.a));
  return std::exp(-(integral + tail));
}

} // namespace blowup
