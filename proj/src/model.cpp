#include "blowup/model.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace blowup {

void ModelParams::set_thresholds(double sup_init) {
  m0 = std::pow(hbar, scaling_exp()) * sup_init;
  m = std::pow(static_cast<double>(lambda_inv), scaling_exp()) * m0;
}

void ModelParams::validate() const {
  if (!(p > 1.0)) throw std::invalid_argument("p must be > 1");
  if (!(a > 0.0)) throw std::invalid_argument("a must be > 0");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0,1)");
  if (!(c_delta > 0.0 && c_delta <= 0.5))
    throw std::invalid_argument("stability condition C_Delta <= 1/2 violated");
  if (lambda_inv < 2)
    throw std::invalid_argument("lambda_inv must be an integer >= 2");
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be > 0");
}

double eval_F(double u, const ModelParams& params) {
  if (!std::isfinite(u))
    throw std::domain_error("eval_F: non-finite input");
  if (u < 0.0)
    throw std::domain_error("eval_F: negative input outside positive-solution regime");
  if (u == 0.0) return 0.0;
  const double up = std::pow(u, params.p);
  return up + params.mu * up / std::pow(std::log(2.0 + u * u), params.a);
}

double eval_h(double z, const ModelParams& params) {
  if (!std::isfinite(z))
    throw std::domain_error("eval_h: non-finite input");
  if (z == 0.0) return 0.0;
  const double pw = std::pow(std::abs(z), params.p - 1.0) * z;
  return params.mu * pw / std::pow(std::log(2.0 + z * z), params.a);
}

double eval_h_prime(double z, const ModelParams& params) {
  if (!std::isfinite(z))
    throw std::domain_error("eval_h_prime: non-finite input");
  if (z == 0.0) return 0.0;
  const double z2 = z * z;
  const double lg = std::log(2.0 + z2);
  const double zp1 = std::pow(std::abs(z), params.p - 1.0);
  // d/dz [ mu |z|^{p-1} z / log^a(2+z^2) ]
  return params.mu * zp1 *
         (params.p / std::pow(lg, params.a) -
          2.0 * params.a * z2 / ((2.0 + z2) * std::pow(lg, params.a + 1.0)));
}

namespace detail {

namespace {
double simpson(double (*f)(double, const ModelParams&), const ModelParams& mp,
               double lo, double hi, double flo, double fmid, double fhi) {
  return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
}

double adapt(double (*f)(double, const ModelParams&), const ModelParams& mp,
             double lo, double hi, double flo, double fmid, double fhi,
             double whole, double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double lmid = 0.5 * (lo + mid);
  const double rmid = 0.5 * (mid + hi);
  const double flm = f(lmid, mp);
  const double frm = f(rmid, mp);
  const double left = simpson(f, mp, lo, mid, flo, flm, fmid);
  const double right = simpson(f, mp, mid, hi, fmid, frm, fhi);
  const double delta = left + right - whole;
  if (depth <= 0)
    throw std::runtime_error(
        "adaptive quadrature did not converge; residual " +
        std::to_string(std::abs(delta)));
  if (std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adapt(f, mp, lo, mid, flo, flm, fmid, left, 0.5 * tol, depth - 1) +
         adapt(f, mp, mid, hi, fmid, frm, fhi, right, 0.5 * tol, depth - 1);
}
} // namespace

double adaptive_simpson(double (*f)(double, const ModelParams&),
                        const ModelParams& mp, double lo, double hi,
                        double rel_tol) {
  if (lo == hi) return 0.0;
  const double flo = f(lo, mp);
  const double fhi = f(hi, mp);
  const double fmid = f(0.5 * (lo + hi), mp);
  const double whole = simpson(f, mp, lo, hi, flo, fmid, fhi);
  const double scale = std::max(std::abs(whole), 1e-300);
  return adapt(f, mp, lo, hi, flo, fmid, fhi, whole, rel_tol * scale, 60);
}

} // namespace detail

namespace {
// residual integrand of the integration-by-parts identity for H
double h_residual_integrand(double x, const ModelParams& mp) {
  if (x == 0.0) return 0.0;
  const double x2 = x * x;
  const double lg = std::log(2.0 + x2);
  return std::pow(std::abs(x), mp.p + 1.0) * x /
         ((2.0 + x2) * std::pow(lg, mp.a + 1.0));
}
} // namespace

double eval_H(double z, const ModelParams& params) {
  if (!std::isfinite(z))
    throw std::domain_error("eval_H: non-finite input");
  if (z == 0.0) return 0.0;
  const double z2 = z * z;
  const double lead = params.mu * std::pow(std::abs(z), params.p + 1.0) /
                      ((params.p + 1.0) * std::pow(std::log(2.0 + z2), params.a));
  const double resid =
      detail::adaptive_simpson(h_residual_integrand, params, 0.0, z, 1e-10);
  return lead + 2.0 * params.a * params.mu / (params.p + 1.0) * resid;
}

double kappa(const ModelParams& params) {
  return std::pow(params.p - 1.0, -1.0 / (params.p - 1.0));
}

double profile_cp(const ModelParams& params) {
  return (params.p - 1.0) / (4.0 * params.p);
}

double profile_f(double xi, const ModelParams& params) {
  return kappa(params) *
         std::pow(1.0 + profile_cp(params) * xi * xi, -1.0 / (params.p - 1.0));
}

} // namespace blowup
