#pragma once

#include <stdexcept>

namespace blowup {

/// Parameters of the nonlinearity F(u) = u^p + mu * u^p / log^a(2 + u^2)
/// together with the constants of the refinement scheme.
struct ModelParams {
  double p = 3.0;        // power, > 1
  double a = 1.0;        // log exponent, > 0
  double mu = 1.0;       // perturbation strength
  int lambda_inv = 2;    // 1/lambda, small integer >= 2
  double alpha = 0.6;    // refinement-width parameter, in (0,1)
  double c_delta = 0.25; // tau / h^2, <= 1/2
  double hbar = 0.005;   // initial space step
  double m0 = 0.0;       // base threshold hbar^{2/(p-1)} * ||phi_init||_inf
  double m = 0.0;        // working threshold, m = lambda_inv^{2/(p-1)} * m0

  double lambda() const { return 1.0 / static_cast<double>(lambda_inv); }
  double scaling_exp() const { return 2.0 / (p - 1.0); }

  // Sets m0 from the initial-data sup norm and m via the threshold relation.
  void set_thresholds(double sup_init);

  // Throws std::invalid_argument on any violated invariant.
  void validate() const;
};

double eval_F(double u, const ModelParams& params);
double eval_h(double z, const ModelParams& params);
double eval_h_prime(double z, const ModelParams& params);

// Primitive H(z) = int_0^z h.  Evaluated through the integration-by-parts
// identity; the residual integral is done by adaptive quadrature to
// relative tolerance 1e-10.
double eval_H(double z, const ModelParams& params);

double kappa(const ModelParams& params);

// Self-similar profile f_l for l = 1: kappa * (1 + c_p xi^2)^{-1/(p-1)}.
double profile_f(double xi, const ModelParams& params);

// c_p = (p-1)/(4p)
double profile_cp(const ModelParams& params);

namespace detail {
// Adaptive Simpson quadrature, relative tolerance on the accumulated value.
double adaptive_simpson(double (*f)(double, const ModelParams&),
                        const ModelParams& params, double lo, double hi,
                        double rel_tol);
} // namespace detail

} // namespace blowup
