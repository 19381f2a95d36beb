#pragma once

#include <string>
#include <vector>

#include "blowup/hierarchy.hpp"
#include "blowup/phi.hpp"

namespace blowup {

/// Blow-up frame defining the similarity variables
/// y = (x-b)/sqrt(T-t), s = -log(T-t), w = (T-t)^{1/(p-1)} u.
struct SimilarityFrame {
  double b = 0.0;
  double T = 0.0;
  double fit_residual = 0.0;
};

/// Quadrature for int f(y) rho(y) dy with rho = (4 pi)^{-1/2} e^{-y^2/4},
/// built from Gauss-Hermite nodes under y = 2t.  Nodes beyond the
/// truncation radius carry negligible mass and are dropped.
struct WeightedQuadrature {
  std::vector<double> nodes;
  std::vector<double> weights; // rho-weighted: sum w_i f(y_i) ~ int f rho
  double radius = 20.0;

  double integrate(const std::vector<double>& f) const;
};

WeightedQuadrature make_weighted_quadrature(int n = 80, double radius = 20.0);

/// 1-D eigenfunctions of L = d^2/dy^2 - (y/2) d/dy + 1 under rho.
struct HermiteBasis {
  int max_degree = 12;
  std::vector<double> norms; // <h_m, h_m>_rho by quadrature, cached

  static HermiteBasis build(int max_degree, const WeightedQuadrature& q);
};

double hermite_poly(int m, double y);
double hermite_project(const std::vector<double>& v, int m,
                       const WeightedQuadrature& q, const HermiteBasis& basis);

// Least-squares fit of T over the last `window` phases via
// T = sigma_k + (M^{-1} kappa)^{p-1} h_k^2; b from the final snapshot peak.
SimilarityFrame estimate_blowup_time(const std::vector<PhaseRecord>& records,
                                     const ModelParams& params,
                                     int window = 5);

/// One trajectory sample: w on a fixed y-grid at similarity time s.
struct WSample {
  double s = 0.0;
  std::vector<double> w;
  std::vector<bool> truncated; // y mapped outside the snapshot domain
};

// T - sigma_k per phase, by backward telescoping of the tau* increments
// (accurate long after sigma saturates in double); the tail beyond the last
// phase is closed with the amplitude relation.
std::vector<double> phase_gaps(const std::vector<PhaseRecord>& records,
                               const ModelParams& params);

WSample sample_similarity(const CompositeSnapshot& snapshot, double b,
                          double gap, const std::vector<double>& y_points,
                          const ModelParams& params);
WSample to_similarity(const CompositeSnapshot& snapshot,
                      const SimilarityFrame& frame,
                      const std::vector<double>& y_points,
                      const ModelParams& params);

double functional_E0(const std::vector<double>& w,
                     const WeightedQuadrature& q, const ModelParams& params);
double functional_I(const std::vector<double>& w, double s,
                    const WeightedQuadrature& q, const ModelParams& params);
double functional_E(const std::vector<double>& w, double s,
                    const WeightedQuadrature& q, const ModelParams& params);
double functional_J(const std::vector<double>& w, double s,
                    const WeightedQuadrature& q, const ModelParams& params,
                    double gamma, double theta);

struct LyapunovReport {
  std::vector<double> s;
  std::vector<double> J;
  std::vector<double> dissipation; // D_i between s_i and s_{i+1}
  std::vector<double> defect;      // J_{i+1} - J_i - D_i
  int violations = 0;              // steps with J increase beyond tolerance
  double worst_increase = 0.0;     // max of (J_{i+1}-J_i)/|J_i|
};

LyapunovReport lyapunov_check(const std::vector<WSample>& trajectory,
                              const WeightedQuadrature& q,
                              const ModelParams& params, double gamma,
                              double theta, double rel_tol = 1e-3);

enum class Behavior { Flat, StableProfile, HigherModeCandidate, Inconclusive };

struct ClassificationReport {
  Behavior behavior = Behavior::Inconclusive;
  std::vector<double> s;
  std::vector<double> c2;        // second Hermite coefficient of w - phi
  std::vector<double> scaled_c2; // s * c2(s)
  double target = 0.0;           // -kappa/(4p)
  std::string detail;
};

ClassificationReport classify_behavior(const std::vector<WSample>& trajectory,
                                       const PhiSolution& phi,
                                       const WeightedQuadrature& q,
                                       const ModelParams& params);

} // namespace blowup
