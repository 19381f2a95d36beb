#pragma once

#include <string>
#include <vector>

#include "blowup/hierarchy.hpp"
#include "blowup/similarity.hpp"

namespace blowup {

/// Closed-form predictions for the refinement outputs (limit step count,
/// rescaled profile, slope/intercept of the squared refinement radius).
struct PredictionSet {
  double n_limit = 0.0;    // (lambda^{-2}-1) M^{1-p} / (C_Delta (p-1))
  double gamma = 0.0;      // slope of (h_k^{-1} y_k^+)^2 vs k
  double b_intercept = 0.0;
  double kappa = 0.0;
  double m = 0.0;
  double shape = 0.0;      // (alpha^{1-p}-1) lambda^{-2}
  double p = 0.0;
  double lambda = 0.5;

  double v_pred(double z) const;
};

PredictionSet make_predictions(const ModelParams& params);

std::vector<double> ratio_series(const std::vector<PhaseRecord>& records,
                                 const PredictionSet& pred);

struct ProfileSample {
  std::vector<double> z;
  std::vector<double> v;
};

// v_k(z) = h_k^{2/(p-1)} u_k(z y_{k-1}^+, tau_k^*) on a uniform z-grid.
ProfileSample extract_vk(const PhaseRecord& record,
                         const PhaseRecord& predecessor,
                         const ModelParams& params, int n_samples = 401);

double profile_error(const ProfileSample& vk, const PredictionSet& pred);

struct SlopeFit {
  double gamma_hat = 0.0;
  double b_hat = 0.0;
  double ratio = 0.0; // gamma_hat / gamma
};

SlopeFit slope_fit(const std::vector<PhaseRecord>& records,
                   const PredictionSet& pred, int k_min = 20, int k_max = 40);

// (T - sigma_k)^{1/(p-1)} * sup_u per phase; expected -> kappa.
std::vector<double> blowup_limit_series(const std::vector<PhaseRecord>& records,
                                        const SimilarityFrame& frame,
                                        const ModelParams& params);

// Writes phases.csv, profile_<k>.csv for each requested k, predictions.json
// and the slope-figure data into out_dir.
void emit_reports(const RunReport& report, const PredictionSet& pred,
                  const std::string& out_dir,
                  const std::vector<int>& profile_ks);

} // namespace blowup
