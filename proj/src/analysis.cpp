#include "blowup/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace blowup {

double PredictionSet::v_pred(double z) const {
  return m * std::pow(1.0 + shape * z * z, -1.0 / (p - 1.0));
}

PredictionSet make_predictions(const ModelParams& params) {
  PredictionSet pr;
  const double p = params.p;
  const double lam = params.lambda();
  const double m1p = std::pow(params.m, 1.0 - p);
  const double cp = profile_cp(params);
  pr.p = p;
  pr.lambda = lam;
  pr.m = params.m;
  pr.kappa = kappa(params);
  pr.shape = (std::pow(params.alpha, 1.0 - p) - 1.0) / (lam * lam);
  pr.n_limit = (1.0 / (lam * lam) - 1.0) * m1p / (params.c_delta * (p - 1.0));
  pr.gamma = 2.0 * m1p * (std::pow(params.alpha, 1.0 - p) - 1.0) *
             std::abs(std::log(lam)) / (cp * (p - 1.0) * lam * lam);
  pr.b_intercept = -m1p * (std::pow(params.alpha, 1.0 - p) - 1.0) /
                   (cp * (p - 1.0) * lam * lam) *
                   std::log(m1p * params.hbar * params.hbar / (p - 1.0));
  return pr;
}

std::vector<double> ratio_series(const std::vector<PhaseRecord>& records,
                                 const PredictionSet& pred) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const PhaseRecord& r : records) out.push_back(r.steps / pred.n_limit);
  return out;
}

ProfileSample extract_vk(const PhaseRecord& record,
                         const PhaseRecord& predecessor,
                         const ModelParams& params, int n_samples) {
  if (predecessor.k + 1 != record.k)
    throw std::invalid_argument("extract_vk: records are not consecutive phases");
  const double yp = predecessor.y_plus;
  const double scale = std::pow(record.h, params.scaling_exp());
  const LevelState snap = record.snapshot_state();
  ProfileSample out;
  out.z.resize(n_samples);
  out.v.resize(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double z = -1.0 + 2.0 * i / (n_samples - 1);
    out.z[i] = z;
    // [y_minus, y_plus] may be one node asymmetric; clamp to the domain.
    const double x = std::min(std::max(z * yp, snap.y_min), snap.y_max());
    out.v[i] = scale * interp_space_at(snap, x);
  }
  return out;
}

double profile_error(const ProfileSample& vk, const PredictionSet& pred) {
  double e = 0.0;
  for (size_t i = 0; i < vk.z.size(); ++i)
    e = std::max(e, std::abs(vk.v[i] - pred.v_pred(vk.z[i])));
  return e;
}

SlopeFit slope_fit(const std::vector<PhaseRecord>& records,
                   const PredictionSet& pred, int k_min, int k_max) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (const PhaseRecord& r : records) {
    if (r.k < k_min || r.k > k_max) continue;
    const double x = r.k;
    // y_plus measured in units of the spawned level's spacing lambda h_k,
    // the convention the predicted slope gamma is stated in.
    const double ratio = r.y_plus / (r.h * pred.lambda);
    const double y = ratio * ratio;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) throw std::invalid_argument("slope_fit: fewer than 3 points");
  SlopeFit fit;
  fit.gamma_hat = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.b_hat = (sy - fit.gamma_hat * sx) / n;
  fit.ratio = fit.gamma_hat / pred.gamma;
  return fit;
}

std::vector<double> blowup_limit_series(const std::vector<PhaseRecord>& records,
                                        const SimilarityFrame& frame,
                                        const ModelParams& params) {
  // The averaged fit can land an ulp or two below the saturated sigma;
  // only a genuinely inconsistent frame should be rejected.
  if (!records.empty() &&
      records.back().sigma - frame.T > 1e-12 * std::abs(frame.T))
    throw std::invalid_argument("blowup_limit_series: sigma_k > T");
  const std::vector<double> gaps = phase_gaps(records, params);
  std::vector<double> out;
  out.reserve(records.size());
  for (size_t i = 0; i < records.size(); ++i)
    out.push_back(std::pow(gaps[i], 1.0 / (params.p - 1.0)) *
                  records[i].sup_u);
  return out;
}

namespace {
std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
} // namespace

void emit_reports(const RunReport& report, const PredictionSet& pred,
                  const std::string& out_dir,
                  const std::vector<int>& profile_ks) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);

  const auto& recs = report.records;
  {
    std::ofstream os(out_dir + "/phases.csv");
    if (!os) throw std::runtime_error("cannot write " + out_dir + "/phases.csv");
    os << "k,h_k,tau_k,tau_star,N_k,N_ratio,sigma_k,y_plus,sup_u,scaled_sup\n";
    for (const PhaseRecord& r : recs) {
      const double tau_k = report.params.c_delta * r.h * r.h;
      const double scaled =
          std::pow(r.h, report.params.scaling_exp()) * r.sup_u;
      os << r.k << "," << fmt(r.h) << "," << fmt(tau_k) << ","
         << fmt(r.tau_star) << "," << fmt(r.steps) << ","
         << fmt(r.steps / pred.n_limit) << "," << fmt(r.sigma) << ","
         << fmt(r.y_plus) << "," << fmt(r.sup_u) << "," << fmt(scaled) << "\n";
    }
  }

  for (int k : profile_ks) {
    if (k < 1 || k >= static_cast<int>(recs.size())) continue;
    const ProfileSample vk =
        extract_vk(recs[k], recs[k - 1], report.params, 401);
    std::ofstream os(out_dir + "/profile_" + std::to_string(k) + ".csv");
    os << "z,v_k,v_pred,abs_err\n";
    for (size_t i = 0; i < vk.z.size(); ++i) {
      const double vp = pred.v_pred(vk.z[i]);
      os << fmt(vk.z[i]) << "," << fmt(vk.v[i]) << "," << fmt(vp) << ","
         << fmt(std::abs(vk.v[i] - vp)) << "\n";
    }
  }

  {
    // Figure-style data: k against (h_k^{-1} y_k^+)^2 with the predicted line.
    std::ofstream os(out_dir + "/slope.csv");
    os << "k,radius_sq,predicted\n";
    for (const PhaseRecord& r : recs) {
      const double ratio = r.y_plus / (r.h * pred.lambda);
      os << r.k << "," << fmt(ratio * ratio) << ","
         << fmt(pred.gamma * r.k + pred.b_intercept) << "\n";
    }
  }

  {
    nlohmann::json j;
    j["N_limit"] = pred.n_limit;
    j["gamma"] = pred.gamma;
    j["B"] = pred.b_intercept;
    j["kappa"] = pred.kappa;
    j["M"] = pred.m;
    if (recs.size() >= 5) {
      const SimilarityFrame frame =
          estimate_blowup_time(recs, report.params);
      j["T_estimate"] = frame.T;
      j["T_fit_residual"] = frame.fit_residual;
      j["blowup_point"] = frame.b;
    }
    if (recs.size() >= 3 && recs.back().k >= 3) {
      try {
        const SlopeFit fit = slope_fit(
            recs, pred, std::max(1, recs.back().k / 2), recs.back().k);
        j["gamma_hat"] = fit.gamma_hat;
        j["B_hat"] = fit.b_hat;
        j["gamma_ratio"] = fit.ratio;
      } catch (const std::invalid_argument&) {
      }
    }
    std::ofstream os(out_dir + "/predictions.json");
    os << j.dump(2) << "\n";
  }
}

} // namespace blowup
