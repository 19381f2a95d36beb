// Command-line driver: run one refinement simulation, sweep a parameter
// grid, post-process a finished run in similarity variables, or compare a
// run against the closed-form predictions.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "blowup/analysis.hpp"
#include "blowup/config.hpp"
#include "blowup/run_io.hpp"

namespace fs = std::filesystem;
using namespace blowup;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<int> default_profile_ks(int phases) {
  std::vector<int> ks;
  for (int k = 10; k <= phases; k += 10) ks.push_back(k);
  if (ks.empty() && phases >= 2) ks.push_back(phases - 1);
  return ks;
}

int do_run(const RunConfig& cfg, const std::string& out_dir,
           const std::string& resume_path) {
  fs::create_directories(out_dir);
  SimulationConfig sim = make_simulation_config(cfg);
  sim.checkpoint_path = out_dir + "/checkpoint.txt";

  RunReport report = resume_path.empty()
                         ? run_simulation(sim)
                         : resume_simulation(sim, resume_path);

  const PredictionSet pred = make_predictions(report.params);
  emit_reports(report, pred, out_dir, default_profile_ks(cfg.phases));
  save_snapshots(out_dir + "/snapshots.txt", report.snapshots);
  {
    std::ofstream os(out_dir + "/config.effective");
    if (!os) throw std::runtime_error("cannot write config.effective");
    os << emit_config(cfg);
    os << "# derived\n";
    os << "# M0 = " << fmt(report.params.m0) << "\n";
    os << "# M = " << fmt(report.params.m) << "\n";
  }
  if (report.asymmetric_warning)
    std::cerr << "warning: initial data is not symmetric about 0\n";
  std::cout << "completed " << report.records.size() << " phases; sigma_"
            << report.records.back().k << " = "
            << fmt(report.records.back().sigma) << "\n";
  return 0;
}

int do_sweep(const RunConfig& base, const std::string& out_dir, int jobs) {
  const std::vector<double> hbars = {0.04, 0.02, 0.01, 0.005};
  const std::vector<double> as = {0.1, 1.0, 10.0};
  struct Job {
    RunConfig cfg;
    std::string dir;
  };
  std::vector<Job> grid;
  for (double hb : hbars)
    for (double a : as) {
      RunConfig cfg = base;
      cfg.hbar = hb;
      cfg.a = a;
      std::ostringstream name;
      name << out_dir << "/h" << hb << "_a" << a;
      grid.push_back({cfg, name.str()});
    }

  std::mutex mu;
  std::vector<std::string> failures;
  size_t next = 0;
  auto worker = [&] {
    for (;;) {
      size_t idx;
      {
        std::lock_guard<std::mutex> lk(mu);
        if (next >= grid.size()) return;
        idx = next++;
      }
      const Job& job = grid[idx];
      try {
        do_run(job.cfg, job.dir, "");
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lk(mu);
        failures.push_back(job.dir + ": " + e.what());
      }
    }
  };
  jobs = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  for (const std::string& f : failures) std::cerr << "failed: " << f << "\n";
  return failures.empty() ? 0 : kExitNumerical;
}

int do_diagnose(const std::string& out_dir) {
  const RunConfig cfg = load_config(out_dir + "/config.effective");
  SimulationConfig sim = make_simulation_config(cfg);
  ModelParams params = sim.params;
  params.set_thresholds(*std::max_element(sim.initial_values.begin(),
                                          sim.initial_values.end()));
  const std::vector<PhaseRecord> records =
      read_phases_csv(out_dir + "/phases.csv", params);
  const std::vector<CompositeSnapshot> snaps =
      load_snapshots(out_dir + "/snapshots.txt");

  const SimilarityFrame frame = estimate_blowup_time(records, params);
  const WeightedQuadrature q = make_weighted_quadrature();
  const double gamma = cfg.gamma_or_default();
  const double theta = cfg.lyapunov_theta;

  // Gaps to T come from the telescoped tau* sums; the direct difference
  // frame.T - snap.time underflows once sigma saturates in double.
  const std::vector<double> gaps = phase_gaps(records, params);
  std::vector<WSample> traj;
  for (size_t i = 0; i < snaps.size(); ++i) {
    // snapshot i was taken after phase (i+1)*cadence
    const size_t rec = (i + 1) * cfg.snapshot_cadence - 1;
    if (rec >= gaps.size()) break;
    traj.push_back(
        sample_similarity(snaps[i], frame.b, gaps[rec], q.nodes, params));
  }
  if (traj.size() < 2) {
    std::cerr << "diagnose: not enough usable snapshots\n";
    return kExitNumerical;
  }

  const LyapunovReport lr = lyapunov_check(traj, q, params, gamma, theta);
  const PhiSolution phi =
      solve_phi(1.0, std::max(100.0, traj.back().s * 1.5), params);
  const ClassificationReport cr = classify_behavior(traj, phi, q, params);
  const HermiteBasis basis = HermiteBasis::build(6, q);

  std::vector<SimilarityRow> rows(traj.size());
  for (size_t i = 0; i < traj.size(); ++i) {
    const WSample& ws = traj[i];
    SimilarityRow& r = rows[i];
    r.s = ws.s;
    r.e0 = functional_E0(ws.w, q, params);
    r.i_term = functional_I(ws.w, ws.s, q, params);
    r.e = r.e0 + r.i_term;
    r.j = functional_J(ws.w, ws.s, q, params, gamma, theta);
    r.dissipation = i + 1 < traj.size() ? lr.dissipation[i] : 0.0;
    for (int m = 0; m <= 6; ++m)
      r.coeffs[m] = hermite_project(ws.w, m, q, basis);
    r.sup_w = *std::max_element(ws.w.begin(), ws.w.end());
  }
  write_similarity_csv(out_dir + "/similarity.csv", rows);

  std::cout << "T = " << fmt(frame.T) << "  (fit residual "
            << fmt(frame.fit_residual) << ")\n";
  std::cout << "b = " << fmt(frame.b) << "\n";
  std::cout << "lyapunov: " << lr.violations << " increase(s), worst "
            << fmt(lr.worst_increase) << "\n";
  const char* names[] = {"flat", "stable-profile", "higher-mode-candidate",
                         "inconclusive"};
  std::cout << "behavior: " << names[static_cast<int>(cr.behavior)] << " ("
            << cr.detail << ")\n";
  if (!cr.scaled_c2.empty())
    std::cout << "s*c2 -> " << fmt(cr.scaled_c2.back()) << " (target "
              << fmt(cr.target) << ")\n";
  return 0;
}

int do_compare(const std::string& out_dir) {
  const RunConfig cfg = load_config(out_dir + "/config.effective");
  SimulationConfig sim = make_simulation_config(cfg);
  ModelParams params = sim.params;
  params.set_thresholds(*std::max_element(sim.initial_values.begin(),
                                          sim.initial_values.end()));
  const std::vector<PhaseRecord> records =
      read_phases_csv(out_dir + "/phases.csv", params);
  const PredictionSet pred = make_predictions(params);

  std::printf("N_limit = %s\n", fmt(pred.n_limit).c_str());
  std::printf("%4s %14s %10s\n", "k", "N_k", "N_k/limit");
  for (const PhaseRecord& r : records) {
    if (r.k % 5 != 0 || r.k < 10) continue;
    std::printf("%4d %14.4f %10.4f\n", r.k, r.steps, r.steps / pred.n_limit);
  }

  bool ok = true;
  if (!records.empty()) {
    const double last_ratio = records.back().steps / pred.n_limit;
    const bool ratio_ok = last_ratio > 0.5 && last_ratio < 1.2;
    std::printf("final ratio %.4f  [%s]\n", last_ratio,
                ratio_ok ? "pass" : "fail");
    ok = ok && ratio_ok;
  }

  try {
    const SlopeFit fit = slope_fit(records, pred,
                                   std::max(1, records.back().k / 2),
                                   records.back().k);
    const bool slope_ok = fit.ratio > 0.7 && fit.ratio < 1.3;
    std::printf("slope gamma_hat/gamma = %.4f  [%s]\n", fit.ratio,
                slope_ok ? "pass" : "fail");
    ok = ok && slope_ok;
  } catch (const std::exception& e) {
    std::printf("slope fit unavailable: %s\n", e.what());
  }

  // Rescaled-profile error from the finest slice of the final snapshot.
  try {
    const std::vector<CompositeSnapshot> snaps =
        load_snapshots(out_dir + "/snapshots.txt");
    if (!snaps.empty() && records.size() >= 2) {
      const LevelState& fine = snaps.back().slices.front();
      const PhaseRecord& prev = records[records.size() - 2];
      double err = 0.0;
      for (int i = 0; i <= 400; ++i) {
        const double z = -1.0 + i / 200.0;
        const double x = std::min(std::max(z * prev.y_plus, fine.y_min),
                                  fine.y_max());
        const double v =
            std::pow(fine.h, params.scaling_exp()) * interp_space_at(fine, x);
        err = std::max(err, std::abs(v - pred.v_pred(z)));
      }
      const bool prof_ok = err < 0.25 * params.m;
      std::printf("profile sup error %s (vs M = %s)  [%s]\n",
                  fmt(err).c_str(), fmt(params.m).c_str(),
                  prof_ok ? "pass" : "fail");
      ok = ok && prof_ok;
    }
  } catch (const std::exception&) {
    std::printf("profile data unavailable\n");
  }

  return ok ? 0 : kExitNumerical;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"nested-grid refinement solver for blowing-up reaction-diffusion"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", resume_path;
  int jobs = 1;

  CLI::App* run = app.add_subcommand("run", "run one simulation");
  run->add_option("--config", config_path, "configuration file");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--resume", resume_path, "checkpoint to continue from");

  CLI::App* sweep =
      app.add_subcommand("sweep", "run the step-size / exponent grid");
  sweep->add_option("--config", config_path, "base configuration file");
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);

  CLI::App* diagnose =
      app.add_subcommand("diagnose", "similarity-variable post-processing");
  diagnose->add_option("--out", out_dir, "directory of a finished run");

  CLI::App* compare =
      app.add_subcommand("compare", "check a run against predictions");
  compare->add_option("--out", out_dir, "directory of a finished run");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      try {
        cfg = load_config(config_path);
      } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
      }
    }
    if (run->parsed()) return do_run(cfg, out_dir, resume_path);
    if (sweep->parsed()) return do_sweep(cfg, out_dir, jobs);
    if (diagnose->parsed()) return do_diagnose(out_dir);
    if (compare->parsed()) return do_compare(out_dir);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    const bool io = what.find("cannot") == 0 || what.find("snapshots:") == 0 ||
                    what.find("phases.csv") == 0;
    std::cerr << "error: " << what << "\n";
    return io ? kExitIo : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
