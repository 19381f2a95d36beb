#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "blowup/analysis.hpp"
#include "blowup/config.hpp"
#include "blowup/run_io.hpp"

using namespace blowup;

namespace {
ModelParams reference(double hbar = 0.005) {
  ModelParams mp;
  mp.p = 3.0;
  mp.a = 10.0;
  mp.mu = 1.0;
  mp.hbar = hbar;
  mp.set_thresholds(4.0);
  return mp;
}
} // namespace

TEST_CASE("prediction constants at the reference parameters") {
  PredictionSet pred = make_predictions(reference());
  // (lambda^{-2}-1) M^{-2} / (C 2) = 3 * 625 / 0.5
  CHECK(pred.n_limit == doctest::Approx(3750.0).epsilon(1e-14));
  CHECK(pred.kappa == doctest::Approx(0.7071067811865476).epsilon(1e-15));
  CHECK(pred.m == doctest::Approx(0.04).epsilon(1e-15));
  // shape = (alpha^{-2}-1) lambda^{-2} = (1/0.36 - 1) * 4
  CHECK(pred.shape == doctest::Approx((1.0 / 0.36 - 1.0) * 4.0).epsilon(1e-13));

  // gamma, rebuilt from scratch with a different operation order
  const double m2 = 1.0 / (0.04 * 0.04);
  const double expected_gamma =
      (2.0 * std::log(2.0)) * m2 * (1.0 / 0.36 - 1.0) / ((1.0 / 6.0) * 0.5);
  CHECK(pred.gamma == doctest::Approx(expected_gamma).epsilon(1e-12));

  const double expected_b = -(m2 * (1.0 / 0.36 - 1.0) / ((1.0 / 6.0) * 0.5)) *
                            std::log(m2 * 0.005 * 0.005 / 2.0);
  CHECK(pred.b_intercept == doctest::Approx(expected_b).epsilon(1e-12));
}

TEST_CASE("predicted profile values") {
  PredictionSet pred = make_predictions(reference());
  CHECK(pred.v_pred(0.0) == doctest::Approx(pred.m).epsilon(1e-15));
  // at z = 1: M (1 + shape)^{-1/2}, frozen ratio
  CHECK(pred.v_pred(1.0) / pred.m ==
        doctest::Approx(0.35112344158839165).epsilon(1e-12));
  CHECK(pred.v_pred(-0.5) == doctest::Approx(pred.v_pred(0.5)).epsilon(1e-15));
}

TEST_CASE("ratio series divides by the limit") {
  PredictionSet pred = make_predictions(reference());
  std::vector<PhaseRecord> recs(2);
  recs[0].steps = 3750.0;
  recs[1].steps = 7500.0;
  auto r = ratio_series(recs, pred);
  CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r[1] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("slope fit recovers exact linear data") {
  PredictionSet pred = make_predictions(reference());
  std::vector<PhaseRecord> recs;
  const double slope = 17.25, intercept = -3.5;
  for (int k = 10; k <= 30; ++k) {
    PhaseRecord r;
    r.k = k;
    r.h = 0.01;
    // (y_plus / (h lambda))^2 = slope k + intercept
    r.y_plus = 0.01 * pred.lambda * std::sqrt(slope * k + intercept);
    recs.push_back(r);
  }
  SlopeFit fit = slope_fit(recs, pred, 10, 30);
  CHECK(fit.gamma_hat == doctest::Approx(slope).epsilon(1e-11));
  CHECK(fit.b_hat == doctest::Approx(intercept).epsilon(1e-8));
  CHECK(fit.ratio == doctest::Approx(slope / pred.gamma).epsilon(1e-11));
  CHECK_THROWS_AS(slope_fit(recs, pred, 29, 30), std::invalid_argument);
}

TEST_CASE("rescaled profile extraction samples the snapshot") {
  ModelParams mp = reference(0.02);
  PhaseRecord prev;
  prev.k = 4;
  prev.y_plus = 0.5;
  PhaseRecord rec;
  rec.k = 5;
  rec.h = 0.01;
  rec.y_min = -0.6;
  rec.snapshot.resize(121); // domain [-0.6, 0.6]
  for (int i = 0; i <= 120; ++i) {
    const double y = -0.6 + 0.01 * i;
    rec.snapshot[i] = 100.0 * (1.0 - y * y);
  }
  ProfileSample vk = extract_vk(rec, prev, mp, 201);
  REQUIRE(vk.z.size() == 201);
  CHECK(vk.z.front() == -1.0);
  CHECK(vk.z.back() == 1.0);
  // v(z) = h^{2/(p-1)} u(z y_plus) = 0.01 * 100 (1 - (z/2)^2) at the nodes
  CHECK(vk.v[100] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(vk.v[200] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK_THROWS_AS(extract_vk(rec, rec, mp, 201), std::invalid_argument);

  PredictionSet pred = make_predictions(mp);
  std::vector<double> zero_err_v(vk.z.size());
  ProfileSample exact;
  exact.z = vk.z;
  exact.v.resize(vk.z.size());
  for (size_t i = 0; i < vk.z.size(); ++i) exact.v[i] = pred.v_pred(vk.z[i]);
  CHECK(profile_error(exact, pred) == 0.0);
  CHECK(profile_error(vk, pred) > 0.0);
}

TEST_CASE("report files round-trip and keep full precision") {
  RunConfig cfg;
  cfg.hbar = 0.04;
  cfg.a = 10.0;
  cfg.phases = 12;
  SimulationConfig sim = make_simulation_config(cfg);
  RunReport report = run_simulation(sim);
  PredictionSet pred = make_predictions(report.params);

  const std::string dir = "/tmp/blowup-test-reports";
  std::filesystem::remove_all(dir);
  emit_reports(report, pred, dir, {10});

  CHECK(std::filesystem::exists(dir + "/phases.csv"));
  CHECK(std::filesystem::exists(dir + "/profile_10.csv"));
  CHECK(std::filesystem::exists(dir + "/predictions.json"));
  CHECK(std::filesystem::exists(dir + "/slope.csv"));

  auto readback = read_phases_csv(dir + "/phases.csv", report.params);
  REQUIRE(readback.size() == report.records.size());
  for (size_t i = 0; i < readback.size(); ++i) {
    // %.17g serialization is exact for doubles
    CHECK(readback[i].tau_star == report.records[i].tau_star);
    CHECK(readback[i].sigma == report.records[i].sigma);
    CHECK(readback[i].sup_u == report.records[i].sup_u);
    CHECK(readback[i].y_plus == report.records[i].y_plus);
  }

  save_snapshots(dir + "/snapshots.txt", report.snapshots);
  auto snaps = load_snapshots(dir + "/snapshots.txt");
  REQUIRE(snaps.size() == report.snapshots.size());
  for (size_t i = 0; i < snaps.size(); ++i) {
    CHECK(snaps[i].time == report.snapshots[i].time);
    REQUIRE(snaps[i].slices.size() == report.snapshots[i].slices.size());
    CHECK(snaps[i].slices.back().values ==
          report.snapshots[i].slices.back().values);
  }
}

TEST_CASE("limit series approaches kappa on a converged run") {
  RunConfig cfg;
  cfg.hbar = 0.02;
  cfg.a = 10.0;
  cfg.phases = 25;
  SimulationConfig sim = make_simulation_config(cfg);
  RunReport report = run_simulation(sim);
  SimilarityFrame frame = estimate_blowup_time(report.records, report.params);
  auto series = blowup_limit_series(report.records, frame, report.params);
  const double kap = 0.7071067811865476;
  for (size_t i = 15; i < series.size(); ++i)
    CHECK(series[i] == doctest::Approx(kap).epsilon(0.02));
}
