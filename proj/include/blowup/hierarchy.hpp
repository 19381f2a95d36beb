#pragma once

#include <functional>
#include <string>
#include <vector>

#include "blowup/grid.hpp"

namespace blowup {

/// Outputs of one refining phase: the live time tau_k*, the refining
/// snapshot (level-k values time-interpolated to tau_k*), and the
/// refinement interval.
struct PhaseRecord {
  int k = 0;
  double tau_star = 0.0; // level-k local time of the threshold crossing
  double steps = 0.0;    // N_k = tau_star / tau_k
  double sigma = 0.0;    // cumulative real time tau_0* + ... + tau_k*
  double y_minus = 0.0;
  double y_plus = 0.0;
  double sup_u = 0.0;    // sup of the refining snapshot
  double h = 0.0;        // level-k spacing
  double y_min = 0.0;    // left edge of the snapshot domain
  std::vector<double> snapshot;

  LevelState snapshot_state() const;
};

/// A multilevel view of u at one instant, finest slice first.
struct CompositeSnapshot {
  double time = 0.0;
  std::vector<LevelState> slices;

  // Value of u at x from the finest slice covering x; zero outside level 0.
  double eval(double x) const;
  double finest_h() const { return slices.front().h; }
};

/// The nested-grid hierarchy.  Levels advance on their own lambda^{-2}
/// nested schedules; a parent is stepped ahead of its child to provide
/// time-interpolated boundary values, and its interior is overwritten with
/// the child's values right before each of its steps.
class Hierarchy {
 public:
  Hierarchy() = default;
  Hierarchy(const ModelParams& params, std::vector<double> level0_values,
            bool symmetric_data);

  // Advances the finest level (stepping ancestors on schedule) until the
  // scaled sup crosses M; records and returns the phase outputs.
  PhaseRecord run_phase();

  // Builds level k+1 on [y_minus, y_plus] from the refining snapshot.
  void spawn_level(const PhaseRecord& record);

  // All levels interpolated in time to the last phase-end instant.
  CompositeSnapshot composite_snapshot() const;

  const ModelParams& params() const { return params_; }
  const std::vector<PhaseRecord>& records() const { return records_; }
  int finest() const { return static_cast<int>(levels_.size()) - 1; }
  double sigma() const { return records_.empty() ? 0.0 : records_.back().sigma; }
  bool asymmetric_warning() const { return asymmetric_; }

  void save(std::ostream& os) const;
  static Hierarchy load(std::istream& is);

 private:
  // Scheduling works entirely in per-level local clocks.  `offset` is the
  // parent's local clock at this level's birth; absolute times would
  // saturate in double once the increments drop below one ulp of sigma.
  struct RunningLevel {
    LevelState cur, prev;
    double offset = 0.0;
  };

  ModelParams params_;
  std::vector<RunningLevel> levels_;
  std::vector<PhaseRecord> records_;
  bool asymmetric_ = false;

  void step_level(int j);
  std::pair<double, double> boundary_for(int j, double t_real);
  void inject_from_child(int parent_idx);
};

struct SimulationConfig {
  ModelParams params;          // thresholds set via set_thresholds
  std::vector<double> initial_values;
  bool symmetric_data = true;
  int phases = 40;
  int snapshot_cadence = 1;    // composite snapshot every N phases; 0 = off
  int checkpoint_cadence = 5;  // 0 = off
  std::string checkpoint_path; // required when checkpointing is on
};

struct RunReport {
  ModelParams params;
  std::vector<PhaseRecord> records;
  std::vector<CompositeSnapshot> snapshots;
  bool asymmetric_warning = false;
};

// Level 0 on [-1,1] with homogeneous Dirichlet endpoints.  Throws if the
// configured threshold M0 disagrees with the initial-data sup.
Hierarchy init_hierarchy(const ModelParams& params,
                         const std::vector<double>& initial_values);

RunReport run_simulation(const SimulationConfig& config);
// Continues a checkpointed hierarchy up to `phases` total.
RunReport resume_simulation(const SimulationConfig& config,
                            const std::string& checkpoint);

} // namespace blowup
