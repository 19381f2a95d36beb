#include "blowup/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace blowup {

LevelState PhaseRecord::snapshot_state() const {
  LevelState st;
  st.k = k;
  st.h = h;
  st.y_min = y_min;
  st.clock = tau_star;
  st.values = snapshot;
  return st;
}

double CompositeSnapshot::eval(double x) const {
  for (const LevelState& sl : slices) {
    const double tol = 1e-9 * sl.h;
    if (x >= sl.y_min - tol && x <= sl.y_max() + tol)
      return interp_space_at(sl, x);
  }
  return 0.0;
}

Hierarchy::Hierarchy(const ModelParams& params,
                     std::vector<double> level0_values, bool symmetric_data)
    : params_(params), asymmetric_(!symmetric_data) {
  params_.validate();
  const int n = static_cast<int>(level0_values.size());
  if (n < 5 || n % 2 == 0)
    throw std::invalid_argument(
        "level 0 needs an odd node count with a node at 0");
  RunningLevel L;
  L.cur.k = 0;
  L.cur.h = params_.hbar;
  L.cur.tau = params_.c_delta * params_.hbar * params_.hbar;
  L.cur.y_min = -1.0;
  L.cur.values = std::move(level0_values);
  L.cur.values.front() = 0.0;
  L.cur.values.back() = 0.0;
  L.prev = L.cur;
  L.offset = 0.0;
  levels_.push_back(std::move(L));
}

void Hierarchy::inject_from_child(int parent_idx) {
  if (parent_idx + 1 > finest()) return;
  RunningLevel& C = levels_[parent_idx + 1];
  RunningLevel& P = levels_[parent_idx];
  if (C.cur.clock <= 0.0) return; // freshly spawned, nothing new yet

  // Parent nodes strictly inside the child's domain get the child's values,
  // time-interpolated to the parent's clock when the child is ahead.
  const double child_now = C.offset + C.cur.clock; // in the parent's clock
  const bool child_ahead = child_now >= P.cur.clock;
  const double tq = std::clamp(std::min(P.cur.clock, child_now) - C.offset,
                               C.prev.clock, C.cur.clock);
  const int i_lo = static_cast<int>(
      std::llround((C.cur.y_min - P.cur.y_min) / P.cur.h));
  const int i_hi = static_cast<int>(
      std::llround((C.cur.y_max() - P.cur.y_min) / P.cur.h));
  const int ratio = params_.lambda_inv;
  for (int i = i_lo + 1; i < i_hi; ++i) {
    const double y = P.cur.node(i);
    double v;
    if (child_ahead) {
      v = interp_time(C.prev, C.cur, tq, y);
    } else {
      const int ci = (i - i_lo) * ratio;
      v = C.cur.values[ci];
    }
    P.cur.values[i] = v;
  }
}

std::pair<double, double> Hierarchy::boundary_for(int j, double t_local) {
  if (j == 0) return {0.0, 0.0};
  RunningLevel& P = levels_[j - 1];
  const double tp = levels_[j].offset + t_local; // in the parent's clock
  const double eps = 1e-9 * P.cur.tau;
  while (P.cur.clock < tp - eps) step_level(j - 1);
  const double tq = std::clamp(tp, P.prev.clock, P.cur.clock);
  const LevelState& child = levels_[j].cur;
  return {interp_time(P.prev, P.cur, tq, child.y_min),
          interp_time(P.prev, P.cur, tq, child.y_max())};
}

void Hierarchy::step_level(int j) {
  inject_from_child(j);
  RunningLevel& A = levels_[j];
  const double t_new = A.cur.clock + A.cur.tau;
  auto [bl, br] = boundary_for(j, t_new);
  A.prev = A.cur;
  A.cur = step_explicit(A.cur, bl, br, params_);
}

PhaseRecord Hierarchy::run_phase() {
  const int k = finest();
  RunningLevel& L = levels_[k];
  while (true) {
    step_level(k);
    auto cross = detect_threshold_crossing(L.prev, L.cur, params_);
    if (!cross) continue;

    PhaseRecord rec;
    rec.k = k;
    rec.tau_star = *cross;
    rec.steps = rec.tau_star / L.cur.tau;
    rec.sigma =
        (records_.empty() ? 0.0 : records_.back().sigma) + rec.tau_star;
    rec.h = L.cur.h;
    rec.y_min = L.cur.y_min;
    const double span = L.cur.clock - L.prev.clock;
    const double frac = span > 0.0 ? (rec.tau_star - L.prev.clock) / span : 1.0;
    rec.snapshot.resize(L.cur.n());
    for (int i = 0; i < L.cur.n(); ++i)
      rec.snapshot[i] =
          (1.0 - frac) * L.prev.values[i] + frac * L.cur.values[i];
    rec.sup_u = *std::max_element(rec.snapshot.begin(), rec.snapshot.end());
    auto [ym, yp] = find_refine_interval(rec.snapshot_state(), params_);
    rec.y_minus = ym;
    rec.y_plus = yp;
    records_.push_back(rec);
    return rec;
  }
}

void Hierarchy::spawn_level(const PhaseRecord& record) {
  if (record.k != finest())
    throw std::logic_error("spawn_level: record does not match the finest level");
  const RunningLevel& parent = levels_.back();
  const LevelState base = record.snapshot_state();

  if (record.y_minus <= base.y_min + 0.5 * base.h ||
      record.y_plus >= base.y_max() - 0.5 * base.h) {
    if (record.k == 0 &&
        (record.y_minus <= -1.0 + 0.5 * base.h ||
         record.y_plus >= 1.0 - 0.5 * base.h))
      throw std::runtime_error(
          "spawn_level: refinement interval touches the level-0 boundary "
          "(no blow-up concentration)");
  }

  RunningLevel L;
  L.cur.k = record.k + 1;
  L.cur.h = base.h * params_.lambda();
  L.cur.tau = params_.c_delta * L.cur.h * L.cur.h;
  L.cur.y_min = record.y_minus;
  const int n =
      static_cast<int>(std::llround((record.y_plus - record.y_minus) / L.cur.h)) + 1;
  if (n < 4)
    throw std::runtime_error("spawn_level: refinement interval collapsed");
  std::vector<double> nodes(n);
  for (int i = 0; i < n; ++i) nodes[i] = record.y_minus + i * L.cur.h;
  nodes.back() = record.y_plus;
  L.cur.values = interp_space(base, nodes);
  L.cur.clock = 0.0;
  L.offset = record.tau_star;
  L.prev = L.cur;
  (void)parent;
  levels_.push_back(std::move(L));
}

CompositeSnapshot Hierarchy::composite_snapshot() const {
  if (records_.empty())
    throw std::logic_error("composite_snapshot: no completed phase");
  const PhaseRecord& rec = records_.back();
  CompositeSnapshot snap;
  snap.time = rec.sigma;
  snap.slices.push_back(rec.snapshot_state());
  double t_local = rec.tau_star; // phase-end instant in level-(j+1) clock
  for (int j = rec.k - 1; j >= 0; --j) {
    const RunningLevel& A = levels_[j];
    LevelState sl = A.cur;
    t_local = levels_[j + 1].offset + t_local;
    const double tq = std::clamp(t_local, A.prev.clock, A.cur.clock);
    const double span = A.cur.clock - A.prev.clock;
    const double frac = span > 0.0 ? (tq - A.prev.clock) / span : 1.0;
    for (int i = 0; i < sl.n(); ++i)
      sl.values[i] = (1.0 - frac) * A.prev.values[i] + frac * A.cur.values[i];
    sl.clock = tq;
    snap.slices.push_back(std::move(sl));
  }
  return snap;
}

Hierarchy init_hierarchy(const ModelParams& params,
                         const std::vector<double>& initial_values) {
  double sup = 0.0;
  bool symmetric = true;
  const int n = static_cast<int>(initial_values.size());
  for (int i = 0; i < n; ++i) {
    if (initial_values[i] < 0.0)
      throw std::invalid_argument("init_hierarchy: initial data must be positive");
    sup = std::max(sup, initial_values[i]);
    if (std::abs(initial_values[i] - initial_values[n - 1 - i]) >
        1e-12 * std::max(1.0, sup))
      symmetric = false;
  }
  ModelParams mp = params;
  const double m0_expected = std::pow(mp.hbar, mp.scaling_exp()) * sup;
  if (mp.m0 == 0.0 && mp.m == 0.0) {
    mp.set_thresholds(sup);
  } else if (std::abs(mp.m0 - m0_expected) > 1e-12 * m0_expected) {
    throw std::invalid_argument(
        "init_hierarchy: configured M0 inconsistent with the initial-data sup");
  }
  return Hierarchy(mp, initial_values, symmetric);
}

namespace {
void write_doubles(std::ostream& os, const std::vector<double>& v) {
  char buf[32];
  os << v.size();
  for (double x : v) {
    std::snprintf(buf, sizeof buf, " %.17g", x);
    os << buf;
  }
  os << "\n";
}

std::vector<double> read_doubles(std::istream& is) {
  size_t n;
  is >> n;
  std::vector<double> v(n);
  for (size_t i = 0; i < n; ++i) is >> v[i];
  return v;
}
} // namespace

void Hierarchy::save(std::ostream& os) const {
  os.precision(17);
  os << "blowup-checkpoint 1\n";
  os << params_.p << " " << params_.a << " " << params_.mu << " "
     << params_.lambda_inv << " " << params_.alpha << " " << params_.c_delta
     << " " << params_.hbar << " " << params_.m0 << " " << params_.m << "\n";
  os << (asymmetric_ ? 1 : 0) << "\n";
  os << levels_.size() << "\n";
  for (const RunningLevel& L : levels_) {
    os << L.cur.k << " " << L.cur.h << " " << L.cur.tau << " " << L.cur.y_min
       << " " << L.offset << "\n";
    os << L.cur.clock << " ";
    write_doubles(os, L.cur.values);
    os << L.prev.clock << " ";
    write_doubles(os, L.prev.values);
  }
  os << records_.size() << "\n";
  for (const PhaseRecord& r : records_) {
    os << r.k << " " << r.tau_star << " " << r.steps << " " << r.sigma << " "
       << r.y_minus << " " << r.y_plus << " " << r.sup_u << " " << r.h << " "
       << r.y_min << "\n";
    write_doubles(os, r.snapshot);
  }
}

Hierarchy Hierarchy::load(std::istream& is) {
  std::string magic;
  int version = 0;
  is >> magic >> version;
  if (magic != "blowup-checkpoint" || version != 1)
    throw std::runtime_error("unrecognized checkpoint format");
  Hierarchy h;
  ModelParams& mp = h.params_;
  is >> mp.p >> mp.a >> mp.mu >> mp.lambda_inv >> mp.alpha >> mp.c_delta >>
      mp.hbar >> mp.m0 >> mp.m;
  int asym = 0;
  is >> asym;
  h.asymmetric_ = asym != 0;
  size_t nlev = 0;
  is >> nlev;
  for (size_t i = 0; i < nlev; ++i) {
    RunningLevel L;
    is >> L.cur.k >> L.cur.h >> L.cur.tau >> L.cur.y_min >> L.offset;
    is >> L.cur.clock;
    L.cur.values = read_doubles(is);
    L.prev = L.cur;
    is >> L.prev.clock;
    L.prev.values = read_doubles(is);
    h.levels_.push_back(std::move(L));
  }
  size_t nrec = 0;
  is >> nrec;
  for (size_t i = 0; i < nrec; ++i) {
    PhaseRecord r;
    is >> r.k >> r.tau_star >> r.steps >> r.sigma >> r.y_minus >> r.y_plus >>
        r.sup_u >> r.h >> r.y_min;
    r.snapshot = read_doubles(is);
    h.records_.push_back(std::move(r));
  }
  if (!is) throw std::runtime_error("truncated checkpoint");
  return h;
}

namespace {
RunReport run_phases(Hierarchy& hier, const SimulationConfig& cfg) {
  RunReport report;
  report.params = hier.params();
  report.asymmetric_warning = hier.asymmetric_warning();
  int done = static_cast<int>(hier.records().size());
  while (done < cfg.phases) {
    PhaseRecord rec = hier.run_phase();
    ++done;
    if (cfg.snapshot_cadence > 0 && done % cfg.snapshot_cadence == 0)
      report.snapshots.push_back(hier.composite_snapshot());
    if (done < cfg.phases) hier.spawn_level(rec);
    if (cfg.checkpoint_cadence > 0 && done % cfg.checkpoint_cadence == 0 &&
        !cfg.checkpoint_path.empty()) {
      std::ofstream os(cfg.checkpoint_path);
      if (!os)
        throw std::runtime_error("cannot write checkpoint " + cfg.checkpoint_path);
      hier.save(os);
    }
  }
  report.records = hier.records();
  return report;
}
} // namespace

RunReport run_simulation(const SimulationConfig& config) {
  Hierarchy hier = init_hierarchy(config.params, config.initial_values);
  return run_phases(hier, config);
}

RunReport resume_simulation(const SimulationConfig& config,
                            const std::string& checkpoint) {
  std::ifstream is(checkpoint);
  if (!is) throw std::runtime_error("cannot read checkpoint " + checkpoint);
  Hierarchy hier = Hierarchy::load(is);
  // the interrupted run had already spawned past the last recorded phase
  if (!hier.records().empty() &&
      hier.finest() == hier.records().back().k &&
      static_cast<int>(hier.records().size()) < config.phases)
    hier.spawn_level(hier.records().back());
  return run_phases(hier, config);
}

} // namespace blowup
