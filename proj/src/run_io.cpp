#include "blowup/run_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace blowup {

namespace {
std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
} // namespace

void write_snapshots(std::ostream& os,
                     const std::vector<CompositeSnapshot>& snaps) {
  os << "blowup-snapshots 1\n";
  os << snaps.size() << "\n";
  for (const CompositeSnapshot& snap : snaps) {
    os << fmt(snap.time) << " " << snap.slices.size() << "\n";
    for (const LevelState& sl : snap.slices) {
      os << sl.k << " " << fmt(sl.h) << " " << fmt(sl.tau) << " "
         << fmt(sl.y_min) << " " << fmt(sl.clock) << " " << sl.n() << "\n";
      for (int i = 0; i < sl.n(); ++i) {
        os << fmt(sl.values[i]);
        os << (i + 1 == sl.n() ? '\n' : ' ');
      }
    }
  }
}

std::vector<CompositeSnapshot> read_snapshots(std::istream& is) {
  std::string tag;
  int version = 0;
  is >> tag >> version;
  if (tag != "blowup-snapshots" || version != 1)
    throw std::runtime_error("snapshots: unrecognized header");
  size_t count = 0;
  is >> count;
  std::vector<CompositeSnapshot> snaps(count);
  for (CompositeSnapshot& snap : snaps) {
    size_t nslices = 0;
    is >> snap.time >> nslices;
    snap.slices.resize(nslices);
    for (LevelState& sl : snap.slices) {
      int n = 0;
      is >> sl.k >> sl.h >> sl.tau >> sl.y_min >> sl.clock >> n;
      if (!is || n < 2) throw std::runtime_error("snapshots: truncated slice");
      sl.values.resize(n);
      for (double& v : sl.values) is >> v;
    }
  }
  if (!is) throw std::runtime_error("snapshots: truncated file");
  return snaps;
}

void save_snapshots(const std::string& path,
                    const std::vector<CompositeSnapshot>& snaps) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  write_snapshots(os, snaps);
}

std::vector<CompositeSnapshot> load_snapshots(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_snapshots(is);
}

std::vector<PhaseRecord> read_phases_csv(const std::string& path,
                                         const ModelParams& params) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("phases.csv: empty file");
  std::vector<PhaseRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    PhaseRecord r;
    char c;
    double tau_k, ratio, scaled;
    if (!(ls >> r.k >> c >> r.h >> c >> tau_k >> c >> r.tau_star >> c >>
          r.steps >> c >> ratio >> c >> r.sigma >> c >> r.y_plus >> c >>
          r.sup_u >> c >> scaled))
      throw std::runtime_error("phases.csv: malformed row");
    r.y_minus = -r.y_plus; // symmetric data; the full interval is not stored
    (void)params;
    out.push_back(std::move(r));
  }
  return out;
}

void write_similarity_csv(const std::string& path,
                          const std::vector<SimilarityRow>& rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "s,E0,I,E,J_a,dissipation,c_0,c_1,c_2,c_3,c_4,c_5,c_6,sup_w\n";
  for (const SimilarityRow& r : rows) {
    os << fmt(r.s) << "," << fmt(r.e0) << "," << fmt(r.i_term) << ","
       << fmt(r.e) << "," << fmt(r.j) << "," << fmt(r.dissipation);
    for (double c : r.coeffs) os << "," << fmt(c);
    os << "," << fmt(r.sup_w) << "\n";
  }
}

} // namespace blowup
