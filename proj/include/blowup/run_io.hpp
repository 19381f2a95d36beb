#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "blowup/hierarchy.hpp"
#include "blowup/similarity.hpp"

namespace blowup {

// Versioned text serialization of the composite snapshots.  Values are
// written with 17 significant digits and round-trip exactly.
void write_snapshots(std::ostream& os,
                     const std::vector<CompositeSnapshot>& snaps);
std::vector<CompositeSnapshot> read_snapshots(std::istream& is);

void save_snapshots(const std::string& path,
                    const std::vector<CompositeSnapshot>& snaps);
std::vector<CompositeSnapshot> load_snapshots(const std::string& path);

// phases.csv round-trip (the snapshot column set only; refining snapshots
// live in snapshots.txt).
std::vector<PhaseRecord> read_phases_csv(const std::string& path,
                                         const ModelParams& params);

struct SimilarityRow {
  double s = 0.0;
  double e0 = 0.0;
  double i_term = 0.0;
  double e = 0.0;
  double j = 0.0;
  double dissipation = 0.0;
  double coeffs[7] = {0, 0, 0, 0, 0, 0, 0};
  double sup_w = 0.0;
};

void write_similarity_csv(const std::string& path,
                          const std::vector<SimilarityRow>& rows);

} // namespace blowup
