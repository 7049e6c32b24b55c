#pragma once

#include <filesystem>
#include <vector>

#include "roomgraph/segmentation.hpp"
#include "roomgraph/validation.hpp"

namespace roomgraph {

// Distance statistic used by the spin index: mean squared distance from the
// centroid (default; the equal-area-circle reference is 0.5 r^2) or mean
// absolute distance (reference 2/3 r).
enum class SpinMode { MeanSquared, MeanAbsolute };

inline constexpr double kCorridorThreshold = 0.5;
inline constexpr double kCorridorFallback = 0.2;  // strict-max fallback floor

struct SpinResult {
  double s = 0.0;      // spin index of the segment (cell units)
  double s_eac = 0.0;  // spin index of the equal-area circle
  double p_s = 0.0;    // normalized spin, clamped to [0, 1]
};

struct EntityScore {
  int segment_id = 0;
  int door_count = 0;              // n_d
  double door_score = 0.0;         // p_d
  double spin_index = 0.0;         // s
  double eac_spin_index = 0.0;     // s_EAC
  double normalized_spin = 0.0;    // p_s
  double corridor_confidence = 0.0;  // p_comb = p_d * (1 - p_s)
  bool corridor = false;
  bool uncertain = false;  // p_comb in [0.2, 0.5)
};

// Door counts per segment id (index 0 unused), from validated adjacencies.
std::vector<int> door_counts(const std::vector<DoorAdjacency>& adjacency,
                             int segment_count);

// p_d = n_d / max(n_d). All zeros when the scene has no doors (undefined
// normalization; callers report the degenerate case).
std::vector<double> compute_pd(const std::vector<int>& counts);

// s, s_EAC and p_s = min(1, s_EAC / s) for one segment's cells; a single
// cell is maximally compact by convention (p_s = 1).
SpinResult compute_spin(const std::vector<Cell>& cells,
                        SpinMode mode = SpinMode::MeanSquared);

// Per-segment scores over a final label map: door connectivity, spin, and
// the combined corridor confidence with labels assigned. A segment is a
// corridor iff p_comb >= 0.5, or it attains the strict maximum with
// p_comb >= 0.2.
std::vector<EntityScore> score_segments(const SegmentLabelMap& labels,
                                        const std::vector<DoorAdjacency>& adjacency,
                                        SpinMode mode = SpinMode::MeanSquared);

// Fills corridor_confidence, corridor, and uncertain from door_score and
// normalized_spin (exposed separately for fixture-driven tests).
void combine_and_label(std::vector<EntityScore>& scores);

void write_scores(const std::filesystem::path& path,
                  const std::vector<EntityScore>& scores);

}  // namespace roomgraph
