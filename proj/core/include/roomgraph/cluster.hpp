#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "roomgraph/detector.hpp"
#include "roomgraph/geometry.hpp"

namespace roomgraph {

inline constexpr double kClusterIouThreshold = 0.7;
inline constexpr double kMaxAreaRatio = 4.0 / 3.0;

struct DetectionCluster {
  std::vector<DetectionBox> members;  // seed first
  double confidence = 0.0;            // max member confidence
};

enum class HypothesisState { Candidate, Valid, Rejected };

struct DoorHypothesis {
  int id = 0;
  std::vector<Cell> cells;  // fused doorway mask in map cells, sorted
  RotatedRect mbr;
  double area_ratio = 0.0;  // mbr area / cell count
  double confidence = 0.0;
  bool unsplittable = false;  // still above the area-ratio bound after splitting
  bool ambiguous = false;
  HypothesisState state = HypothesisState::Candidate;
  int segment_a = -1;  // linked segment ids once validated
  int segment_b = -1;
};

// Overlap ratio of two equally sized windows identified by their origins.
double iou(const DetectionBox& a, const DetectionBox& b);

// Greedy seeding: highest confidence first (ties by origin), each seed
// absorbs every unassigned box with IoU above the threshold. The result is a
// partition of the input.
std::vector<DetectionCluster> cluster(const std::vector<DetectionBox>& boxes,
                                      double iou_threshold = kClusterIouThreshold);

// Pixelwise OR of the member masks, in map coordinates, sorted.
std::vector<Cell> fuse_masks(const DetectionCluster& c);

// Minimum-area enclosing rectangle of the cell centers, inflated by half a
// cell per side so whole unit cells are covered.
RotatedRect mbr(const std::vector<Cell>& cells);

// Returns {cells} when the rectangle approximation is tight (area ratio
// <= 4/3). Otherwise erodes with a 2x2 kernel until several components
// appear, grows them back over the mask with a marker-based watershed on the
// negated distance transform, and re-checks each part (bounded recursion).
std::vector<std::vector<Cell>> split_if_merged(const std::vector<Cell>& cells);

// Detection aggregation stage: cluster, fuse, merge cell-sharing fusions,
// split merged masks, and wrap each part as a candidate hypothesis with
// sequential ids.
std::vector<DoorHypothesis> build_hypotheses(const std::vector<DetectionBox>& filtered,
                                             double iou_threshold = kClusterIouThreshold);

// Hypothesis checkpoint document (JSON): mask runs, MBR corners, state.
struct HypothesisFile {
  int width = 0;  // parent map size used by the mask runs
  int height = 0;
  std::vector<DoorHypothesis> hypotheses;
};
void write_hypotheses(const std::filesystem::path& path, const HypothesisFile& file);
HypothesisFile read_hypotheses(const std::filesystem::path& path);

}  // namespace roomgraph
