#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "roomgraph/occupancy_grid.hpp"
#include "roomgraph/simulator.hpp"

namespace roomgraph {

inline constexpr double kDefaultConfidenceThreshold = 0.35;

struct DetectionBox {
  int row = 0;  // window origin in parent-map cells
  int col = 0;
  double confidence = 0.0;
  std::vector<std::uint8_t> mask;  // kPatchSize^2 bitmap; empty = no mask

  bool has_mask() const { return !mask.empty(); }
};

enum class DetectorBackend { Baseline, Ingest, Oracle };

struct DetectorConfig {
  DetectorBackend backend = DetectorBackend::Baseline;
  double confidence_threshold = kDefaultConfidenceThreshold;
  std::filesystem::path detections_path;          // ingest backend
  const GroundTruth* ground_truth = nullptr;      // oracle backend
  int jobs = 1;
};

// Deterministic wall-gap scorer for one window. Scans rows, columns, and
// both diagonals for pairs of wall runs whose facing endpoints are 0.7-1.6 m
// apart (with slack) with free clearance on both sides of the gap; the best
// candidate sets the confidence and its gap rectangle becomes the mask.
DetectionBox baseline_detect(const Patch& patch);

// One DetectionBox per input window, backend-dependent:
//   Baseline - built-in scorer above, parallel over windows.
//   Oracle   - confidence 1 and the ground-truth mask iff a door opening lies
//              inside the window with margin (the training-label rule).
//   Ingest   - replays a detections file; origins must match the window
//              sequence exactly.
std::vector<DetectionBox> detect(const std::vector<Patch>& patches,
                                 const DetectorConfig& cfg);

// Keeps boxes with confidence >= threshold, preserving order and positions.
std::vector<DetectionBox> filter_detections(const std::vector<DetectionBox>& boxes,
                                            double threshold);

// Detections interchange document (JSON): version (mandatory), patch_size,
// and one record per window with origin, confidence, and an optional
// run-length-encoded mask.
void write_detections(const std::filesystem::path& path,
                      const std::vector<DetectionBox>& boxes);
std::vector<DetectionBox> read_detections(const std::filesystem::path& path);

}  // namespace roomgraph
