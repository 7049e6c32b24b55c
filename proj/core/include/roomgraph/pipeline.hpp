#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "roomgraph/detector.hpp"
#include "roomgraph/place_categorization.hpp"
#include "roomgraph/topometric.hpp"
#include "roomgraph/validation.hpp"

namespace roomgraph {

struct PipelineConfig {
  std::filesystem::path map_path;
  DetectorBackend backend = DetectorBackend::Baseline;
  std::filesystem::path detections_path;      // ingest backend input
  const GroundTruth* ground_truth = nullptr;  // oracle backend input
  double confidence_threshold = kDefaultConfidenceThreshold;
  double iou_threshold = kClusterIouThreshold;
  int stride = kDefaultStride;
  SegmentationMethod method = SegmentationMethod::Components;
  SegmentationParams seg_params;
  SpinMode spin_mode = SpinMode::MeanSquared;
  int jobs = 1;
  // Extra candidate hypotheses appended before validation (re-numbered);
  // used to exercise the rejection path with known false positives.
  std::vector<DoorHypothesis> injected;
};

struct PipelineResult {
  OccupancyGrid normalized;
  BinaryGrid binary;
  std::vector<DetectionBox> detections;  // one per window
  std::vector<DetectionBox> filtered;
  ValidationResult validation;
  std::vector<DoorHypothesis> valid_doors;
  std::vector<DoorAdjacency> adjacency;
  std::vector<EntityScore> scores;
  TopometricMap topomap;
  bool degenerate = false;  // no valid doors survived
};

// normalize -> windows -> detect -> filter -> cluster/fuse/split ->
// validate -> categorize -> topometric. Deterministic for fixed inputs and
// config, independent of the jobs value.
PipelineResult run_pipeline_on_grid(const OccupancyGrid& raw, const PipelineConfig& cfg,
                                    const std::string& source_name);

// Same, loading the map from cfg.map_path first.
PipelineResult run_pipeline(const PipelineConfig& cfg);

// Writes every stage artifact (checkpoints, report, score table, renderings,
// graph exports) plus a run manifest into out_dir.
void write_pipeline_outputs(const std::filesystem::path& out_dir,
                            const PipelineResult& result, const PipelineConfig& cfg);

// FNV-1a content hash used by run manifests.
std::uint64_t file_hash(const std::filesystem::path& path);
std::string hash_hex(std::uint64_t h);

}  // namespace roomgraph
