#pragma once

#include <filesystem>
#include <vector>

#include "roomgraph/cluster.hpp"
#include "roomgraph/segmentation.hpp"

namespace roomgraph {

struct ValidationEntry {
  int id = 0;
  int k_open = 0;  // segment count with only this hypothesis open
  HypothesisState state = HypothesisState::Candidate;
  bool ambiguous = false;
  int segment_a = -1;
  int segment_b = -1;
};

struct ValidationReport {
  int k_all_closed = 0;
  std::vector<ValidationEntry> entries;
};

struct ValidationResult {
  std::vector<DoorHypothesis> hypotheses;  // states and segment links filled in
  SegmentLabelMap labels;                  // final instance segmentation
  ValidationReport report;
};

// Repeated-segmentation validation. K0 = segment count with every hypothesis
// closed; each hypothesis is then opened in isolation: K = K0-1 accepts it,
// K >= K0 rejects it, K < K0-1 (one opening merging more than two segments)
// is flagged ambiguous and treated as valid with the two largest merged
// segments linked. The final label map closes valid doors and reverts
// rejected ones to the original occupancy. Decisions are order-independent.
ValidationResult validate(const BinaryGrid& b, std::vector<DoorHypothesis> hyps,
                          SegmentationMethod method = SegmentationMethod::Components,
                          const SegmentationParams& params = {}, int jobs = 1);

struct DoorAdjacency {
  int door_id = 0;
  int segment_a = -1;
  int segment_b = -1;
  bool ambiguous = false;  // fewer or more than two adjoining segments
};

// Maps each valid door to the two final-label segments reachable from its
// mask (4-adjacency). More or fewer than two adjoining segments is reported
// as ambiguous, keeping the two largest.
std::vector<DoorAdjacency> associate_doors(const std::vector<DoorHypothesis>& valid,
                                           const SegmentLabelMap& labels);

void write_validation_report(const std::filesystem::path& path, const ValidationResult& r);

}  // namespace roomgraph
