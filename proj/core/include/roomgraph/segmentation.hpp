#pragma once

#include <cstdint>
#include <vector>

#include "roomgraph/cluster.hpp"
#include "roomgraph/occupancy_grid.hpp"

namespace roomgraph {

struct SegmentLabelMap {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> labels;  // 0 = not free, 1..count = segment ids
  int count = 0;

  std::int32_t at(int row, int col) const {
    return labels[static_cast<std::size_t>(row) * width + col];
  }
};

enum class SegmentationMethod { Components, Graph };

struct SegmentationParams {
  double felz_k = 100.0;      // graph-merge scale on the 0..255 intensity range
  int min_segment_size = 25;  // segments below this many cells are dropped
};

// Marks every hypothesis's cells occupied, except hypotheses listed in
// open_ids whose cells are forced free (an opened door loses its leaf).
// Ids in open_ids must name hypotheses from the list.
BinaryGrid close_doors(const BinaryGrid& b, const std::vector<DoorHypothesis>& hyps,
                       const std::vector<int>& open_ids);

// Free-space instance segmentation. Components: 4-connected union-find
// labeling. Graph: Felzenszwalb-Huttenlocher region merging with edge
// weights |I(u) - I(v)| on the binary image, then restricted to free cells.
// Both apply the same minimum-size filter and label segments in first-
// encounter scan order, so binary inputs give identical results.
SegmentLabelMap segment(const BinaryGrid& b,
                        SegmentationMethod method = SegmentationMethod::Components,
                        const SegmentationParams& params = {});

int count_segments(const BinaryGrid& b,
                   SegmentationMethod method = SegmentationMethod::Components,
                   const SegmentationParams& params = {});

}  // namespace roomgraph
