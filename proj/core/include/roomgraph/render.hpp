#pragma once

#include <vector>

#include "roomgraph/cluster.hpp"
#include "roomgraph/pgm.hpp"
#include "roomgraph/place_categorization.hpp"
#include "roomgraph/segmentation.hpp"
#include "roomgraph/simulator.hpp"

namespace roomgraph {

// Colorized label map: background dark, segment ids cycle a fixed palette.
RgbImage render_labels(const SegmentLabelMap& labels);

// Final map rendering: segments tinted by class (room/corridor), valid door
// masks overlaid in a distinct color.
RgbImage render_entities(const SegmentLabelMap& labels,
                         const std::vector<EntityScore>& scores,
                         const std::vector<DoorHypothesis>& valid_doors);

// Corridor-confidence heatmap: each segment shaded by its p_comb.
RgbImage render_heatmap(const SegmentLabelMap& labels,
                        const std::vector<EntityScore>& scores);

// Simulator ground-truth class map, colorized.
RgbImage render_classes(const GroundTruth& truth);

// Paletted (index-per-cell) images for machine consumption.
GrayImage class_index_image(const GroundTruth& truth);   // CellClass values
GrayImage label_index_image(const SegmentLabelMap& labels);  // ids, clamped to 255

}  // namespace roomgraph
