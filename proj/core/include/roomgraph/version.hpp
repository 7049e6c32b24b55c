#pragma once

namespace roomgraph {

inline constexpr const char* kVersion = "0.1.0";

// Schema version written into every JSON artifact (detections, hypotheses,
// reports, topometric maps, manifests).
inline constexpr int kSchemaVersion = 1;

}  // namespace roomgraph
