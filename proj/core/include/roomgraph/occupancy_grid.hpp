#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "roomgraph/geometry.hpp"

namespace roomgraph {

// Working resolution of the whole pipeline; maps are resampled to this
// before windowing so a 64x64 patch always spans 3.2 m.
inline constexpr double kNormalizedResolution = 0.05;
inline constexpr int kPatchSize = 64;
inline constexpr int kDefaultStride = 8;

inline constexpr double kDefaultOccupiedThresh = 0.65;
inline constexpr double kDefaultFreeThresh = 0.196;
inline constexpr int kDefaultUnknownValue = 205;

// 2-D lattice of occupancy probabilities. Cells are row-major, row 0 at the
// image top; `unknown` marks cells that were never observed. Grids are
// immutable after construction in pipeline use and safe to share across
// threads read-only.
struct OccupancyGrid {
  int width = 0;
  int height = 0;
  double resolution = kNormalizedResolution;  // meters per cell, > 0
  Vec2 origin;                                // world pose of the lower-left corner, meters
  std::vector<float> cells;                   // occupancy probability in [0, 1]
  std::vector<std::uint8_t> unknown;          // 1 = never observed

  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * width + col;
  }
  bool in_bounds(int row, int col) const {
    return row >= 0 && col >= 0 && row < height && col < width;
  }
  float at(int row, int col) const { return cells[index(row, col)]; }
  bool is_unknown(int row, int col) const { return unknown[index(row, col)] != 0; }

  // World coordinates of a cell center (row 0 = top, world y grows upward).
  Vec2 cell_to_world(const Cell& c) const {
    return {origin.x + (c.col + 0.5) * resolution,
            origin.y + (height - c.row - 0.5) * resolution};
  }
};

struct BinaryGrid {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> occupied;  // 1 = occupied, 0 = free

  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * width + col;
  }
  bool in_bounds(int row, int col) const {
    return row >= 0 && col >= 0 && row < height && col < width;
  }
  bool is_occupied(int row, int col) const { return occupied[index(row, col)] != 0; }
  bool is_free(int row, int col) const { return occupied[index(row, col)] == 0; }
};

// Fixed-size window copied out of a parent grid.
struct Patch {
  int row = 0;  // origin in parent grid cells
  int col = 0;
  std::vector<float> data;  // kPatchSize * kPatchSize occupancy values

  float at(int r, int c) const { return data[static_cast<std::size_t>(r) * kPatchSize + c]; }
};

// Map metadata file contents (image name, resolution, origin, negate flag,
// thresholds, unknown pixel value).
struct MapMetadata {
  std::string image;
  double resolution = kNormalizedResolution;
  Vec2 origin;
  bool negate = false;
  double occupied_thresh = kDefaultOccupiedThresh;
  double free_thresh = kDefaultFreeThresh;
  int unknown_value = kDefaultUnknownValue;
};

MapMetadata read_map_metadata(const std::filesystem::path& yaml_path);

// Loads a map from its metadata file. Pixel v maps to p = (255 - v)/255
// (or v/255 with negate); pixels equal to the unknown value whose p falls
// strictly between the thresholds are flagged unknown.
OccupancyGrid load_map(const std::filesystem::path& yaml_path);

// Writes <stem>.pgm next to the metadata file; unknown cells are written as
// the unknown pixel value so the flag survives a round trip.
void save_map(const OccupancyGrid& grid, const std::filesystem::path& yaml_path);

// Resamples to kNormalizedResolution: bilinear on probabilities, nearest
// neighbor on the unknown mask. Exact no-op when already normalized.
OccupancyGrid normalize_resolution(const OccupancyGrid& g);

enum class UnknownPolicy { AsOccupied, AsFree };

// Thresholds partition cells into occupied/free; intermediate and unknown
// cells follow the policy. Default as-occupied so unexplored space never
// merges rooms.
BinaryGrid binarize(const OccupancyGrid& g,
                    double occupied_thresh = kDefaultOccupiedThresh,
                    double free_thresh = kDefaultFreeThresh,
                    UnknownPolicy policy = UnknownPolicy::AsOccupied);

// Same thresholding applied to a raw patch (no unknown mask: intermediate
// values follow the policy).
BinaryGrid binarize_patch(const Patch& p,
                          double occupied_thresh = kDefaultOccupiedThresh,
                          double free_thresh = kDefaultFreeThresh,
                          UnknownPolicy policy = UnknownPolicy::AsOccupied);

// All kPatchSize windows at the given stride in row-major order, plus
// right/bottom edge-aligned windows so every cell is covered.
std::vector<Patch> sliding_windows(const OccupancyGrid& g, int stride = kDefaultStride);

// Window origins only (same order as sliding_windows).
std::vector<Cell> sliding_window_origins(int height, int width, int stride);

}  // namespace roomgraph
