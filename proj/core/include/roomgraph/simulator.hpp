#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "roomgraph/geometry.hpp"
#include "roomgraph/occupancy_grid.hpp"

namespace roomgraph {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct IntInterval {
  int lo = 0;
  int hi = 0;
};

// Parameters of the procedural floorplan generator. Every draw is taken from
// a seeded stream, so (spec, seed) fully determines the output map.
struct FloorplanSpec {
  std::uint64_t seed = 1;
  Interval corridor_width_m{1.8, 2.6};
  IntInterval room_count{4, 10};
  Interval room_width_m{2.5, 5.5};  // extent along the corridor
  Interval room_depth_m{2.5, 5.0};  // extent away from the corridor
  IntInterval doors_per_room{1, 2};
  Interval door_width_m{0.7, 1.6};
  Interval door_leaf_angle_deg{20.0, 160.0};
  IntInterval furniture_per_room{0, 3};
  Interval rotation_deg{0.0, 360.0};
  double wall_thickness_m = 0.2;
};

enum class CellClass : std::uint8_t { Exterior = 0, Wall, Corridor, Room, Door };

struct DoorTruth {
  int id = 0;
  std::array<Vec2, 4> mbr_corners;  // cell coordinates (x = col, y = row)
  std::vector<Cell> cells;          // rasterized opening
  std::int32_t instance_a = 0;      // the two free-space instances this door joins
  std::int32_t instance_b = 0;
};

// Per-cell annotations emitted alongside a generated map. Instance ids:
// 0 = none, 1 = corridor, 2..room_count+1 = rooms.
struct GroundTruth {
  int width = 0;
  int height = 0;
  int room_count = 0;
  std::vector<CellClass> classes;
  std::vector<std::int32_t> instances;
  std::vector<DoorTruth> doors;

  int instance_count() const { return room_count + 1; }
  CellClass class_at(int row, int col) const {
    return classes[static_cast<std::size_t>(row) * width + col];
  }
  std::int32_t instance_at(int row, int col) const {
    return instances[static_cast<std::size_t>(row) * width + col];
  }
};

struct FloorplanMap {
  OccupancyGrid grid;
  GroundTruth truth;
};

// One central corridor with rooms attached on both long sides, every room
// reachable through at least one door, door leaves at sampled angles,
// furniture blobs, global rotation, rasterized at kNormalizedResolution.
FloorplanMap generate_floorplan(const FloorplanSpec& spec);

enum class NoiseKind { Gaussian, Combined };

// Noise level 0..10; level 0 is the identity. Levels map linearly onto the
// parameter ranges below.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::Combined;
  int level = 0;

  double gaussian_sigma() const { return 0.15 * level / 10.0; }
  double edge_salt_prob() const { return 0.3 * level / 10.0; }
  double edge_pepper_prob() const { return 0.3 * level / 10.0; }
  double free_pepper_prob() const { return 0.02 * level / 10.0; }
};

// Combined noise, in order: salt/pepper flips on cells bordering an
// occupied/free edge, additive Gaussian noise clamped to [0,1], pepper
// speckles on free space. Gaussian kind applies only the middle step.
// Unknown (never observed) cells carry no measurements and are left alone.
OccupancyGrid apply_noise(const OccupancyGrid& g, const NoiseSpec& noise,
                          std::uint64_t seed);

struct TrainingSample {
  Patch patch;
  bool is_door = false;
  std::vector<std::uint8_t> mask;  // kPatchSize^2 bitmap, door samples only
};

// Labels each window: door iff a ground-truth door opening lies entirely
// inside it with >= 4 cells margin to every border. Background windows are
// subsampled (evenly spaced) down to the door count when doors exist.
std::vector<TrainingSample> extract_training_samples(const OccupancyGrid& g,
                                                     const GroundTruth& truth,
                                                     int stride = kDefaultStride);

// Margin used by the door/background labeling rule above.
inline constexpr int kDoorPatchMargin = 4;

// True iff the door opening lies entirely inside the window at (patch_row,
// patch_col) with at least kDoorPatchMargin cells to every border.
bool door_within_patch(const DoorTruth& door, int patch_row, int patch_col);

// Ground-truth annotation document (JSON): dimensions, room count, doors
// with MBR corners, joined instances, and mask runs. The reader restores
// door records only (per-cell class/instance rasters live in the paletted
// images), which is all the oracle detector needs.
void write_ground_truth(const std::filesystem::path& path, const GroundTruth& truth);
GroundTruth read_ground_truth(const std::filesystem::path& path);

}  // namespace roomgraph
