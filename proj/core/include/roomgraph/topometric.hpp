#pragma once

#include <string>
#include <vector>

#include "roomgraph/cluster.hpp"
#include "roomgraph/occupancy_grid.hpp"
#include "roomgraph/place_categorization.hpp"
#include "roomgraph/segmentation.hpp"

namespace roomgraph {

enum class EntityClass { Room, Corridor, Door };

struct Entity {
  int id = 0;
  EntityClass cls = EntityClass::Room;
  Vec2 centroid;            // world meters
  std::vector<Vec2> hull;   // convex, counter-clockwise, world meters
  double area_m2 = 0.0;     // region area (cells x cell area)
  int source_id = 0;        // segment id, or hypothesis id for doors
};

struct TopoEdge {
  int door = 0;  // entity ids
  int a = 0;
  int b = 0;
};

struct TopometricMap {
  std::vector<Entity> entities;
  std::vector<TopoEdge> edges;
  double resolution = kNormalizedResolution;
  Vec2 origin;
  int grid_width = 0;
  int grid_height = 0;
  std::string source;  // map file the graph was derived from
};

// Convex hull of a segment's cell centers in cell coordinates; degenerate
// hulls (fewer than 3 vertices) fall back to the unit-inflated minimum
// rectangle so every entity owns a polygon with positive area.
std::vector<Vec2> segment_hull(const std::vector<Cell>& cells);

// Assembles the graph: one entity per labeled segment (class from scores)
// and per valid door (shape = MBR corners), door-mediated edges from the
// adjacency list. Throws when an adjacency references a missing segment.
TopometricMap build_topometric(const SegmentLabelMap& labels,
                               const std::vector<DoorHypothesis>& valid_doors,
                               const std::vector<DoorAdjacency>& adjacency,
                               const std::vector<EntityScore>& scores,
                               const OccupancyGrid& grid, std::string source);

// Graph description (DOT): nodes carry class/centroid/area attributes,
// doors are box-shaped nodes, edges join doors to their two segments.
std::string export_dot(const TopometricMap& m);

// Structured document with schema version, entities (hulls included), edges.
std::string export_json(const TopometricMap& m);

}  // namespace roomgraph
