#include "roomgraph/topometric.hpp"

#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "roomgraph/version.hpp"

namespace roomgraph {
namespace {

const char* class_name(EntityClass c) {
  switch (c) {
    case EntityClass::Room: return "room";
    case EntityClass::Corridor: return "corridor";
    case EntityClass::Door: return "door";
  }
  return "room";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::vector<Vec2> segment_hull(const std::vector<Cell>& cells) {
  if (cells.empty()) throw std::invalid_argument("segment_hull: empty cell set");
  std::vector<Vec2> centers;
  centers.reserve(cells.size());
  for (const Cell& c : cells) centers.push_back(cell_center(c));
  std::vector<Vec2> hull = convex_hull(std::move(centers));
  if (hull.size() >= 3) return hull;
  return mbr(cells).corners();
}

TopometricMap build_topometric(const SegmentLabelMap& labels,
                               const std::vector<DoorHypothesis>& valid_doors,
                               const std::vector<DoorAdjacency>& adjacency,
                               const std::vector<EntityScore>& scores,
                               const OccupancyGrid& grid, std::string source) {
  TopometricMap m;
  m.resolution = grid.resolution;
  m.origin = grid.origin;
  m.grid_width = grid.width;
  m.grid_height = grid.height;
  m.source = std::move(source);

  // Cell-space point (x = col units, y = row units) to world meters; the
  // world y axis grows upward while rows grow downward.
  auto to_world = [&](const Vec2& p) {
    return Vec2{m.origin.x + p.x * m.resolution,
                m.origin.y + (labels.height - p.y) * m.resolution};
  };

  std::vector<std::vector<Cell>> segment_cells(static_cast<std::size_t>(labels.count) + 1);
  for (int r = 0; r < labels.height; ++r)
    for (int c = 0; c < labels.width; ++c) {
      const std::int32_t l = labels.at(r, c);
      if (l > 0) segment_cells[l].push_back(Cell{r, c});
    }

  std::vector<int> segment_entity(static_cast<std::size_t>(labels.count) + 1, -1);
  for (int id = 1; id <= labels.count; ++id) {
    Entity e;
    e.id = static_cast<int>(m.entities.size());
    e.source_id = id;
    e.cls = EntityClass::Room;
    for (const EntityScore& s : scores)
      if (s.segment_id == id && s.corridor) e.cls = EntityClass::Corridor;
    const std::vector<Cell>& cells = segment_cells[id];
    double cx = 0.0, cy = 0.0;
    for (const Cell& c : cells) {
      const Vec2 p = cell_center(c);
      cx += p.x;
      cy += p.y;
    }
    const double n = static_cast<double>(cells.size());
    e.centroid = to_world(Vec2{cx / n, cy / n});
    // Recompute the hull on transformed points so the counter-clockwise
    // order survives the y flip.
    std::vector<Vec2> pts;
    for (const Vec2& p : segment_hull(cells)) pts.push_back(to_world(p));
    e.hull = convex_hull(std::move(pts));
    if (e.hull.size() < 3)
      throw std::runtime_error("topometric: degenerate segment hull");
    e.area_m2 = n * m.resolution * m.resolution;
    segment_entity[id] = e.id;
    m.entities.push_back(std::move(e));
  }

  std::vector<int> door_entity;
  for (const DoorHypothesis& h : valid_doors) {
    Entity e;
    e.id = static_cast<int>(m.entities.size());
    e.cls = EntityClass::Door;
    e.source_id = h.id;
    e.centroid = to_world(h.mbr.center);
    std::vector<Vec2> pts;
    for (const Vec2& p : h.mbr.corners()) pts.push_back(to_world(p));
    e.hull = convex_hull(std::move(pts));
    e.area_m2 = static_cast<double>(h.cells.size()) * m.resolution * m.resolution;
    door_entity.push_back(e.id);
    m.entities.push_back(std::move(e));
  }

  for (const DoorAdjacency& adj : adjacency) {
    int door_idx = -1;
    for (std::size_t i = 0; i < valid_doors.size(); ++i)
      if (valid_doors[i].id == adj.door_id) door_idx = static_cast<int>(i);
    if (door_idx < 0)
      throw std::invalid_argument("topometric: adjacency references unknown door");
    for (int seg : {adj.segment_a, adj.segment_b}) {
      if (seg == -1) continue;
      if (seg < 1 || seg > labels.count)
        throw std::invalid_argument("topometric: adjacency references missing segment");
    }
    if (adj.segment_a < 1 || adj.segment_b < 1) continue;  // degenerate, no edge
    m.edges.push_back(TopoEdge{door_entity[door_idx], segment_entity[adj.segment_a],
                               segment_entity[adj.segment_b]});
  }
  return m;
}

std::string export_dot(const TopometricMap& m) {
  std::string out = "graph topometric {\n";
  out += "  graph [overlap=false];\n";
  for (const Entity& e : m.entities) {
    out += "  n" + std::to_string(e.id) + " [label=\"" + class_name(e.cls) + " " +
           std::to_string(e.source_id) + "\", class=\"" + class_name(e.cls) +
           "\", shape=" + (e.cls == EntityClass::Door ? "box" : "ellipse") +
           ", pos=\"" + fmt(e.centroid.x) + "," + fmt(e.centroid.y) + "\", area=\"" +
           fmt(e.area_m2) + "\"];\n";
  }
  for (const TopoEdge& e : m.edges) {
    out += "  n" + std::to_string(e.a) + " -- n" + std::to_string(e.door) + ";\n";
    out += "  n" + std::to_string(e.door) + " -- n" + std::to_string(e.b) + ";\n";
  }
  out += "}\n";
  return out;
}

std::string export_json(const TopometricMap& m) {
  nlohmann::ordered_json doc;
  doc["version"] = kSchemaVersion;
  doc["resolution"] = m.resolution;
  doc["origin"] = nlohmann::ordered_json::array({m.origin.x, m.origin.y});
  doc["grid"] = nlohmann::ordered_json::array({m.grid_width, m.grid_height});
  doc["source"] = m.source;
  nlohmann::ordered_json entities = nlohmann::ordered_json::array();
  for (const Entity& e : m.entities) {
    nlohmann::ordered_json rec;
    rec["id"] = e.id;
    rec["class"] = class_name(e.cls);
    rec["source_id"] = e.source_id;
    rec["centroid"] = nlohmann::ordered_json::array({e.centroid.x, e.centroid.y});
    nlohmann::ordered_json hull = nlohmann::ordered_json::array();
    for (const Vec2& p : e.hull) hull.push_back(nlohmann::ordered_json::array({p.x, p.y}));
    rec["hull"] = std::move(hull);
    rec["area_m2"] = e.area_m2;
    entities.push_back(std::move(rec));
  }
  doc["entities"] = std::move(entities);
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const TopoEdge& e : m.edges)
    edges.push_back(nlohmann::ordered_json::array({e.door, e.a, e.b}));
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

}  // namespace roomgraph
