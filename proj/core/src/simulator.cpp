#include "roomgraph/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "roomgraph/rng.hpp"
#include "roomgraph/version.hpp"

namespace roomgraph {
namespace {

constexpr double kJamb = 0.3;             // wall kept on each side of an opening
constexpr double kLeafThickness = 0.06;   // door leaf depth
constexpr double kLeafShorten = 0.1;      // leaf length = opening width - this
constexpr double kLeafClearance = 0.15;   // leaf body to non-hinge walls
constexpr double kFurnitureClearance = 0.15;
constexpr double kFurnitureGap = 0.1;
constexpr double kDoorSeparation = 0.25;  // between openings in the same wall
constexpr int kExteriorMarginCells = 10;

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  bool contains(const Vec2& p) const {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }
  Rect inflated(double t) const { return {x0 - t, y0 - t, x1 + t, y1 + t}; }
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

struct LeafPoly {
  std::array<Vec2, 4> corners;

  bool contains(const Vec2& p) const {
    return point_in_convex_polygon(p, {corners.begin(), corners.end()});
  }
};

struct Disc {
  Vec2 center;
  double radius = 0.0;
};

struct Furniture {
  bool is_disc = false;
  Rect rect;
  Disc disc;

  bool contains(const Vec2& p) const {
    if (is_disc) return norm(p - disc.center) <= disc.radius;
    return rect.contains(p);
  }
};

struct RoomShape {
  Rect interior;
  int side = 0;  // 0 above the corridor, 1 below
};

struct DoorShape {
  Rect opening;
  std::int32_t instance_a = 0;
  std::int32_t instance_b = 0;
  int swing_room = -1;  // room index the leaf swings into
  Vec2 hinge;
  double leaf_radius = 0.0;
  bool has_leaf = false;
  LeafPoly leaf;
};

struct Layout {
  Rect corridor;
  std::vector<RoomShape> rooms;
  std::vector<DoorShape> doors;
  std::vector<Furniture> furniture;
  double wall = 0.15;
};

void check_interval(const Interval& iv, const char* name) {
  if (!(iv.lo <= iv.hi))
    throw std::invalid_argument(std::string(name) + ": interval lower bound exceeds upper");
}

void check_spec(const FloorplanSpec& s) {
  check_interval(s.corridor_width_m, "corridor_width_m");
  check_interval(s.room_width_m, "room_width_m");
  check_interval(s.room_depth_m, "room_depth_m");
  check_interval(s.door_width_m, "door_width_m");
  check_interval(s.door_leaf_angle_deg, "door_leaf_angle_deg");
  check_interval(s.rotation_deg, "rotation_deg");
  if (s.room_count.lo > s.room_count.hi || s.room_count.lo < 0)
    throw std::invalid_argument("room_count: invalid interval");
  if (s.doors_per_room.lo > s.doors_per_room.hi || s.doors_per_room.lo < 0)
    throw std::invalid_argument("doors_per_room: invalid interval");
  if (s.furniture_per_room.lo > s.furniture_per_room.hi || s.furniture_per_room.lo < 0)
    throw std::invalid_argument("furniture_per_room: invalid interval");
  if (s.wall_thickness_m <= 0.0 || s.wall_thickness_m > 0.5)
    throw std::invalid_argument("wall_thickness_m: must be in (0, 0.5]");
  if (s.corridor_width_m.lo < 0.6)
    throw std::invalid_argument("corridor_width_m: corridor narrower than 0.6 m");
  if (s.door_width_m.lo < 0.3)
    throw std::invalid_argument("door_width_m: openings narrower than 0.3 m");
  if (s.room_width_m.lo < s.door_width_m.lo + 2.0 * kJamb)
    throw std::invalid_argument("room_width_m: rooms too narrow to host a door");
  if (s.room_depth_m.lo < 1.0)
    throw std::invalid_argument("room_depth_m: rooms shallower than 1 m");
  if (s.door_leaf_angle_deg.lo < 0.0 || s.door_leaf_angle_deg.hi > 180.0)
    throw std::invalid_argument("door_leaf_angle_deg: must lie in [0, 180]");
}

LeafPoly make_leaf(const Vec2& hinge, const Vec2& closed_dir, const Vec2& inward,
                   double angle_rad, double length) {
  const Vec2 dir = closed_dir * std::cos(angle_rad) + inward * std::sin(angle_rad);
  const Vec2 perp{-dir.y, dir.x};
  const Vec2 off = perp * (kLeafThickness * 0.5);
  const Vec2 tip = hinge + dir * length;
  return LeafPoly{{hinge - off, hinge + off, tip + off, tip - off}};
}

// Attaches a sampled leaf to a door. Draw order is fixed so layouts are
// reproducible: one angle per door regardless of whether the leaf renders.
// A leaf that would graze a far wall could pinch off part of the swing room,
// so the body must stay inside `allowed` (room interior with clearance on the
// non-hinge sides). Infeasible angles fall back through a fixed sequence that
// bends the leaf toward the room middle; no extra randomness is drawn.
void attach_leaf(DoorShape& d, const FloorplanSpec& spec, const Vec2& closed_dir,
                 const Vec2& inward, double opening_width, const Rect& allowed,
                 RandomSource& rng) {
  const double ang_deg =
      rng.uniform(spec.door_leaf_angle_deg.lo, spec.door_leaf_angle_deg.hi);
  const double len = opening_width - kLeafShorten;
  d.leaf_radius = opening_width;
  if (len < 0.05) return;
  const auto fits = [&](const LeafPoly& leaf) {
    for (const Vec2& p : leaf.corners)
      if (p.x < allowed.x0 || p.x > allowed.x1 || p.y < allowed.y0 || p.y > allowed.y1)
        return false;
    return true;
  };
  const double candidates[] = {ang_deg,
                               180.0 - ang_deg,
                               90.0 + (ang_deg - 90.0) * 0.5,
                               90.0 + (ang_deg - 90.0) * 0.25,
                               90.0};
  for (const double a : candidates) {
    const LeafPoly leaf = make_leaf(d.hinge, closed_dir, inward, a * kPi / 180.0, len);
    if (!fits(leaf)) continue;
    d.leaf = leaf;
    d.has_leaf = true;
    return;
  }
}

bool overlaps_interval(double a0, double a1, double b0, double b1, double gap) {
  return a0 < b1 + gap && b0 < a1 + gap;
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

double rect_disc_distance(const Rect& r, const Vec2& c) {
  const double dx = std::max({r.x0 - c.x, 0.0, c.x - r.x1});
  const double dy = std::max({r.y0 - c.y, 0.0, c.y - r.y1});
  return std::sqrt(dx * dx + dy * dy);
}

bool furniture_valid(const Furniture& f, const Layout& lay, int room) {
  for (const DoorShape& d : lay.doors) {
    if (d.swing_room != room) continue;
    const double dist = f.is_disc ? norm(f.disc.center - d.hinge) - f.disc.radius
                                  : rect_disc_distance(f.rect, d.hinge);
    if (dist < d.leaf_radius) return false;
  }
  for (const Furniture& other : lay.furniture) {
    Rect a = f.is_disc ? Rect{f.disc.center.x - f.disc.radius, f.disc.center.y - f.disc.radius,
                              f.disc.center.x + f.disc.radius, f.disc.center.y + f.disc.radius}
                       : f.rect;
    Rect b = other.is_disc
                 ? Rect{other.disc.center.x - other.disc.radius,
                        other.disc.center.y - other.disc.radius,
                        other.disc.center.x + other.disc.radius,
                        other.disc.center.y + other.disc.radius}
                 : other.rect;
    if (overlaps_interval(a.x0, a.x1, b.x0, b.x1, kFurnitureGap) &&
        overlaps_interval(a.y0, a.y1, b.y0, b.y1, kFurnitureGap))
      return false;
  }
  return true;
}

Layout build_layout(const FloorplanSpec& spec, RandomSource& rng) {
  Layout lay;
  lay.wall = spec.wall_thickness_m;
  const double T = lay.wall;

  const int room_count = rng.uniform_int(spec.room_count.lo, spec.room_count.hi);
  const double corridor_w = rng.uniform(spec.corridor_width_m.lo, spec.corridor_width_m.hi);

  struct Plan {
    double w, d;
    int side;
  };
  std::vector<Plan> plans(room_count);
  for (int i = 0; i < room_count; ++i) {
    plans[i].w = rng.uniform(spec.room_width_m.lo, spec.room_width_m.hi);
    plans[i].d = rng.uniform(spec.room_depth_m.lo, spec.room_depth_m.hi);
    plans[i].side = i % 2;
  }

  double total[2] = {0.0, 0.0};
  int count[2] = {0, 0};
  for (const Plan& p : plans) {
    total[p.side] += p.w + (count[p.side] > 0 ? T : 0.0);
    ++count[p.side];
  }
  double corridor_len;
  if (room_count == 0) {
    corridor_len = rng.uniform(4.0, 8.0);
  } else {
    corridor_len = std::max(total[0], total[1]);
    // Stretch the last room of the shorter side so both sides close flush
    // with the corridor end.
    for (int side = 0; side < 2; ++side) {
      if (count[side] == 0 || total[side] >= corridor_len) continue;
      for (int i = room_count - 1; i >= 0; --i) {
        if (plans[i].side == side) {
          plans[i].w += corridor_len - total[side];
          break;
        }
      }
    }
  }

  lay.corridor = Rect{0.0, 0.0, corridor_len, corridor_w};

  double cursor[2] = {0.0, 0.0};
  lay.rooms.resize(room_count);
  for (int i = 0; i < room_count; ++i) {
    const Plan& p = plans[i];
    const double x0 = cursor[p.side];
    const double x1 = x0 + p.w;
    cursor[p.side] = x1 + T;
    RoomShape room;
    room.side = p.side;
    room.interior = p.side == 0 ? Rect{x0, corridor_w + T, x1, corridor_w + T + p.d}
                                : Rect{x0, -T - p.d, x1, -T};
    lay.rooms[i] = room;
  }

  // Doors. The first door of every room opens to the corridor; a second door
  // joins the next room on the same side when the shared wall can host it.
  for (int i = 0; i < room_count; ++i) {
    const RoomShape& room = lay.rooms[i];
    const Rect& R = room.interior;
    int n_doors = std::max(1, rng.uniform_int(spec.doors_per_room.lo, spec.doors_per_room.hi));
    std::vector<Rect> corridor_openings;

    auto place_corridor_door = [&]() {
      double w = rng.uniform(spec.door_width_m.lo, spec.door_width_m.hi);
      w = std::min(w, R.width() - 2.0 * kJamb);
      for (int attempt = 0; attempt < 20; ++attempt) {
        const double x = rng.uniform(R.x0 + kJamb, R.x1 - kJamb - w);
        Rect opening = room.side == 0 ? Rect{x, corridor_w, x + w, corridor_w + T}
                                      : Rect{x, -T, x + w, 0.0};
        bool clear = true;
        for (const Rect& prev : corridor_openings)
          if (overlaps_interval(opening.x0, opening.x1, prev.x0, prev.x1, kDoorSeparation))
            clear = false;
        if (!clear) continue;
        DoorShape d;
        d.opening = opening;
        d.instance_a = 1;
        d.instance_b = 2 + i;
        d.swing_room = i;
        d.hinge = room.side == 0 ? Vec2{x, corridor_w + T} : Vec2{x, -T};
        const Vec2 inward = room.side == 0 ? Vec2{0.0, 1.0} : Vec2{0.0, -1.0};
        const Rect allowed =
            room.side == 0
                ? Rect{R.x0 + kLeafClearance, R.y0 - 0.05, R.x1 - kLeafClearance,
                       R.y1 - kLeafClearance}
                : Rect{R.x0 + kLeafClearance, R.y0 + kLeafClearance,
                       R.x1 - kLeafClearance, R.y1 + 0.05};
        attach_leaf(d, spec, Vec2{1.0, 0.0}, inward, w, allowed, rng);
        corridor_openings.push_back(opening);
        lay.doors.push_back(d);
        return true;
      }
      return false;
    };

    auto place_neighbor_door = [&]() {
      // Next room on the same side, if any.
      int k = -1;
      for (int j = i + 1; j < room_count; ++j)
        if (lay.rooms[j].side == room.side) {
          k = j;
          break;
        }
      if (k < 0) return false;
      const Rect& N = lay.rooms[k].interior;
      const double y_base = std::max(R.y0, N.y0);
      const double y_top = std::min(R.y1, N.y1);
      const double avail = y_top - y_base - 2.0 * kJamb;
      if (avail < spec.door_width_m.lo) return false;
      double w = rng.uniform(spec.door_width_m.lo, spec.door_width_m.hi);
      w = std::min(w, avail);
      const double y = rng.uniform(y_base + kJamb, y_top - kJamb - w);
      DoorShape d;
      d.opening = Rect{R.x1, y, R.x1 + T, y + w};
      d.instance_a = 2 + i;
      d.instance_b = 2 + k;
      d.swing_room = i;
      d.hinge = Vec2{R.x1, y};
      const Rect allowed = Rect{R.x0 + kLeafClearance, R.y0 + kLeafClearance,
                                R.x1 + 0.05, R.y1 - kLeafClearance};
      attach_leaf(d, spec, Vec2{0.0, 1.0}, Vec2{-1.0, 0.0}, w, allowed, rng);
      lay.doors.push_back(d);
      return true;
    };

    place_corridor_door();
    for (int extra = 1; extra < n_doors; ++extra) {
      if (extra == 1 && place_neighbor_door()) continue;
      place_corridor_door();
    }
  }

  // Furniture, kept clear of walls, door swing areas, and each other.
  for (int i = 0; i < room_count; ++i) {
    const Rect& R = lay.rooms[i].interior;
    const int n = rng.uniform_int(spec.furniture_per_room.lo, spec.furniture_per_room.hi);
    for (int f = 0; f < n; ++f) {
      Furniture item;
      item.is_disc = rng.bernoulli(0.5);
      double half_w, half_h;
      if (item.is_disc) {
        item.disc.radius = rng.uniform(0.2, 1.2) * 0.5;
        half_w = half_h = item.disc.radius;
      } else {
        half_w = rng.uniform(0.2, 1.2) * 0.5;
        half_h = rng.uniform(0.2, 1.2) * 0.5;
      }
      const double mx0 = R.x0 + kFurnitureClearance + half_w;
      const double mx1 = R.x1 - kFurnitureClearance - half_w;
      const double my0 = R.y0 + kFurnitureClearance + half_h;
      const double my1 = R.y1 - kFurnitureClearance - half_h;
      if (mx0 >= mx1 || my0 >= my1) continue;
      for (int attempt = 0; attempt < 20; ++attempt) {
        const Vec2 c{rng.uniform(mx0, mx1), rng.uniform(my0, my1)};
        if (item.is_disc)
          item.disc.center = c;
        else
          item.rect = Rect{c.x - half_w, c.y - half_h, c.x + half_w, c.y + half_h};
        if (furniture_valid(item, lay, i)) {
          lay.furniture.push_back(item);
          break;
        }
      }
    }
  }
  return lay;
}

struct PointSample {
  CellClass cls = CellClass::Exterior;
  std::int32_t instance = 0;
  int door_id = -1;
  bool occupied = false;
};

PointSample classify(const Layout& lay, const Vec2& p) {
  PointSample s;
  for (std::size_t j = 0; j < lay.doors.size(); ++j) {
    if (lay.doors[j].opening.contains(p)) {
      s.cls = CellClass::Door;
      s.door_id = static_cast<int>(j);
      break;
    }
  }
  if (s.door_id < 0) {
    if (lay.corridor.contains(p)) {
      s.cls = CellClass::Corridor;
      s.instance = 1;
    } else {
      for (std::size_t i = 0; i < lay.rooms.size(); ++i) {
        if (lay.rooms[i].interior.contains(p)) {
          s.cls = CellClass::Room;
          s.instance = 2 + static_cast<std::int32_t>(i);
          break;
        }
      }
    }
  }
  if (s.cls == CellClass::Exterior) {
    const double T = lay.wall;
    bool in_wall = lay.corridor.inflated(T).contains(p);
    for (std::size_t i = 0; !in_wall && i < lay.rooms.size(); ++i)
      in_wall = lay.rooms[i].interior.inflated(T).contains(p);
    if (in_wall) {
      s.cls = CellClass::Wall;
      s.occupied = true;
      return s;
    }
    return s;  // exterior
  }
  // Free-space classes may still hold an obstacle (leaf or furniture).
  for (const DoorShape& d : lay.doors)
    if (d.has_leaf && d.leaf.contains(p)) {
      s.occupied = true;
      return s;
    }
  for (const Furniture& f : lay.furniture)
    if (f.contains(p)) {
      s.occupied = true;
      return s;
    }
  return s;
}

}  // namespace

FloorplanMap generate_floorplan(const FloorplanSpec& spec) {
  check_spec(spec);
  RandomSource rng(spec.seed);
  Layout lay = build_layout(spec, rng);
  const double theta = rng.uniform(spec.rotation_deg.lo, spec.rotation_deg.hi) * kPi / 180.0;
  const double res = kNormalizedResolution;
  const double T = lay.wall;

  // Envelope of the building (all inflated rects), rotated about its center.
  std::vector<Rect> envelope{lay.corridor.inflated(T)};
  for (const RoomShape& r : lay.rooms) envelope.push_back(r.interior.inflated(T));
  double fx0 = envelope[0].x0, fy0 = envelope[0].y0, fx1 = envelope[0].x1, fy1 = envelope[0].y1;
  for (const Rect& r : envelope) {
    fx0 = std::min(fx0, r.x0);
    fy0 = std::min(fy0, r.y0);
    fx1 = std::max(fx1, r.x1);
    fy1 = std::max(fy1, r.y1);
  }
  const Vec2 pivot{(fx0 + fx1) * 0.5, (fy0 + fy1) * 0.5};
  auto forward = [&](const Vec2& p) { return pivot + rotate(p - pivot, theta); };
  auto inverse = [&](const Vec2& p) { return pivot + rotate(p - pivot, -theta); };

  double rx0 = 0, ry0 = 0, rx1 = 0, ry1 = 0;
  bool first = true;
  for (const Rect& r : envelope) {
    const Vec2 cs[4] = {{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}};
    for (const Vec2& c : cs) {
      const Vec2 q = forward(c);
      if (first) {
        rx0 = rx1 = q.x;
        ry0 = ry1 = q.y;
        first = false;
      }
      rx0 = std::min(rx0, q.x);
      ry0 = std::min(ry0, q.y);
      rx1 = std::max(rx1, q.x);
      ry1 = std::max(ry1, q.y);
    }
  }

  const int margin = kExteriorMarginCells;
  const int width = static_cast<int>(std::ceil((rx1 - rx0) / res)) + 2 * margin;
  const int height = static_cast<int>(std::ceil((ry1 - ry0) / res)) + 2 * margin;

  FloorplanMap out;
  out.grid.width = width;
  out.grid.height = height;
  out.grid.resolution = res;
  out.grid.origin = Vec2{0.0, 0.0};
  out.grid.cells.assign(static_cast<std::size_t>(width) * height, 0.0f);
  out.grid.unknown.assign(static_cast<std::size_t>(width) * height, 0);
  out.truth.width = width;
  out.truth.height = height;
  out.truth.room_count = static_cast<int>(lay.rooms.size());
  out.truth.classes.assign(static_cast<std::size_t>(width) * height, CellClass::Exterior);
  out.truth.instances.assign(static_cast<std::size_t>(width) * height, 0);
  out.truth.doors.resize(lay.doors.size());
  for (std::size_t j = 0; j < lay.doors.size(); ++j) {
    DoorTruth& dt = out.truth.doors[j];
    dt.id = static_cast<int>(j);
    dt.instance_a = lay.doors[j].instance_a;
    dt.instance_b = lay.doors[j].instance_b;
    const Rect& o = lay.doors[j].opening;
    const Vec2 cs[4] = {{o.x0, o.y0}, {o.x1, o.y0}, {o.x1, o.y1}, {o.x0, o.y1}};
    for (int c = 0; c < 4; ++c) {
      const Vec2 q = forward(cs[c]);
      dt.mbr_corners[c] = Vec2{(q.x - rx0) / res + margin, (q.y - ry0) / res + margin};
    }
  }

  const float unknown_p =
      (255.0f - static_cast<float>(kDefaultUnknownValue)) / 255.0f;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const Vec2 q{rx0 + (c + 0.5 - margin) * res, ry0 + (r + 0.5 - margin) * res};
      const PointSample s = classify(lay, inverse(q));
      const std::size_t idx = static_cast<std::size_t>(r) * width + c;
      out.truth.classes[idx] = s.cls;
      out.truth.instances[idx] = s.instance;
      if (s.cls == CellClass::Exterior) {
        out.grid.cells[idx] = unknown_p;
        out.grid.unknown[idx] = 1;
      } else {
        out.grid.cells[idx] = s.occupied ? 1.0f : 0.0f;
      }
      if (s.door_id >= 0) out.truth.doors[s.door_id].cells.push_back(Cell{r, c});
    }
  }
  return out;
}

OccupancyGrid apply_noise(const OccupancyGrid& g, const NoiseSpec& noise,
                          std::uint64_t seed) {
  if (noise.level < 0 || noise.level > 10)
    throw std::invalid_argument("noise level must lie in [0, 10]");
  OccupancyGrid out = g;
  if (noise.level == 0) return out;

  RandomSource rng(seed);
  const std::size_t n = g.cells.size();
  std::vector<std::uint8_t> occ(n, 0), known(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    known[i] = g.unknown.empty() ? 1 : static_cast<std::uint8_t>(!g.unknown[i]);
    occ[i] = known[i] && g.cells[i] >= 0.5f;
  }
  auto is_edge = [&](int r, int c) {
    const std::size_t i = static_cast<std::size_t>(r) * g.width + c;
    if (!known[i]) return false;
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const int rr = r + dr, cc = c + dc;
        if (rr < 0 || rr >= g.height || cc < 0 || cc >= g.width) continue;
        const std::size_t j = static_cast<std::size_t>(rr) * g.width + cc;
        if (known[j] && occ[j] != occ[i]) return true;
      }
    return false;
  };

  if (noise.kind == NoiseKind::Combined) {
    const double salt = noise.edge_salt_prob();
    const double pepper = noise.edge_pepper_prob();
    for (int r = 0; r < g.height; ++r)
      for (int c = 0; c < g.width; ++c) {
        if (!is_edge(r, c)) continue;
        const std::size_t i = static_cast<std::size_t>(r) * g.width + c;
        const double u = rng.uniform01();
        if (u < salt)
          out.cells[i] = 0.0f;
        else if (u < salt + pepper)
          out.cells[i] = 1.0f;
      }
  }

  const double sigma = noise.gaussian_sigma();
  for (std::size_t i = 0; i < n; ++i) {
    if (!known[i]) continue;
    out.cells[i] = static_cast<float>(clamp01(out.cells[i] + rng.normal(0.0, sigma)));
  }

  if (noise.kind == NoiseKind::Combined) {
    const double pf = noise.free_pepper_prob();
    for (std::size_t i = 0; i < n; ++i) {
      if (!known[i] || occ[i]) continue;
      if (rng.uniform01() < pf) out.cells[i] = 1.0f;
    }
  }
  return out;
}

bool door_within_patch(const DoorTruth& door, int patch_row, int patch_col) {
  const int m = kDoorPatchMargin;
  for (const Vec2& corner : door.mbr_corners) {
    if (corner.x < patch_col + m || corner.x > patch_col + kPatchSize - m ||
        corner.y < patch_row + m || corner.y > patch_row + kPatchSize - m)
      return false;
  }
  return true;
}

std::vector<TrainingSample> extract_training_samples(const OccupancyGrid& g,
                                                     const GroundTruth& truth,
                                                     int stride) {
  std::vector<Patch> patches = sliding_windows(g, stride);

  std::vector<TrainingSample> door_samples, background;
  for (Patch& p : patches) {
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(kPatchSize) * kPatchSize, 0);
    bool has_door = false;
    for (const DoorTruth& d : truth.doors) {
      if (!door_within_patch(d, p.row, p.col)) continue;
      has_door = true;
      for (const Cell& cell : d.cells) {
        const int lr = cell.row - p.row, lc = cell.col - p.col;
        if (lr >= 0 && lr < kPatchSize && lc >= 0 && lc < kPatchSize)
          mask[static_cast<std::size_t>(lr) * kPatchSize + lc] = 1;
      }
    }
    TrainingSample s;
    s.patch = std::move(p);
    s.is_door = has_door;
    if (has_door) {
      s.mask = std::move(mask);
      door_samples.push_back(std::move(s));
    } else {
      background.push_back(std::move(s));
    }
  }

  // Balance classes by thinning the background evenly; with no doors at all
  // every background window is kept.
  std::vector<TrainingSample> out;
  if (door_samples.empty()) return background;
  const std::size_t keep = std::min(door_samples.size(), background.size());
  std::vector<TrainingSample> picked;
  for (std::size_t i = 0; i < keep; ++i)
    picked.push_back(std::move(background[i * background.size() / keep]));
  out.reserve(door_samples.size() + picked.size());
  std::size_t di = 0, bi = 0;
  // Preserve window order in the merged output.
  while (di < door_samples.size() || bi < picked.size()) {
    const bool take_door =
        bi >= picked.size() ||
        (di < door_samples.size() &&
         (door_samples[di].patch.row < picked[bi].patch.row ||
          (door_samples[di].patch.row == picked[bi].patch.row &&
           door_samples[di].patch.col <= picked[bi].patch.col)));
    if (take_door)
      out.push_back(std::move(door_samples[di++]));
    else
      out.push_back(std::move(picked[bi++]));
  }
  return out;
}

void write_ground_truth(const std::filesystem::path& path, const GroundTruth& truth) {
  nlohmann::ordered_json doc;
  doc["version"] = kSchemaVersion;
  doc["width"] = truth.width;
  doc["height"] = truth.height;
  doc["room_count"] = truth.room_count;
  doc["instances"] = truth.instance_count();
  nlohmann::ordered_json doors = nlohmann::ordered_json::array();
  for (const DoorTruth& d : truth.doors) {
    nlohmann::ordered_json rec;
    rec["id"] = d.id;
    rec["instances"] = nlohmann::ordered_json::array({d.instance_a, d.instance_b});
    nlohmann::ordered_json corners = nlohmann::ordered_json::array();
    for (const Vec2& c : d.mbr_corners)
      corners.push_back(nlohmann::ordered_json::array({c.x, c.y}));
    rec["mbr"] = std::move(corners);
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    std::size_t k = 0;
    while (k < d.cells.size()) {
      const long long start =
          static_cast<long long>(d.cells[k].row) * truth.width + d.cells[k].col;
      long long len = 1;
      while (k + 1 < d.cells.size() &&
             static_cast<long long>(d.cells[k + 1].row) * truth.width + d.cells[k + 1].col ==
                 start + len) {
        ++len;
        ++k;
      }
      runs.push_back(start);
      runs.push_back(len);
      ++k;
    }
    rec["cells_rle"] = std::move(runs);
    doors.push_back(std::move(rec));
  }
  doc["doors"] = std::move(doors);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

GroundTruth read_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open ground truth " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("ground truth " + path.string() + ": " + e.what());
  }
  if (!doc.contains("version") || doc["version"].get<int>() != kSchemaVersion)
    throw std::runtime_error("ground truth " + path.string() + ": missing/unsupported version");
  GroundTruth t;
  t.width = doc.at("width").get<int>();
  t.height = doc.at("height").get<int>();
  t.room_count = doc.at("room_count").get<int>();
  if (t.width <= 0 || t.height <= 0)
    throw std::runtime_error("ground truth: invalid dimensions");
  for (const nlohmann::json& rec : doc.at("doors")) {
    DoorTruth d;
    d.id = rec.at("id").get<int>();
    d.instance_a = rec.at("instances").at(0).get<std::int32_t>();
    d.instance_b = rec.at("instances").at(1).get<std::int32_t>();
    const nlohmann::json& corners = rec.at("mbr");
    for (int c = 0; c < 4; ++c)
      d.mbr_corners[c] = Vec2{corners.at(c).at(0).get<double>(),
                              corners.at(c).at(1).get<double>()};
    const nlohmann::json& runs = rec.at("cells_rle");
    if (runs.size() % 2 != 0) throw std::runtime_error("ground truth: odd run list");
    for (std::size_t k = 0; k < runs.size(); k += 2) {
      const long long start = runs[k].get<long long>();
      const long long len = runs[k + 1].get<long long>();
      if (start < 0 || len <= 0 ||
          start + len > static_cast<long long>(t.width) * t.height)
        throw std::runtime_error("ground truth: run out of bounds");
      for (long long i = start; i < start + len; ++i)
        d.cells.push_back(
            Cell{static_cast<int>(i / t.width), static_cast<int>(i % t.width)});
    }
    t.doors.push_back(std::move(d));
  }
  return t;
}

}  // namespace roomgraph
