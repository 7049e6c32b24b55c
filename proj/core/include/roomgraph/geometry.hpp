#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace roomgraph {

inline constexpr double kPi = 3.14159265358979323846;

// Grid cell address. Row 0 is the top image row throughout the library.
struct Cell {
  int row = 0;
  int col = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
double norm(const Vec2& a);

// Rotation by `angle_rad` counter-clockwise in a y-up frame (clockwise on
// screen for row-down cell coordinates; callers only rely on inverses
// matching).
Vec2 rotate(const Vec2& p, double angle_rad);

// Center of cell (row, col) in cell-space coordinates: x = col, y = row.
inline Vec2 cell_center(const Cell& c) {
  return {static_cast<double>(c.col) + 0.5, static_cast<double>(c.row) + 0.5};
}

// Counter-clockwise convex hull (monotone chain); collinear points dropped.
// Degenerate inputs yield hulls with fewer than 3 vertices.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

double polygon_area(const std::vector<Vec2>& poly);

bool point_in_convex_polygon(const Vec2& p, const std::vector<Vec2>& poly);

// Minimum-area enclosing rectangle, possibly rotated.
struct RotatedRect {
  Vec2 center;
  Vec2 axis{1.0, 0.0};  // unit direction of the first extent
  double half_u = 0.0;
  double half_v = 0.0;

  double area() const { return 4.0 * half_u * half_v; }
  // Angle of `axis` in [0, pi).
  double angle() const;
  std::vector<Vec2> corners() const;
  bool contains(const Vec2& p, double eps = 1e-9) const;
};

// Smallest-area rectangle over the convex hull of `points` (edge-aligned
// candidates over the hull, which is exact). Handles 1- and 2-point inputs.
RotatedRect min_area_rect(const std::vector<Vec2>& points);

// Grows the rectangle by `margin` along both axes.
RotatedRect inflate(const RotatedRect& r, double margin);

// All cells in [0,rows)x[0,cols) whose centers lie inside the convex polygon.
std::vector<Cell> cells_in_convex_polygon(const std::vector<Vec2>& poly,
                                          int rows, int cols);

// Axis-aligned integer bounds of a cell set: {min_row, min_col, max_row, max_col}.
struct CellBounds {
  int min_row = 0, min_col = 0, max_row = -1, max_col = -1;
  bool empty() const { return max_row < min_row || max_col < min_col; }
  int height() const { return max_row - min_row + 1; }
  int width() const { return max_col - min_col + 1; }
};
CellBounds cell_bounds(const std::vector<Cell>& cells);

}  // namespace roomgraph

template <>
struct std::hash<roomgraph::Cell> {
  std::size_t operator()(const roomgraph::Cell& c) const noexcept {
    return std::hash<std::int64_t>()(
        (static_cast<std::int64_t>(c.row) << 32) ^ static_cast<std::uint32_t>(c.col));
  }
};
