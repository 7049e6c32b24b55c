#include "roomgraph/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace roomgraph {

double norm(const Vec2& a) { return std::sqrt(a.x * a.x + a.y * a.y); }

Vec2 rotate(const Vec2& p, double angle_rad) {
  const double c = std::cos(angle_rad);
  const double s = std::sin(angle_rad);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return pts;

  std::vector<Vec2> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {  // upper
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) {  // all collinear
    auto [mn, mx] = std::minmax_element(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
      return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    return {*mn, *mx};
  }
  return hull;
}

double polygon_area(const std::vector<Vec2>& poly) {
  double a = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * std::abs(a);
}

bool point_in_convex_polygon(const Vec2& p, const std::vector<Vec2>& poly) {
  const std::size_t n = poly.size();
  if (n == 0) return false;
  if (n == 1) return p == poly[0];
  if (n == 2) {
    const Vec2 d = poly[1] - poly[0];
    if (std::abs(cross(d, p - poly[0])) > 1e-9) return false;
    const double t = dot(d, p - poly[0]);
    return t >= 0.0 && t <= dot(d, d);
  }
  // Accept either winding: all edge cross products must share a sign.
  bool has_pos = false, has_neg = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = cross(poly[(i + 1) % n] - poly[i], p - poly[i]);
    if (c > 0.0) has_pos = true;
    if (c < 0.0) has_neg = true;
    if (has_pos && has_neg) return false;
  }
  return true;
}

double RotatedRect::angle() const {
  double a = std::atan2(axis.y, axis.x);
  const double pi = 3.14159265358979323846;
  while (a < 0.0) a += pi;
  while (a >= pi) a -= pi;
  return a;
}

std::vector<Vec2> RotatedRect::corners() const {
  const Vec2 u = axis * half_u;
  const Vec2 v = Vec2{-axis.y, axis.x} * half_v;
  return {center - u - v, center + u - v, center + u + v, center - u + v};
}

bool RotatedRect::contains(const Vec2& p, double eps) const {
  const Vec2 d = p - center;
  const Vec2 perp{-axis.y, axis.x};
  return std::abs(dot(d, axis)) <= half_u + eps && std::abs(dot(d, perp)) <= half_v + eps;
}

RotatedRect min_area_rect(const std::vector<Vec2>& points) {
  if (points.empty()) throw std::invalid_argument("min_area_rect: empty point set");
  const std::vector<Vec2> hull = convex_hull(points);
  if (hull.size() == 1) return {hull[0], {1.0, 0.0}, 0.0, 0.0};
  if (hull.size() == 2) {
    const Vec2 d = hull[1] - hull[0];
    const double len = norm(d);
    const Vec2 axis = len > 0.0 ? Vec2{d.x / len, d.y / len} : Vec2{1.0, 0.0};
    return {(hull[0] + hull[1]) * 0.5, axis, 0.5 * len, 0.0};
  }

  RotatedRect best;
  double best_area = std::numeric_limits<double>::infinity();
  const std::size_t n = hull.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e = hull[(i + 1) % n] - hull[i];
    const double len = norm(e);
    if (len < 1e-12) continue;
    const Vec2 u{e.x / len, e.y / len};
    const Vec2 v{-u.y, u.x};
    double lo_u = std::numeric_limits<double>::infinity(), hi_u = -lo_u;
    double lo_v = lo_u, hi_v = -lo_u;
    for (const Vec2& p : hull) {
      const double pu = dot(p, u), pv = dot(p, v);
      lo_u = std::min(lo_u, pu);
      hi_u = std::max(hi_u, pu);
      lo_v = std::min(lo_v, pv);
      hi_v = std::max(hi_v, pv);
    }
    const double area = (hi_u - lo_u) * (hi_v - lo_v);
    if (area < best_area) {
      best_area = area;
      const double cu = 0.5 * (lo_u + hi_u), cv = 0.5 * (lo_v + hi_v);
      best.center = u * cu + v * cv;
      best.axis = u;
      best.half_u = 0.5 * (hi_u - lo_u);
      best.half_v = 0.5 * (hi_v - lo_v);
    }
  }
  return best;
}

RotatedRect inflate(const RotatedRect& r, double margin) {
  RotatedRect out = r;
  out.half_u += margin;
  out.half_v += margin;
  return out;
}

std::vector<Cell> cells_in_convex_polygon(const std::vector<Vec2>& poly,
                                          int rows, int cols) {
  std::vector<Cell> out;
  if (poly.empty()) return out;
  double min_x = poly[0].x, max_x = poly[0].x, min_y = poly[0].y, max_y = poly[0].y;
  for (const Vec2& p : poly) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const int r0 = std::max(0, static_cast<int>(std::floor(min_y - 0.5)));
  const int r1 = std::min(rows - 1, static_cast<int>(std::ceil(max_y)));
  const int c0 = std::max(0, static_cast<int>(std::floor(min_x - 0.5)));
  const int c1 = std::min(cols - 1, static_cast<int>(std::ceil(max_x)));
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      if (point_in_convex_polygon(cell_center({r, c}), poly)) out.push_back({r, c});
    }
  }
  return out;
}

CellBounds cell_bounds(const std::vector<Cell>& cells) {
  CellBounds b;
  if (cells.empty()) return b;
  b.min_row = b.max_row = cells[0].row;
  b.min_col = b.max_col = cells[0].col;
  for (const Cell& c : cells) {
    b.min_row = std::min(b.min_row, c.row);
    b.max_row = std::max(b.max_row, c.row);
    b.min_col = std::min(b.min_col, c.col);
    b.max_col = std::max(b.max_col, c.col);
  }
  return b;
}

}  // namespace roomgraph
