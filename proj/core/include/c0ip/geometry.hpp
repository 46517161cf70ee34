#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace c0ip {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

// Twice the signed area of triangle (a, b, c); positive when the vertices are
// in counter-clockwise order.
inline double orient2d(Point2 a, Point2 b, Point2 c) {
  return cross(b - a, c - a);
}

inline double triangle_area(Point2 a, Point2 b, Point2 c) {
  return 0.5 * orient2d(a, b, c);
}

// Incircle determinant: positive when p lies strictly inside the circumcircle
// of the counter-clockwise triangle (a, b, c).
inline double incircle(Point2 a, Point2 b, Point2 c, Point2 p) {
  const double ax = a.x - p.x, ay = a.y - p.y;
  const double bx = b.x - p.x, by = b.y - p.y;
  const double cx = c.x - p.x, cy = c.y - p.y;
  const double a2 = ax * ax + ay * ay;
  const double b2 = bx * bx + by * by;
  const double c2 = cx * cx + cy * cy;
  return ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) +
         a2 * (bx * cy - by * cx);
}

// Distance from p to the closed segment [a, b].
inline double distance_to_segment(Point2 p, Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return distance(p, a);
  double t = dot(p - a, d) / len2;
  t = std::min(1.0, std::max(0.0, t));
  return distance(p, a + t * d);
}

// A closed polygonal chain (last vertex connects back to the first).
using Polygon = std::vector<Point2>;

// Distance from p to the boundary of the polygon (not a signed distance).
inline double distance_to_polygon_boundary(Point2 p, const Polygon& poly) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2 a = poly[i];
    const Point2 b = poly[(i + 1) % poly.size()];
    d = std::min(d, distance_to_segment(p, a, b));
  }
  return d;
}

inline Polygon unit_square_polygon() {
  return {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
}

// L-shaped domain (-1,1)^2 minus the closed quadrant [0,1]x[-1,0], walked
// counter-clockwise starting at the reentrant corner.
inline Polygon lshape_polygon() {
  return {{0.0, 0.0}, {1.0, 0.0},  {1.0, 1.0},  {-1.0, 1.0},
          {-1.0, -1.0}, {0.0, -1.0}};
}

} // namespace c0ip
