#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace mazebench {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::sqrt(x * x + y * y); }
  bool operator==(const Vec2&) const = default;
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

// Axis-aligned pixel rectangle, origin at top-left.
struct RectI {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool contains(Vec2 p) const {
    return p.x >= x && p.x < x + w && p.y >= y && p.y < y + h;
  }
  Vec2 center() const { return {x + w / 2.0, y + h / 2.0}; }
  bool overlaps(const RectI& o) const {
    return x < o.x + o.w && o.x < x + w && y < o.y + o.h && o.y < y + h;
  }
  bool operator==(const RectI&) const = default;
};

// Integer lattice coordinate; z is 0 for planar scenes. For graph scenes x
// carries the node index.
struct PathPoint {
  int x = 0;
  int y = 0;
  int z = 0;
  bool operator==(const PathPoint&) const = default;
  auto operator<=>(const PathPoint&) const = default;
};

// Arc length of a polyline.
double polyline_length(const std::vector<Vec2>& pts);

// Distance from point p to the quadratic Bezier (a, ctrl, b), by sampling.
double bezier_point_distance(Vec2 a, Vec2 ctrl, Vec2 b, Vec2 p, int samples = 64);

// Flatten a quadratic Bezier into a polyline with `segments` pieces.
std::vector<Vec2> bezier_polyline(Vec2 a, Vec2 ctrl, Vec2 b, int segments = 24);

}  // namespace mazebench
