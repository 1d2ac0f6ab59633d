#pragma once

#include <cmath>

namespace hrc {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }

inline double norm(Point p) { return std::sqrt(p.x * p.x + p.y * p.y); }

// The single distance routine used everywhere. Planner and enumeration share
// it so their makespans are bit-identical.
inline double distance(Point a, Point b) { return norm(b - a); }

inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 20.0;
  double y_max = 20.0;

  bool contains(Point p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

}  // namespace hrc
