#pragma once

#include <span>
#include <vector>

#include "hrc/geometry.hpp"

namespace hrc {

// Piecewise-linear path consumed by arc length.
class Polyline {
 public:
  Polyline() = default;
  explicit Polyline(std::vector<Point> vertices);

  static Polyline straight(Point from, Point to) { return Polyline({from, to}); }

  double length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  Point start() const { return vertices_.front(); }
  Point end() const { return vertices_.back(); }
  bool empty() const { return vertices_.empty(); }

  // Position after travelling `arc` along the path, clamped to [0, length].
  Point at(double arc) const;

  std::span<const Point> vertices() const { return vertices_; }

 private:
  std::vector<Point> vertices_;
  std::vector<double> cumulative_;
};

}  // namespace hrc
