#include "hrc/path.hpp"

#include <algorithm>

#include "hrc/error.hpp"

namespace hrc {

Polyline::Polyline(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw Error(ErrorKind::InvalidInput, "polyline needs a vertex");
  cumulative_.reserve(vertices_.size());
  cumulative_.push_back(0.0);
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    cumulative_.push_back(cumulative_.back() + distance(vertices_[i - 1], vertices_[i]));
  }
}

Point Polyline::at(double arc) const {
  if (arc <= 0.0) return vertices_.front();
  if (arc >= length()) return vertices_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), arc);
  const auto i = static_cast<std::size_t>(it - cumulative_.begin());
  const double seg = cumulative_[i] - cumulative_[i - 1];
  const double f = seg > 0.0 ? (arc - cumulative_[i - 1]) / seg : 0.0;
  const Point a = vertices_[i - 1];
  const Point b = vertices_[i];
  return {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
}

}  // namespace hrc
