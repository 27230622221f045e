#pragma once

#include <cmath>

namespace cbfsim {

// Planar coordinates in meters (x east, y north). The scenarios are a few
// kilometers across, so Cartesian geometry is exact enough and keeps
// distance computations trivial.
struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position& a, const Position& b) {
    return a.x == b.x && a.y == b.y;
  }
};

inline double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Axis-oriented rectangle rotated by `orientation` around its center.
// containment() is the signed indicator used by the receiver pipeline:
// >= 0 means inside (points exactly on the border count as inside).
struct DestinationArea {
  Position center;
  double half_length = 0.0;  // along the rectangle's own x axis
  double half_width = 0.0;
  double orientation = 0.0;  // radians

  double containment(const Position& p) const {
    const double dx = p.x - center.x;
    const double dy = p.y - center.y;
    const double c = std::cos(orientation);
    const double s = std::sin(orientation);
    const double u = dx * c + dy * s;
    const double v = -dx * s + dy * c;
    return std::min(half_length - std::abs(u), half_width - std::abs(v));
  }

  bool contains(const Position& p) const { return containment(p) >= 0.0; }
};

}  // namespace cbfsim
