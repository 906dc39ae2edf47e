#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "densedisc/polymap.hpp"

namespace densedisc {

// Rectangle [re_lo, re_hi] x [im_lo, im_hi] in one complex coordinate.
struct CoordBox {
  double re_lo = -1, re_hi = 1, im_lo = -1, im_hi = 1;
};

// Deterministic dense sequence in a box of C^m: the box center, then for
// level l >= 1 the points of the grid of step 2^-l * (box side) that were not
// emitted before, ordered by l-infinity ring around the center and then
// lexicographically in (re_1, im_1, re_2, ...).
class DenseEnumeration {
 public:
  explicit DenseEnumeration(std::vector<CoordBox> box, int level_cap = -1);

  Point next();  // throws ConfigError once past level_cap
  std::size_t emitted() const { return emitted_; }
  int level() const { return level_; }
  const std::vector<CoordBox>& box() const { return box_; }

  // Number of points with level <= l for an m-dimensional box.
  static std::uint64_t count_through_level(std::size_t m, int l);

 private:
  void fill_level();

  std::vector<CoordBox> box_;
  int cap_;
  int level_ = -1;
  std::size_t pos_ = 0;
  std::size_t emitted_ = 0;
  std::vector<std::vector<std::uint32_t>> pending_;  // grid indices of the current level
};

// Max over a probe grid of the box (spacing <= probe_step in every real
// direction, endpoints included) of the distance to the nearest point.
double coverage_radius(std::span<const Point> points, std::span<const CoordBox> box,
                       double probe_step);

}  // namespace densedisc
