#pragma once

#include <cstddef>
#include <vector>

#include "hseg/grid.hpp"

namespace hseg {

inline constexpr std::size_t kDefaultTopArea = 256;

/// One 4-children-to-1-parent averaging step. Output is ceil(W/2) x ceil(H/2);
/// edge parents average only the children that exist (2 on an odd edge, 1 at
/// an odd corner). Children are summed NW, NE, SW, SE.
GrayImage shrink_once(const GrayImage& img);

struct Pyramid {
  /// levels[0] is the input; levels.back() is the smallest image.
  std::vector<GrayImage> levels;
  std::size_t top_area_max = kDefaultTopArea;

  int top_level() const noexcept { return static_cast<int>(levels.size()) - 1; }
  const GrayImage& level(int index) const { return levels.at(index); }
  const GrayImage& top() const { return levels.back(); }
};

/// Shrinks until the area is <= top_area_max. An input already that small
/// yields a single-level pyramid.
Pyramid build_pyramid(GrayImage img, std::size_t top_area_max = kDefaultTopArea);

}  // namespace hseg
