#include "hseg/pyramid.hpp"

namespace hseg {

GrayImage shrink_once(const GrayImage& img) {
  const int w = img.width();
  const int h = img.height();
  GrayImage out((w + 1) / 2, (h + 1) / 2);
  for (int r = 0; r < out.height(); ++r) {
    for (int c = 0; c < out.width(); ++c) {
      const int r0 = 2 * r;
      const int c0 = 2 * c;
      const bool has_e = c0 + 1 < w;
      const bool has_s = r0 + 1 < h;
      double sum = img.at(r0, c0);
      int n = 1;
      if (has_e) { sum += img.at(r0, c0 + 1); ++n; }
      if (has_s) { sum += img.at(r0 + 1, c0); ++n; }
      if (has_e && has_s) { sum += img.at(r0 + 1, c0 + 1); ++n; }
      out.at(r, c) = sum / n;
    }
  }
  return out;
}

Pyramid build_pyramid(GrayImage img, std::size_t top_area_max) {
  if (top_area_max < 1) {
    throw Error(ErrorCode::InvalidArgument, "top_area must be at least 1");
  }
  Pyramid pyr;
  pyr.top_area_max = top_area_max;
  pyr.levels.push_back(std::move(img));
  while (pyr.levels.back().area() > top_area_max) {
    pyr.levels.push_back(shrink_once(pyr.levels.back()));
  }
  return pyr;
}

}  // namespace hseg
