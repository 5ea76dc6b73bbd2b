#include "hseg/grid.hpp"

#include <algorithm>
#include <string>

namespace hseg {

Connectivity connectivity_from_int(int value) {
  if (value == 4) return Connectivity::Four;
  if (value == 8) return Connectivity::Eight;
  throw Error(ErrorCode::InvalidArgument,
              "connectivity must be 4 or 8, got " + std::to_string(value));
}

void check_intensity_range(const GrayImage& img) {
  for (double v : img.cells()) {
    if (!(v >= 0.0 && v <= 255.0)) {
      throw Error(ErrorCode::InvalidArgument, "intensity outside [0, 255]");
    }
  }
}

std::size_t region_count(const LabelMap& labels) {
  if (labels.empty()) return 0;
  return static_cast<std::size_t>(*std::max_element(labels.cells().begin(),
                                                    labels.cells().end())) + 1;
}

std::vector<double> region_means(const LabelMap& labels, const GrayImage& img,
                                 std::size_t count) {
  if (!labels.same_shape(img)) {
    throw Error(ErrorCode::InvalidArgument, "label map and image dims differ");
  }
  std::vector<double> sums(count, 0.0);
  std::vector<std::size_t> counts(count, 0);
  // A region holding one value reports that value; summing real-valued
  // copies and dividing can be off by an ulp.
  std::vector<double> first(count, 0.0);
  std::vector<bool> uniform(count, true);
  for (std::size_t i = 0; i < labels.area(); ++i) {
    const RegionId id = labels[i];
    if (counts[id] == 0) {
      first[id] = img[i];
    } else if (img[i] != first[id]) {
      uniform[id] = false;
    }
    sums[id] += img[i];
    ++counts[id];
  }
  for (std::size_t k = 0; k < count; ++k) {
    if (counts[k] != 0) sums[k] = uniform[k] ? first[k] : sums[k] / static_cast<double>(counts[k]);
  }
  return sums;
}

}  // namespace hseg
