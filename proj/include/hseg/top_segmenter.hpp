#pragma once

#include <vector>

#include "hseg/grid.hpp"

namespace hseg {

inline constexpr double kDefaultTolerance = 12.0;

struct TopSegmentation {
  LabelMap labels;
  std::vector<double> means;
};

/// Seeded region growing over the top pyramid level.
///
/// The raster scan opens a region at the first unlabeled pixel and grows it
/// breadth-first (FIFO queue, neighbors probed N, W, E, S). A neighbor joins
/// when |intensity - running mean| <= tolerance, the running mean being the
/// exact sum/count of the pixels admitted so far. Ids follow seed order.
TopSegmentation segment_top(const GrayImage& img, double tolerance = kDefaultTolerance);

/// Gives every maximal connected component of a same-id pixel set its own id.
/// New ids are dense and ordered by each component's first raster pixel.
LabelMap relabel_connected(const LabelMap& labels,
                           Connectivity connectivity = Connectivity::Four);

}  // namespace hseg
