#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "hseg/grid.hpp"
#include "hseg/pyramid.hpp"
#include "hseg/top_segmenter.hpp"

namespace hseg {

inline constexpr double kDefaultEpsilon = 12.0;
inline constexpr int kDefaultMaxIters = 10;

struct DescentParams {
  double epsilon = kDefaultEpsilon;
  int max_iters = kDefaultMaxIters;
  /// Neighborhood searched for a reassignment candidate. Orphan grouping and
  /// the final connectivity split always use 4-connectivity.
  Connectivity connectivity = Connectivity::Four;

  void validate() const;
};

struct LevelResult {
  int level = 0;
  LabelMap labels;
  std::vector<double> means;
  /// Pixels flagged uncertain in the first refinement pass.
  std::size_t uncertain_count = 0;
  /// Passes that changed a label or seeded a region.
  int iterations_used = 0;
  /// Final ids whose pixels were seeded as orphans at this level, ascending.
  std::vector<RegionId> emerged_ids;
};

/// Per-pass view handed to a RefineObserver. `before` is the frozen snapshot
/// the pass read; `after` is the map after reassignment and orphan seeding.
/// Ids >= first_new_id were created by this pass.
struct PassTrace {
  int pass = 0;
  const LabelMap& before;
  const LabelMap& after;
  const Mask& uncertain;
  RegionId first_new_id = 0;
  std::size_t new_regions = 0;
};

using RefineObserver = std::function<void(const PassTrace&)>;

struct ExpandedMaps {
  LabelMap labels;
  GrayImage mean_grid;
};

/// Pixel replication: child (r, c) inherits parent (r/2, c/2). The target must
/// ceil-halve to the input dimensions.
ExpandedMaps expand_maps(const LabelMap& labels, std::span<const double> means,
                         int target_width, int target_height);

/// mask(p) = |img(p) - mean_grid(p)| > epsilon.
Mask find_uncertain(const GrayImage& img, const GrayImage& mean_grid, double epsilon);

/// The refinement cycle for one level. `labels`/`means` are the expanded
/// parent maps; `img` is this level's pyramid image.
///
/// Each pass flags uncertain pixels, then (in raster order, reading a frozen
/// snapshot of the pass-start labels) moves each one to the neighboring region
/// with the nearest mean, if that mean is within epsilon; ties go to the lower
/// id. Pixels with no such neighbor are orphans, and each 4-connected orphan
/// component becomes one new region. Means are recomputed exactly after every
/// pass. The loop stops after max_iters passes or a pass that changes
/// nothing. If the passes run out first, one extra sweep runs in which an
/// orphan joins a group only within epsilon of the group's running mean.
/// Finalization drops empty ids, splits disconnected ids, runs consolidate
/// (mixture absorption only above level 0) and recomputes means.
LevelResult refine_level(const GrayImage& img, LabelMap labels,
                         std::vector<double> means, const DescentParams& params,
                         int level = 0, const RefineObserver& observer = {});

/// Post-refinement cleanup. Adjacent regions whose means differ by at most
/// epsilon are merged, closest pair first. With `absorb_mixtures`, thin
/// regions (no pixel with all four neighbors inside) whose mean lies strictly
/// between their neighbors' means are treated as boundary mixtures: folded
/// whole into the neighbor with the nearest mean, or pixel by pixel when no
/// neighbor can take the whole region without its mean drifting more than
/// 0.75 * epsilon from the mean of its own pixels. Repeats until stable.
/// Output ids are dense, connected and numbered in raster order.
LabelMap consolidate(const LabelMap& labels, const GrayImage& img, double epsilon,
                     bool absorb_mixtures);

/// Runs expand + refine from the level below the top down to level 0. The
/// returned list is ordered top to base and starts with the top segmentation.
std::vector<LevelResult> descend(const Pyramid& pyramid, const TopSegmentation& top,
                                 const DescentParams& params);

}  // namespace hseg
