#include "hseg/descent.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <string>

namespace hseg {
namespace {

constexpr RegionId kNone = std::numeric_limits<RegionId>::max();

// Groups 4-connected orphan pixels into new regions numbered from
// means.size(). A pixel joins a group only while it lies within `tolerance`
// of the group's running mean, probing as the top-level grower does.
// Returns the number of regions created.
std::size_t seed_orphans(const Mask& orphans, const GrayImage& img, LabelMap& labels,
                         std::vector<double>& means, double tolerance) {
  const int w = img.width();
  const int h = img.height();
  Mask taken(w, h, 0);
  std::deque<std::pair<int, int>> queue;
  std::size_t created = 0;
  for (int sr = 0; sr < h; ++sr) {
    for (int sc = 0; sc < w; ++sc) {
      if (!orphans.at(sr, sc) || taken.at(sr, sc)) continue;
      const auto id = static_cast<RegionId>(means.size());
      double sum = img.at(sr, sc);
      std::size_t count = 1;
      taken.at(sr, sc) = 1;
      labels.at(sr, sc) = id;
      queue.emplace_back(sr, sc);
      while (!queue.empty()) {
        const auto [r, c] = queue.front();
        queue.pop_front();
        for_each_neighbor(w, h, r, c, Connectivity::Four, [&](int nr, int nc) {
          if (!orphans.at(nr, nc) || taken.at(nr, nc)) return;
          const double v = img.at(nr, nc);
          if (std::abs(v - sum / static_cast<double>(count)) > tolerance) return;
          taken.at(nr, nc) = 1;
          labels.at(nr, nc) = id;
          sum += v;
          ++count;
          queue.emplace_back(nr, nc);
        });
      }
      means.push_back(sum / static_cast<double>(count));
      ++created;
    }
  }
  return created;
}

struct Sweep {
  LabelMap snapshot;
  Mask uncertain;
  RegionId first_new = 0;
  std::size_t created = 0;
  bool changed = false;
};

// One refinement pass over `labels`; means are exact again on return.
Sweep sweep(const GrayImage& img, LabelMap& labels, std::vector<double>& means,
            const DescentParams& params, double orphan_tolerance) {
  const int w = img.width();
  const int h = img.height();
  GrayImage mean_grid(w, h);
  for (std::size_t i = 0; i < labels.area(); ++i) mean_grid[i] = means[labels[i]];
  Sweep out{labels, find_uncertain(img, mean_grid, params.epsilon)};

  Mask orphans(w, h, 0);
  bool any_orphan = false;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (!out.uncertain.at(r, c)) continue;
      const double v = img.at(r, c);
      RegionId best = kNone;
      double best_dist = std::numeric_limits<double>::infinity();
      for_each_neighbor(w, h, r, c, params.connectivity, [&](int nr, int nc) {
        const RegionId id = out.snapshot.at(nr, nc);
        const double d = std::abs(v - means[id]);
        if (d > params.epsilon) return;
        if (d < best_dist || (d == best_dist && id < best)) {
          best = id;
          best_dist = d;
        }
      });
      if (best == kNone) {
        orphans.at(r, c) = 1;
        any_orphan = true;
      } else if (labels.at(r, c) != best) {
        labels.at(r, c) = best;
        out.changed = true;
      }
    }
  }
  out.first_new = static_cast<RegionId>(means.size());
  if (any_orphan) out.created = seed_orphans(orphans, img, labels, means, orphan_tolerance);
  means = region_means(labels, img, means.size());
  return out;
}

}  // namespace

void DescentParams::validate() const {
  if (!(epsilon >= 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be non-negative");
  if (max_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_iters must be at least 1");
  if (connectivity != Connectivity::Four && connectivity != Connectivity::Eight) {
    throw Error(ErrorCode::InvalidArgument, "connectivity must be 4 or 8");
  }
}

ExpandedMaps expand_maps(const LabelMap& labels, std::span<const double> means,
                         int target_width, int target_height) {
  if (target_width < 1 || target_height < 1 || (target_width + 1) / 2 != labels.width() ||
      (target_height + 1) / 2 != labels.height()) {
    throw Error(ErrorCode::InvalidArgument,
                "expand_maps: target " + std::to_string(target_width) + "x" +
                    std::to_string(target_height) + " does not halve to " +
                    std::to_string(labels.width()) + "x" + std::to_string(labels.height()));
  }
  ExpandedMaps out{LabelMap(target_width, target_height),
                   GrayImage(target_width, target_height)};
  for (int r = 0; r < target_height; ++r) {
    for (int c = 0; c < target_width; ++c) {
      const RegionId id = labels.at(r / 2, c / 2);
      if (id >= means.size()) {
        throw Error(ErrorCode::InvalidArgument, "expand_maps: label without a mean");
      }
      out.labels.at(r, c) = id;
      out.mean_grid.at(r, c) = means[id];
    }
  }
  return out;
}

Mask find_uncertain(const GrayImage& img, const GrayImage& mean_grid, double epsilon) {
  if (!img.same_shape(mean_grid)) {
    throw Error(ErrorCode::InvalidArgument, "find_uncertain: image and mean grid dims differ");
  }
  Mask mask(img.width(), img.height(), 0);
  for (std::size_t i = 0; i < img.area(); ++i) {
    mask[i] = std::abs(img[i] - mean_grid[i]) > epsilon ? 1 : 0;
  }
  return mask;
}

LevelResult refine_level(const GrayImage& img, LabelMap labels, std::vector<double> means,
                         const DescentParams& params, int level,
                         const RefineObserver& observer) {
  params.validate();
  if (!labels.same_shape(img)) {
    throw Error(ErrorCode::InvalidArgument, "refine_level: label map and image dims differ");
  }
  if (region_count(labels) > means.size()) {
    throw Error(ErrorCode::InvalidArgument, "refine_level: label without a mean");
  }
  const std::size_t inherited = means.size();

  LevelResult result;
  result.level = level;

  bool settled = false;
  for (int pass = 1; pass <= params.max_iters; ++pass) {
    const Sweep sw = sweep(img, labels, means, params, std::numeric_limits<double>::infinity());
    if (pass == 1) {
      for (auto flag : sw.uncertain.cells()) result.uncertain_count += flag;
    }
    if (observer) observer(PassTrace{pass, sw.snapshot, labels, sw.uncertain, sw.first_new, sw.created});
    if (!sw.changed && sw.created == 0) {
      settled = true;
      break;
    }
    ++result.iterations_used;
  }
  // Out of passes with pixels still moving: one more sweep in which orphans
  // group only with orphans of similar intensity, so a seed straddling two
  // plateaus does not survive into the final map.
  if (!settled) sweep(img, labels, means, params, params.epsilon);

  // Finalize: empty ids vanish, disconnected ids split, then consolidation.
  LabelMap final_labels = consolidate(labels, img, params.epsilon, level > 0);
  const std::size_t n = region_count(final_labels);
  // A final region emerged here when most of its pixels were seeded as orphans.
  std::vector<std::size_t> seeded(n, 0);
  std::vector<std::size_t> total(n, 0);
  for (std::size_t i = 0; i < final_labels.area(); ++i) {
    ++total[final_labels[i]];
    if (labels[i] >= inherited) ++seeded[final_labels[i]];
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (2 * seeded[k] > total[k]) result.emerged_ids.push_back(static_cast<RegionId>(k));
  }
  result.means = region_means(final_labels, img, n);
  result.labels = std::move(final_labels);
  return result;
}

std::vector<LevelResult> descend(const Pyramid& pyramid, const TopSegmentation& top,
                                 const DescentParams& params) {
  params.validate();
  if (!top.labels.same_shape(pyramid.top())) {
    throw Error(ErrorCode::InvalidArgument, "descend: top segmentation does not match the pyramid");
  }
  std::vector<LevelResult> levels;
  LevelResult head;
  head.level = pyramid.top_level();
  head.labels = top.labels;
  head.means = top.means;
  levels.push_back(std::move(head));

  for (int l = pyramid.top_level() - 1; l >= 0; --l) {
    const LevelResult& above = levels.back();
    const GrayImage& img = pyramid.level(l);
    ExpandedMaps expanded = expand_maps(above.labels, above.means, img.width(), img.height());
    levels.push_back(refine_level(img, std::move(expanded.labels), above.means, params, l));
  }
  return levels;
}

}  // namespace hseg
