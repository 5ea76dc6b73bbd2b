#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "hseg/grid.hpp"
#include "hseg/registry.hpp"

namespace hseg {

struct SceneRect {
  BoundingBox box;  // inclusive; clipped to the image when painted
  double intensity = 0.0;
};

struct SceneSpec {
  int width = 0;
  int height = 0;
  double background = 0.0;
  std::vector<SceneRect> rectangles;
  std::uint64_t seed = 0;
  double min_gap = 0.0;
  /// Extra rectangles drawn from `seed` and appended after the explicit ones.
  int random_rectangles = 0;

  /// Throws InvalidArgument on any violated invariant.
  void validate() const;
};

/// A spec whose background and rectangles are all drawn from `seed`:
/// intensities come from a ladder spaced ceil(min_gap) apart and anchored at
/// the background, sides from [max(4, dim/10), dim/2].
SceneSpec random_scene_spec(std::uint64_t seed, int width, int height,
                            int rectangle_count, double min_gap);

/// Reads the JSON scene format (fields mirror SceneSpec; rectangles as
/// {"bbox":[r0,c0,r1,c1],"intensity":v}). Throws ParseError or InvalidArgument.
SceneSpec parse_scene_spec(std::string_view json);

struct Scene {
  GrayImage image;
  /// One id per maximal 4-connected constant-intensity component.
  LabelMap truth;
};

/// Paints background, then rectangles in order (random ones last).
Scene generate_scene(const SceneSpec& spec);

struct LabelingComparison {
  bool exact_up_to_renaming = false;
  /// Fraction of pixels misassigned when each predicted id is mapped to its
  /// most-overlapping truth id (greedy majority, ties to the lower truth id).
  double pixel_error = 0.0;
};

LabelingComparison compare_labelings(const LabelMap& pred, const LabelMap& truth);

}  // namespace hseg
