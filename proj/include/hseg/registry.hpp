#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hseg/descent.hpp"
#include "hseg/grid.hpp"
#include "hseg/pyramid.hpp"

namespace hseg {

struct SegmentationParams {
  std::size_t top_area = kDefaultTopArea;
  double tolerance = kDefaultTolerance;
  DescentParams descent;

  void validate() const;
};

enum class RelationKind {
  Contains,   // this region encloses `other`
  SubPartOf,  // this region is enclosed by `other`
  LeftOf,     // adjacent, centroid column more than 0.5 px left of `other`
  Above,      // adjacent, centroid row more than 0.5 px above `other`
};

const char* relation_name(RelationKind kind);

struct Relation {
  RelationKind kind;
  RegionId other;

  friend bool operator==(const Relation&, const Relation&) = default;
};

/// Inclusive pixel bounds.
struct BoundingBox {
  int row0 = 0;
  int col0 = 0;
  int row1 = 0;
  int col1 = 0;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// One entry of the object list.
struct RegionRecord {
  RegionId id = 0;
  int level = 0;
  std::size_t pixel_count = 0;
  double centroid_row = 0.0;
  double centroid_col = 0.0;
  double mean = 0.0;
  BoundingBox bbox;
  std::optional<RegionId> parent;
  bool emerged = false;
  std::vector<RegionId> adjacent;
  std::vector<Relation> relations;
};

struct LevelEntry {
  int level = 0;
  LabelMap labels;
  std::vector<RegionRecord> regions;
  std::size_t uncertain_count = 0;
  int iterations_used = 0;
};

struct SegmentationResult {
  SegmentationParams params;
  int width = 0;
  int height = 0;
  /// Ordered top level first, base level (0) last.
  std::vector<LevelEntry> levels;

  const LevelEntry* find_level(int level) const;
};

/// One record per id, sorted by id. Centroid and count sums are integers;
/// intensity sums are exact (see region_means).
std::vector<RegionRecord> register_level(const LabelMap& labels, const GrayImage& img,
                                         int level);

/// parent = the level+1 id owning most of the region's pixels under
/// (r, c) -> (r/2, c/2); ties go to the lower id.
void link_parents(std::vector<RegionRecord>& records, const LabelMap& labels,
                  const LabelMap& parent_labels);

/// Fills adjacency (shared 4-connected border) and the contains / sub-part-of
/// / left-of / above relations.
///
/// B is a sub-part of A when B does not touch the image border and every
/// 4-neighbor of B outside B belongs to A.
void compute_relations(std::vector<RegionRecord>& records, const LabelMap& labels);

/// Registers every level of a descent and links lineage top-down.
SegmentationResult build_result(const Pyramid& pyramid,
                                const std::vector<LevelResult>& levels,
                                const SegmentationParams& params);

/// Full pipeline: top segmentation, descent, registration.
SegmentationResult segment(const Pyramid& pyramid, const SegmentationParams& params);

/// Canonical registry.json. Keys in fixed order, levels top to base, regions
/// by id, reals with 6 decimals.
std::string export_registry(const SegmentationResult& result);

}  // namespace hseg
