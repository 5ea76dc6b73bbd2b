#pragma once

#include <span>
#include <string>
#include <vector>

#include "hseg/format.hpp"
#include "hseg/registry.hpp"

namespace hseg {

/// Fills every pixel with its region's mean. Throws Consistency when a label
/// has no record.
GrayImage reconstruct_level(const LabelMap& labels, std::span<const RegionRecord> records);

/// Same as reconstruct_level, but from a parsed registry document. Throws
/// InvalidArgument when the level is absent and Consistency when the label
/// map disagrees with the level's records.
GrayImage reconstruct_from_registry(const RegistryDocument& registry,
                                    const LabelMap& labels, int level);

/// The PGM written for a level: means quantized exactly as registry.json
/// stores them, so reconstruction from the document is byte-identical.
Bytes render_level_means(const LabelMap& labels, std::span<const RegionRecord> records);

double rmse(const GrayImage& a, const GrayImage& b);

struct LevelReport {
  int level = 0;
  std::size_t region_count = 0;
  double rmse_vs_level_image = 0.0;
  double uncertain_fraction = 0.0;
  int iterations_used = 0;
};

/// One report per level, top to base, comparing each level's reconstruction
/// with the pyramid image it was segmented from.
std::vector<LevelReport> level_report(const SegmentationResult& result,
                                      const Pyramid& pyramid);

std::string export_stats(std::span<const LevelReport> reports);

}  // namespace hseg
