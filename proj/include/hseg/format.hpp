#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "hseg/image_io.hpp"

namespace hseg {

/// Fixed-point text with six decimals, locale independent.
std::string format_fixed6(double v);

/// The double that format_fixed6(v) parses back to.
double quantize6(double v);

/// The subset of registry.json needed to execute the descriptions.
struct RegistryRegion {
  RegionId id = 0;
  std::size_t pixel_count = 0;
  double mean = 0.0;
};

struct RegistryLevel {
  int level = 0;
  int width = 0;
  int height = 0;
  std::vector<RegistryRegion> regions;
};

struct RegistryDocument {
  int width = 0;
  int height = 0;
  std::vector<RegistryLevel> levels;

  const RegistryLevel* find_level(int level) const;
};

/// Throws ParseError on malformed JSON or missing fields.
RegistryDocument parse_registry(std::string_view json);

struct StatsRow {
  int level = 0;
  std::size_t region_count = 0;
  double rmse = 0.0;
  double uncertain_fraction = 0.0;
  int iterations_used = 0;
};

std::vector<StatsRow> parse_stats(std::string_view json);

/// Fixed-width table: level, dims, regions, uncertain fraction, iterations,
/// rmse. Dims come from the registry.
std::string format_stats_table(const RegistryDocument& registry,
                               const std::vector<StatsRow>& stats);

}  // namespace hseg
