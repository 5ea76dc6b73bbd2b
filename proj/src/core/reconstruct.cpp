#include "hseg/reconstruct.hpp"

#include <cmath>
#include <string>

namespace hseg {

GrayImage reconstruct_level(const LabelMap& labels, std::span<const RegionRecord> records) {
  std::vector<double> mean_of(records.size());
  std::vector<bool> present(records.size(), false);
  for (const auto& rec : records) {
    if (rec.id >= records.size()) {
      throw Error(ErrorCode::Consistency, "record id " + std::to_string(rec.id) + " out of range");
    }
    mean_of[rec.id] = rec.mean;
    present[rec.id] = true;
  }
  GrayImage out(labels.width(), labels.height());
  for (std::size_t i = 0; i < labels.area(); ++i) {
    const RegionId id = labels[i];
    if (id >= present.size() || !present[id]) {
      throw Error(ErrorCode::Consistency, "no record for region id " + std::to_string(id));
    }
    out[i] = mean_of[id];
  }
  return out;
}

GrayImage reconstruct_from_registry(const RegistryDocument& registry, const LabelMap& labels,
                                    int level) {
  const RegistryLevel* lvl = registry.find_level(level);
  if (lvl == nullptr) {
    throw Error(ErrorCode::InvalidArgument,
                "level " + std::to_string(level) + " not present in registry");
  }
  if (!labels.same_shape(lvl->width, lvl->height)) {
    throw Error(ErrorCode::Consistency, "label image dims differ from registry level dims");
  }
  std::vector<RegionRecord> records;
  records.reserve(lvl->regions.size());
  for (const auto& reg : lvl->regions) {
    RegionRecord rec;
    rec.id = reg.id;
    rec.level = level;
    rec.pixel_count = reg.pixel_count;
    rec.mean = reg.mean;
    records.push_back(rec);
  }
  // Pixel counts must agree too, so a relabeled or truncated map is caught.
  std::vector<std::size_t> counts(records.size(), 0);
  for (RegionId id : labels.cells()) {
    if (id < counts.size()) ++counts[id];
  }
  GrayImage out = reconstruct_level(labels, records);
  for (const auto& rec : records) {
    if (counts[rec.id] != rec.pixel_count) {
      throw Error(ErrorCode::Consistency, "pixel count mismatch for region id " +
                                              std::to_string(rec.id));
    }
  }
  return out;
}

Bytes render_level_means(const LabelMap& labels, std::span<const RegionRecord> records) {
  std::vector<RegionRecord> quantized(records.begin(), records.end());
  for (auto& rec : quantized) rec.mean = quantize6(rec.mean);
  return save_pgm(reconstruct_level(labels, quantized));
}

double rmse(const GrayImage& a, const GrayImage& b) {
  if (!a.same_shape(b)) throw Error(ErrorCode::InvalidArgument, "rmse: image dims differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.area(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(a.area()));
}

std::vector<LevelReport> level_report(const SegmentationResult& result, const Pyramid& pyramid) {
  std::vector<LevelReport> reports;
  for (const auto& lvl : result.levels) {
    const GrayImage& img = pyramid.level(lvl.level);
    LevelReport rep;
    rep.level = lvl.level;
    rep.region_count = lvl.regions.size();
    rep.rmse_vs_level_image = rmse(reconstruct_level(lvl.labels, lvl.regions), img);
    rep.uncertain_fraction =
        static_cast<double>(lvl.uncertain_count) / static_cast<double>(img.area());
    rep.iterations_used = lvl.iterations_used;
    reports.push_back(rep);
  }
  return reports;
}

std::string export_stats(std::span<const LevelReport> reports) {
  std::string out = "[";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    out += i == 0 ? "\n" : ",\n";
    out += "  {\"level\": " + std::to_string(r.level) +
           ", \"region_count\": " + std::to_string(r.region_count) +
           ", \"rmse_vs_level_image\": " + format_fixed6(r.rmse_vs_level_image) +
           ", \"uncertain_fraction\": " + format_fixed6(r.uncertain_fraction) +
           ", \"iterations_used\": " + std::to_string(r.iterations_used) + "}";
  }
  out += reports.empty() ? "]\n" : "\n]\n";
  return out;
}

}  // namespace hseg
