#include "hseg/registry.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>

#include "hseg/format.hpp"

namespace hseg {

void SegmentationParams::validate() const {
  if (top_area < 1) throw Error(ErrorCode::InvalidArgument, "top_area must be at least 1");
  if (!(tolerance >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be non-negative");
  descent.validate();
}

const char* relation_name(RelationKind kind) {
  switch (kind) {
    case RelationKind::Contains: return "contains";
    case RelationKind::SubPartOf: return "sub-part-of";
    case RelationKind::LeftOf: return "left-of";
    case RelationKind::Above: return "above";
  }
  return "unknown";
}

const LevelEntry* SegmentationResult::find_level(int level) const {
  for (const auto& entry : levels) {
    if (entry.level == level) return &entry;
  }
  return nullptr;
}

std::vector<RegionRecord> register_level(const LabelMap& labels, const GrayImage& img,
                                         int level) {
  if (!labels.same_shape(img)) {
    throw Error(ErrorCode::InvalidArgument, "register_level: label map and image dims differ");
  }
  const std::size_t n = region_count(labels);
  std::vector<RegionRecord> records(n);
  std::vector<std::int64_t> row_sums(n, 0);
  std::vector<std::int64_t> col_sums(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    records[k].id = static_cast<RegionId>(k);
    records[k].level = level;
    records[k].bbox = {labels.height(), labels.width(), -1, -1};
  }
  for (int r = 0; r < labels.height(); ++r) {
    for (int c = 0; c < labels.width(); ++c) {
      const RegionId id = labels.at(r, c);
      auto& rec = records[id];
      ++rec.pixel_count;
      row_sums[id] += r;
      col_sums[id] += c;
      rec.bbox.row0 = std::min(rec.bbox.row0, r);
      rec.bbox.col0 = std::min(rec.bbox.col0, c);
      rec.bbox.row1 = std::max(rec.bbox.row1, r);
      rec.bbox.col1 = std::max(rec.bbox.col1, c);
    }
  }
  const std::vector<double> means = region_means(labels, img, n);
  for (std::size_t k = 0; k < n; ++k) {
    auto& rec = records[k];
    rec.mean = means[k];
    if (rec.pixel_count == 0) {
      throw Error(ErrorCode::InvalidArgument, "register_level: label ids are not dense");
    }
    const auto count = static_cast<double>(rec.pixel_count);
    rec.centroid_row = static_cast<double>(row_sums[k]) / count;
    rec.centroid_col = static_cast<double>(col_sums[k]) / count;
  }
  return records;
}

void link_parents(std::vector<RegionRecord>& records, const LabelMap& labels,
                  const LabelMap& parent_labels) {
  if ((labels.width() + 1) / 2 != parent_labels.width() ||
      (labels.height() + 1) / 2 != parent_labels.height()) {
    throw Error(ErrorCode::InvalidArgument, "link_parents: levels are not one halving apart");
  }
  // Overlap counts per (child id, parent id); ordered so ties resolve low.
  std::vector<std::map<RegionId, std::size_t>> overlap(records.size());
  for (int r = 0; r < labels.height(); ++r) {
    for (int c = 0; c < labels.width(); ++c) {
      const RegionId id = labels.at(r, c);
      if (id >= records.size()) {
        throw Error(ErrorCode::InvalidArgument, "link_parents: label without a record");
      }
      ++overlap[id][parent_labels.at(r / 2, c / 2)];
    }
  }
  for (auto& rec : records) {
    RegionId best = 0;
    std::size_t best_count = 0;
    for (const auto& [parent, count] : overlap[rec.id]) {
      if (count > best_count) {
        best = parent;
        best_count = count;
      }
    }
    rec.parent = best_count > 0 ? std::optional<RegionId>(best) : std::nullopt;
  }
}

void compute_relations(std::vector<RegionRecord>& records, const LabelMap& labels) {
  const int w = labels.width();
  const int h = labels.height();
  std::vector<bool> touches_border(records.size(), false);
  std::vector<std::vector<RegionId>> adjacent(records.size());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const RegionId id = labels.at(r, c);
      if (r == 0 || c == 0 || r == h - 1 || c == w - 1) touches_border[id] = true;
      if (c + 1 < w && labels.at(r, c + 1) != id) {
        adjacent[id].push_back(labels.at(r, c + 1));
        adjacent[labels.at(r, c + 1)].push_back(id);
      }
      if (r + 1 < h && labels.at(r + 1, c) != id) {
        adjacent[id].push_back(labels.at(r + 1, c));
        adjacent[labels.at(r + 1, c)].push_back(id);
      }
    }
  }
  for (auto& rec : records) {
    auto& adj = adjacent[rec.id];
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    rec.adjacent = adj;
    rec.relations.clear();
  }
  for (auto& b : records) {
    if (!touches_border[b.id] && b.adjacent.size() == 1) {
      const RegionId a = b.adjacent.front();
      b.relations.push_back({RelationKind::SubPartOf, a});
      records[a].relations.push_back({RelationKind::Contains, b.id});
    }
  }
  for (auto& a : records) {
    for (RegionId other : a.adjacent) {
      const auto& b = records[other];
      if (a.centroid_col + 0.5 < b.centroid_col) a.relations.push_back({RelationKind::LeftOf, other});
      if (a.centroid_row + 0.5 < b.centroid_row) a.relations.push_back({RelationKind::Above, other});
    }
  }
  for (auto& rec : records) {
    std::sort(rec.relations.begin(), rec.relations.end(), [](const Relation& x, const Relation& y) {
      return x.kind != y.kind ? x.kind < y.kind : x.other < y.other;
    });
  }
}

SegmentationResult build_result(const Pyramid& pyramid, const std::vector<LevelResult>& levels,
                                const SegmentationParams& params) {
  SegmentationResult result;
  result.params = params;
  result.width = pyramid.level(0).width();
  result.height = pyramid.level(0).height();
  const LabelMap* above = nullptr;
  for (const auto& lr : levels) {
    LevelEntry entry;
    entry.level = lr.level;
    entry.labels = lr.labels;
    entry.uncertain_count = lr.uncertain_count;
    entry.iterations_used = lr.iterations_used;
    entry.regions = register_level(lr.labels, pyramid.level(lr.level), lr.level);
    for (RegionId id : lr.emerged_ids) entry.regions.at(id).emerged = true;
    compute_relations(entry.regions, entry.labels);
    if (above != nullptr) link_parents(entry.regions, entry.labels, *above);
    result.levels.push_back(std::move(entry));
    above = &result.levels.back().labels;
  }
  return result;
}

SegmentationResult segment(const Pyramid& pyramid, const SegmentationParams& params) {
  params.validate();
  if (pyramid.top().area() > params.top_area) {
    throw Error(ErrorCode::InvalidArgument, "segment: pyramid top exceeds top_area");
  }
  TopSegmentation top = segment_top(pyramid.top(), params.tolerance);
  top.labels = consolidate(top.labels, pyramid.top(), params.descent.epsilon,
                           pyramid.top_level() > 0);
  top.means = region_means(top.labels, pyramid.top(), region_count(top.labels));
  return build_result(pyramid, descend(pyramid, top, params.descent), params);
}

std::string export_registry(const SegmentationResult& result) {
  const auto& p = result.params;
  std::string out;
  out += "{\n";
  out += "  \"image\": {\"width\": " + std::to_string(result.width) +
         ", \"height\": " + std::to_string(result.height) + "},\n";
  out += "  \"params\": {\"top_area\": " + std::to_string(p.top_area) +
         ", \"tolerance\": " + format_fixed6(p.tolerance) +
         ", \"epsilon\": " + format_fixed6(p.descent.epsilon) +
         ", \"max_iters\": " + std::to_string(p.descent.max_iters) +
         ", \"connectivity\": " + std::to_string(static_cast<int>(p.descent.connectivity)) +
         "},\n";
  out += "  \"levels\": [";
  for (std::size_t li = 0; li < result.levels.size(); ++li) {
    const auto& lvl = result.levels[li];
    out += li == 0 ? "\n" : ",\n";
    out += "    {\"level\": " + std::to_string(lvl.level) +
           ", \"width\": " + std::to_string(lvl.labels.width()) +
           ", \"height\": " + std::to_string(lvl.labels.height()) +
           ", \"region_count\": " + std::to_string(lvl.regions.size()) + ", \"regions\": [";
    for (std::size_t ri = 0; ri < lvl.regions.size(); ++ri) {
      const auto& rec = lvl.regions[ri];
      out += ri == 0 ? "\n" : ",\n";
      out += "      {\"id\": " + std::to_string(rec.id) +
             ", \"pixel_count\": " + std::to_string(rec.pixel_count) +
             ", \"centroid\": [" + format_fixed6(rec.centroid_row) + ", " +
             format_fixed6(rec.centroid_col) + "]" +
             ", \"mean\": " + format_fixed6(rec.mean) +
             ", \"bbox\": [" + std::to_string(rec.bbox.row0) + ", " + std::to_string(rec.bbox.col0) +
             ", " + std::to_string(rec.bbox.row1) + ", " + std::to_string(rec.bbox.col1) + "]" +
             ", \"parent\": " + (rec.parent ? std::to_string(*rec.parent) : std::string("null")) +
             ", \"emerged\": " + (rec.emerged ? "true" : "false") + ", \"adjacent\": [";
      for (std::size_t k = 0; k < rec.adjacent.size(); ++k) {
        if (k != 0) out += ", ";
        out += std::to_string(rec.adjacent[k]);
      }
      out += "], \"relations\": [";
      for (std::size_t k = 0; k < rec.relations.size(); ++k) {
        if (k != 0) out += ", ";
        out += std::string("{\"kind\": \"") + relation_name(rec.relations[k].kind) +
               "\", \"other\": " + std::to_string(rec.relations[k].other) + "}";
      }
      out += "]}";
    }
    out += lvl.regions.empty() ? "]}" : "\n    ]}";
  }
  out += "\n  ]\n}\n";
  return out;
}

}  // namespace hseg
