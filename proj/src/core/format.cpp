#include "hseg/format.hpp"

#include <charconv>
#include <cstdio>
#include <json.hpp>

#include "hseg/error.hpp"

namespace hseg {

std::string format_fixed6(double v) {
  if (v == 0.0) v = 0.0;  // no "-0.000000"
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 6);
  std::string s(buf, res.ptr);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

double quantize6(double v) {
  const std::string s = format_fixed6(v);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

const RegistryLevel* RegistryDocument::find_level(int level) const {
  for (const auto& l : levels) {
    if (l.level == level) return &l;
  }
  return nullptr;
}

namespace {

nlohmann::json parse_json(std::string_view text, const char* what) {
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.byte, std::string(what) + ": " + e.what());
  }
}

}  // namespace

RegistryDocument parse_registry(std::string_view json) {
  const auto doc = parse_json(json, "registry.json");
  try {
    RegistryDocument out;
    out.width = doc.at("image").at("width").get<int>();
    out.height = doc.at("image").at("height").get<int>();
    for (const auto& lvl : doc.at("levels")) {
      RegistryLevel level;
      level.level = lvl.at("level").get<int>();
      level.width = lvl.at("width").get<int>();
      level.height = lvl.at("height").get<int>();
      for (const auto& reg : lvl.at("regions")) {
        level.regions.push_back({reg.at("id").get<RegionId>(),
                                 reg.at("pixel_count").get<std::size_t>(),
                                 reg.at("mean").get<double>()});
      }
      out.levels.push_back(std::move(level));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("registry.json: ") + e.what());
  }
}

std::vector<StatsRow> parse_stats(std::string_view json) {
  const auto doc = parse_json(json, "stats.json");
  try {
    std::vector<StatsRow> rows;
    for (const auto& item : doc) {
      rows.push_back({item.at("level").get<int>(), item.at("region_count").get<std::size_t>(),
                      item.at("rmse_vs_level_image").get<double>(),
                      item.at("uncertain_fraction").get<double>(),
                      item.at("iterations_used").get<int>()});
    }
    return rows;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("stats.json: ") + e.what());
  }
}

std::string format_stats_table(const RegistryDocument& registry,
                               const std::vector<StatsRow>& stats) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%5s  %11s  %8s  %10s  %5s  %12s\n", "level", "dims",
                "regions", "uncertain", "iters", "rmse");
  out += line;
  for (const auto& row : stats) {
    const RegistryLevel* lvl = registry.find_level(row.level);
    if (lvl == nullptr) {
      throw Error(ErrorCode::Consistency,
                  "stats.json level " + std::to_string(row.level) + " missing from registry.json");
    }
    const std::string dims = std::to_string(lvl->width) + "x" + std::to_string(lvl->height);
    std::snprintf(line, sizeof line, "%5d  %11s  %8zu  %10s  %5d  %12s\n", row.level,
                  dims.c_str(), row.region_count, format_fixed6(row.uncertain_fraction).c_str(),
                  row.iterations_used, format_fixed6(row.rmse).c_str());
    out += line;
  }
  return out;
}

}  // namespace hseg
