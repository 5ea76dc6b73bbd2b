#include "hseg/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <map>
#include <random>
#include <string>

#include "hseg/top_segmenter.hpp"

namespace hseg {
namespace {

constexpr std::size_t kMaxSceneArea = std::size_t{1} << 28;

bool is_gray_level(double v) { return v >= 0.0 && v <= 255.0 && std::floor(v) == v; }

// Uniform draw in [lo, hi]; plain modulo keeps results identical on every
// standard library (mt19937_64 output itself is fully specified).
int draw(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Intensities spaced ceil(min_gap) apart, anchored at the background.
std::vector<double> intensity_ladder(const SceneSpec& spec) {
  const double step = std::ceil(spec.min_gap);
  std::vector<double> ladder;
  double start = spec.background;
  while (start - step >= 0.0) start -= step;
  for (double v = start; v <= 255.0; v += step) ladder.push_back(v);
  return ladder;
}

std::vector<SceneRect> random_rectangles(const SceneSpec& spec) {
  std::vector<double> choices;
  for (double v : intensity_ladder(spec)) {
    if (v == spec.background) continue;
    const bool compatible = std::all_of(spec.rectangles.begin(), spec.rectangles.end(),
                                        [&](const SceneRect& r) {
                                          return r.intensity == v ||
                                                 std::abs(r.intensity - v) >= spec.min_gap;
                                        });
    if (compatible) choices.push_back(v);
  }
  if (choices.empty()) {
    throw Error(ErrorCode::InvalidArgument, "scene spec: no intensity satisfies min_gap");
  }
  std::mt19937_64 rng(spec.seed);
  const int lo_w = std::min(spec.width, std::max(4, spec.width / 10));
  const int hi_w = std::max(lo_w, spec.width / 2);
  const int lo_h = std::min(spec.height, std::max(4, spec.height / 10));
  const int hi_h = std::max(lo_h, spec.height / 2);
  std::vector<SceneRect> rects;
  for (int i = 0; i < spec.random_rectangles; ++i) {
    const int rw = draw(rng, lo_w, hi_w);
    const int rh = draw(rng, lo_h, hi_h);
    const int r0 = draw(rng, 0, spec.height - rh);
    const int c0 = draw(rng, 0, spec.width - rw);
    const double v = choices[static_cast<std::size_t>(draw(rng, 0, static_cast<int>(choices.size()) - 1))];
    rects.push_back({{r0, c0, r0 + rh - 1, c0 + rw - 1}, v});
  }
  return rects;
}

}  // namespace

void SceneSpec::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::InvalidArgument, "scene spec: " + what);
  };
  if (width < 1 || height < 1) fail("width and height must be positive");
  if (static_cast<std::size_t>(width) * static_cast<std::size_t>(height) > kMaxSceneArea) {
    fail("scene too large");
  }
  if (!is_gray_level(background)) fail("background must be an integer in [0, 255]");
  if (!(min_gap >= 0.0) || min_gap > 255.0) fail("min_gap must lie in [0, 255]");
  if (random_rectangles < 0) fail("random_rectangles must be non-negative");
  if (random_rectangles > 0 && min_gap < 1.0) fail("random rectangles need min_gap >= 1");
  std::vector<double> levels{background};
  for (const auto& r : rectangles) {
    if (!is_gray_level(r.intensity)) fail("rectangle intensity must be an integer in [0, 255]");
    const auto& b = r.box;
    if (b.row0 > b.row1 || b.col0 > b.col1) fail("rectangle bbox is inverted");
    if (b.row1 < 0 || b.col1 < 0 || b.row0 >= height || b.col0 >= width) {
      fail("rectangle lies outside the image");
    }
    levels.push_back(r.intensity);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] - levels[i - 1] < min_gap) fail("intensities closer than min_gap");
  }
}

SceneSpec random_scene_spec(std::uint64_t seed, int width, int height, int rectangle_count,
                            double min_gap) {
  std::mt19937_64 rng(seed ^ 0x5CE4E5EEDull);
  SceneSpec spec;
  spec.width = width;
  spec.height = height;
  spec.background = static_cast<double>(draw(rng, 0, 255));
  spec.seed = seed;
  spec.min_gap = min_gap;
  spec.random_rectangles = rectangle_count;
  spec.validate();
  return spec;
}

SceneSpec parse_scene_spec(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json.begin(), json.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.byte, std::string("scene spec: ") + e.what());
  }
  SceneSpec spec;
  try {
    spec.width = doc.at("width").get<int>();
    spec.height = doc.at("height").get<int>();
    spec.background = doc.value("background", 0.0);
    spec.seed = doc.value("seed", std::uint64_t{0});
    spec.min_gap = doc.value("min_gap", 0.0);
    spec.random_rectangles = doc.value("random_rectangles", 0);
    if (doc.contains("rectangles")) {
      for (const auto& r : doc.at("rectangles")) {
        const auto& b = r.at("bbox");
        if (b.size() != 4) throw Error(ErrorCode::InvalidArgument, "scene spec: bbox needs 4 values");
        spec.rectangles.push_back({{b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()},
                                   r.at("intensity").get<double>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("scene spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

Scene generate_scene(const SceneSpec& spec) {
  spec.validate();
  std::vector<SceneRect> rects = spec.rectangles;
  if (spec.random_rectangles > 0) {
    const auto extra = random_rectangles(spec);
    rects.insert(rects.end(), extra.begin(), extra.end());
  }
  GrayImage img(spec.width, spec.height, spec.background);
  for (const auto& rect : rects) {
    const int r0 = std::max(0, rect.box.row0);
    const int c0 = std::max(0, rect.box.col0);
    const int r1 = std::min(spec.height - 1, rect.box.row1);
    const int c1 = std::min(spec.width - 1, rect.box.col1);
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) img.at(r, c) = rect.intensity;
    }
  }
  LabelMap by_intensity(spec.width, spec.height);
  for (std::size_t i = 0; i < img.area(); ++i) by_intensity[i] = static_cast<RegionId>(img[i]);
  return {std::move(img), relabel_connected(by_intensity, Connectivity::Four)};
}

LabelingComparison compare_labelings(const LabelMap& pred, const LabelMap& truth) {
  if (!pred.same_shape(truth)) {
    throw Error(ErrorCode::InvalidArgument, "compare_labelings: dims differ");
  }
  std::map<RegionId, RegionId> forward;
  std::map<RegionId, RegionId> backward;
  bool exact = true;
  std::map<RegionId, std::map<RegionId, std::size_t>> overlap;
  for (std::size_t i = 0; i < pred.area(); ++i) {
    const RegionId p = pred[i];
    const RegionId t = truth[i];
    ++overlap[p][t];
    if (!exact) continue;
    const auto [f, f_new] = forward.emplace(p, t);
    const auto [b, b_new] = backward.emplace(t, p);
    if (f->second != t || b->second != p) exact = false;
  }
  std::size_t matched = 0;
  for (const auto& [p, row] : overlap) {
    std::size_t best = 0;
    for (const auto& [t, count] : row) best = std::max(best, count);
    matched += best;
  }
  LabelingComparison out;
  out.exact_up_to_renaming = exact;
  out.pixel_error = 1.0 - static_cast<double>(matched) / static_cast<double>(pred.area());
  if (exact) out.pixel_error = 0.0;
  return out;
}

}  // namespace hseg
