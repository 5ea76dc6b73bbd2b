#include <doctest.h>

#include <cstdio>
#include <json.hpp>

#include "hseg/registry.hpp"
#include "hseg/synthgen.hpp"
#include "oracles.hpp"

using namespace hseg;

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  return s == "-0.000000" ? "0.000000" : s;
}

bool has(const RegionRecord& rec, RelationKind kind, RegionId other) {
  return std::find(rec.relations.begin(), rec.relations.end(), Relation{kind, other}) !=
         rec.relations.end();
}

// The library's relations in the oracle's (name, other) form.
std::vector<std::pair<std::string, RegionId>> named(const std::vector<Relation>& rels) {
  std::vector<std::pair<std::string, RegionId>> out;
  for (const auto& r : rels) out.emplace_back(relation_name(r.kind), r.other);
  return out;
}

}  // namespace

TEST_CASE("register_level on a constant image") {
  const auto recs = register_level(LabelMap(4, 4, 0u), GrayImage(4, 4, 100.0), 0);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].pixel_count == 16);
  CHECK(recs[0].centroid_row == 1.5);
  CHECK(recs[0].centroid_col == 1.5);
  CHECK(recs[0].mean == 100.0);
  CHECK(recs[0].bbox == BoundingBox{0, 0, 3, 3});
}

TEST_CASE("register_level on two halves") {
  LabelMap labels(8, 8, 0u);
  GrayImage img(8, 8, 50.0);
  for (int r = 0; r < 8; ++r) {
    for (int c = 4; c < 8; ++c) {
      labels.at(r, c) = 1;
      img.at(r, c) = 200.0;
    }
  }
  auto recs = register_level(labels, img, 2);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].centroid_row == 3.5);
  CHECK(recs[0].centroid_col == 1.5);
  CHECK(recs[1].centroid_row == 3.5);
  CHECK(recs[1].centroid_col == 5.5);
  CHECK(recs[0].level == 2);
  CHECK(recs[1].bbox == BoundingBox{0, 4, 7, 7});
  compute_relations(recs, labels);
  CHECK(recs[0].adjacent == std::vector<RegionId>{1});
  CHECK(has(recs[0], RelationKind::LeftOf, 1));
  CHECK_FALSE(has(recs[1], RelationKind::LeftOf, 0));
  CHECK_FALSE(has(recs[0], RelationKind::Above, 1));
  CHECK_FALSE(has(recs[0], RelationKind::Contains, 1));
}

TEST_CASE("register_level matches the statistics oracle") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 24);
    const int h = 1 + static_cast<int>(rng() % 24);
    const auto img = oracle::random_image(rng, w, h);
    const auto labels = oracle::components(oracle::random_labels(rng, w, h, 4));
    const auto recs = register_level(labels, img, 0);
    const auto stats = oracle::region_stats(labels, img);
    REQUIRE(recs.size() == stats.size());
    for (const auto& [id, st] : stats) {
      const auto& rec = recs[id];
      CHECK(rec.id == id);
      CHECK(rec.pixel_count == st.count);
      CHECK(rec.centroid_row == st.centroid_r());
      CHECK(rec.centroid_col == st.centroid_c());
      CHECK(std::abs(rec.mean - st.mean()) <= 1e-9);
      CHECK(rec.bbox == BoundingBox{st.r0, st.c0, st.r1, st.c1});
    }
  }
  CHECK_THROWS_AS(register_level(LabelMap(2, 1, {0u, 2u}), GrayImage(2, 1, 0.0), 0), Error);
  CHECK_THROWS_AS(register_level(LabelMap(2, 1, 0u), GrayImage(1, 2, 0.0), 0), Error);
}

TEST_CASE("link_parents picks the majority parent") {
  SUBCASE("single region inherits") {
    auto recs = register_level(LabelMap(4, 4, 0u), GrayImage(4, 4, 1.0), 0);
    link_parents(recs, LabelMap(4, 4, 0u), LabelMap(2, 2, 0u));
    CHECK(recs[0].parent == std::optional<RegionId>(0));
  }
  SUBCASE("split children go to the majority") {
    // The three parent cells cover 4, 4 and 2 child pixels.
    const LabelMap child(5, 2, 0u);
    const LabelMap parent(3, 1, {0u, 0u, 1u});
    auto recs = register_level(child, GrayImage(5, 2, 0.0), 0);
    link_parents(recs, child, parent);
    CHECK(recs[0].parent == std::optional<RegionId>(0));
    const LabelMap flipped(3, 1, {1u, 0u, 0u});
    link_parents(recs, child, flipped);
    CHECK(recs[0].parent == std::optional<RegionId>(0));
    const LabelMap mostly_one(3, 1, {0u, 1u, 1u});
    link_parents(recs, child, mostly_one);
    CHECK(recs[0].parent == std::optional<RegionId>(1));
  }
  SUBCASE("ties go to the lower parent id") {
    const LabelMap child(4, 2, 0u);
    auto recs = register_level(child, GrayImage(4, 2, 0.0), 0);
    link_parents(recs, child, LabelMap(2, 1, {1u, 0u}));
    CHECK(recs[0].parent == std::optional<RegionId>(0));
  }
  SUBCASE("random maps match a counting oracle") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
      const int w = 1 + static_cast<int>(rng() % 20);
      const int h = 1 + static_cast<int>(rng() % 20);
      const auto child = oracle::components(oracle::random_labels(rng, w, h, 3));
      const auto parent = oracle::random_labels(rng, (w + 1) / 2, (h + 1) / 2, 5);
      auto recs = register_level(child, GrayImage(w, h, 0.0), 0);
      link_parents(recs, child, parent);
      const auto want = oracle::majority_parents(child, parent);
      for (const auto& rec : recs) CHECK(rec.parent == std::optional<RegionId>(want[rec.id]));
    }
  }
  SUBCASE("levels that are not one halving apart are rejected") {
    auto recs = register_level(LabelMap(4, 4, 0u), GrayImage(4, 4, 1.0), 0);
    CHECK_THROWS_AS(link_parents(recs, LabelMap(4, 4, 0u), LabelMap(3, 2, 0u)), Error);
  }
}

TEST_CASE("relations") {
  SUBCASE("an island is contained") {
    LabelMap labels(6, 6, 0u);
    for (int r = 2; r <= 3; ++r) {
      for (int c = 2; c <= 3; ++c) labels.at(r, c) = 1;
    }
    auto recs = register_level(labels, GrayImage(6, 6, 0.0), 0);
    compute_relations(recs, labels);
    CHECK(has(recs[0], RelationKind::Contains, 1));
    CHECK(has(recs[1], RelationKind::SubPartOf, 0));
    // Concentric centroids: no spatial ordering either way.
    CHECK_FALSE(has(recs[0], RelationKind::LeftOf, 1));
    CHECK_FALSE(has(recs[1], RelationKind::Above, 0));
  }
  SUBCASE("a region touching the border is never a sub-part") {
    LabelMap labels(6, 6, 0u);
    for (int c = 2; c <= 3; ++c) labels.at(0, c) = 1;
    auto recs = register_level(labels, GrayImage(6, 6, 0.0), 0);
    compute_relations(recs, labels);
    CHECK(recs[1].relations == std::vector<Relation>{{RelationKind::Above, 0}});
    CHECK_FALSE(has(recs[0], RelationKind::Contains, 1));
  }
  SUBCASE("stacked strips") {
    LabelMap labels(5, 6, 0u);
    for (int r = 0; r < 6; ++r) {
      for (int c = 0; c < 5; ++c) labels.at(r, c) = static_cast<RegionId>(r / 2);
    }
    auto recs = register_level(labels, GrayImage(5, 6, 0.0), 0);
    compute_relations(recs, labels);
    CHECK(recs[0].relations == std::vector<Relation>{{RelationKind::Above, 1}});
    CHECK(recs[1].relations == std::vector<Relation>{{RelationKind::Above, 2}});
    CHECK(recs[2].relations.empty());
    CHECK(recs[1].adjacent == std::vector<RegionId>{0, 2});
  }
  SUBCASE("random maps match the oracle and are antisymmetric") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 200; ++trial) {
      const int w = 1 + static_cast<int>(rng() % 16);
      const int h = 1 + static_cast<int>(rng() % 16);
      const auto labels = oracle::components(oracle::random_labels(rng, w, h, 3));
      auto recs = register_level(labels, GrayImage(w, h, 0.0), 0);
      compute_relations(recs, labels);
      const auto want = oracle::relations(labels);
      for (const auto& rec : recs) {
        CHECK(rec.adjacent == want[rec.id].adjacent);
        CHECK(named(rec.relations) == want[rec.id].relations);
        for (const auto& rel : rec.relations) {
          const auto& other = recs[rel.other];
          switch (rel.kind) {
            case RelationKind::Contains: CHECK(has(other, RelationKind::SubPartOf, rec.id)); break;
            case RelationKind::SubPartOf: CHECK(has(other, RelationKind::Contains, rec.id)); break;
            case RelationKind::LeftOf: CHECK_FALSE(has(other, RelationKind::LeftOf, rec.id)); break;
            case RelationKind::Above: CHECK_FALSE(has(other, RelationKind::Above, rec.id)); break;
          }
        }
      }
    }
  }
  CHECK(std::string(relation_name(RelationKind::SubPartOf)) == "sub-part-of");
}

TEST_CASE("export_registry") {
  SUBCASE("a single-level run has a null parent") {
    const auto pyr = build_pyramid(GrayImage(4, 4, 100.0), 256);
    const auto result = segment(pyr, SegmentationParams{});
    const auto doc = nlohmann::json::parse(export_registry(result));
    REQUIRE(doc["levels"].size() == 1);
    const auto& reg = doc["levels"][0]["regions"][0];
    CHECK(reg["parent"].is_null());
    CHECK(reg["pixel_count"] == 16);
    CHECK(reg["mean"].get<double>() == 100.0);
    CHECK(reg["emerged"] == false);
  }
  SUBCASE("scene runs agree with the oracle at six decimals") {
    for (int s = 0; s < 6; ++s) {
      const auto scene = generate_scene(random_scene_spec(900 + s, 96, 80, 2 + s, 60));
      const auto pyr = build_pyramid(scene.image, 64);
      const auto result = segment(pyr, SegmentationParams{});
      const std::string text = export_registry(result);
      CHECK(export_registry(segment(pyr, SegmentationParams{})) == text);
      const auto doc = nlohmann::json::parse(text);
      CHECK(doc["image"]["width"] == 96);
      CHECK(doc["image"]["height"] == 80);
      REQUIRE(doc["levels"].size() == result.levels.size());
      for (std::size_t li = 0; li < result.levels.size(); ++li) {
        const auto& lvl = result.levels[li];
        const auto& jl = doc["levels"][li];
        const auto& img = pyr.level(lvl.level);
        CHECK(jl["level"] == lvl.level);
        CHECK(jl["region_count"] == lvl.regions.size());
        const auto stats = oracle::region_stats(lvl.labels, img);
        REQUIRE(jl["regions"].size() == stats.size());
        std::size_t total = 0;
        for (const auto& [id, st] : stats) {
          const auto& jr = jl["regions"][id];
          total += jr["pixel_count"].get<std::size_t>();
          CHECK(jr["id"] == id);
          CHECK(jr["pixel_count"] == st.count);
          CHECK(std::abs(lvl.regions[id].mean - st.mean()) <= 1e-9);
          CHECK(jr["mean"].dump() == nlohmann::json::parse(fixed6(st.mean())).dump());
          CHECK(jr["centroid"][0].dump() ==
                nlohmann::json::parse(fixed6(st.centroid_r())).dump());
          CHECK(jr["bbox"] == nlohmann::json::array({st.r0, st.c0, st.r1, st.c1}));
        }
        CHECK(total == img.area());
        // Lineage: every region below the top names an existing parent.
        for (const auto& jr : jl["regions"]) {
          if (li == 0) {
            CHECK(jr["parent"].is_null());
          } else {
            REQUIRE(jr["parent"].is_number());
            CHECK(jr["parent"].get<std::size_t>() < result.levels[li - 1].regions.size());
          }
        }
      }
      // Means appear in the text exactly as the oracle prints them.
      const auto& base = result.levels.back();
      for (const auto& rec : base.regions) {
        CHECK(text.find("\"mean\": " + fixed6(rec.mean)) != std::string::npos);
      }
    }
  }
}
