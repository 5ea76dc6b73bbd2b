#include <doctest.h>

#include "hseg/top_segmenter.hpp"
#include "oracles.hpp"

using namespace hseg;

namespace {

bool dense_and_total(const LabelMap& labels) {
  std::vector<bool> seen(labels.area(), false);
  RegionId max_id = 0;
  for (RegionId id : labels.cells()) {
    if (id >= labels.area()) return false;
    seen[id] = true;
    max_id = std::max(max_id, id);
  }
  for (RegionId k = 0; k <= max_id; ++k) {
    if (!seen[k]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("segment_top on plateaus") {
  SUBCASE("constant image, tolerance 0") {
    const auto seg = segment_top(GrayImage(10, 10, 77.0), 0.0);
    CHECK(seg.labels == LabelMap(10, 10, 0u));
    REQUIRE(seg.means.size() == 1);
    CHECK(seg.means[0] == 77.0);
  }
  SUBCASE("left 50 / right 200 halves, tolerance 20") {
    GrayImage img(8, 8, 50.0);
    for (int r = 0; r < 8; ++r) {
      for (int c = 4; c < 8; ++c) img.at(r, c) = 200.0;
    }
    const auto seg = segment_top(img, 20.0);
    CHECK(seg.labels == oracle::constant_components(img));
    REQUIRE(seg.means.size() == 2);
    CHECK(seg.means[0] == 50.0);
    CHECK(seg.means[1] == 200.0);
  }
  SUBCASE("0/255 checkerboard, tolerance 10") {
    GrayImage img(6, 5);
    for (int r = 0; r < 5; ++r) {
      for (int c = 0; c < 6; ++c) img.at(r, c) = (r + c) % 2 ? 255.0 : 0.0;
    }
    const auto seg = segment_top(img, 10.0);
    CHECK(seg.means.size() == img.area());
    for (std::size_t i = 0; i < img.area(); ++i) CHECK(seg.labels[i] == i);
  }
}

TEST_CASE("segment_top follows the documented growth order") {
  // 1x4 ramp: 10 joins the seed (mean 5), then |20 - 5| > 10 opens a new
  // region at 20 which 30 joins.
  const auto ramp = segment_top(GrayImage(4, 1, {0, 10, 20, 30}), 10.0);
  CHECK(ramp.labels == LabelMap(4, 1, {0u, 0u, 1u, 1u}));
  CHECK(ramp.means == std::vector<double>{5.0, 25.0});

  // East is probed before south: 20 joins first (mean 15), so 0 is then
  // rejected. Probing south first would have admitted 0 and rejected 20.
  const GrayImage img(2, 2, {10, 20, 0, 12});
  const auto seg = segment_top(img, 10.0);
  CHECK(seg.labels == LabelMap(2, 2, {0u, 0u, 1u, 0u}));
}

TEST_CASE("tolerance 0 equals the constant-component flood fill") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 12);
    const int h = 1 + static_cast<int>(rng() % 12);
    const auto img = oracle::random_image(rng, w, h, 3);
    const auto seg = segment_top(img, 0.0);
    CHECK(seg.labels == oracle::constant_components(img));
  }
}

TEST_CASE("segment_top output is a dense connected partition with exact means") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 16);
    const int h = 1 + static_cast<int>(rng() % 16);
    const auto img = oracle::random_image(rng, w, h, 64);
    const double tol = static_cast<double>(rng() % 30);
    const auto seg = segment_top(img, tol);
    CHECK(dense_and_total(seg.labels));
    CHECK(oracle::components(seg.labels) == seg.labels);
    const auto stats = oracle::region_stats(seg.labels, img);
    REQUIRE(stats.size() == seg.means.size());
    for (const auto& [id, st] : stats) CHECK(seg.means[id] == doctest::Approx(st.mean()).epsilon(1e-12));
    CHECK(segment_top(img, tol).labels == seg.labels);
  }
}

TEST_CASE("region count does not grow with tolerance on a fixed corpus") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto img = oracle::random_image(rng, 16, 16, 256);
    std::size_t previous = SIZE_MAX;
    for (double tol : {0.0, 4.0, 8.0, 12.0, 16.0, 24.0, 32.0, 64.0, 128.0, 255.0}) {
      const std::size_t n = segment_top(img, tol).means.size();
      CHECK(n <= previous);
      previous = n;
    }
  }
}

TEST_CASE("segment_top rejects a negative tolerance") {
  CHECK_THROWS_AS(segment_top(GrayImage(2, 2, 0.0), -1.0), Error);
}

TEST_CASE("relabel_connected") {
  SUBCASE("connected map is renumbered by first pixel") {
    const LabelMap in(3, 2, {5u, 5u, 2u, 7u, 7u, 2u});
    CHECK(relabel_connected(in) == LabelMap(3, 2, {0u, 0u, 1u, 2u, 2u, 1u}));
  }
  SUBCASE("diagonal blobs split under 4-connectivity") {
    const LabelMap in(2, 2, {0u, 1u, 1u, 0u});
    CHECK(relabel_connected(in, Connectivity::Four) == LabelMap(2, 2, {0u, 1u, 2u, 3u}));
    CHECK(relabel_connected(in, Connectivity::Eight) == LabelMap(2, 2, {0u, 1u, 1u, 0u}));
  }
  SUBCASE("random maps match the flood-fill oracle") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 300; ++trial) {
      const auto labels = oracle::random_labels(rng, 8, 8, 1 + static_cast<int>(rng() % 5));
      CHECK(relabel_connected(labels, Connectivity::Four) == oracle::components(labels, false));
      CHECK(relabel_connected(labels, Connectivity::Eight) == oracle::components(labels, true));
    }
  }
  SUBCASE("a large spiral matches the oracle") {
    const int n = 101;
    LabelMap m(n, n, 1u);
    int top = 0, left = 0, bottom = n - 1, right = n - 1;
    while (top <= bottom && left <= right) {
      for (int c = left; c <= right; ++c) m.at(top, c) = 0;
      for (int r = top; r <= bottom; ++r) m.at(r, right) = 0;
      top += 2;
      right -= 2;
      for (int c = right; c >= left && top - 1 <= bottom; --c) m.at(bottom, c) = 0;
      for (int r = bottom; r >= top && left <= right; --r) m.at(r, left) = 0;
      bottom -= 2;
      left += 2;
    }
    CHECK(relabel_connected(m) == oracle::components(m));
  }
}
