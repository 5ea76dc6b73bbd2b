#pragma once

// Test-only reference implementations. They are deliberately naive and share
// no code with the library beyond the Grid container.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hseg/grid.hpp"

namespace oracle {

using hseg::GrayImage;
using hseg::LabelMap;
using hseg::RegionId;

// Per-parent averaging over whichever of the four children exist, summed
// NW, NE, SW, SE.
inline GrayImage shrink(const GrayImage& img) {
  const int pw = (img.width() + 1) / 2;
  const int ph = (img.height() + 1) / 2;
  GrayImage out(pw, ph);
  for (int i = 0; i < ph; ++i) {
    for (int j = 0; j < pw; ++j) {
      std::vector<double> kids;
      for (auto [dr, dc] : {std::pair{0, 0}, {0, 1}, {1, 0}, {1, 1}}) {
        const int r = 2 * i + dr;
        const int c = 2 * j + dc;
        if (r < img.height() && c < img.width()) kids.push_back(img.at(r, c));
      }
      double s = 0.0;
      for (double k : kids) s += k;
      out.at(i, j) = s / static_cast<double>(kids.size());
    }
  }
  return out;
}

// Connected components of equal `key` values by depth-first flood fill. Ids
// follow the raster order of each component's first pixel.
template <typename Grid, typename Same>
LabelMap flood(const Grid& g, bool eight, Same same) {
  const int w = g.width();
  const int h = g.height();
  LabelMap out(w, h, UINT32_MAX);
  RegionId next = 0;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (out.at(r, c) != UINT32_MAX) continue;
      std::vector<std::pair<int, int>> stack{{r, c}};
      out.at(r, c) = next;
      while (!stack.empty()) {
        auto [y, x] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if ((dy == 0 && dx == 0) || (!eight && dy != 0 && dx != 0)) continue;
            const int ny = y + dy;
            const int nx = x + dx;
            if (ny < 0 || nx < 0 || ny >= h || nx >= w) continue;
            if (out.at(ny, nx) != UINT32_MAX || !same(g.at(y, x), g.at(ny, nx))) continue;
            out.at(ny, nx) = next;
            stack.emplace_back(ny, nx);
          }
        }
      }
      ++next;
    }
  }
  return out;
}

inline LabelMap components(const LabelMap& labels, bool eight = false) {
  return flood(labels, eight, [](RegionId a, RegionId b) { return a == b; });
}

inline LabelMap constant_components(const GrayImage& img) {
  return flood(img, false, [](double a, double b) { return a == b; });
}

// True when some bijection between the id sets maps one map onto the other.
inline bool same_partition(const LabelMap& a, const LabelMap& b) {
  if (!a.same_shape(b)) return false;
  std::map<RegionId, RegionId> fwd;
  std::map<RegionId, RegionId> back;
  for (std::size_t i = 0; i < a.area(); ++i) {
    auto [f, fnew] = fwd.emplace(a[i], b[i]);
    auto [g, gnew] = back.emplace(b[i], a[i]);
    if (f->second != b[i] || g->second != a[i]) return false;
  }
  return true;
}

struct Stats {
  std::size_t count = 0;
  long long sum_r = 0;
  long long sum_c = 0;
  long double sum_v = 0;
  int r0 = INT32_MAX, c0 = INT32_MAX, r1 = -1, c1 = -1;
  double mean() const { return static_cast<double>(sum_v / count); }
  double centroid_r() const { return static_cast<double>(sum_r) / count; }
  double centroid_c() const { return static_cast<double>(sum_c) / count; }
};

inline std::map<RegionId, Stats> region_stats(const LabelMap& labels, const GrayImage& img) {
  std::map<RegionId, Stats> out;
  for (int r = 0; r < labels.height(); ++r) {
    for (int c = 0; c < labels.width(); ++c) {
      auto& s = out[labels.at(r, c)];
      ++s.count;
      s.sum_r += r;
      s.sum_c += c;
      s.sum_v += img.at(r, c);
      s.r0 = std::min(s.r0, r);
      s.c0 = std::min(s.c0, c);
      s.r1 = std::max(s.r1, r);
      s.c1 = std::max(s.c1, c);
    }
  }
  return out;
}

// Unordered adjacent id pairs (a < b) found by scanning every pixel's four
// neighbors.
inline std::set<std::pair<RegionId, RegionId>> adjacency(const LabelMap& labels) {
  std::set<std::pair<RegionId, RegionId>> out;
  for (int r = 0; r < labels.height(); ++r) {
    for (int c = 0; c < labels.width(); ++c) {
      const int dr[] = {-1, 1, 0, 0};
      const int dc[] = {0, 0, -1, 1};
      for (int k = 0; k < 4; ++k) {
        const int nr = r + dr[k];
        const int nc = c + dc[k];
        if (nr < 0 || nc < 0 || nr >= labels.height() || nc >= labels.width()) continue;
        const RegionId a = labels.at(r, c);
        const RegionId b = labels.at(nr, nc);
        if (a != b) out.emplace(std::min(a, b), std::max(a, b));
      }
    }
  }
  return out;
}

struct Neighborhood {
  std::vector<RegionId> adjacent;
  // (kind, other) with kinds "contains", "sub-part-of", "left-of", "above",
  // sorted in that kind order and then by other.
  std::vector<std::pair<std::string, RegionId>> relations;
};

// Adjacency and relations rebuilt from the 4-neighbor scan and the raw
// statistics of a dense map.
inline std::vector<Neighborhood> relations(const LabelMap& labels) {
  const auto stats = region_stats(labels, GrayImage(labels.width(), labels.height(), 0.0));
  std::vector<Neighborhood> out(stats.size());
  for (auto [a, b] : adjacency(labels)) {
    out[a].adjacent.push_back(b);
    out[b].adjacent.push_back(a);
  }
  for (auto& e : out) std::sort(e.adjacent.begin(), e.adjacent.end());
  for (const auto& [b, st] : stats) {
    const bool border = st.r0 == 0 || st.c0 == 0 || st.r1 == labels.height() - 1 ||
                        st.c1 == labels.width() - 1;
    if (!border && out[b].adjacent.size() == 1) {
      out[b].relations.emplace_back("sub-part-of", out[b].adjacent[0]);
      out[out[b].adjacent[0]].relations.emplace_back("contains", b);
    }
  }
  for (const auto& [a, sa] : stats) {
    for (RegionId b : out[a].adjacent) {
      const auto& sb = stats.at(b);
      if (sa.centroid_c() + 0.5 < sb.centroid_c()) out[a].relations.emplace_back("left-of", b);
      if (sa.centroid_r() + 0.5 < sb.centroid_r()) out[a].relations.emplace_back("above", b);
    }
  }
  auto rank = [](const std::string& k) {
    return k == "contains" ? 0 : k == "sub-part-of" ? 1 : k == "left-of" ? 2 : 3;
  };
  for (auto& e : out) {
    std::sort(e.relations.begin(), e.relations.end(), [&](const auto& x, const auto& y) {
      return rank(x.first) != rank(y.first) ? rank(x.first) < rank(y.first) : x.second < y.second;
    });
  }
  return out;
}

// For each child id, the parent id covering most of its pixels under
// (r, c) -> (r/2, c/2); ties to the lower parent id.
inline std::vector<RegionId> majority_parents(const LabelMap& child, const LabelMap& parent) {
  std::map<RegionId, std::map<RegionId, std::size_t>> votes;
  for (int r = 0; r < child.height(); ++r) {
    for (int c = 0; c < child.width(); ++c) ++votes[child.at(r, c)][parent.at(r / 2, c / 2)];
  }
  std::vector<RegionId> out(votes.size());
  for (const auto& [id, row] : votes) {
    std::size_t most = 0;
    for (const auto& [p, v] : row) {
      if (v > most) {
        out[id] = p;
        most = v;
      }
    }
  }
  return out;
}

inline double rmse(const GrayImage& a, const GrayImage& b) {
  long double acc = 0;
  for (int r = 0; r < a.height(); ++r) {
    for (int c = 0; c < a.width(); ++c) {
      const long double d = static_cast<long double>(a.at(r, c)) - b.at(r, c);
      acc += d * d;
    }
  }
  return static_cast<double>(std::sqrt(acc / (static_cast<long double>(a.width()) * a.height())));
}

inline GrayImage random_image(std::mt19937_64& rng, int w, int h, int levels = 256) {
  GrayImage img(w, h);
  for (auto& v : img.cells()) v = static_cast<double>(rng() % levels);
  return img;
}

inline LabelMap random_labels(std::mt19937_64& rng, int w, int h, int ids) {
  LabelMap m(w, h);
  for (auto& v : m.cells()) v = static_cast<RegionId>(rng() % ids);
  return m;
}

// Palette as documented next to label_color().
inline std::uint32_t palette(std::uint32_t id) {
  const std::uint32_t m = 0xFFFFFF;
  std::uint32_t x = (id + 0x9E3779u) & m;
  x ^= x >> 12;
  x = static_cast<std::uint32_t>((static_cast<std::uint64_t>(x) * 0xBF58B5u) & m);
  x ^= x >> 11;
  x = static_cast<std::uint32_t>((static_cast<std::uint64_t>(x) * 0x94D049u) & m);
  x ^= x >> 12;
  return x;
}

}  // namespace oracle
