#include "hseg/descent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <tuple>

#include "hseg/top_segmenter.hpp"

namespace hseg {
namespace {

// How far (as a fraction of epsilon) absorbing mixture pixels may pull a
// region's mean away from the mean of its own pixels.
constexpr double kMixtureShiftBound = 0.75;

struct RegionGraph {
  std::vector<RegionId> parent;
  std::vector<std::size_t> count;
  std::vector<double> sum;
  // Statistics over pixels that were not absorbed as mixtures.
  std::vector<std::size_t> core_count;
  std::vector<double> core_sum;
  std::vector<std::vector<RegionId>> adjacent;  // sorted, roots only
  std::vector<std::uint32_t> version;

  explicit RegionGraph(std::size_t n)
      : parent(n), count(n, 0), sum(n, 0.0), core_count(n, 0), core_sum(n, 0.0), adjacent(n),
        version(n, 0) {
    std::iota(parent.begin(), parent.end(), RegionId{0});
  }

  RegionId find(RegionId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  double mean(RegionId r) const { return sum[r] / static_cast<double>(count[r]); }
  double core_mean(RegionId r) const {
    return core_count[r] == 0 ? mean(r) : core_sum[r] / static_cast<double>(core_count[r]);
  }

  // Folds `b` into `a`; both must be roots. An absorbed `b` does not
  // contribute to the core statistics of `a`.
  void unite(RegionId a, RegionId b, bool absorb = false) {
    parent[b] = a;
    count[a] += count[b];
    sum[a] += sum[b];
    if (!absorb) {
      core_count[a] += core_count[b];
      core_sum[a] += core_sum[b];
    }
    std::vector<RegionId> merged;
    merged.reserve(adjacent[a].size() + adjacent[b].size());
    std::set_union(adjacent[a].begin(), adjacent[a].end(), adjacent[b].begin(),
                   adjacent[b].end(), std::back_inserter(merged));
    std::erase_if(merged, [&](RegionId x) { return x == a || x == b; });
    for (RegionId n : adjacent[b]) {
      if (n == a) continue;
      auto& list = adjacent[n];
      list.erase(std::lower_bound(list.begin(), list.end(), b));
      auto it = std::lower_bound(list.begin(), list.end(), a);
      if (it == list.end() || *it != a) list.insert(it, a);
    }
    adjacent[a] = std::move(merged);
    adjacent[b].clear();
    ++version[a];
  }
};

RegionGraph build_graph(const LabelMap& labels, const GrayImage& img, const Mask& absorbed,
                        std::size_t n) {
  RegionGraph g(n);
  const int w = labels.width();
  const int h = labels.height();
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const RegionId a = labels.at(r, c);
      ++g.count[a];
      g.sum[a] += img.at(r, c);
      if (!absorbed.at(r, c)) {
        ++g.core_count[a];
        g.core_sum[a] += img.at(r, c);
      }
      if (c + 1 < w && labels.at(r, c + 1) != a) {
        g.adjacent[a].push_back(labels.at(r, c + 1));
        g.adjacent[labels.at(r, c + 1)].push_back(a);
      }
      if (r + 1 < h && labels.at(r + 1, c) != a) {
        g.adjacent[a].push_back(labels.at(r + 1, c));
        g.adjacent[labels.at(r + 1, c)].push_back(a);
      }
    }
  }
  for (auto& list : g.adjacent) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return g;
}

// Agglomerates adjacent regions whose core means differ by at most epsilon,
// closest pair first. Returns true if anything merged.
bool merge_similar(RegionGraph& g, double epsilon) {
  using Entry = std::tuple<double, RegionId, RegionId, std::uint32_t, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  auto push = [&](RegionId a, RegionId b) {
    if (a > b) std::swap(a, b);
    const double d = std::abs(g.core_mean(a) - g.core_mean(b));
    if (d <= epsilon) queue.emplace(d, a, b, g.version[a], g.version[b]);
  };
  for (RegionId a = 0; a < g.parent.size(); ++a) {
    for (RegionId b : g.adjacent[a]) {
      if (a < b) push(a, b);
    }
  }
  bool merged = false;
  while (!queue.empty()) {
    const auto [d, a, b, va, vb] = queue.top();
    queue.pop();
    if (g.parent[a] != a || g.parent[b] != b || g.version[a] != va || g.version[b] != vb) {
      continue;
    }
    g.unite(a, b);
    merged = true;
    for (RegionId n : g.adjacent[a]) push(a, n);
  }
  return merged;
}

// A region is thin when none of its pixels has all four neighbors inside it.
std::vector<bool> thick_regions(const LabelMap& labels, std::size_t n) {
  std::vector<bool> thick(n, false);
  const int w = labels.width();
  const int h = labels.height();
  for (int r = 1; r + 1 < h; ++r) {
    for (int c = 1; c + 1 < w; ++c) {
      const RegionId id = labels.at(r, c);
      if (labels.at(r - 1, c) == id && labels.at(r + 1, c) == id && labels.at(r, c - 1) == id &&
          labels.at(r, c + 1) == id) {
        thick[id] = true;
      }
    }
  }
  return thick;
}

// Thin regions whose core mean lies strictly between their neighbors' core
// means are folded whole into the neighbor with the nearest core mean, smallest
// region first, provided the host's mean stays within `bound` of its core
// mean. Candidates with no such host are flagged in `stuck`. Returns the
// absorbed region ids.
std::vector<RegionId> absorb_mixtures(RegionGraph& g, const std::vector<bool>& thick,
                                      double bound, std::vector<bool>& stuck) {
  const std::size_t n = g.parent.size();
  std::vector<RegionId> order;
  for (RegionId k = 0; k < n; ++k) {
    if (g.parent[k] == k && !thick[k]) order.push_back(k);
  }
  std::sort(order.begin(), order.end(), [&](RegionId x, RegionId y) {
    return g.count[x] != g.count[y] ? g.count[x] < g.count[y] : x < y;
  });
  std::vector<bool> touched(n, false);
  std::vector<RegionId> absorbed;
  for (RegionId k : order) {
    if (touched[k] || g.adjacent[k].size() < 2) continue;
    const double m = g.core_mean(k);
    double lo = m;
    double hi = m;
    for (RegionId b : g.adjacent[k]) {
      lo = std::min(lo, g.core_mean(b));
      hi = std::max(hi, g.core_mean(b));
    }
    if (!(lo < m && m < hi)) continue;
    RegionId host = k;
    double best = 0.0;
    for (RegionId b : g.adjacent[k]) {
      const double merged_mean =
          (g.sum[b] + g.sum[k]) / static_cast<double>(g.count[b] + g.count[k]);
      if (std::abs(merged_mean - g.core_mean(b)) > bound) continue;
      const double d = std::abs(m - g.core_mean(b));
      if (host == k || d < best) {
        host = b;
        best = d;
      }
    }
    if (host == k) {
      stuck[k] = true;
      continue;
    }
    touched[host] = true;
    touched[k] = true;
    stuck[host] = false;
    g.unite(host, k, true);
    absorbed.push_back(k);
  }
  return absorbed;
}

// Moves pixels of stuck mixture regions one at a time into the adjacent
// region with the nearest core mean, under the same shift bound.
bool split_mixtures(const LabelMap& current, const GrayImage& img, RegionGraph& g,
                    const std::vector<bool>& stuck, double bound, LabelMap& next,
                    Mask& absorbed) {
  const int w = current.width();
  const int h = current.height();
  bool moved = false;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const RegionId own = current.at(r, c);
      if (!stuck[own]) continue;
      const double v = img.at(r, c);
      RegionId host = own;
      double best = 0.0;
      for_each_neighbor(w, h, r, c, Connectivity::Four, [&](int nr, int nc) {
        const RegionId b = g.find(current.at(nr, nc));
        if (b == own || stuck[b]) return;
        const double shift = std::abs((g.sum[b] + v) / static_cast<double>(g.count[b] + 1) -
                                      g.core_mean(b));
        if (shift > bound) return;
        const double d = std::abs(v - g.core_mean(b));
        if (host == own || d < best || (d == best && b < host)) {
          host = b;
          best = d;
        }
      });
      if (host == own) continue;
      g.count[host] += 1;
      g.sum[host] += v;
      next.at(r, c) = host;
      absorbed.at(r, c) = 1;
      moved = true;
    }
  }
  return moved;
}

LabelMap resolve(const LabelMap& labels, RegionGraph& g) {
  LabelMap out = labels;
  for (auto& id : out.cells()) id = g.find(id);
  return out;
}

}  // namespace

LabelMap consolidate(const LabelMap& labels, const GrayImage& img, double epsilon,
                     bool absorb) {
  if (!labels.same_shape(img)) {
    throw Error(ErrorCode::InvalidArgument, "consolidate: label map and image dims differ");
  }
  LabelMap current = relabel_connected(labels, Connectivity::Four);
  Mask absorbed(img.width(), img.height(), 0);
  const double bound = kMixtureShiftBound * epsilon;
  for (;;) {
    RegionGraph g = build_graph(current, img, absorbed, region_count(current));
    if (merge_similar(g, epsilon)) {
      current = relabel_connected(resolve(current, g), Connectivity::Four);
    }
    if (!absorb) return current;
    const std::size_t n = region_count(current);
    RegionGraph h = build_graph(current, img, absorbed, n);
    std::vector<bool> stuck(n, false);
    const auto gone = absorb_mixtures(h, thick_regions(current, n), bound, stuck);
    std::vector<bool> is_gone(n, false);
    for (RegionId k : gone) is_gone[k] = true;
    for (std::size_t i = 0; i < current.area(); ++i) {
      if (is_gone[current[i]]) absorbed[i] = 1;
    }
    LabelMap next = resolve(current, h);
    const bool split = split_mixtures(current, img, h, stuck, bound, next, absorbed);
    if (gone.empty() && !split) return current;
    current = relabel_connected(next, Connectivity::Four);
  }
}

}  // namespace hseg
