#include "hseg/top_segmenter.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace hseg {
namespace {

constexpr RegionId kUnlabeled = std::numeric_limits<RegionId>::max();

// Union-find over provisional component labels.
class DisjointSet {
 public:
  RegionId make() {
    parent_.push_back(static_cast<RegionId>(parent_.size()));
    return parent_.back();
  }

  RegionId find(RegionId x) {
    RegionId root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const RegionId next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  // The smaller root wins, so a component's root is its first provisional label.
  void unite(RegionId a, RegionId b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<RegionId> parent_;
};

}  // namespace

TopSegmentation segment_top(const GrayImage& img, double tolerance) {
  if (!(tolerance >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerance must be non-negative");
  }
  const int w = img.width();
  const int h = img.height();
  LabelMap labels(w, h, kUnlabeled);
  std::vector<double> means;
  std::deque<std::pair<int, int>> queue;

  for (int sr = 0; sr < h; ++sr) {
    for (int sc = 0; sc < w; ++sc) {
      if (labels.at(sr, sc) != kUnlabeled) continue;
      const auto id = static_cast<RegionId>(means.size());
      double sum = img.at(sr, sc);
      std::size_t count = 1;
      labels.at(sr, sc) = id;
      queue.emplace_back(sr, sc);
      while (!queue.empty()) {
        const auto [r, c] = queue.front();
        queue.pop_front();
        for_each_neighbor(w, h, r, c, Connectivity::Four, [&](int nr, int nc) {
          if (labels.at(nr, nc) != kUnlabeled) return;
          const double v = img.at(nr, nc);
          if (std::abs(v - sum / static_cast<double>(count)) > tolerance) return;
          labels.at(nr, nc) = id;
          sum += v;
          ++count;
          queue.emplace_back(nr, nc);
        });
      }
      means.push_back(sum / static_cast<double>(count));
    }
  }
  return {std::move(labels), std::move(means)};
}

LabelMap relabel_connected(const LabelMap& labels, Connectivity connectivity) {
  const int w = labels.width();
  const int h = labels.height();
  LabelMap provisional(w, h, kUnlabeled);
  DisjointSet sets;

  // Pass 1: provisional labels from the already-visited half-neighborhood.
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const RegionId id = labels.at(r, c);
      RegionId assigned = kUnlabeled;
      auto visit = [&](int nr, int nc) {
        if (nr < 0 || nc < 0 || nc >= w || labels.at(nr, nc) != id) return;
        const RegionId other = provisional.at(nr, nc);
        if (assigned == kUnlabeled) {
          assigned = other;
        } else {
          sets.unite(assigned, other);
        }
      };
      visit(r - 1, c);
      visit(r, c - 1);
      if (connectivity == Connectivity::Eight) {
        visit(r - 1, c - 1);
        visit(r - 1, c + 1);
      }
      provisional.at(r, c) = assigned == kUnlabeled ? sets.make() : assigned;
    }
  }

  // Pass 2: roots are numbered in order of first appearance.
  LabelMap out(w, h);
  std::vector<RegionId> dense;
  RegionId next = 0;
  for (std::size_t i = 0; i < provisional.area(); ++i) {
    const RegionId root = sets.find(provisional[i]);
    if (root >= dense.size()) dense.resize(root + 1, kUnlabeled);
    if (dense[root] == kUnlabeled) {
      dense[root] = next++;
    }
    out[i] = dense[root];
  }
  return out;
}

}  // namespace hseg
