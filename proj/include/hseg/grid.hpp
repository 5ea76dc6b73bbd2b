#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hseg/error.hpp"

namespace hseg {

/// Row-major W x H grid. GrayImage, LabelMap and masks are all grids; the
/// element type keeps them distinct.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;

  Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
    check_dims(width, height);
    cells_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  Grid(int width, int height, std::vector<T> cells)
      : width_(width), height_(height), cells_(std::move(cells)) {
    check_dims(width, height);
    if (cells_.size() != static_cast<std::size_t>(width) * height) {
      throw Error(ErrorCode::InvalidArgument,
                  "grid cell count does not match width x height");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t area() const noexcept { return cells_.size(); }
  bool empty() const noexcept { return cells_.empty(); }

  T& at(int row, int col) noexcept {
    return cells_[static_cast<std::size_t>(row) * width_ + col];
  }
  const T& at(int row, int col) const noexcept {
    return cells_[static_cast<std::size_t>(row) * width_ + col];
  }

  T& operator[](std::size_t index) noexcept { return cells_[index]; }
  const T& operator[](std::size_t index) const noexcept { return cells_[index]; }

  std::span<T> cells() noexcept { return cells_; }
  std::span<const T> cells() const noexcept { return cells_; }

  bool same_shape(int width, int height) const noexcept {
    return width_ == width && height_ == height;
  }
  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return same_shape(other.width(), other.height());
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.cells_ == b.cells_;
  }

 private:
  static void check_dims(int width, int height) {
    if (width < 1 || height < 1) {
      throw Error(ErrorCode::InvalidArgument, "grid dimensions must be positive");
    }
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> cells_;
};

using RegionId = std::uint32_t;

/// Real-valued intensities in [0, 255]. Base images hold integers.
using GrayImage = Grid<double>;
/// Dense region ids 0..n-1 partitioning one pyramid level.
using LabelMap = Grid<RegionId>;
using Mask = Grid<std::uint8_t>;

enum class Connectivity : int { Four = 4, Eight = 8 };

Connectivity connectivity_from_int(int value);

/// Throws InvalidArgument unless every value lies in [0, 255].
void check_intensity_range(const GrayImage& img);

/// Number of ids in a dense map (max id + 1).
std::size_t region_count(const LabelMap& labels);

/// Exact per-region mean intensity. Intensities at every pyramid level are
/// dyadic rationals, so plain double summation in raster order is exact for
/// any practical image size. A region holding a single value reports that
/// value unchanged, whatever it is.
std::vector<double> region_means(const LabelMap& labels, const GrayImage& img,
                                 std::size_t count);

/// Calls fn(row, col) for each in-bounds neighbor, probing N, W, E, S and then
/// (for 8-connectivity) NW, NE, SW, SE.
template <typename Fn>
void for_each_neighbor(int width, int height, int row, int col,
                       Connectivity conn, Fn&& fn) {
  static constexpr int kDr[] = {-1, 0, 0, 1, -1, -1, 1, 1};
  static constexpr int kDc[] = {0, -1, 1, 0, -1, 1, -1, 1};
  const int n = conn == Connectivity::Eight ? 8 : 4;
  for (int k = 0; k < n; ++k) {
    const int r = row + kDr[k];
    const int c = col + kDc[k];
    if (r >= 0 && r < height && c >= 0 && c < width) fn(r, c);
  }
}

}  // namespace hseg
