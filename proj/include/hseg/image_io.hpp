#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hseg/grid.hpp"

namespace hseg {

using Bytes = std::vector<std::uint8_t>;

/// Decodes a P5 (binary) or P2 (ASCII) graymap with maxval <= 255. Values are
/// returned exactly as stored. Throws ParseError carrying the byte offset of
/// the failure.
GrayImage load_pgm(std::span<const std::uint8_t> bytes);

/// Canonical P5, maxval 255. Non-integer intensities are rounded half-up.
Bytes save_pgm(const GrayImage& img);

/// P6 rendering of a label map using label_color().
Bytes save_label_ppm(const LabelMap& labels);

/// Inverse of save_label_ppm: decodes every RGB triple back to its id.
LabelMap load_label_ppm(std::span<const std::uint8_t> bytes);

/// Palette for region ids: a 24-bit splitmix-style mixer
///
///   x = (id + 0x9E3779) mod 2^24
///   x ^= x >> 12;  x = x * 0xBF58B5 mod 2^24
///   x ^= x >> 11;  x = x * 0x94D049 mod 2^24
///   x ^= x >> 12
///
/// returned as 0xRRGGBB. Every step is invertible on 24 bits, so distinct ids
/// below 2^24 always get distinct colors.
std::uint32_t label_color(RegionId id);

/// Inverse of label_color for 24-bit colors.
RegionId label_from_color(std::uint32_t rgb);

/// floor(v + 0.5) clamped to [0, 255].
std::uint8_t round_half_up(double v);

}  // namespace hseg
