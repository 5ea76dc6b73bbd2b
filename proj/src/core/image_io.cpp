#include "hseg/image_io.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace hseg {
namespace {

constexpr std::uint32_t kMask24 = 0xFFFFFF;
constexpr std::uint32_t kGamma = 0x9E3779;
constexpr std::uint32_t kMul1 = 0xBF58B5;
constexpr std::uint32_t kMul2 = 0x94D049;

// Multiplicative inverse of an odd number mod 2^24 (Newton iteration).
constexpr std::uint32_t inverse_mod24(std::uint32_t a) {
  std::uint32_t x = a;
  for (int i = 0; i < 5; ++i) x = (x * (2u - a * x)) & kMask24;
  return x;
}

constexpr std::uint32_t kInvMul1 = inverse_mod24(kMul1);
constexpr std::uint32_t kInvMul2 = inverse_mod24(kMul2);
static_assert(((kMul1 * kInvMul1) & kMask24) == 1);
static_assert(((kMul2 * kInvMul2) & kMask24) == 1);

std::uint32_t unshift(std::uint32_t y, int shift) {
  std::uint32_t x = y;
  for (int s = shift; s < 24; s += shift) x = y ^ (x >> shift);
  return x & kMask24;
}

bool is_space(std::uint8_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Header tokenizer shared by the P2/P5/P6 decoders.
class NetpbmReader {
 public:
  explicit NetpbmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::string magic() {
    if (bytes_.size() < 2 || bytes_[0] != 'P') {
      throw ParseError(0, "malformed header: missing Netpbm magic number");
    }
    pos_ = 2;
    return std::string{static_cast<char>(bytes_[0]), static_cast<char>(bytes_[1])};
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  // Unsigned decimal; `what` names the field for diagnostics.
  unsigned long number(const char* what, const char* kind) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    unsigned long value = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 0xFFFFFFFFul) throw ParseError(start, std::string(kind) + ": " + what + " too large");
      ++pos_;
    }
    if (pos_ == start) {
      if (pos_ >= bytes_.size()) {
        throw ParseError(pos_, std::string(kind) + ": unexpected end of data reading " + what);
      }
      throw ParseError(pos_, std::string(kind) + ": expected " + what);
    }
    return value;
  }

  struct Header {
    int width;
    int height;
    unsigned maxval;
  };

  Header header() {
    Header h{};
    const unsigned long w = number("width", "malformed header");
    const unsigned long hgt = number("height", "malformed header");
    if (w == 0 || hgt == 0 || w > 0x7FFFFFFF || hgt > 0x7FFFFFFF) {
      throw ParseError(pos_, "malformed header: image dimensions must be positive");
    }
    skip_space_and_comments();
    const std::size_t maxval_at = pos_;
    const unsigned long maxval = number("maxval", "malformed header");
    if (maxval == 0) throw ParseError(maxval_at, "malformed header: maxval must be positive");
    if (maxval > 255) throw ParseError(maxval_at, "unsupported maxval " + std::to_string(maxval));
    h.width = static_cast<int>(w);
    h.height = static_cast<int>(hgt);
    h.maxval = static_cast<unsigned>(maxval);
    return h;
  }

  // Binary rasters start after exactly one whitespace byte.
  std::span<const std::uint8_t> raster(std::size_t count) {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
      throw ParseError(pos_, "malformed header: expected whitespace before raster");
    }
    ++pos_;
    if (bytes_.size() - pos_ < count) {
      throw ParseError(bytes_.size(), "truncated pixel data: expected " + std::to_string(count) +
                                          " bytes, found " + std::to_string(bytes_.size() - pos_));
    }
    return bytes_.subspan(pos_, count);
  }

  std::size_t pos() const { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void append_header(Bytes& out, const char* magic, int width, int height) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%s\n%d %d\n255\n", magic, width, height);
  out.insert(out.end(), buf, buf + n);
}

}  // namespace

std::uint8_t round_half_up(double v) {
  const double r = std::floor(v + 0.5);
  if (!(r >= 0.0)) return 0;
  if (r >= 255.0) return 255;
  return static_cast<std::uint8_t>(r);
}

std::uint32_t label_color(RegionId id) {
  std::uint32_t x = (id + kGamma) & kMask24;
  x ^= x >> 12;
  x = (x * kMul1) & kMask24;
  x ^= x >> 11;
  x = (x * kMul2) & kMask24;
  x ^= x >> 12;
  return x;
}

RegionId label_from_color(std::uint32_t rgb) {
  std::uint32_t x = unshift(rgb & kMask24, 12);
  x = (x * kInvMul2) & kMask24;
  x = unshift(x, 11);
  x = (x * kInvMul1) & kMask24;
  x = unshift(x, 12);
  return (x - kGamma) & kMask24;
}

GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
  NetpbmReader in(bytes);
  const std::string magic = in.magic();
  if (magic != "P5" && magic != "P2") {
    throw ParseError(0, "malformed header: unsupported magic " + magic);
  }
  const auto h = in.header();
  const std::size_t count = static_cast<std::size_t>(h.width) * h.height;
  std::vector<double> values(count);
  if (magic == "P5") {
    const auto raster = in.raster(count);
    for (std::size_t i = 0; i < count; ++i) {
      if (raster[i] > h.maxval) {
        throw ParseError(in.pos() + i, "malformed pixel data: value exceeds maxval");
      }
      values[i] = raster[i];
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      in.skip_space_and_comments();
      const std::size_t at = in.pos();
      if (at >= bytes.size()) {
        throw ParseError(at, "truncated pixel data: expected " + std::to_string(count) +
                                 " samples, found " + std::to_string(i));
      }
      const unsigned long v = in.number("sample", "malformed pixel data");
      if (v > h.maxval) throw ParseError(at, "malformed pixel data: value exceeds maxval");
      values[i] = static_cast<double>(v);
    }
  }
  return GrayImage(h.width, h.height, std::move(values));
}

Bytes save_pgm(const GrayImage& img) {
  Bytes out;
  out.reserve(img.area() + 32);
  append_header(out, "P5", img.width(), img.height());
  for (double v : img.cells()) out.push_back(round_half_up(v));
  return out;
}

Bytes save_label_ppm(const LabelMap& labels) {
  Bytes out;
  out.reserve(3 * labels.area() + 32);
  append_header(out, "P6", labels.width(), labels.height());
  for (RegionId id : labels.cells()) {
    const std::uint32_t c = label_color(id);
    out.push_back(static_cast<std::uint8_t>(c >> 16));
    out.push_back(static_cast<std::uint8_t>(c >> 8));
    out.push_back(static_cast<std::uint8_t>(c));
  }
  return out;
}

LabelMap load_label_ppm(std::span<const std::uint8_t> bytes) {
  NetpbmReader in(bytes);
  if (in.magic() != "P6") throw ParseError(0, "malformed header: label image must be P6");
  const auto h = in.header();
  if (h.maxval != 255) throw ParseError(in.pos(), "unsupported maxval for label image");
  const std::size_t count = static_cast<std::size_t>(h.width) * h.height;
  const auto raster = in.raster(3 * count);
  std::vector<RegionId> ids(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t rgb = (std::uint32_t{raster[3 * i]} << 16) |
                              (std::uint32_t{raster[3 * i + 1]} << 8) | raster[3 * i + 2];
    ids[i] = label_from_color(rgb);
  }
  return LabelMap(h.width, h.height, std::move(ids));
}

}  // namespace hseg
