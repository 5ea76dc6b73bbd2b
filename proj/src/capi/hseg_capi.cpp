#include "hseg/hseg.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <exception>
#include <new>
#include <string>
#include <string_view>

#include "hseg/format.hpp"
#include "hseg/image_io.hpp"
#include "hseg/pyramid.hpp"
#include "hseg/reconstruct.hpp"
#include "hseg/registry.hpp"
#include "hseg/synthgen.hpp"

struct hseg_image {
  hseg::GrayImage image;
};

struct hseg_result {
  hseg::Pyramid pyramid;
  hseg::SegmentationResult result;
};

namespace {

thread_local std::string g_last_error;

hseg_status fail(hseg_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
hseg_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return HSEG_OK;
  } catch (const hseg::Error& e) {
    return fail(static_cast<hseg_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(HSEG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HSEG_ERR_INTERNAL, e.what());
  }
}

void fill_buffer(hseg_buffer* out, const void* data, std::size_t size) {
  out->data = static_cast<uint8_t*>(std::malloc(size == 0 ? 1 : size));
  if (out->data == nullptr) throw std::bad_alloc();
  if (size != 0) std::memcpy(out->data, data, size);
  out->size = size;
}

void fill_buffer(hseg_buffer* out, const hseg::Bytes& bytes) {
  fill_buffer(out, bytes.data(), bytes.size());
}

void fill_buffer(hseg_buffer* out, const std::string& text) {
  fill_buffer(out, text.data(), text.size());
}

void require(bool ok, const char* what) {
  if (!ok) throw hseg::Error(hseg::ErrorCode::InvalidArgument, what);
}

const hseg::LevelEntry& level_entry(const hseg_result* result, int32_t level) {
  require(result != nullptr, "null result handle");
  const hseg::LevelEntry* entry = result->result.find_level(level);
  if (entry == nullptr) {
    throw hseg::Error(hseg::ErrorCode::InvalidArgument,
                      "level " + std::to_string(level) + " not present in result");
  }
  return *entry;
}

std::string_view as_text(const uint8_t* bytes, size_t size) {
  return {reinterpret_cast<const char*>(bytes), size};
}

}  // namespace

extern "C" {

const char* hseg_version(void) { return "1.0.0"; }

const char* hseg_last_error(void) { return g_last_error.c_str(); }

void hseg_params_init(hseg_params* params) {
  if (params == nullptr) return;
  params->top_area = hseg::kDefaultTopArea;
  params->tolerance = hseg::kDefaultTolerance;
  params->epsilon = hseg::kDefaultEpsilon;
  params->max_iters = hseg::kDefaultMaxIters;
  params->connectivity = 4;
}

void hseg_buffer_free(hseg_buffer* buffer) {
  if (buffer == nullptr) return;
  std::free(buffer->data);
  buffer->data = nullptr;
  buffer->size = 0;
}

hseg_status hseg_image_load_pgm(const uint8_t* bytes, size_t size, hseg_image** out) {
  return guarded([&] {
    require(out != nullptr && (bytes != nullptr || size == 0), "null argument");
    *out = nullptr;
    auto img = hseg::load_pgm({bytes, size});
    *out = new hseg_image{std::move(img)};
  });
}

hseg_status hseg_image_create(int32_t width, int32_t height, const double* values,
                              hseg_image** out) {
  return guarded([&] {
    require(out != nullptr && values != nullptr, "null argument");
    *out = nullptr;
    require(width >= 1 && height >= 1, "image dimensions must be positive");
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    hseg::GrayImage img(width, height, std::vector<double>(values, values + n));
    hseg::check_intensity_range(img);
    *out = new hseg_image{std::move(img)};
  });
}

void hseg_image_free(hseg_image* image) { delete image; }

int32_t hseg_image_width(const hseg_image* image) { return image ? image->image.width() : 0; }

int32_t hseg_image_height(const hseg_image* image) { return image ? image->image.height() : 0; }

const double* hseg_image_data(const hseg_image* image) {
  return image ? image->image.cells().data() : nullptr;
}

hseg_status hseg_image_save_pgm(const hseg_image* image, hseg_buffer* out) {
  return guarded([&] {
    require(image != nullptr && out != nullptr, "null argument");
    fill_buffer(out, hseg::save_pgm(image->image));
  });
}

hseg_status hseg_segment(const hseg_image* image, const hseg_params* params, hseg_result** out) {
  return guarded([&] {
    require(image != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    hseg_params p;
    hseg_params_init(&p);
    if (params != nullptr) p = *params;
    hseg::SegmentationParams sp;
    require(p.top_area >= 1, "top_area must be at least 1");
    sp.top_area = static_cast<std::size_t>(p.top_area);
    sp.tolerance = p.tolerance;
    sp.descent.epsilon = p.epsilon;
    sp.descent.max_iters = p.max_iters;
    sp.descent.connectivity = hseg::connectivity_from_int(p.connectivity);
    sp.validate();
    auto handle = std::make_unique<hseg_result>();
    handle->pyramid = hseg::build_pyramid(image->image, sp.top_area);
    handle->result = hseg::segment(handle->pyramid, sp);
    *out = handle.release();
  });
}

void hseg_result_free(hseg_result* result) { delete result; }

int32_t hseg_result_level_count(const hseg_result* result) {
  return result ? static_cast<int32_t>(result->result.levels.size()) : 0;
}

int32_t hseg_result_top_level(const hseg_result* result) {
  return result ? result->pyramid.top_level() : -1;
}

hseg_status hseg_result_level_info(const hseg_result* result, int32_t level,
                                   hseg_level_info* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const auto& entry = level_entry(result, level);
    out->level = entry.level;
    out->width = entry.labels.width();
    out->height = entry.labels.height();
    out->region_count = entry.regions.size();
    out->uncertain_count = entry.uncertain_count;
    out->iterations_used = entry.iterations_used;
  });
}

hseg_status hseg_result_level_labels(const hseg_result* result, int32_t level,
                                     const uint32_t** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = level_entry(result, level).labels.cells().data();
  });
}

hseg_status hseg_result_labels_ppm(const hseg_result* result, int32_t level, hseg_buffer* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    fill_buffer(out, hseg::save_label_ppm(level_entry(result, level).labels));
  });
}

hseg_status hseg_result_means_pgm(const hseg_result* result, int32_t level, hseg_buffer* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const auto& entry = level_entry(result, level);
    fill_buffer(out, hseg::render_level_means(entry.labels, entry.regions));
  });
}

hseg_status hseg_result_registry_json(const hseg_result* result, hseg_buffer* out) {
  return guarded([&] {
    require(result != nullptr && out != nullptr, "null argument");
    fill_buffer(out, hseg::export_registry(result->result));
  });
}

hseg_status hseg_result_stats_json(const hseg_result* result, hseg_buffer* out) {
  return guarded([&] {
    require(result != nullptr && out != nullptr, "null argument");
    const auto reports = hseg::level_report(result->result, result->pyramid);
    fill_buffer(out, hseg::export_stats(reports));
  });
}

hseg_status hseg_reconstruct(const uint8_t* registry_json, size_t registry_size,
                             const uint8_t* labels_ppm, size_t labels_size, int32_t level,
                             hseg_buffer* out_pgm) {
  return guarded([&] {
    require(registry_json != nullptr && labels_ppm != nullptr && out_pgm != nullptr,
            "null argument");
    const auto registry = hseg::parse_registry(as_text(registry_json, registry_size));
    if (registry.find_level(level) == nullptr) {
      throw hseg::Error(hseg::ErrorCode::InvalidArgument,
                        "level " + std::to_string(level) + " not present in registry");
    }
    const auto labels = hseg::load_label_ppm({labels_ppm, labels_size});
    const auto img = hseg::reconstruct_from_registry(registry, labels, level);
    fill_buffer(out_pgm, hseg::save_pgm(img));
  });
}

hseg_status hseg_synth(const uint8_t* spec_json, size_t spec_size, hseg_buffer* out_scene_pgm,
                       hseg_buffer* out_truth, hseg_truth_format* out_truth_format) {
  return guarded([&] {
    require(spec_json != nullptr && out_scene_pgm != nullptr && out_truth != nullptr &&
                out_truth_format != nullptr,
            "null argument");
    const auto scene = hseg::generate_scene(hseg::parse_scene_spec(as_text(spec_json, spec_size)));
    const std::size_t n = hseg::region_count(scene.truth);
    hseg::Bytes truth;
    if (n <= 256) {
      hseg::GrayImage ids(scene.truth.width(), scene.truth.height());
      for (std::size_t i = 0; i < ids.area(); ++i) ids[i] = scene.truth[i];
      truth = hseg::save_pgm(ids);
      *out_truth_format = HSEG_TRUTH_PGM8;
    } else {
      require(n <= 65536, "ground truth has more than 65536 regions");
      truth.reserve(2 * scene.truth.area());
      for (auto id : scene.truth.cells()) {
        truth.push_back(static_cast<uint8_t>(id >> 8));
        truth.push_back(static_cast<uint8_t>(id));
      }
      *out_truth_format = HSEG_TRUTH_RAW16;
    }
    hseg_buffer scene_buf{nullptr, 0};
    fill_buffer(&scene_buf, hseg::save_pgm(scene.image));
    try {
      fill_buffer(out_truth, truth);
    } catch (...) {
      hseg_buffer_free(&scene_buf);
      throw;
    }
    *out_scene_pgm = scene_buf;
  });
}

hseg_status hseg_stats_table(const uint8_t* registry_json, size_t registry_size,
                             const uint8_t* stats_json, size_t stats_size,
                             hseg_buffer* out_text) {
  return guarded([&] {
    require(registry_json != nullptr && stats_json != nullptr && out_text != nullptr,
            "null argument");
    const auto registry = hseg::parse_registry(as_text(registry_json, registry_size));
    const auto stats = hseg::parse_stats(as_text(stats_json, stats_size));
    fill_buffer(out_text, hseg::format_stats_table(registry, stats));
  });
}

}  // extern "C"
