/*
 * hseg: coarse-to-fine hierarchical segmentation, C interface.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an hseg_status; on
 * failure hseg_last_error() describes the cause for the calling thread.
 * Buffers handed out by the library are released with hseg_buffer_free.
 */
#ifndef HSEG_H_
#define HSEG_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(HSEG_BUILDING_LIBRARY)
#    define HSEG_API __declspec(dllexport)
#  else
#    define HSEG_API __declspec(dllimport)
#  endif
#else
#  define HSEG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values match the CLI exit codes. */
typedef enum hseg_status {
  HSEG_OK = 0,
  HSEG_ERR_INTERNAL = 1,
  HSEG_ERR_IO = 2,
  HSEG_ERR_PARSE = 3,
  HSEG_ERR_INVALID_ARGUMENT = 4,
  HSEG_ERR_CONSISTENCY = 5
} hseg_status;

typedef struct hseg_image hseg_image;
typedef struct hseg_result hseg_result;

typedef struct hseg_buffer {
  uint8_t* data;
  size_t size;
} hseg_buffer;

typedef struct hseg_params {
  uint64_t top_area;    /* stop shrinking once area <= top_area (>= 1) */
  double tolerance;     /* top-level region growing admission, gray levels */
  double epsilon;       /* descent deviation threshold, gray levels */
  int32_t max_iters;    /* refinement passes per level (>= 1) */
  int32_t connectivity; /* 4 or 8, reassignment neighborhood */
} hseg_params;

typedef struct hseg_level_info {
  int32_t level;
  int32_t width;
  int32_t height;
  uint64_t region_count;
  uint64_t uncertain_count;
  int32_t iterations_used;
} hseg_level_info;

typedef enum hseg_truth_format {
  HSEG_TRUTH_PGM8 = 0,  /* P5 graymap, id = pixel value */
  HSEG_TRUTH_RAW16 = 1  /* headerless row-major 16-bit big-endian ids */
} hseg_truth_format;

HSEG_API const char* hseg_version(void);
HSEG_API const char* hseg_last_error(void);

HSEG_API void hseg_params_init(hseg_params* params);
HSEG_API void hseg_buffer_free(hseg_buffer* buffer);

/* Images */
HSEG_API hseg_status hseg_image_load_pgm(const uint8_t* bytes, size_t size,
                                         hseg_image** out);
HSEG_API hseg_status hseg_image_create(int32_t width, int32_t height,
                                       const double* values, hseg_image** out);
HSEG_API void hseg_image_free(hseg_image* image);
HSEG_API int32_t hseg_image_width(const hseg_image* image);
HSEG_API int32_t hseg_image_height(const hseg_image* image);
HSEG_API const double* hseg_image_data(const hseg_image* image);
HSEG_API hseg_status hseg_image_save_pgm(const hseg_image* image, hseg_buffer* out);

/* Segmentation */
HSEG_API hseg_status hseg_segment(const hseg_image* image, const hseg_params* params,
                                  hseg_result** out);
HSEG_API void hseg_result_free(hseg_result* result);
HSEG_API int32_t hseg_result_level_count(const hseg_result* result);
/* Index of the top pyramid level; levels run top_level..0. */
HSEG_API int32_t hseg_result_top_level(const hseg_result* result);
HSEG_API hseg_status hseg_result_level_info(const hseg_result* result, int32_t level,
                                            hseg_level_info* out);
/* Borrowed pointer, valid until hseg_result_free; width*height ids. */
HSEG_API hseg_status hseg_result_level_labels(const hseg_result* result, int32_t level,
                                              const uint32_t** out);
HSEG_API hseg_status hseg_result_labels_ppm(const hseg_result* result, int32_t level,
                                            hseg_buffer* out);
HSEG_API hseg_status hseg_result_means_pgm(const hseg_result* result, int32_t level,
                                           hseg_buffer* out);
HSEG_API hseg_status hseg_result_registry_json(const hseg_result* result,
                                               hseg_buffer* out);
HSEG_API hseg_status hseg_result_stats_json(const hseg_result* result, hseg_buffer* out);

/* Rebuilds a level's mean image from registry.json and the level's label PPM
 * alone. HSEG_ERR_INVALID_ARGUMENT when the level is absent from the registry,
 * HSEG_ERR_CONSISTENCY when labels and registry disagree. */
HSEG_API hseg_status hseg_reconstruct(const uint8_t* registry_json, size_t registry_size,
                                      const uint8_t* labels_ppm, size_t labels_size,
                                      int32_t level, hseg_buffer* out_pgm);

/* Generates a scene from its JSON spec. */
HSEG_API hseg_status hseg_synth(const uint8_t* spec_json, size_t spec_size,
                                hseg_buffer* out_scene_pgm, hseg_buffer* out_truth,
                                hseg_truth_format* out_truth_format);

/* Per-level table built from a run's registry.json and stats.json. */
HSEG_API hseg_status hseg_stats_table(const uint8_t* registry_json, size_t registry_size,
                                      const uint8_t* stats_json, size_t stats_size,
                                      hseg_buffer* out_text);

#ifdef __cplusplus
}
#endif

#endif /* HSEG_H_ */
