#include "commands.hpp"

#include <unistd.h>

#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <system_error>
#include <utility>
#include <vector>

#include "hseg/hseg.h"

namespace hseg::cli {
namespace fs = std::filesystem;
namespace {

using Bytes = std::vector<std::uint8_t>;

struct OutputFile {
  std::string name;
  Bytes bytes;
};

// Owns a library buffer for the duration of a scope.
class Buffer {
 public:
  Buffer() = default;
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  ~Buffer() { hseg_buffer_free(&buf_); }

  hseg_buffer* get() { return &buf_; }
  Bytes bytes() const { return Bytes(buf_.data, buf_.data + buf_.size); }

 private:
  hseg_buffer buf_{nullptr, 0};
};

struct ImageHandle {
  hseg_image* ptr = nullptr;
  ~ImageHandle() { hseg_image_free(ptr); }
};

struct ResultHandle {
  hseg_result* ptr = nullptr;
  ~ResultHandle() { hseg_result_free(ptr); }
};

int report(std::ostream& err, int status, const std::string& message) {
  err << "hseg: error: " << message << '\n';
  return status;
}

int report_library(std::ostream& err, hseg_status status) {
  return report(err, static_cast<int>(status), hseg_last_error());
}

std::optional<Bytes> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) return std::nullopt;
  return bytes;
}

bool write_file(const fs::path& path, const Bytes& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.close();
  return static_cast<bool>(out);
}

// Writes every file into a private staging directory under `dir`, then
// renames them into place. On failure nothing new is left behind.
int commit(const fs::path& dir, const std::vector<OutputFile>& files, std::ostream& err) {
  std::error_code ec;
  const fs::path target = dir.empty() ? fs::path(".") : dir;
  const bool created = !fs::exists(target, ec);
  fs::create_directories(target, ec);
  if (ec) return report(err, 2, "cannot create directory " + target.string() + ": " + ec.message());

  const fs::path staging = target / (".hseg-staging-" + std::to_string(::getpid()));
  auto rollback = [&](const std::vector<fs::path>& moved) {
    std::error_code ignore;
    for (const auto& p : moved) fs::remove(p, ignore);
    fs::remove_all(staging, ignore);
    if (created) fs::remove(target, ignore);
  };

  fs::create_directory(staging, ec);
  if (ec) {
    rollback({});
    return report(err, 2, "cannot create staging directory: " + ec.message());
  }
  for (const auto& f : files) {
    if (!write_file(staging / f.name, f.bytes)) {
      rollback({});
      return report(err, 2, "cannot write " + (staging / f.name).string());
    }
  }
  std::vector<fs::path> moved;
  for (const auto& f : files) {
    fs::rename(staging / f.name, target / f.name, ec);
    if (ec) {
      rollback(moved);
      return report(err, 2, "cannot move " + f.name + " into place: " + ec.message());
    }
    moved.push_back(target / f.name);
  }
  fs::remove(staging, ec);
  return 0;
}

std::string level_file(const char* prefix, int level, const char* suffix) {
  return std::string(prefix) + std::to_string(level) + suffix;
}

}  // namespace

bool parse_emit(const std::string& text, Emit& out) {
  if (text == "all") out = Emit::All;
  else if (text == "top") out = Emit::Top;
  else if (text == "base") out = Emit::Base;
  else return false;
  return true;
}

int cmd_segment(const RunConfig& cfg, std::ostream& err) {
  if (cfg.input.empty() || cfg.outdir.empty()) return report(err, 4, "--input and --outdir are required");
  if (cfg.top_area < 1) return report(err, 4, "--top-area must be at least 1");
  if (!(cfg.tolerance >= 0.0)) return report(err, 4, "--tolerance must be non-negative");
  if (!(cfg.epsilon >= 0.0)) return report(err, 4, "--epsilon must be non-negative");
  if (cfg.max_iters < 1) return report(err, 4, "--max-iters must be at least 1");
  if (cfg.connectivity != 4 && cfg.connectivity != 8) return report(err, 4, "--connectivity must be 4 or 8");

  const auto input = read_file(cfg.input);
  if (!input) return report(err, 2, "cannot read " + cfg.input.string());

  ImageHandle image;
  if (auto s = hseg_image_load_pgm(input->data(), input->size(), &image.ptr); s != HSEG_OK) {
    return report_library(err, s);
  }
  hseg_params params;
  hseg_params_init(&params);
  params.top_area = cfg.top_area;
  params.tolerance = cfg.tolerance;
  params.epsilon = cfg.epsilon;
  params.max_iters = cfg.max_iters;
  params.connectivity = cfg.connectivity;

  ResultHandle result;
  if (auto s = hseg_segment(image.ptr, &params, &result.ptr); s != HSEG_OK) {
    return report_library(err, s);
  }

  std::vector<int> levels;
  const int top = hseg_result_top_level(result.ptr);
  if (cfg.emit == Emit::All) {
    for (int l = top; l >= 0; --l) levels.push_back(l);
  } else {
    levels.push_back(cfg.emit == Emit::Top ? top : 0);
  }

  std::vector<OutputFile> files;
  for (int level : levels) {
    Buffer labels;
    Buffer means;
    if (auto s = hseg_result_labels_ppm(result.ptr, level, labels.get()); s != HSEG_OK) {
      return report_library(err, s);
    }
    if (auto s = hseg_result_means_pgm(result.ptr, level, means.get()); s != HSEG_OK) {
      return report_library(err, s);
    }
    files.push_back({level_file("L", level, "_labels.ppm"), labels.bytes()});
    files.push_back({level_file("L", level, "_means.pgm"), means.bytes()});
  }
  Buffer registry;
  Buffer stats;
  if (auto s = hseg_result_registry_json(result.ptr, registry.get()); s != HSEG_OK) {
    return report_library(err, s);
  }
  if (auto s = hseg_result_stats_json(result.ptr, stats.get()); s != HSEG_OK) {
    return report_library(err, s);
  }
  files.push_back({"registry.json", registry.bytes()});
  files.push_back({"stats.json", stats.bytes()});
  return commit(cfg.outdir, files, err);
}

int cmd_reconstruct(const fs::path& registry, const fs::path& labels, int level,
                    const fs::path& output, std::ostream& err) {
  if (output.empty()) return report(err, 4, "--output is required");
  const auto registry_bytes = read_file(registry);
  if (!registry_bytes) return report(err, 2, "cannot read " + registry.string());
  const auto label_bytes = read_file(labels);
  if (!label_bytes) return report(err, 2, "cannot read " + labels.string());

  Buffer pgm;
  if (auto s = hseg_reconstruct(registry_bytes->data(), registry_bytes->size(), label_bytes->data(),
                                label_bytes->size(), level, pgm.get());
      s != HSEG_OK) {
    return report_library(err, s);
  }
  return commit(output.parent_path(), {{output.filename().string(), pgm.bytes()}}, err);
}

int cmd_synth(const fs::path& spec, const fs::path& output, std::ostream& err) {
  if (output.empty() || !output.has_filename()) return report(err, 4, "--output must name a file");
  const auto spec_bytes = read_file(spec);
  if (!spec_bytes) return report(err, 2, "cannot read " + spec.string());

  Buffer scene;
  Buffer truth;
  hseg_truth_format format = HSEG_TRUTH_PGM8;
  if (auto s = hseg_synth(spec_bytes->data(), spec_bytes->size(), scene.get(), truth.get(), &format);
      s != HSEG_OK) {
    // A spec that parses as JSON but breaks the scene rules is an invalid parameter.
    return report_library(err, s == HSEG_ERR_PARSE ? HSEG_ERR_INVALID_ARGUMENT : s);
  }
  const std::string truth_name =
      output.stem().string() + (format == HSEG_TRUTH_PGM8 ? "_truth.pgm" : "_truth.u16");
  return commit(output.parent_path(),
                {{output.filename().string(), scene.bytes()}, {truth_name, truth.bytes()}}, err);
}

int cmd_stats(const fs::path& run_dir, std::ostream& out, std::ostream& err) {
  const auto registry = read_file(run_dir / "registry.json");
  const auto stats = read_file(run_dir / "stats.json");
  if (!registry || !stats) {
    return report(err, 4, "incomplete run directory " + run_dir.string() +
                              " (registry.json and stats.json required)");
  }
  Buffer table;
  if (auto s = hseg_stats_table(registry->data(), registry->size(), stats->data(), stats->size(),
                                table.get());
      s != HSEG_OK) {
    return report_library(err, s);
  }
  const Bytes text = table.bytes();
  out.write(reinterpret_cast<const char*>(text.data()), static_cast<std::streamsize>(text.size()));
  return 0;
}

}  // namespace hseg::cli
