#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace hseg::cli {

enum class Emit { All, Top, Base };

/// Parses "all" | "top" | "base"; returns false otherwise.
bool parse_emit(const std::string& text, Emit& out);

struct RunConfig {
  std::filesystem::path input;
  std::filesystem::path outdir;
  std::uint64_t top_area = 256;
  double tolerance = 12.0;
  double epsilon = 12.0;
  int max_iters = 10;
  int connectivity = 4;
  Emit emit = Emit::All;
};

// Each command returns the process exit status (0, or 2/3/4/5 on failure)
// and writes diagnostics to `err`. Outputs appear only on success.

int cmd_segment(const RunConfig& cfg, std::ostream& err);

int cmd_reconstruct(const std::filesystem::path& registry, const std::filesystem::path& labels,
                    int level, const std::filesystem::path& output, std::ostream& err);

/// Writes the scene to `output` and the ground truth next to it as
/// <stem>_truth.pgm (ids < 256) or <stem>_truth.u16 (16-bit big-endian raw).
int cmd_synth(const std::filesystem::path& spec, const std::filesystem::path& output,
              std::ostream& err);

int cmd_stats(const std::filesystem::path& run_dir, std::ostream& out, std::ostream& err);

}  // namespace hseg::cli
