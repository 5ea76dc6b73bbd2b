#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "hseg/hseg.h"

int main(int argc, char** argv) {
  using namespace hseg::cli;

  CLI::App app{"Coarse-to-fine hierarchical image segmentation"};
  app.set_version_flag("--version", std::string(hseg_version()));
  app.require_subcommand(1);

  RunConfig cfg;
  std::string emit = "all";
  auto* segment = app.add_subcommand("segment", "Segment a PGM and write the per-level output tree");
  segment->add_option("--input", cfg.input, "Input PGM (P2 or P5, maxval <= 255)")->required();
  segment->add_option("--outdir", cfg.outdir, "Output directory")->required();
  segment->add_option("--top-area", cfg.top_area, "Stop shrinking at this many pixels")->capture_default_str();
  segment->add_option("--tolerance", cfg.tolerance, "Top-level growing tolerance (gray levels)")->capture_default_str();
  segment->add_option("--epsilon", cfg.epsilon, "Descent deviation threshold (gray levels)")->capture_default_str();
  segment->add_option("--max-iters", cfg.max_iters, "Refinement passes per level")->capture_default_str();
  segment->add_option("--connectivity", cfg.connectivity, "Reassignment neighborhood (4 or 8)")->capture_default_str();
  segment->add_option("--emit", emit, "Levels to write: all | top | base")->capture_default_str();

  std::filesystem::path registry;
  std::filesystem::path labels;
  std::filesystem::path output;
  int level = 0;
  auto* reconstruct = app.add_subcommand("reconstruct", "Rebuild a level's mean image from registry + labels");
  reconstruct->add_option("--registry", registry, "registry.json of a run")->required();
  reconstruct->add_option("--labels", labels, "L<k>_labels.ppm of the same run")->required();
  reconstruct->add_option("--level", level, "Level index k")->required();
  reconstruct->add_option("--output", output, "Output PGM")->required();

  std::filesystem::path spec;
  std::filesystem::path scene_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic scene and its ground truth");
  synth->add_option("--spec", spec, "Scene spec JSON")->required();
  synth->add_option("--output", scene_out, "Scene PGM path")->required();

  std::filesystem::path run_dir;
  auto* stats = app.add_subcommand("stats", "Print the per-level table of a completed run");
  stats->add_option("--run", run_dir, "Run output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 4;
  }

  if (*segment) {
    if (!parse_emit(emit, cfg.emit)) {
      std::cerr << "hseg: error: --emit must be all, top or base\n";
      return 4;
    }
    return cmd_segment(cfg, std::cerr);
  }
  if (*reconstruct) return cmd_reconstruct(registry, labels, level, output, std::cerr);
  if (*synth) return cmd_synth(spec, scene_out, std::cerr);
  return cmd_stats(run_dir, std::cout, std::cerr);
}
