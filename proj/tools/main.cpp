#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <nlohmann/json.hpp>

#include "pipeframe/bench.hpp"
#include "pipeframe/codec.hpp"
#include "pipeframe/config.hpp"
#include "pipeframe/error.hpp"
#include "pipeframe/metrics.hpp"
#include "pipeframe/selection.hpp"
#include "pipeframe/sim3.hpp"
#include "pipeframe/synth.hpp"

namespace {

using nlohmann::ordered_json;
using namespace pipeframe;

void write_output(const std::optional<std::string>& out_path, const ordered_json& doc) {
  if (out_path) {
    std::ofstream out(*out_path);
    if (!out) throw Error(Errc::io_error, "cannot write " + *out_path);
    out << doc.dump(2) << "\n";
  } else {
    std::cout << doc.dump(2) << "\n";
  }
}

// Shared select/bench configuration flags. File values override defaults,
// explicit flags override the file.
struct ConfigFlags {
  std::optional<std::string> config_file;
  CLI::Option* opt_t_flow = nullptr;
  CLI::Option* opt_t_baseline = nullptr;
  CLI::Option* opt_alpha = nullptr;
  CLI::Option* opt_t_angle = nullptr;
  CLI::Option* opt_stride = nullptr;
  CLI::Option* opt_seed = nullptr;
  CLI::Option* opt_strategy = nullptr;
  CLI::Option* opt_beta_normalized = nullptr;
  CLI::Option* opt_beta_raw = nullptr;
  CLI::Option* opt_max_keypoints = nullptr;
  CLI::Option* opt_fast_threshold = nullptr;
  CLI::Option* opt_match_max_distance = nullptr;

  double t_flow = 5.0, t_baseline = 10.0, alpha = 5.0, t_angle = 15.0;
  int stride = 1;
  std::uint64_t seed = 0;
  std::string strategy = "ours";
  bool beta_normalized = false;
  bool beta_raw = false;
  int max_keypoints = 500, fast_threshold = 20, match_max_distance = 64;

  void add_to(CLI::App* cmd, bool with_strategy) {
    cmd->add_option("--config", config_file, "flat key=value config file");
    opt_t_flow = cmd->add_option("--t-flow", t_flow, "min average flow magnitude, px");
    opt_t_baseline = cmd->add_option("--t-baseline", t_baseline, "min baseline, px");
    opt_alpha = cmd->add_option("--alpha", alpha, "max baseline = alpha * t-baseline");
    opt_t_angle = cmd->add_option("--t-angle", t_angle, "max angular difference, degrees");
    opt_stride = cmd->add_option("--stride", stride, "frame stride for the pair grid");
    opt_seed = cmd->add_option("--seed", seed, "RNG seed (RANSAC and random strategy)");
    if (with_strategy)
      opt_strategy = cmd->add_option("--strategy", strategy,
                                     "ours|random|first-last|quartiles");
    opt_beta_normalized =
        cmd->add_flag("--beta-normalized", beta_normalized,
                      "score beta / (alpha*t-baseline) instead of raw pixels");
    opt_beta_raw = cmd->add_flag("--beta-raw-matches", beta_raw,
                                 "average beta over raw matches instead of RANSAC inliers");
    opt_max_keypoints = cmd->add_option("--max-keypoints", max_keypoints, "keypoints per frame");
    opt_fast_threshold = cmd->add_option("--fast-threshold", fast_threshold, "FAST threshold");
    opt_match_max_distance =
        cmd->add_option("--match-max-distance", match_max_distance, "Hamming accept threshold");
  }

  SelectionConfig resolve() const {
    SelectionConfig cfg;
    if (config_file) cfg = parse_config(*config_file);
    if (opt_t_flow->count()) cfg.t_flow = t_flow;
    if (opt_t_baseline->count()) cfg.t_baseline = t_baseline;
    if (opt_alpha->count()) cfg.alpha = alpha;
    if (opt_t_angle->count()) cfg.t_angle = t_angle;
    if (opt_stride->count()) cfg.frame_stride = stride;
    if (opt_seed->count()) cfg.rng_seed = seed;
    if (opt_strategy && opt_strategy->count()) {
      const auto s = strategy_from_name(strategy);
      if (!s) throw Error(Errc::invalid_config, "unknown strategy '" + strategy + "'");
      cfg.strategy = *s;
    }
    if (opt_beta_normalized->count()) cfg.beta_normalized = true;
    if (opt_beta_raw->count()) cfg.beta_use_inliers = false;
    if (opt_max_keypoints->count()) cfg.features.max_count = max_keypoints;
    if (opt_fast_threshold->count()) cfg.features.fast_threshold = fast_threshold;
    if (opt_match_max_distance->count()) cfg.features.match_max_distance = match_max_distance;
    cfg.validate();
    return cfg;
  }
};

int run(int argc, char** argv) {
  CLI::App app{"informative frame-pair selection for pipe-like interiors"};
  app.require_subcommand(1);

  // select
  auto* sel = app.add_subcommand("select", "pick the most informative frame pair");
  std::string sel_frames, sel_pattern = "*";
  std::optional<std::string> sel_out;
  ConfigFlags sel_flags;
  sel->add_option("--frames", sel_frames, "directory of PNG/PGM frames")->required();
  sel->add_option("--pattern", sel_pattern, "filename glob (default *)");
  sel->add_option("--out", sel_out, "output JSON path (default stdout)");
  sel_flags.add_to(sel, true);
  sel->callback([&]() {
    const SelectionConfig cfg = sel_flags.resolve();
    const FrameSequence seq = load_sequence(sel_frames, sel_pattern);
    const SelectionResult result = select(seq, cfg);
    write_output(sel_out, selection_result_to_json(result, cfg));
    if (sel_out) {
      if (result.chosen)
        std::printf("chosen pair: (%d, %d)\n", result.chosen->first, result.chosen->second);
      else
        std::printf("no feasible pair\n");
    }
  });

  // align
  auto* aln = app.add_subcommand("align", "Sim(3)-align a GT trajectory to a predicted one");
  std::string aln_gt, aln_pred;
  std::optional<std::string> aln_out;
  bool aln_no_normalize = false;
  aln->add_option("--gt", aln_gt, "ground-truth pose JSON")->required();
  aln->add_option("--pred", aln_pred, "predicted pose JSON")->required();
  aln->add_flag("--no-normalize-gt", aln_no_normalize, "skip the GT normalization pre-step");
  aln->add_option("--out", aln_out, "output JSON path (default stdout)");
  aln->callback([&]() {
    const auto gt = load_poses(aln_gt);
    const auto pred = load_poses(aln_pred);
    const AlignmentReport report = align_trajectories(gt, pred, !aln_no_normalize);
    ordered_json j;
    j["version"] = kVersion;
    j["normalize_gt"] = !aln_no_normalize;
    j["s"] = report.transform.s;
    std::vector<double> rot(9);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) rot[std::size_t(3 * r + c)] = report.transform.R(r, c);
    j["R"] = rot;
    j["t"] = std::vector<double>{report.transform.t.x(), report.transform.t.y(),
                                 report.transform.t.z()};
    j["rmse"] = report.rmse;
    j["residuals"] = report.per_point_residuals;
    j["collinear_warning"] = report.collinear_warning;
    write_output(aln_out, j);
  });

  // metrics
  auto* met = app.add_subcommand("metrics", "PSNR/SSIM between two images");
  std::string met_ref, met_test;
  std::optional<std::string> met_out;
  met->add_option("--ref", met_ref, "reference image")->required();
  met->add_option("--test", met_test, "image under test")->required();
  met->add_option("--out", met_out, "output JSON path (default stdout)");
  met->callback([&]() {
    const Image8 ref = read_image(met_ref);
    const Image8 test = read_image(met_test);
    const double p = psnr(ref, test);
    const double s = ssim(ref, test);
    ordered_json j;
    j["version"] = kVersion;
    j["ref"] = met_ref;
    j["test"] = met_test;
    j["psnr"] = std::isinf(p) ? ordered_json("inf") : ordered_json(p);
    j["ssim"] = s;
    j["lpips"] = nullptr; // reserved for external tools
    write_output(met_out, j);
  });

  // synth
  auto* syn = app.add_subcommand("synth", "render a synthetic culvert sequence");
  std::string syn_preset = "dolly", syn_size = "256x144", syn_out_dir;
  int syn_frames = 10;
  double syn_radius = 1.0, syn_length = 20.0, syn_focal = 160.0;
  double syn_step = 0.25, syn_deg_step = 2.0, syn_z_start = 1.0;
  double syn_texture_scale = 4.0, syn_falloff = 0.05;
  std::uint64_t syn_seed = 1;
  bool syn_depth = false;
  syn->add_option("--preset", syn_preset, "dolly|pan|tilt")->check(CLI::IsMember({"dolly", "pan", "tilt"}));
  syn->add_option("--frames", syn_frames, "number of frames");
  syn->add_option("--size", syn_size, "WxH, e.g. 256x144");
  syn->add_option("--radius", syn_radius, "tube radius, m");
  syn->add_option("--length", syn_length, "tube length, m");
  syn->add_option("--focal", syn_focal, "focal length, px");
  syn->add_option("--step", syn_step, "dolly/tilt step, m per frame");
  syn->add_option("--deg-step", syn_deg_step, "pan/tilt angle step, degrees per frame");
  syn->add_option("--z-start", syn_z_start, "first camera z, m");
  syn->add_option("--texture-scale", syn_texture_scale, "noise cycles per meter");
  syn->add_option("--falloff", syn_falloff, "headlamp inverse-square coefficient");
  syn->add_option("--seed", syn_seed, "texture seed");
  syn->add_flag("--depth", syn_depth, "also write float32 depth maps");
  syn->add_option("--out", syn_out_dir, "output directory")->required();
  syn->callback([&]() {
    SceneConfig cfg;
    cfg.radius = syn_radius;
    cfg.length = syn_length;
    cfg.texture_seed = syn_seed;
    cfg.texture_scale = syn_texture_scale;
    cfg.light_falloff = syn_falloff;
    cfg.focal = syn_focal;
    if (std::sscanf(syn_size.c_str(), "%dx%d", &cfg.width, &cfg.height) != 2)
      throw Error(Errc::invalid_config, "--size must look like 256x144");
    if (syn_preset == "dolly")
      cfg.trajectory = dolly_trajectory(syn_frames, syn_z_start, syn_step);
    else if (syn_preset == "pan")
      cfg.trajectory = pan_trajectory(syn_frames, syn_z_start, syn_deg_step);
    else
      cfg.trajectory = tilt_trajectory(syn_frames, syn_z_start, syn_step, syn_deg_step);

    const RenderedScene scene = render_scene(cfg, syn_depth);
    std::filesystem::create_directories(syn_out_dir);
    const std::filesystem::path dir(syn_out_dir);
    for (const Frame& f : scene.frames.frames) {
      char name[32];
      std::snprintf(name, sizeof name, "frame_%03d.png", f.index);
      write_png(dir / name, f);
      if (syn_depth) {
        std::snprintf(name, sizeof name, "frame_%03d.depth", f.index);
        write_depth(dir / name, scene.depth_maps[std::size_t(f.index)], f.width, f.height);
      }
    }
    save_poses(dir / "poses.json", scene.poses);
    std::printf("wrote %d frames to %s\n", scene.frames.size(), syn_out_dir.c_str());
  });

  // bench
  auto* ben = app.add_subcommand("bench", "compare selection strategies on one sequence");
  std::string ben_frames, ben_pattern = "*", ben_strategies = "ours,random,first-last,quartiles";
  std::optional<std::string> ben_out, ben_renders;
  ConfigFlags ben_flags;
  ben->add_option("--frames", ben_frames, "directory of PNG/PGM frames")->required();
  ben->add_option("--pattern", ben_pattern, "filename glob (default *)");
  ben->add_option("--strategies", ben_strategies, "comma-separated strategy list");
  ben->add_option("--renders", ben_renders,
                  "directory of render_*/ref_* pairs (flat or per-strategy subdirs)");
  ben->add_option("--out", ben_out, "output JSON path (default stdout)");
  ben_flags.add_to(ben, false);
  ben->callback([&]() {
    const SelectionConfig cfg = ben_flags.resolve();
    std::vector<Strategy> strategies;
    std::stringstream ss(ben_strategies);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto s = strategy_from_name(item);
      if (!s) throw Error(Errc::invalid_config, "unknown strategy '" + item + "'");
      strategies.push_back(*s);
    }
    if (strategies.empty()) throw Error(Errc::invalid_config, "no strategies requested");

    const FrameSequence seq = load_sequence(ben_frames, ben_pattern);
    std::optional<std::filesystem::path> renders;
    if (ben_renders) renders = *ben_renders;
    const BenchReport report = bench(seq, strategies, cfg, renders);
    std::cout << bench_table(report);
    if (ben_out) write_output(ben_out, bench_to_json(report, cfg));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2; // stable usage-error code
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
