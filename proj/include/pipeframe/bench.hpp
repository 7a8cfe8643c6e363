#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pipeframe/metrics.hpp"
#include "pipeframe/selection.hpp"

namespace pipeframe {

struct ViewMetrics {
  std::string render;
  std::string reference;
  double psnr = 0.0; // may be +infinity
  double ssim = 0.0;
};

struct StrategyRow {
  Strategy strategy = Strategy::ours;
  SelectionResult result;
  PairStats chosen_stats; // stats of the chosen pair (full diagnostics)
  std::vector<ViewMetrics> views; // empty when no renders were supplied
  double select_ms = 0.0;
};

struct BenchReport {
  std::vector<StrategyRow> rows;
  double feature_cache_ms = 0.0;
};

// Runs select() once per strategy over a shared feature cache. When
// renders_dir is given, PSNR/SSIM per held-out view are computed from
// render_*/ref_* file pairs found either in renders_dir/<strategy>/ or, as a
// fallback shared by all strategies, in renders_dir itself.
BenchReport bench(const FrameSequence& seq, const std::vector<Strategy>& strategies,
                  const SelectionConfig& config,
                  const std::optional<std::filesystem::path>& renders_dir = std::nullopt);

// JSON with timing under a single "timing" subtree so determinism checks can
// drop it; byte-identical otherwise for identical inputs and seed.
nlohmann::ordered_json bench_to_json(const BenchReport& report, const SelectionConfig& config);

// Plain-text table, one row per strategy.
std::string bench_table(const BenchReport& report);

} // namespace pipeframe
