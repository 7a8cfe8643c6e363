#include "pipeframe/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "pipeframe/codec.hpp"
#include "pipeframe/config.hpp"
#include "pipeframe/error.hpp"

namespace pipeframe {

using nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<std::string> sorted_files_with_prefix(const std::filesystem::path& dir,
                                                  const std::string& prefix) {
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind(prefix, 0) == 0) names.push_back(name);
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::vector<ViewMetrics> score_renders(const std::filesystem::path& dir) {
  const auto renders = sorted_files_with_prefix(dir, "render");
  const auto refs = sorted_files_with_prefix(dir, "ref");
  if (renders.size() != refs.size())
    throw Error(Errc::count_mismatch, "render/ref file counts differ in " + dir.string());

  std::vector<ViewMetrics> views;
  views.reserve(renders.size());
  for (std::size_t k = 0; k < renders.size(); ++k) {
    const Image8 render = read_image(dir / renders[k]);
    const Image8 ref = read_image(dir / refs[k]);
    ViewMetrics vm;
    vm.render = renders[k];
    vm.reference = refs[k];
    vm.psnr = psnr(ref, render);
    vm.ssim = ssim(ref, render);
    views.push_back(std::move(vm));
  }
  return views;
}

ordered_json finite_or_string(double v) {
  // JSON has no infinity; PSNR of identical images serializes as "inf".
  if (std::isinf(v)) return ordered_json(v > 0 ? "inf" : "-inf");
  return ordered_json(v);
}

} // namespace

BenchReport bench(const FrameSequence& seq, const std::vector<Strategy>& strategies,
                  const SelectionConfig& config,
                  const std::optional<std::filesystem::path>& renders_dir) {
  BenchReport report;

  const auto t_cache = Clock::now();
  FrameFeatureCache cache(seq, config.features, config.flow);
  report.feature_cache_ms = ms_since(t_cache);

  for (Strategy strategy : strategies) {
    SelectionConfig run_config = config;
    run_config.strategy = strategy;

    StrategyRow row;
    row.strategy = strategy;
    const auto t_select = Clock::now();
    row.result = select(seq, run_config, cache);
    row.select_ms = ms_since(t_select);

    if (row.result.chosen) {
      const auto [i, j] = *row.result.chosen;
      if (strategy == Strategy::ours) {
        // Re-measure with full diagnostics; the gated pass skips flow on
        // rejected pairs, but the chosen pair is feasible so values agree.
        row.chosen_stats = evaluate_pair(seq, i, j, run_config, cache, true);
      } else {
        row.chosen_stats = row.result.stats.front();
      }
    }

    if (renders_dir) {
      const std::filesystem::path per_strategy = *renders_dir / strategy_name(strategy);
      if (std::filesystem::is_directory(per_strategy))
        row.views = score_renders(per_strategy);
      else if (std::filesystem::is_directory(*renders_dir))
        row.views = score_renders(*renders_dir);
      else
        throw Error(Errc::io_error, "renders directory not found: " + renders_dir->string());
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

ordered_json bench_to_json(const BenchReport& report, const SelectionConfig& config) {
  ordered_json j;
  j["version"] = kVersion;
  j["config"] = config_to_json(config);
  j["strategies"] = ordered_json::array();
  ordered_json timing;
  timing["feature_cache_ms"] = report.feature_cache_ms;
  timing["select_ms"] = ordered_json::object();

  for (const StrategyRow& row : report.rows) {
    ordered_json jr;
    jr["strategy"] = strategy_name(row.strategy);
    if (row.result.chosen)
      jr["chosen"] = ordered_json::array({row.result.chosen->first, row.result.chosen->second});
    else
      jr["chosen"] = nullptr;
    jr["feasible"] = row.result.chosen && row.chosen_stats.feasible;
    jr["stats"] = row.result.chosen ? pair_stats_to_json(row.chosen_stats) : ordered_json(nullptr);
    if (!row.views.empty()) {
      double psnr_sum = 0.0, ssim_sum = 0.0;
      ordered_json views = ordered_json::array();
      for (const ViewMetrics& vm : row.views) {
        ordered_json jv;
        jv["render"] = vm.render;
        jv["ref"] = vm.reference;
        jv["psnr"] = finite_or_string(vm.psnr);
        jv["ssim"] = vm.ssim;
        views.push_back(jv);
        psnr_sum += vm.psnr;
        ssim_sum += vm.ssim;
      }
      jr["views"] = views;
      jr["psnr_mean"] = finite_or_string(psnr_sum / double(row.views.size()));
      jr["ssim_mean"] = ssim_sum / double(row.views.size());
    } else {
      jr["views"] = nullptr;
      jr["psnr_mean"] = nullptr;
      jr["ssim_mean"] = nullptr;
    }
    j["strategies"].push_back(jr);
    timing["select_ms"][strategy_name(row.strategy)] = row.select_ms;
  }
  j["timing"] = timing;
  return j;
}

std::string bench_table(const BenchReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %-8s %-9s %9s %9s %9s %8s %10s %10s\n", "strategy",
                "chosen", "feasible", "F", "beta", "theta", "matches", "psnr", "ssim");
  out << line;
  for (const StrategyRow& row : report.rows) {
    std::string chosen = "-";
    if (row.result.chosen)
      chosen = "(" + std::to_string(row.result.chosen->first) + "," +
               std::to_string(row.result.chosen->second) + ")";
    const PairStats& s = row.chosen_stats;
    auto num = [](const std::optional<double>& v) {
      if (!v) return std::string("n/a");
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", *v);
      return std::string(buf);
    };
    std::string psnr_str = "n/a", ssim_str = "n/a";
    if (!row.views.empty()) {
      double psnr_sum = 0.0, ssim_sum = 0.0;
      for (const ViewMetrics& vm : row.views) {
        psnr_sum += vm.psnr;
        ssim_sum += vm.ssim;
      }
      char buf[32];
      if (std::isinf(psnr_sum))
        psnr_str = "inf";
      else {
        std::snprintf(buf, sizeof buf, "%.3f", psnr_sum / double(row.views.size()));
        psnr_str = buf;
      }
      std::snprintf(buf, sizeof buf, "%.4f", ssim_sum / double(row.views.size()));
      ssim_str = buf;
    }
    std::snprintf(line, sizeof line, "%-12s %-8s %-9s %9s %9s %9s %8d %10s %10s\n",
                  strategy_name(row.strategy), chosen.c_str(),
                  row.result.chosen && s.feasible ? "yes" : "no", num(s.flow_mean).c_str(),
                  num(s.beta).c_str(), num(s.theta).c_str(), s.match_count, psnr_str.c_str(),
                  ssim_str.c_str());
    out << line;
  }
  return out.str();
}

} // namespace pipeframe
