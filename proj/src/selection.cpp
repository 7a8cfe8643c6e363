#include "pipeframe/selection.hpp"

#include <cmath>

#include "pipeframe/error.hpp"
#include "pipeframe/rng.hpp"

namespace pipeframe {

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::ours: return "ours";
    case Strategy::random: return "random";
    case Strategy::first_last: return "first_last";
    case Strategy::quartiles: return "quartiles";
  }
  return "?";
}

std::optional<Strategy> strategy_from_name(const std::string& name) {
  if (name == "ours") return Strategy::ours;
  if (name == "random") return Strategy::random;
  if (name == "first_last" || name == "first-last") return Strategy::first_last;
  if (name == "quartiles") return Strategy::quartiles;
  return std::nullopt;
}

const char* rejection_reason_name(RejectionReason r) {
  switch (r) {
    case RejectionReason::none: return "none";
    case RejectionReason::too_few_matches: return "too_few_matches";
    case RejectionReason::flow_below_threshold: return "flow_below_threshold";
    case RejectionReason::baseline_out_of_range: return "baseline_out_of_range";
    case RejectionReason::angle_above_threshold: return "angle_above_threshold";
    case RejectionReason::geometry_failed: return "geometry_failed";
  }
  return "?";
}

void SelectionConfig::validate() const {
  if (t_flow <= 0.0) throw Error(Errc::invalid_config, "t_flow must be positive");
  if (t_baseline <= 0.0) throw Error(Errc::invalid_config, "t_baseline must be positive");
  if (t_angle <= 0.0) throw Error(Errc::invalid_config, "t_angle must be positive");
  if (alpha < 1.0) throw Error(Errc::invalid_config, "alpha must be >= 1");
  if (frame_stride < 1) throw Error(Errc::invalid_config, "frame_stride must be >= 1");
  if (features.max_count < 1) throw Error(Errc::invalid_config, "max keypoint count must be >= 1");
  if (features.fast_threshold < 1) throw Error(Errc::invalid_config, "fast_threshold must be >= 1");
  if (features.match_max_distance < 0 || features.match_max_distance > 256)
    throw Error(Errc::invalid_config, "match_max_distance must be in [0, 256]");
  if (flow.window_radius < 1) throw Error(Errc::invalid_config, "flow window radius must be >= 1");
  if (flow.pyramid_levels < 1) throw Error(Errc::invalid_config, "flow pyramid levels must be >= 1");
  if (flow.max_iterations < 1) throw Error(Errc::invalid_config, "flow iterations must be >= 1");
  if (flow.epsilon <= 0.0) throw Error(Errc::invalid_config, "flow epsilon must be positive");
  if (flow.min_tracked < 0) throw Error(Errc::invalid_config, "flow min_tracked must be >= 0");
  if (ransac.inlier_threshold <= 0.0)
    throw Error(Errc::invalid_config, "ransac threshold must be positive");
  if (ransac.confidence <= 0.0 || ransac.confidence >= 1.0)
    throw Error(Errc::invalid_config, "ransac confidence must be in (0, 1)");
  if (ransac.max_iterations < 1) throw Error(Errc::invalid_config, "ransac iterations must be >= 1");
}

FrameFeatureCache::FrameFeatureCache(const FrameSequence& seq, const FeatureParams& features,
                                     const FlowParams& flow)
    : seq_(seq), features_(features), flow_(flow), entries_(seq.frames.size()) {}

const FrameFeatureCache::Entry& FrameFeatureCache::get(int frame_index) {
  auto& slot = entries_.at(std::size_t(frame_index));
  if (!slot) {
    auto entry = std::make_unique<Entry>();
    const Frame& frame = seq_.frames[std::size_t(frame_index)];
    entry->keypoints = detect_keypoints(frame, features_.max_count, features_.fast_threshold);
    entry->descriptors = compute_descriptors(frame, entry->keypoints);
    entry->pyramid = build_pyramid(frame, flow_.pyramid_levels);
    slot = std::move(entry);
  }
  return *slot;
}

double score_pair(double beta, double theta_deg, const SelectionConfig& config) {
  const double beta_term =
      config.beta_normalized ? beta / (config.alpha * config.t_baseline) : beta;
  return beta_term + (1.0 - theta_deg / config.t_angle);
}

PairStats evaluate_pair(const FrameSequence& seq, int i, int j, const SelectionConfig& config,
                        FrameFeatureCache& cache, bool measure_all) {
  if (i < 0 || j <= i || j >= seq.size())
    throw Error(Errc::invalid_config, "pair indices must satisfy 0 <= i < j < N");

  PairStats stats;
  stats.i = i;
  stats.j = j;

  const auto& fa = cache.get(i);
  const auto& fb = cache.get(j);

  auto reject = [&](RejectionReason r) {
    if (stats.reason == RejectionReason::none) stats.reason = r;
  };

  // Gate 1: enough matches for geometry.
  MatchSet matches = match_descriptors(fa.descriptors, fb.descriptors,
                                       config.features.match_max_distance,
                                       config.features.cross_check);
  matches.frame_i = i;
  matches.frame_j = j;
  stats.match_count = int(matches.matches.size());
  if (stats.match_count < 3) reject(RejectionReason::too_few_matches);

  // Gate 2: similarity geometry, baseline window, angle cap. The selection
  // seed governs the whole evaluation, including RANSAC.
  RansacParams ransac = config.ransac;
  ransac.seed = config.rng_seed;
  if (stats.match_count >= 3) {
    try {
      const PairGeometry geo = pair_geometry(matches, fa.keypoints, fb.keypoints, ransac,
                                             config.beta_use_inliers);
      stats.beta = geo.beta;
      stats.theta = geo.theta;
      if (geo.beta < config.t_baseline || geo.beta > config.alpha * config.t_baseline)
        reject(RejectionReason::baseline_out_of_range);
      if (geo.theta > config.t_angle) reject(RejectionReason::angle_above_threshold);
    } catch (const Error& e) {
      if (e.code() != Errc::pair_rejected) throw;
      reject(RejectionReason::geometry_failed);
    }
  }

  // Gate 3: average optical-flow motion, computed only for survivors unless
  // full diagnostics were requested.
  if (stats.reason == RejectionReason::none || measure_all) {
    std::vector<Vec2> points;
    points.reserve(fa.keypoints.size());
    for (const Keypoint& kp : fa.keypoints) points.push_back({double(kp.x), double(kp.y)});
    const auto flows = track_points(fa.pyramid, fb.pyramid, points, config.flow);
    const FlowStats fs = average_motion(flows, config.flow.min_tracked);
    stats.flow_mean = fs.mean_magnitude;
    if (fs.unreliable || fs.mean_magnitude < config.t_flow)
      reject(RejectionReason::flow_below_threshold);
  }

  stats.feasible = stats.reason == RejectionReason::none;
  if (stats.feasible) stats.score = score_pair(*stats.beta, *stats.theta, config);
  return stats;
}

std::pair<int, int> first_last_pair(int frame_count) { return {0, frame_count - 1}; }

std::pair<int, int> quartile_pair(int frame_count) {
  const int q1 = (frame_count - 1) / 4;
  const int q3 = 3 * (frame_count - 1) / 4;
  if (q1 == q3) return {0, frame_count - 1}; // N == 2, quartiles coincide
  return {q1, q3};
}

std::pair<int, int> random_pair(int frame_count, std::uint64_t seed) {
  // Uniform over all C(N,2) pairs, enumerated lexicographically.
  Rng rng(seed);
  const std::uint64_t n = std::uint64_t(frame_count);
  std::uint64_t k = rng.uniform(n * (n - 1) / 2);
  for (int i = 0; i < frame_count - 1; ++i) {
    const std::uint64_t row = n - 1 - std::uint64_t(i);
    if (k < row) return {i, i + 1 + int(k)};
    k -= row;
  }
  return {frame_count - 2, frame_count - 1}; // unreachable
}

SelectionResult select(const FrameSequence& seq, const SelectionConfig& config) {
  FrameFeatureCache cache(seq, config.features, config.flow);
  return select(seq, config, cache);
}

SelectionResult select(const FrameSequence& seq, const SelectionConfig& config,
                       FrameFeatureCache& cache) {
  config.validate();
  const int n = seq.size();
  if (n < 2) throw Error(Errc::empty_sequence, "need at least 2 frames");

  SelectionResult result;
  result.strategy = config.strategy;

  if (config.strategy == Strategy::ours) {
    double best_score = 0.0;
    for (int i = 0; i < n; i += config.frame_stride) {
      for (int j = i + config.frame_stride; j < n; j += config.frame_stride) {
        PairStats stats = evaluate_pair(seq, i, j, config, cache);
        // Lexicographic visit order makes strict > the smallest-(i,j) tie-break.
        if (stats.feasible && (!result.chosen || *stats.score > best_score)) {
          best_score = *stats.score;
          result.chosen = {i, j};
        }
        result.stats.push_back(std::move(stats));
      }
    }
    return result;
  }

  std::pair<int, int> pick{0, 0};
  switch (config.strategy) {
    case Strategy::random: pick = random_pair(n, config.rng_seed); break;
    case Strategy::first_last: pick = first_last_pair(n); break;
    case Strategy::quartiles: pick = quartile_pair(n); break;
    case Strategy::ours: break; // handled above
  }
  result.chosen = pick;
  // Baseline strategies pick independently of the gates; the stats row is
  // diagnostic, so measure everything.
  result.stats.push_back(evaluate_pair(seq, pick.first, pick.second, config, cache, true));
  return result;
}

} // namespace pipeframe
