#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pipeframe/features.hpp"
#include "pipeframe/geometry2d.hpp"
#include "pipeframe/image.hpp"
#include "pipeframe/optical_flow.hpp"

namespace pipeframe {

enum class Strategy { ours, random, first_last, quartiles };

const char* strategy_name(Strategy s);
std::optional<Strategy> strategy_from_name(const std::string& name);

struct SelectionConfig {
  double t_flow = 5.0;     // px, min average motion
  double t_baseline = 10.0; // px, min baseline
  double alpha = 5.0;      // max baseline = alpha * t_baseline
  double t_angle = 15.0;   // degrees, max angular difference
  Strategy strategy = Strategy::ours;
  std::uint64_t rng_seed = 0;
  int frame_stride = 1;
  // Score beta / (alpha * t_baseline) instead of raw pixels. Off by default:
  // the raw sum is the documented formula.
  bool beta_normalized = false;
  bool beta_use_inliers = true;
  FeatureParams features;
  FlowParams flow;
  RansacParams ransac;

  void validate() const; // throws InvalidConfig
};

enum class RejectionReason {
  none,
  too_few_matches,
  flow_below_threshold,
  baseline_out_of_range,
  angle_above_threshold,
  geometry_failed,
};

const char* rejection_reason_name(RejectionReason r);

struct PairStats {
  int i = 0;
  int j = 0;
  std::optional<double> flow_mean; // F, px
  std::optional<double> beta;      // px
  std::optional<double> theta;     // degrees
  int match_count = 0;
  std::optional<double> score; // set only when feasible
  bool feasible = false;
  RejectionReason reason = RejectionReason::none;
};

struct SelectionResult {
  std::optional<std::pair<int, int>> chosen;
  std::vector<PairStats> stats;
  Strategy strategy = Strategy::ours;
};

// Lazy per-frame keypoints + descriptors + pyramid, shared across the O(N^2)
// pair loop and across strategies. Immutable once computed.
class FrameFeatureCache {
public:
  struct Entry {
    std::vector<Keypoint> keypoints;
    std::vector<Descriptor> descriptors;
    Pyramid pyramid;
  };

  FrameFeatureCache(const FrameSequence& seq, const FeatureParams& features,
                    const FlowParams& flow);

  const Entry& get(int frame_index);
  const FrameSequence& sequence() const { return seq_; }

private:
  const FrameSequence& seq_;
  FeatureParams features_;
  FlowParams flow_;
  std::vector<std::unique_ptr<Entry>> entries_;
};

// Eq-style pair score: beta + (1 - theta / t_angle); gates are assumed to
// have passed already.
double score_pair(double beta, double theta_deg, const SelectionConfig& config);

// Full gate sequence for one pair: match count, similarity geometry
// (baseline then angle), then optical flow. The recorded reason is the first
// failed gate; measure_all keeps measuring past a failed gate so diagnostics
// are complete.
PairStats evaluate_pair(const FrameSequence& seq, int i, int j, const SelectionConfig& config,
                        FrameFeatureCache& cache, bool measure_all = false);

SelectionResult select(const FrameSequence& seq, const SelectionConfig& config);
SelectionResult select(const FrameSequence& seq, const SelectionConfig& config,
                       FrameFeatureCache& cache);

// Fixed picks of the baseline strategies.
std::pair<int, int> first_last_pair(int frame_count);
std::pair<int, int> quartile_pair(int frame_count);
std::pair<int, int> random_pair(int frame_count, std::uint64_t seed);

} // namespace pipeframe
