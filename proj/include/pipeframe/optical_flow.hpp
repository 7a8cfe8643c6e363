#pragma once

#include <vector>

#include "pipeframe/image.hpp"
#include "pipeframe/vec2.hpp"

namespace pipeframe {

struct FlowParams {
  int window_radius = 10; // 21x21 window
  int pyramid_levels = 3;
  int max_iterations = 30;
  double epsilon = 0.01;               // px, per-iteration update threshold
  double min_eigen_threshold = 1e-4;   // on G / (window area), intensities in [0,1]
  int min_tracked = 20;
};

struct FlowVector {
  Vec2 origin;       // position in frame i
  Vec2 displacement; // to frame j
  bool tracked = false;
  double residual = 0.0; // final window MSE, normalized intensity units

  double magnitude() const { return displacement.norm(); }
};

struct FlowStats {
  double mean_magnitude = 0.0; // F
  int tracked_count = 0;
  int total_count = 0;
  bool unreliable = true;
};

// Pyramidal Lucas-Kanade. Points are tracked coarse-to-fine; a point is lost
// when its structure tensor is near-singular or any window sample leaves the
// image at some level.
std::vector<FlowVector> track_points(const Frame& frame_i, const Frame& frame_j,
                                     const std::vector<Vec2>& points, const FlowParams& params = {});

// Variant over prebuilt pyramids (both from build_pyramid, same level count).
std::vector<FlowVector> track_points(const Pyramid& pyr_i, const Pyramid& pyr_j,
                                     const std::vector<Vec2>& points, const FlowParams& params = {});

FlowStats average_motion(const std::vector<FlowVector>& flows, int min_tracked = 20);

} // namespace pipeframe
