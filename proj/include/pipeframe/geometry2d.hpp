#pragma once

#include <cstdint>
#include <vector>

#include "pipeframe/features.hpp"
#include "pipeframe/vec2.hpp"

namespace pipeframe {

// 4-DOF similarity p' = scale * R(angle) * p + t.
struct Similarity2D {
  double scale = 1.0;
  double angle = 0.0; // radians in (-pi, pi]
  double tx = 0.0;
  double ty = 0.0;

  Vec2 apply(const Vec2& p) const {
    const double c = std::cos(angle) * scale, s = std::sin(angle) * scale;
    return {c * p.x - s * p.y + tx, s * p.x + c * p.y + ty};
  }
};

struct RansacParams {
  double inlier_threshold = 3.0; // px reprojection error
  double confidence = 0.99;
  int max_iterations = 2000;
  std::uint64_t seed = 0;
};

struct SimilarityEstimate {
  Similarity2D model;
  std::vector<bool> inlier_mask;
  int inlier_count = 0;
};

// Seeded RANSAC over 2-point minimal samples, least-squares refit on the
// consensus set. Deterministic for a fixed seed.
SimilarityEstimate estimate_similarity(const std::vector<Vec2>& points_a,
                                       const std::vector<Vec2>& points_b,
                                       const RansacParams& params = {});

// Closed-form least-squares similarity (rotation+scale+translation, det +1).
Similarity2D fit_similarity_lsq(const std::vector<Vec2>& points_a,
                                const std::vector<Vec2>& points_b);

struct PairGeometry {
  double beta = 0.0;      // px, mean distance between matched keypoint positions
  double theta = 0.0;     // degrees, |angle| of the fitted similarity
  int inlier_count = 0;
  Similarity2D model;
};

// beta over RANSAC inliers by default; beta_use_inliers=false averages over
// the raw match list instead.
PairGeometry pair_geometry(const MatchSet& matches, const std::vector<Keypoint>& keypoints_a,
                           const std::vector<Keypoint>& keypoints_b,
                           const RansacParams& params = {}, bool beta_use_inliers = true);

} // namespace pipeframe
