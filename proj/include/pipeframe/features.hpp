#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <vector>

#include "pipeframe/image.hpp"

namespace pipeframe {

// Keypoints must keep this margin to every image border: the orientation
// patch has radius 15 and the descriptor's rotated+smoothed samples stay
// within the same radius.
inline constexpr int kPatchRadius = 15;

struct Keypoint {
  float x = 0.0f;
  float y = 0.0f;
  float response = 0.0f;    // Harris corner score, > 0
  float orientation = 0.0f; // intensity-centroid angle, radians in [-pi, pi)
};

// 256-bit binary descriptor.
struct Descriptor {
  std::array<std::uint64_t, 4> bits{};

  bool operator==(const Descriptor&) const = default;
};

inline int hamming_distance(const Descriptor& a, const Descriptor& b) {
  int d = 0;
  for (int k = 0; k < 4; ++k) d += std::popcount(a.bits[k] ^ b.bits[k]);
  return d;
}

struct Match {
  int index_a = 0;
  int index_b = 0;
  int distance = 0;
};

struct MatchSet {
  int frame_i = 0;
  int frame_j = 1;
  std::vector<Match> matches;
};

struct FeatureParams {
  int max_count = 500;
  int fast_threshold = 20;
  int match_max_distance = 64;
  bool cross_check = true;
};

// One BRIEF test: compare smoothed intensity at p against q (patch coords).
struct BriefTestPair {
  std::int8_t px, py, qx, qy;
};

// Fixed seeded sampling pattern, frozen in brief_pattern.cpp so descriptors
// are bit-exact across builds.
extern const std::array<BriefTestPair, 256> kBriefPattern;

// FAST-9 segment test, Harris ranking, 3x3 non-maximum suppression,
// intensity-centroid orientation. Result is sorted by descending response,
// at most max_count entries.
std::vector<Keypoint> detect_keypoints(const Frame& frame, int max_count, int fast_threshold);

// Rotated BRIEF over a 5x5-box-smoothed patch; bit k is 1 iff the smoothed
// intensity at the rotated p_k strictly exceeds the one at q_k.
std::vector<Descriptor> compute_descriptors(const Frame& frame,
                                            const std::vector<Keypoint>& keypoints);

// Brute-force Hamming matcher. Nearest neighbour per query, lowest index on
// ties; cross_check keeps mutual-best pairs only. Either way the result is
// injective on both sides and filtered to distance <= max_distance.
MatchSet match_descriptors(const std::vector<Descriptor>& desc_a,
                           const std::vector<Descriptor>& desc_b, int max_distance = 64,
                           bool cross_check = true);

} // namespace pipeframe
