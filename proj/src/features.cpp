#include "pipeframe/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pipeframe/error.hpp"

namespace pipeframe {

namespace {

// Bresenham circle of radius 3, clockwise from 12 o'clock.
constexpr int kCircle[16][2] = {{0, -3}, {1, -3}, {2, -2}, {3, -1}, {3, 0},  {3, 1},
                                {2, 2},  {1, 3},  {0, 3},  {-1, 3}, {-2, 2}, {-3, 1},
                                {-3, 0}, {-3, -1}, {-2, -2}, {-1, -3}};

bool fast9_is_corner(const Frame& f, int x, int y, int threshold) {
  const int c = f.at(x, y);
  const int hi = c + threshold;
  const int lo = c - threshold;

  int state[16];
  for (int k = 0; k < 16; ++k) {
    const int v = f.at(x + kCircle[k][0], y + kCircle[k][1]);
    state[k] = v > hi ? 1 : (v < lo ? -1 : 0);
  }
  for (int want : {1, -1}) {
    int run = 0;
    for (int k = 0; k < 16 + 9; ++k) { // wrap once around
      if (state[k % 16] == want) {
        if (++run >= 9) return true;
      } else {
        run = 0;
      }
    }
  }
  return false;
}

// Harris response over a 7x7 window of central-difference gradients.
float harris_response(const Frame& f, int x, int y) {
  double a = 0.0, b = 0.0, c = 0.0;
  for (int dy = -3; dy <= 3; ++dy) {
    for (int dx = -3; dx <= 3; ++dx) {
      const int px = x + dx, py = y + dy;
      const double gx = (double(f.at(px + 1, py)) - f.at(px - 1, py)) * 0.5;
      const double gy = (double(f.at(px, py + 1)) - f.at(px, py - 1)) * 0.5;
      a += gx * gx;
      b += gx * gy;
      c += gy * gy;
    }
  }
  const double k = 0.04;
  return float(a * c - b * b - k * (a + c) * (a + c));
}

float centroid_orientation(const Frame& f, int x, int y) {
  // Moments over the disc of radius kPatchRadius.
  double m10 = 0.0, m01 = 0.0;
  constexpr int r = kPatchRadius;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      if (dx * dx + dy * dy > r * r) continue;
      const double v = f.at(x + dx, y + dy);
      m10 += dx * v;
      m01 += dy * v;
    }
  }
  if (m10 == 0.0 && m01 == 0.0) return 0.0f;
  double angle = std::atan2(m01, m10);
  if (angle >= std::numbers::pi) angle -= 2.0 * std::numbers::pi; // [-pi, pi)
  return float(angle);
}

} // namespace

std::vector<Keypoint> detect_keypoints(const Frame& frame, int max_count, int fast_threshold) {
  if (frame.width < 32 || frame.height < 32)
    throw Error(Errc::size_mismatch, "detect_keypoints needs a frame of at least 32x32");
  if (max_count < 1) throw Error(Errc::invalid_config, "max_count must be >= 1");

  const int x_lo = kPatchRadius, x_hi = frame.width - kPatchRadius - 1;
  const int y_lo = kPatchRadius, y_hi = frame.height - kPatchRadius - 1;

  // Response map over corner candidates; non-candidates stay at 0.
  std::vector<float> response(std::size_t(frame.width) * frame.height, 0.0f);
  std::vector<std::pair<int, int>> candidates;
  for (int y = y_lo; y <= y_hi; ++y) {
    for (int x = x_lo; x <= x_hi; ++x) {
      if (!fast9_is_corner(frame, x, y, fast_threshold)) continue;
      const float r = harris_response(frame, x, y);
      if (r <= 0.0f) continue;
      response[std::size_t(y) * frame.width + x] = r;
      candidates.emplace_back(x, y);
    }
  }

  // 3x3 non-maximum suppression; ties resolved by row-major order.
  std::vector<Keypoint> keypoints;
  for (const auto& [x, y] : candidates) {
    const float r = response[std::size_t(y) * frame.width + x];
    bool is_max = true;
    for (int dy = -1; dy <= 1 && is_max; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= frame.width || ny >= frame.height) continue;
        const float rn = response[std::size_t(ny) * frame.width + nx];
        if (rn > r || (rn == r && (ny < y || (ny == y && nx < x)))) {
          is_max = false;
          break;
        }
      }
    }
    if (!is_max) continue;
    Keypoint kp;
    kp.x = float(x);
    kp.y = float(y);
    kp.response = r;
    kp.orientation = centroid_orientation(frame, x, y);
    keypoints.push_back(kp);
  }

  std::sort(keypoints.begin(), keypoints.end(), [](const Keypoint& a, const Keypoint& b) {
    if (a.response != b.response) return a.response > b.response;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });
  if (int(keypoints.size()) > max_count) keypoints.resize(std::size_t(max_count));
  return keypoints;
}

std::vector<Descriptor> compute_descriptors(const Frame& frame,
                                            const std::vector<Keypoint>& keypoints) {
  // Integral image for O(1) 5x5 box sums.
  const int w = frame.width, h = frame.height;
  std::vector<std::uint64_t> integral(std::size_t(w + 1) * (h + 1), 0);
  for (int y = 0; y < h; ++y) {
    std::uint64_t row = 0;
    for (int x = 0; x < w; ++x) {
      row += frame.at(x, y);
      integral[std::size_t(y + 1) * (w + 1) + (x + 1)] =
          integral[std::size_t(y) * (w + 1) + (x + 1)] + row;
    }
  }
  auto box5 = [&](int cx, int cy) -> std::uint64_t {
    const int x0 = cx - 2, y0 = cy - 2, x1 = cx + 3, y1 = cy + 3; // exclusive
    return integral[std::size_t(y1) * (w + 1) + x1] - integral[std::size_t(y0) * (w + 1) + x1] -
           integral[std::size_t(y1) * (w + 1) + x0] + integral[std::size_t(y0) * (w + 1) + x0];
  };

  std::vector<Descriptor> descriptors;
  descriptors.reserve(keypoints.size());
  for (const Keypoint& kp : keypoints) {
    const int cx = int(std::lround(kp.x)), cy = int(std::lround(kp.y));
    if (cx < kPatchRadius || cy < kPatchRadius || cx > w - kPatchRadius - 1 ||
        cy > h - kPatchRadius - 1)
      throw Error(Errc::border_violation, "keypoint too close to the image border");

    const double c = std::cos(kp.orientation), s = std::sin(kp.orientation);
    Descriptor d;
    for (int k = 0; k < 256; ++k) {
      const BriefTestPair& t = kBriefPattern[std::size_t(k)];
      const int pxr = int(std::lround(c * t.px - s * t.py));
      const int pyr = int(std::lround(s * t.px + c * t.py));
      const int qxr = int(std::lround(c * t.qx - s * t.qy));
      const int qyr = int(std::lround(s * t.qx + c * t.qy));
      if (box5(cx + pxr, cy + pyr) > box5(cx + qxr, cy + qyr))
        d.bits[std::size_t(k) >> 6] |= std::uint64_t(1) << (k & 63);
    }
    descriptors.push_back(d);
  }
  return descriptors;
}

MatchSet match_descriptors(const std::vector<Descriptor>& desc_a,
                           const std::vector<Descriptor>& desc_b, int max_distance,
                           bool cross_check) {
  MatchSet set;
  if (desc_a.empty() || desc_b.empty()) return set;

  const int na = int(desc_a.size()), nb = int(desc_b.size());
  std::vector<int> best_b(std::size_t(na), -1), best_b_dist(std::size_t(na), 257);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      const int d = hamming_distance(desc_a[std::size_t(i)], desc_b[std::size_t(j)]);
      if (d < best_b_dist[std::size_t(i)]) { // strict: lowest index wins ties
        best_b_dist[std::size_t(i)] = d;
        best_b[std::size_t(i)] = j;
      }
    }
  }

  if (cross_check) {
    std::vector<int> best_a(std::size_t(nb), -1), best_a_dist(std::size_t(nb), 257);
    for (int j = 0; j < nb; ++j) {
      for (int i = 0; i < na; ++i) {
        const int d = hamming_distance(desc_a[std::size_t(i)], desc_b[std::size_t(j)]);
        if (d < best_a_dist[std::size_t(j)]) {
          best_a_dist[std::size_t(j)] = d;
          best_a[std::size_t(j)] = i;
        }
      }
    }
    for (int i = 0; i < na; ++i) {
      const int j = best_b[std::size_t(i)];
      if (j >= 0 && best_a[std::size_t(j)] == i && best_b_dist[std::size_t(i)] <= max_distance)
        set.matches.push_back({i, j, best_b_dist[std::size_t(i)]});
    }
  } else {
    // Keep the result injective: one winner per target index.
    std::vector<int> winner(std::size_t(nb), -1);
    for (int i = 0; i < na; ++i) {
      const int j = best_b[std::size_t(i)];
      if (j < 0 || best_b_dist[std::size_t(i)] > max_distance) continue;
      if (winner[std::size_t(j)] < 0 ||
          best_b_dist[std::size_t(i)] < best_b_dist[std::size_t(winner[std::size_t(j)])])
        winner[std::size_t(j)] = i;
    }
    for (int j = 0; j < nb; ++j) {
      const int i = winner[std::size_t(j)];
      if (i >= 0) set.matches.push_back({i, j, best_b_dist[std::size_t(i)]});
    }
    std::sort(set.matches.begin(), set.matches.end(),
              [](const Match& a, const Match& b) { return a.index_a < b.index_a; });
  }
  return set;
}

} // namespace pipeframe
