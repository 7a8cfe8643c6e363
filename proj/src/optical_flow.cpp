#include "pipeframe/optical_flow.hpp"

#include <cmath>

#include "pipeframe/error.hpp"

namespace pipeframe {

namespace {

// Intensities are sampled in [0, 1] so the eigenvalue threshold has fixed
// units regardless of the 8-bit storage.
inline double sample_bilinear(const Frame& f, double x, double y) {
  const int x0 = int(std::floor(x)), y0 = int(std::floor(y));
  const double ax = x - x0, ay = y - y0;
  const double v00 = f.at(x0, y0), v10 = f.at(x0 + 1, y0);
  const double v01 = f.at(x0, y0 + 1), v11 = f.at(x0 + 1, y0 + 1);
  return ((v00 * (1.0 - ax) + v10 * ax) * (1.0 - ay) + (v01 * (1.0 - ax) + v11 * ax) * ay) *
         (1.0 / 255.0);
}

// Central-difference gradient at a sub-pixel position.
inline double grad_x(const Frame& f, double x, double y) {
  return 0.5 * (sample_bilinear(f, x + 1.0, y) - sample_bilinear(f, x - 1.0, y));
}
inline double grad_y(const Frame& f, double x, double y) {
  return 0.5 * (sample_bilinear(f, x, y + 1.0) - sample_bilinear(f, x, y - 1.0));
}

// Window must be fully sampleable: bilinear uses floor..floor+1, gradients
// reach one more pixel out.
inline bool window_inside(const Frame& f, const Vec2& center, int radius, bool with_gradient) {
  const double margin = with_gradient ? 1.0 : 0.0;
  return center.x - radius - margin >= 0.0 && center.y - radius - margin >= 0.0 &&
         center.x + radius + margin <= double(f.width - 2) &&
         center.y + radius + margin <= double(f.height - 2);
}

} // namespace

std::vector<FlowVector> track_points(const Frame& frame_i, const Frame& frame_j,
                                     const std::vector<Vec2>& points, const FlowParams& params) {
  if (frame_i.width != frame_j.width || frame_i.height != frame_j.height)
    throw Error(Errc::size_mismatch, "track_points: frames differ in size");
  const Pyramid pa = build_pyramid(frame_i, params.pyramid_levels);
  const Pyramid pb = build_pyramid(frame_j, params.pyramid_levels);
  return track_points(pa, pb, points, params);
}

std::vector<FlowVector> track_points(const Pyramid& pyr_i, const Pyramid& pyr_j,
                                     const std::vector<Vec2>& points, const FlowParams& params) {
  if (pyr_i.level_count() != pyr_j.level_count() || pyr_i.levels.empty())
    throw Error(Errc::size_mismatch, "track_points: pyramid level counts differ");
  if (pyr_i.levels[0].width != pyr_j.levels[0].width ||
      pyr_i.levels[0].height != pyr_j.levels[0].height)
    throw Error(Errc::size_mismatch, "track_points: frames differ in size");

  const int levels = pyr_i.level_count();
  const int r = params.window_radius;
  const int win_count = (2 * r + 1) * (2 * r + 1);

  std::vector<FlowVector> flows;
  flows.reserve(points.size());

  std::vector<double> tmpl(std::size_t(win_count), 0.0);
  std::vector<double> gx(std::size_t(win_count), 0.0), gy(std::size_t(win_count), 0.0);

  for (const Vec2& p : points) {
    FlowVector fv;
    fv.origin = p;
    bool lost = false;
    Vec2 guess{0.0, 0.0}; // displacement at the current level

    for (int level = levels - 1; level >= 0 && !lost; --level) {
      const Frame& a = pyr_i.levels[std::size_t(level)];
      const Frame& b = pyr_j.levels[std::size_t(level)];
      const double inv_scale = 1.0 / double(1 << level);
      const Vec2 pl{p.x * inv_scale, p.y * inv_scale};

      if (!window_inside(a, pl, r, true)) {
        lost = true;
        break;
      }

      // Template window and structure tensor, fixed per level.
      double gxx = 0.0, gxy = 0.0, gyy = 0.0;
      int idx = 0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx, ++idx) {
          const double sx = pl.x + dx, sy = pl.y + dy;
          tmpl[std::size_t(idx)] = sample_bilinear(a, sx, sy);
          gx[std::size_t(idx)] = grad_x(a, sx, sy);
          gy[std::size_t(idx)] = grad_y(a, sx, sy);
          gxx += gx[std::size_t(idx)] * gx[std::size_t(idx)];
          gxy += gx[std::size_t(idx)] * gy[std::size_t(idx)];
          gyy += gy[std::size_t(idx)] * gy[std::size_t(idx)];
        }
      }

      const double trace = (gxx + gyy) / win_count;
      const double det_term = (gxx - gyy) / win_count;
      const double min_eig =
          0.5 * (trace - std::sqrt(det_term * det_term + 4.0 * (gxy / win_count) * (gxy / win_count)));
      if (min_eig < params.min_eigen_threshold) {
        lost = true;
        break;
      }
      const double det = gxx * gyy - gxy * gxy;

      Vec2 d{0.0, 0.0};
      double residual = 0.0;
      for (int iter = 0; iter < params.max_iterations; ++iter) {
        const Vec2 target{pl.x + guess.x + d.x, pl.y + guess.y + d.y};
        if (!window_inside(b, target, r, false)) {
          lost = true;
          break;
        }
        double bx = 0.0, by = 0.0;
        residual = 0.0;
        idx = 0;
        for (int dy = -r; dy <= r; ++dy) {
          for (int dx = -r; dx <= r; ++dx, ++idx) {
            const double diff =
                tmpl[std::size_t(idx)] - sample_bilinear(b, target.x + dx, target.y + dy);
            bx += diff * gx[std::size_t(idx)];
            by += diff * gy[std::size_t(idx)];
            residual += diff * diff;
          }
        }
        const Vec2 step{(gyy * bx - gxy * by) / det, (gxx * by - gxy * bx) / det};
        d = d + step;
        if (step.norm() < params.epsilon) break;
      }
      if (lost) break;

      fv.residual = residual / win_count;
      guess = guess + d;
      if (level > 0) guess = guess * 2.0;
    }

    fv.tracked = !lost;
    if (fv.tracked) fv.displacement = guess;
    flows.push_back(fv);
  }
  return flows;
}

FlowStats average_motion(const std::vector<FlowVector>& flows, int min_tracked) {
  FlowStats stats;
  stats.total_count = int(flows.size());
  double sum = 0.0;
  for (const FlowVector& fv : flows) {
    if (!fv.tracked) continue;
    ++stats.tracked_count;
    sum += fv.magnitude();
  }
  stats.mean_magnitude = stats.tracked_count > 0 ? sum / stats.tracked_count : 0.0;
  stats.unreliable = stats.tracked_count < min_tracked;
  return stats;
}

} // namespace pipeframe
