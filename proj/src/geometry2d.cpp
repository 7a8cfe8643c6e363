#include "pipeframe/geometry2d.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "pipeframe/error.hpp"
#include "pipeframe/rng.hpp"

namespace pipeframe {

namespace {

using Complex = std::complex<double>;

inline Complex as_complex(const Vec2& p) { return {p.x, p.y}; }

Similarity2D from_complex(const Complex& m, const Complex& t) {
  Similarity2D sim;
  sim.scale = std::abs(m);
  sim.angle = std::arg(m);
  if (sim.angle <= -std::numbers::pi) sim.angle = std::numbers::pi; // (-pi, pi]
  sim.tx = t.real();
  sim.ty = t.imag();
  return sim;
}

// Exact similarity from two correspondences. Returns false on a degenerate
// (coincident) sample.
bool minimal_similarity(const Vec2& a1, const Vec2& a2, const Vec2& b1, const Vec2& b2,
                        Similarity2D& out) {
  const Complex za = as_complex(a2) - as_complex(a1);
  if (std::abs(za) < 1e-12) return false;
  const Complex m = (as_complex(b2) - as_complex(b1)) / za;
  if (std::abs(m) < 1e-12) return false;
  out = from_complex(m, as_complex(b1) - m * as_complex(a1));
  return true;
}

int count_inliers(const Similarity2D& model, const std::vector<Vec2>& a,
                  const std::vector<Vec2>& b, double threshold, std::vector<bool>* mask) {
  int count = 0;
  const double t2 = threshold * threshold;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const bool in = (model.apply(a[k]) - b[k]).squared_norm() <= t2;
    if (mask) (*mask)[k] = in;
    if (in) ++count;
  }
  return count;
}

} // namespace

Similarity2D fit_similarity_lsq(const std::vector<Vec2>& points_a,
                                const std::vector<Vec2>& points_b) {
  const std::size_t n = points_a.size();
  if (n < 2 || n != points_b.size())
    throw Error(Errc::degenerate_input, "similarity fit needs >= 2 paired points");

  Complex mu_a{0, 0}, mu_b{0, 0};
  for (std::size_t k = 0; k < n; ++k) {
    mu_a += as_complex(points_a[k]);
    mu_b += as_complex(points_b[k]);
  }
  mu_a /= double(n);
  mu_b /= double(n);

  // Least squares over centered complex coordinates: the optimal s*e^{i*angle}
  // is sum(b*conj(a)) / sum(|a|^2).
  Complex cross{0, 0};
  double var_a = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Complex ca = as_complex(points_a[k]) - mu_a;
    const Complex cb = as_complex(points_b[k]) - mu_b;
    cross += cb * std::conj(ca);
    var_a += std::norm(ca);
  }
  if (var_a < 1e-18) throw Error(Errc::degenerate_input, "source points are coincident");
  const Complex m = cross / var_a;
  if (std::abs(m) < 1e-15) throw Error(Errc::degenerate_input, "target points are coincident");
  return from_complex(m, mu_b - m * mu_a);
}

SimilarityEstimate estimate_similarity(const std::vector<Vec2>& points_a,
                                       const std::vector<Vec2>& points_b,
                                       const RansacParams& params) {
  const std::size_t n = points_a.size();
  if (n != points_b.size())
    throw Error(Errc::degenerate_input, "point lists differ in length");
  if (n < 2) throw Error(Errc::degenerate_input, "need at least 2 correspondences");

  Rng rng(params.seed);
  Similarity2D best_model;
  int best_count = 0;
  bool have_model = false;
  int valid_samples = 0;

  int required = params.max_iterations;
  for (int iter = 0; iter < required && iter < params.max_iterations; ++iter) {
    const std::size_t i = std::size_t(rng.uniform(n));
    std::size_t j = std::size_t(rng.uniform(n - 1));
    if (j >= i) ++j;

    Similarity2D candidate;
    if (!minimal_similarity(points_a[i], points_a[j], points_b[i], points_b[j], candidate))
      continue;
    ++valid_samples;

    const int count = count_inliers(candidate, points_a, points_b, params.inlier_threshold, nullptr);
    if (count > best_count) {
      best_count = count;
      best_model = candidate;
      have_model = true;

      // Standard adaptive stopping rule for 2-point samples.
      const double w = double(count) / double(n);
      const double denom = std::log(1.0 - w * w);
      if (denom < 0.0) {
        const double need = std::log(1.0 - params.confidence) / denom;
        required = need >= double(params.max_iterations)
                       ? params.max_iterations
                       : std::max(1, int(std::ceil(need)));
      }
    }
  }

  if (valid_samples == 0)
    throw Error(Errc::degenerate_input, "every minimal sample was coincident");
  if (!have_model || best_count < 3)
    throw Error(Errc::no_consensus, "best consensus set has fewer than 3 inliers");

  // Refit on the consensus set, then rescore with the refined model.
  std::vector<bool> mask(n, false);
  count_inliers(best_model, points_a, points_b, params.inlier_threshold, &mask);
  std::vector<Vec2> in_a, in_b;
  in_a.reserve(std::size_t(best_count));
  in_b.reserve(std::size_t(best_count));
  for (std::size_t k = 0; k < n; ++k) {
    if (!mask[k]) continue;
    in_a.push_back(points_a[k]);
    in_b.push_back(points_b[k]);
  }

  SimilarityEstimate est;
  est.model = fit_similarity_lsq(in_a, in_b);
  est.inlier_mask.assign(n, false);
  est.inlier_count =
      count_inliers(est.model, points_a, points_b, params.inlier_threshold, &est.inlier_mask);
  if (est.inlier_count < 3)
    throw Error(Errc::no_consensus, "refit lost the consensus set");
  return est;
}

PairGeometry pair_geometry(const MatchSet& matches, const std::vector<Keypoint>& keypoints_a,
                           const std::vector<Keypoint>& keypoints_b, const RansacParams& params,
                           bool beta_use_inliers) {
  if (matches.matches.size() < 3)
    throw Error(Errc::pair_rejected, "need at least 3 matches");

  std::vector<Vec2> pa, pb;
  pa.reserve(matches.matches.size());
  pb.reserve(matches.matches.size());
  for (const Match& m : matches.matches) {
    const Keypoint& ka = keypoints_a[std::size_t(m.index_a)];
    const Keypoint& kb = keypoints_b[std::size_t(m.index_b)];
    pa.push_back({double(ka.x), double(ka.y)});
    pb.push_back({double(kb.x), double(kb.y)});
  }

  SimilarityEstimate est;
  try {
    est = estimate_similarity(pa, pb, params);
  } catch (const Error& e) {
    if (e.code() == Errc::degenerate_input || e.code() == Errc::no_consensus)
      throw Error(Errc::pair_rejected, e.what());
    throw;
  }

  PairGeometry geo;
  geo.model = est.model;
  geo.inlier_count = est.inlier_count;
  geo.theta = std::abs(est.model.angle) * 180.0 / std::numbers::pi;

  double sum = 0.0;
  int used = 0;
  for (std::size_t k = 0; k < pa.size(); ++k) {
    if (beta_use_inliers && !est.inlier_mask[k]) continue;
    sum += (pb[k] - pa[k]).norm();
    ++used;
  }
  geo.beta = used > 0 ? sum / used : 0.0;
  return geo;
}

} // namespace pipeframe
