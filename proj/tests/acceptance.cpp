// Acceptance suite: one test case per criterion, one printed PASS/FAIL line
// each. Tolerances are pinned in code; the synthetic renderer stands in as
// the ground-truth oracle.

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "pipeframe/bench.hpp"
#include "pipeframe/config.hpp"
#include "pipeframe/error.hpp"
#include "pipeframe/geometry2d.hpp"
#include "pipeframe/metrics.hpp"
#include "pipeframe/optical_flow.hpp"
#include "pipeframe/rng.hpp"
#include "pipeframe/selection.hpp"
#include "pipeframe/sim3.hpp"
#include "pipeframe/synth.hpp"
#include "scene_fixtures.hpp"

using namespace pipeframe;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int criterion, const char* name, bool pass, double seconds) {
  std::printf("[acceptance] criterion %d (%s): %s (%.2f s)\n", criterion, name,
              pass ? "PASS" : "FAIL", seconds);
  std::fflush(stdout);
}

// Re-measures one pair straight from the modules; shares no logic with
// select() beyond the module implementations themselves.
struct Measured {
  bool ok = false;
  double flow = 0.0, beta = 0.0, theta = 0.0;
  bool flow_reliable = false;
};

Measured independent_measure(const FrameSequence& seq, int i, int j, const SelectionConfig& cfg) {
  Measured m;
  const Frame& a = seq.frames[std::size_t(i)];
  const Frame& b = seq.frames[std::size_t(j)];
  const auto ka = detect_keypoints(a, cfg.features.max_count, cfg.features.fast_threshold);
  const auto kb = detect_keypoints(b, cfg.features.max_count, cfg.features.fast_threshold);
  const auto da = compute_descriptors(a, ka);
  const auto db = compute_descriptors(b, kb);
  const MatchSet matches =
      match_descriptors(da, db, cfg.features.match_max_distance, cfg.features.cross_check);
  if (matches.matches.size() < 3) return m;
  try {
    RansacParams ransac = cfg.ransac;
    ransac.seed = cfg.rng_seed;
    const PairGeometry geo = pair_geometry(matches, ka, kb, ransac, cfg.beta_use_inliers);
    m.beta = geo.beta;
    m.theta = geo.theta;
  } catch (const Error&) {
    return m;
  }
  std::vector<Vec2> pts;
  for (const Keypoint& kp : ka) pts.push_back({double(kp.x), double(kp.y)});
  const FlowStats fs = average_motion(track_points(a, b, pts, cfg.flow), cfg.flow.min_tracked);
  m.flow = fs.mean_magnitude;
  m.flow_reliable = !fs.unreliable;
  m.ok = true;
  return m;
}

} // namespace

TEST_CASE("criterion 1: Eq-score exactness") {
  Timer timer;
  Rng rng(1);
  int violations = 0;
  for (int k = 0; k < 1000; ++k) {
    const double beta = rng.uniform_real(0.0, 500.0);
    const double t_angle = rng.uniform_real(1e-3, 90.0);
    const double theta = rng.uniform_real(0.0, t_angle);
    SelectionConfig cfg;
    cfg.t_angle = t_angle;
    const double got = score_pair(beta, theta, cfg);
    const double expected = beta + (1.0 - theta / t_angle);
    if (std::abs(got - expected) > 1e-12 * std::max(1.0, std::abs(expected))) ++violations;
    // Boundary identities hold exactly.
    if (score_pair(beta, 0.0, cfg) != beta + 1.0) ++violations;
    if (score_pair(beta, t_angle, cfg) != beta) ++violations;
  }
  const double secs = timer.seconds();
  const bool pass = violations == 0 && secs < 1.0;
  report(1, "Eq-score exactness, 1000 triples", pass, secs);
  CHECK(violations == 0);
  CHECK(secs < 1.0);
}

TEST_CASE("criterion 2: constraint soundness on 50 synthetic scenes") {
  Timer timer;
  int violations = 0;
  int chosen_count = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SceneConfig scene_cfg =
        (seed % 2 == 0) ? fixtures::pan_scene(seed / 2) : fixtures::gap_scene(seed / 2);
    const RenderedScene scene = render_scene(scene_cfg);
    SelectionConfig cfg;
    cfg.rng_seed = seed;
    const SelectionResult result = select(scene.frames, cfg);
    if (!result.chosen) continue;
    ++chosen_count;
    const auto [i, j] = *result.chosen;
    const Measured m = independent_measure(scene.frames, i, j, cfg);
    if (!m.ok) {
      ++violations;
      continue;
    }
    if (!(m.flow_reliable && m.flow >= cfg.t_flow)) ++violations;
    if (!(m.beta >= cfg.t_baseline && m.beta <= cfg.alpha * cfg.t_baseline)) ++violations;
    if (!(m.theta <= cfg.t_angle)) ++violations;
  }
  const double secs = timer.seconds();
  const bool pass = violations == 0 && chosen_count == 50 && secs < 300.0;
  report(2, "constraint soundness, 50 scenes", pass, secs);
  CHECK(violations == 0);
  CHECK(chosen_count == 50);
  CHECK(secs < 300.0);
}

TEST_CASE("criterion 3: oracle equivalence of select(ours)") {
  Timer timer;
  int mismatches = 0;
  for (std::uint64_t scene_idx = 0; scene_idx < 20; ++scene_idx) {
    const SceneConfig scene_cfg = (scene_idx < 10) ? fixtures::pan_scene(scene_idx + 40)
                                                   : fixtures::gap_scene(scene_idx + 40);
    const RenderedScene scene = render_scene(scene_cfg);
    SelectionConfig cfg;
    cfg.rng_seed = scene_idx;

    const SelectionResult result = select(scene.frames, cfg);

    // Independent enumerator: per-frame module results cached locally, gates
    // and argmax recoded from the config.
    const int n = scene.frames.size();
    std::vector<std::vector<Keypoint>> kps;
    std::vector<std::vector<Descriptor>> descs;
    std::vector<Pyramid> pyrs;
    kps.resize(std::size_t(n));
    descs.resize(std::size_t(n));
    pyrs.resize(std::size_t(n));
    for (int f = 0; f < n; ++f) {
      kps[std::size_t(f)] =
          detect_keypoints(scene.frames.frames[std::size_t(f)], cfg.features.max_count,
                           cfg.features.fast_threshold);
      descs[std::size_t(f)] =
          compute_descriptors(scene.frames.frames[std::size_t(f)], kps[std::size_t(f)]);
      pyrs[std::size_t(f)] =
          build_pyramid(scene.frames.frames[std::size_t(f)], cfg.flow.pyramid_levels);
    }

    std::optional<std::pair<int, int>> best;
    double best_score = 0.0;
    for (int i = 0; i < n; i += cfg.frame_stride) {
      for (int j = i + cfg.frame_stride; j < n; j += cfg.frame_stride) {
        const MatchSet matches =
            match_descriptors(descs[std::size_t(i)], descs[std::size_t(j)],
                              cfg.features.match_max_distance, cfg.features.cross_check);
        if (matches.matches.size() < 3) continue;
        PairGeometry geo;
        try {
          RansacParams ransac = cfg.ransac;
          ransac.seed = cfg.rng_seed;
          geo = pair_geometry(matches, kps[std::size_t(i)], kps[std::size_t(j)], ransac,
                              cfg.beta_use_inliers);
        } catch (const Error&) {
          continue;
        }
        if (geo.beta < cfg.t_baseline || geo.beta > cfg.alpha * cfg.t_baseline) continue;
        if (geo.theta > cfg.t_angle) continue;
        std::vector<Vec2> pts;
        for (const Keypoint& kp : kps[std::size_t(i)]) pts.push_back({double(kp.x), double(kp.y)});
        const FlowStats fs = average_motion(
            track_points(pyrs[std::size_t(i)], pyrs[std::size_t(j)], pts, cfg.flow),
            cfg.flow.min_tracked);
        if (fs.unreliable || fs.mean_magnitude < cfg.t_flow) continue;
        const double score = score_pair(geo.beta, geo.theta, cfg);
        if (!best || score > best_score) { // lexicographic visit order = tie-break
          best = {i, j};
          best_score = score;
        }
      }
    }

    if (result.chosen.has_value() != best.has_value()) {
      ++mismatches;
      continue;
    }
    if (best) {
      if (*result.chosen != *best) ++mismatches;
      for (const PairStats& stats : result.stats)
        if (stats.i == best->first && stats.j == best->second &&
            (!stats.score || *stats.score != best_score))
          ++mismatches;
    }
  }
  const double secs = timer.seconds();
  const bool pass = mismatches == 0 && secs < 120.0;
  report(3, "oracle equivalence, 20 sequences", pass, secs);
  CHECK(mismatches == 0);
  CHECK(secs < 120.0);
}

TEST_CASE("criterion 4: Umeyama recovery at spec tolerances") {
  Timer timer;
  Rng rng(4);
  int violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Eigen::Vector3d> src;
    for (int k = 0; k < 20; ++k)
      src.emplace_back(rng.uniform_real(-1, 1), rng.uniform_real(-1, 1), rng.uniform_real(-1, 1));
    const double s = rng.uniform_real(0.1, 4.0);
    const Eigen::Vector3d axis = Eigen::Vector3d(rng.uniform_real(-1, 1), rng.uniform_real(-1, 1),
                                                 rng.uniform_real(-1, 1))
                                     .normalized();
    const Eigen::Matrix3d R =
        Eigen::AngleAxisd(rng.uniform_real(0.0, std::numbers::pi), axis).toRotationMatrix();
    const Eigen::Vector3d t(rng.uniform_real(-2, 2), rng.uniform_real(-2, 2),
                            rng.uniform_real(-2, 2));
    std::vector<Eigen::Vector3d> dst;
    for (const auto& p : src) dst.push_back(s * (R * p) + t);

    const UmeyamaResult res = umeyama(src, dst);
    if (std::abs(res.transform.s - s) / s > 1e-9) ++violations;
    const double cos_angle =
        std::clamp(((res.transform.R.transpose() * R).trace() - 1.0) / 2.0, -1.0, 1.0);
    if (std::acos(cos_angle) > 1e-7) ++violations;
    if ((res.transform.t - t).norm() > 1e-8) ++violations;

    // Reflection-contaminated copy keeps det + 1.
    std::vector<Eigen::Vector3d> mirrored;
    for (const auto& p : dst) mirrored.emplace_back(p.x(), p.y(), -p.z());
    const UmeyamaResult ref = umeyama(src, mirrored);
    if (std::abs(ref.transform.R.determinant() - 1.0) > 1e-9) ++violations;
  }
  const double secs = timer.seconds();
  const bool pass = violations == 0 && secs < 10.0;
  report(4, "Umeyama recovery, 200 transforms", pass, secs);
  CHECK(violations == 0);
  CHECK(secs < 10.0);
}

TEST_CASE("criterion 5: optical-flow accuracy on synthetic shifts") {
  Timer timer;
  // Rendered wall texture, viewed flat: reuse the tube texture as an image.
  Frame a;
  a.width = 320;
  a.height = 240;
  a.pixels.resize(std::size_t(320) * 240);
  for (int y = 0; y < 240; ++y)
    for (int x = 0; x < 320; ++x) {
      const double u = 2.0 * std::numbers::pi * (double(x) / 320.0);
      a.at(x, y) = std::uint8_t(
          std::lround(255.0 * tube_texture(9, 8.0, 1.0, u, double(y) * 0.02)));
    }
  Frame b = a;
  for (int y = 0; y < 240; ++y)
    for (int x = 0; x < 320; ++x)
      b.at(x, y) = a.at(((x - 2) % 320 + 320) % 320, ((y - 3) % 240 + 240) % 240);

  std::vector<Vec2> pts;
  for (int y = 50; y <= 190; y += 10)
    for (int x = 50; x <= 270; x += 10) pts.push_back({double(x), double(y)});

  int violations = 0;
  const auto flows = track_points(a, b, pts);
  int tracked = 0;
  double epe_sum = 0.0;
  for (const FlowVector& fv : flows) {
    if (!fv.tracked) continue;
    ++tracked;
    epe_sum += std::hypot(fv.displacement.x - 2.0, fv.displacement.y - 3.0);
  }
  if (tracked < 100) ++violations;
  if (tracked > 0 && epe_sum / tracked > 0.25) ++violations;

  const auto still = track_points(a, a, pts);
  for (const FlowVector& fv : still)
    if (fv.tracked && fv.magnitude() >= 0.01) ++violations;

  const double secs = timer.seconds();
  const bool pass = violations == 0 && secs < 10.0;
  report(5, "flow accuracy, (2,3) shift and identity", pass, secs);
  CHECK(violations == 0);
  CHECK(tracked >= 100);
  CHECK(secs < 10.0);
}

TEST_CASE("criterion 6: similarity angle under 30 percent outliers") {
  Timer timer;
  int angle_violations = 0;
  long outliers_total = 0, outliers_excluded = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed * 31 + 7);
    std::vector<Vec2> a, b;
    for (int k = 0; k < 70; ++k)
      a.push_back({rng.uniform_real(0.0, 300.0), rng.uniform_real(0.0, 300.0)});
    Vec2 centroid{0, 0};
    for (const Vec2& p : a) centroid = centroid + p;
    centroid = centroid * (1.0 / 70.0);
    const double angle = 10.0 * std::numbers::pi / 180.0;
    for (const Vec2& p : a) {
      const Vec2 d = p - centroid;
      b.push_back({centroid.x + std::cos(angle) * d.x - std::sin(angle) * d.y,
                   centroid.y + std::sin(angle) * d.x + std::cos(angle) * d.y});
    }
    // Replace the last 30% with uniform-random outlier correspondences.
    const int n_out = 21;
    for (int k = 70 - n_out; k < 70; ++k) {
      a[std::size_t(k)] = {rng.uniform_real(0.0, 300.0), rng.uniform_real(0.0, 300.0)};
      b[std::size_t(k)] = {rng.uniform_real(0.0, 300.0), rng.uniform_real(0.0, 300.0)};
    }

    RansacParams params;
    params.seed = seed;
    const SimilarityEstimate est = estimate_similarity(a, b, params);
    const double got_deg = est.model.angle * 180.0 / std::numbers::pi;
    if (std::abs(got_deg - 10.0) > 0.1) ++angle_violations;
    for (int k = 70 - n_out; k < 70; ++k) {
      ++outliers_total;
      if (!est.inlier_mask[std::size_t(k)]) ++outliers_excluded;
    }
  }
  const double excluded_ratio = double(outliers_excluded) / double(outliers_total);
  const double secs = timer.seconds();
  const bool pass = angle_violations == 0 && excluded_ratio >= 0.95 && secs < 30.0;
  report(6, "similarity angle with outliers, 50 seeds", pass, secs);
  CHECK(angle_violations == 0);
  CHECK(excluded_ratio >= 0.95);
  CHECK(secs < 30.0);
}

TEST_CASE("criterion 7: metric fixtures") {
  Timer timer;
  int violations = 0;

  Image8 black{32, 32, 1, std::vector<std::uint8_t>(1024, 0)};
  Image8 white{32, 32, 1, std::vector<std::uint8_t>(1024, 255)};
  if (psnr(black, white) != 0.0) ++violations;

  Rng rng(7);
  Image8 base{48, 40, 1, std::vector<std::uint8_t>(48 * 40)};
  for (auto& p : base.pixels) p = std::uint8_t(rng.uniform(240));
  Image8 offset = base;
  for (auto& p : offset.pixels) p = std::uint8_t(p + 16);
  if (std::abs(psnr(base, offset) - 10.0 * std::log10(65025.0 / 256.0)) > 1e-9) ++violations;

  if (!std::isinf(psnr(base, base))) ++violations;
  if (std::abs(ssim(base, base) - 1.0) > 1e-12) ++violations;

  Image8 c0{32, 32, 1, std::vector<std::uint8_t>(1024, 0)};
  Image8 c10{32, 32, 1, std::vector<std::uint8_t>(1024, 10)};
  if (std::abs(ssim(c0, c10) - 6.5025 / 106.5025) > 1e-9) ++violations;

  const double secs = timer.seconds();
  const bool pass = violations == 0;
  report(7, "PSNR/SSIM fixtures", pass, secs);
  CHECK(violations == 0);
}

TEST_CASE("criterion 8: strategy harness on gate-engineered scenes") {
  Timer timer;
  int ours_feasible = 0, first_last_violated = 0, quartiles_violated = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RenderedScene scene = render_scene(fixtures::gap_scene(seed + 400));
    SelectionConfig cfg;
    cfg.rng_seed = seed;
    const BenchReport rep = bench(
        scene.frames, {Strategy::ours, Strategy::first_last, Strategy::quartiles}, cfg);
    for (const StrategyRow& row : rep.rows) {
      const bool feasible = row.result.chosen && row.chosen_stats.feasible;
      if (row.strategy == Strategy::ours && feasible) ++ours_feasible;
      if (row.strategy == Strategy::first_last && !feasible) ++first_last_violated;
      if (row.strategy == Strategy::quartiles && !feasible) ++quartiles_violated;
    }
  }
  const double secs = timer.seconds();
  const bool pass =
      ours_feasible == 20 && first_last_violated >= 15 && quartiles_violated >= 15;
  report(8, "strategy harness, 20 engineered scenes", pass, secs);
  std::printf("             ours feasible %d/20, first_last violated %d/20, quartiles violated %d/20\n",
              ours_feasible, first_last_violated, quartiles_violated);
  CHECK(ours_feasible == 20);
  CHECK(first_last_violated >= 15);
  CHECK(quartiles_violated >= 15);
}

TEST_CASE("criterion 9: bench determinism") {
  Timer timer;
  const RenderedScene scene = render_scene(fixtures::pan_scene(60, 6));
  SelectionConfig cfg;
  cfg.rng_seed = 9;
  const std::vector<Strategy> strategies = {Strategy::ours, Strategy::random,
                                            Strategy::first_last, Strategy::quartiles};
  auto run = [&]() {
    nlohmann::ordered_json j = bench_to_json(bench(scene.frames, strategies, cfg), cfg);
    j.erase("timing");
    return j.dump();
  };
  const std::string first = run();
  const std::string second = run();
  const double secs = timer.seconds();
  const bool pass = first == second;
  report(9, "bench determinism, timing excluded", pass, secs);
  CHECK(pass);
}
