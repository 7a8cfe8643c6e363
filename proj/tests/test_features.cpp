#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "pipeframe/error.hpp"
#include "pipeframe/features.hpp"
#include "pipeframe/rng.hpp"

using namespace pipeframe;

namespace {

Frame constant_frame(int w, int h, std::uint8_t value) {
  Frame f;
  f.width = w;
  f.height = h;
  f.pixels.assign(std::size_t(w) * h, value);
  return f;
}

Frame noise_frame(int w, int h, std::uint64_t seed) {
  Frame f = constant_frame(w, h, 0);
  Rng rng(seed);
  for (auto& p : f.pixels) p = std::uint8_t(rng.uniform(256));
  return f;
}

// Smooth random texture: value noise on an 8px lattice, so corners are real
// intensity structures rather than single-pixel speckle.
Frame smooth_noise_frame(int w, int h, std::uint64_t seed, double cell = 8.0) {
  Frame f = constant_frame(w, h, 0);
  auto hash01 = [seed](std::int64_t ix, std::int64_t iy) {
    std::uint64_t z = seed ^ (std::uint64_t(ix) * 0x9E3779B97F4A7C15ULL) ^
                      (std::uint64_t(iy) * 0xD1B54A32D192ED03ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return double((z ^ (z >> 31)) >> 11) * 0x1.0p-53;
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0, amp_sum = 0.0;
      for (int o = 0; o < 3; ++o) {
        const double s = cell / double(1 << o);
        const double fx = x / s, fy = y / s;
        const std::int64_t ix = std::int64_t(std::floor(fx)), iy = std::int64_t(std::floor(fy));
        const double tx = fx - double(ix), ty = fy - double(iy);
        const double sx = tx * tx * (3 - 2 * tx), sy = ty * ty * (3 - 2 * ty);
        const double v = (hash01(ix, iy + o * 1000) * (1 - sx) + hash01(ix + 1, iy + o * 1000) * sx) * (1 - sy) +
                         (hash01(ix, iy + 1 + o * 1000) * (1 - sx) + hash01(ix + 1, iy + 1 + o * 1000) * sx) * sy;
        const double amp = 1.0 / double(1 << o);
        acc += amp * v;
        amp_sum += amp;
      }
      f.at(x, y) = std::uint8_t(std::lround(255.0 * acc / amp_sum));
    }
  }
  return f;
}

// Independent segment-test oracle: tries every run of 9 explicitly.
bool oracle_fast9(const Frame& f, int x, int y, int threshold) {
  static const int off[16][2] = {{0, -3}, {1, -3}, {2, -2}, {3, -1}, {3, 0},  {3, 1},
                                 {2, 2},  {1, 3},  {0, 3},  {-1, 3}, {-2, 2}, {-3, 1},
                                 {-3, 0}, {-3, -1}, {-2, -2}, {-1, -3}};
  const int c = f.at(x, y);
  for (int start = 0; start < 16; ++start) {
    bool all_brighter = true, all_darker = true;
    for (int k = 0; k < 9; ++k) {
      const int v = f.at(x + off[(start + k) % 16][0], y + off[(start + k) % 16][1]);
      all_brighter = all_brighter && v > c + threshold;
      all_darker = all_darker && v < c - threshold;
    }
    if (all_brighter || all_darker) return true;
  }
  return false;
}

// Direct moment oracle over the same radius-15 disc.
double oracle_orientation(const Frame& f, int x, int y) {
  double m10 = 0.0, m01 = 0.0;
  for (int dy = -15; dy <= 15; ++dy)
    for (int dx = -15; dx <= 15; ++dx) {
      if (dx * dx + dy * dy > 225) continue;
      m10 += dx * double(f.at(x + dx, y + dy));
      m01 += dy * double(f.at(x + dx, y + dy));
    }
  return std::atan2(m01, m10);
}

} // namespace

TEST_CASE("constant frame yields no keypoints") {
  CHECK(detect_keypoints(constant_frame(64, 64, 128), 100, 20).empty());
}

TEST_CASE("bright square: corners fire, straight edges do not") {
  Frame f = constant_frame(64, 64, 0);
  for (int y = 22; y <= 41; ++y)
    for (int x = 22; x <= 41; ++x) f.at(x, y) = 220;

  // Oracle set: brute-force segment test over every interior pixel.
  std::set<std::pair<int, int>> oracle;
  for (int y = 15; y <= 48; ++y)
    for (int x = 15; x <= 48; ++x)
      if (oracle_fast9(f, x, y, 20)) oracle.insert({x, y});
  REQUIRE(!oracle.empty());

  const auto kps = detect_keypoints(f, 100, 20);
  REQUIRE(!kps.empty());

  const std::pair<int, int> corners[4] = {{22, 22}, {41, 22}, {22, 41}, {41, 41}};
  for (const Keypoint& kp : kps) {
    CHECK(oracle.count({int(kp.x), int(kp.y)}) == 1);
    CHECK(kp.response > 0.0f);
    double nearest = 1e9;
    for (const auto& [cx, cy] : corners)
      nearest = std::min(nearest, double(std::hypot(kp.x - cx, kp.y - cy)));
    CHECK(nearest <= 3.0); // near a corner, never on a straight edge
  }
  // Every corner is represented.
  for (const auto& [cx, cy] : corners) {
    double nearest = 1e9;
    for (const Keypoint& kp : kps) nearest = std::min(nearest, double(std::hypot(kp.x - cx, kp.y - cy)));
    CHECK(nearest <= 3.0);
  }
}

TEST_CASE("orientation matches the direct moment oracle") {
  Frame f = constant_frame(80, 80, 0);
  // White disk, offset so boundary keypoints have asymmetric patches.
  for (int y = 0; y < 80; ++y)
    for (int x = 0; x < 80; ++x)
      if ((x - 40) * (x - 40) + (y - 40) * (y - 40) <= 8 * 8) f.at(x, y) = 255;

  const auto kps = detect_keypoints(f, 50, 20);
  REQUIRE(!kps.empty());
  for (const Keypoint& kp : kps) {
    const double expected = oracle_orientation(f, int(kp.x), int(kp.y));
    // Both live in [-pi, pi); compare as directions.
    const double diff = std::remainder(double(kp.orientation) - expected, 2.0 * std::numbers::pi);
    CHECK(std::abs(diff) < 1e-6);
  }
}

TEST_CASE("detection is translation covariant in the interior") {
  const int dx = 5, dy = 7;
  const Frame a = smooth_noise_frame(128, 96, 42);
  Frame b = constant_frame(128, 96, 0);
  for (int y = dy; y < 96; ++y)
    for (int x = dx; x < 128; ++x) b.at(x, y) = a.at(x - dx, y - dy);

  const auto ka = detect_keypoints(a, 1000, 15);
  const auto kb = detect_keypoints(b, 1000, 15);
  REQUIRE(ka.size() > 10);

  std::set<std::pair<int, int>> set_b;
  for (const Keypoint& kp : kb) set_b.insert({int(kp.x), int(kp.y)});
  // Interior of a: shifted copy must appear in b. Border loss excluded, which
  // also needs the full NMS ring inside the detection region of both images.
  int checked = 0;
  for (const Keypoint& kp : ka) {
    const int x = int(kp.x), y = int(kp.y);
    if (x < 16 || y < 16 || x + dx > 128 - 17 || y + dy > 96 - 17) continue;
    CHECK(set_b.count({x + dx, y + dy}) == 1);
    ++checked;
  }
  CHECK(checked > 5);
}

TEST_CASE("descriptors are deterministic and use the strict-> tie rule") {
  const Frame f = smooth_noise_frame(96, 96, 7);
  const auto kps = detect_keypoints(f, 50, 15);
  REQUIRE(!kps.empty());
  const auto d1 = compute_descriptors(f, kps);
  const auto d2 = compute_descriptors(f, kps);
  CHECK(d1 == d2);

  // Constant patch: every comparison ties, strict > gives all-zero bits.
  const Frame flat = constant_frame(64, 64, 77);
  std::vector<Keypoint> center = {{32.0f, 32.0f, 1.0f, 0.0f}};
  const auto d = compute_descriptors(flat, center);
  for (auto word : d[0].bits) CHECK(word == 0);
}

TEST_CASE("keypoint too close to the border is rejected") {
  const Frame f = smooth_noise_frame(64, 64, 3);
  std::vector<Keypoint> bad = {{5.0f, 30.0f, 1.0f, 0.0f}};
  CHECK_THROWS_AS(compute_descriptors(f, bad), Error);
}

TEST_CASE("descriptor survives a 90-degree rotation") {
  const Frame a = smooth_noise_frame(101, 101, 99, 6.0);
  Frame b = constant_frame(101, 101, 0);
  // Rotate +90 degrees about the center pixel (50, 50).
  for (int y = 0; y < 101; ++y)
    for (int x = 0; x < 101; ++x) {
      const int u = x - 50, v = y - 50;
      b.at(50 - v, 50 + u) = a.at(x, y);
    }

  for (double theta : {0.0, 0.3, -1.2}) {
    std::vector<Keypoint> kp_a = {{50.0f, 50.0f, 1.0f, float(theta)}};
    std::vector<Keypoint> kp_b = {{50.0f, 50.0f, 1.0f, float(theta + std::numbers::pi / 2)}};
    const auto da = compute_descriptors(a, kp_a);
    const auto db = compute_descriptors(b, kp_b);
    CHECK(hamming_distance(da[0], db[0]) <= 20);
  }
}

TEST_CASE("hamming distance basics") {
  Descriptor x, y;
  Rng rng(5);
  for (auto& w : x.bits) w = rng.next();
  CHECK(hamming_distance(x, x) == 0);
  y = x;
  y.bits[0] ^= 0b1011; // flip exactly 3 bits
  CHECK(hamming_distance(x, y) == 3);
  CHECK(hamming_distance(y, x) == 3);
}

namespace {

std::vector<Descriptor> random_descriptors(int n, Rng& rng) {
  std::vector<Descriptor> out(std::size_t(n), Descriptor{});
  for (auto& d : out)
    for (auto& w : d.bits) w = rng.next();
  return out;
}

// Independent O(n^2) mutual-nearest matcher: full distance matrix, first
// minimum wins ties.
std::vector<Match> oracle_match(const std::vector<Descriptor>& a, const std::vector<Descriptor>& b,
                                int max_distance) {
  std::vector<std::vector<int>> dist(a.size(), std::vector<int>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) dist[i][j] = hamming_distance(a[i], b[j]);

  std::vector<Match> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t jbest = 0;
    for (std::size_t j = 1; j < b.size(); ++j)
      if (dist[i][j] < dist[i][jbest]) jbest = j;
    std::size_t iback = 0;
    for (std::size_t i2 = 1; i2 < a.size(); ++i2)
      if (dist[i2][jbest] < dist[iback][jbest]) iback = i2;
    if (iback == i && dist[i][jbest] <= max_distance)
      out.push_back({int(i), int(jbest), dist[i][jbest]});
  }
  return out;
}

} // namespace

TEST_CASE("identical descriptor lists match as the identity with distance 0") {
  Rng rng(11);
  const auto d = random_descriptors(20, rng);
  const MatchSet m = match_descriptors(d, d, 64, true);
  REQUIRE(m.matches.size() == 20);
  for (const Match& match : m.matches) {
    CHECK(match.index_a == match.index_b);
    CHECK(match.distance == 0);
  }
}

TEST_CASE("matcher equals the brute-force mutual-nearest oracle") {
  Rng rng(123);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = random_descriptors(100, rng);
    const auto b = random_descriptors(100, rng);
    const int max_distance = 256; // accept all, exercise the mutual-best logic
    const MatchSet got = match_descriptors(a, b, max_distance, true);
    const auto expected = oracle_match(a, b, max_distance);
    REQUIRE(got.matches.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) {
      CHECK(got.matches[k].index_a == expected[k].index_a);
      CHECK(got.matches[k].index_b == expected[k].index_b);
      CHECK(got.matches[k].distance == expected[k].distance);
    }
  }
}

TEST_CASE("cross-checked match sets are injective on both sides") {
  Rng rng(77);
  for (bool cross : {true, false}) {
    const auto a = random_descriptors(60, rng);
    const auto b = random_descriptors(40, rng);
    const MatchSet m = match_descriptors(a, b, 256, cross);
    std::set<int> seen_a, seen_b;
    for (const Match& match : m.matches) {
      CHECK(seen_a.insert(match.index_a).second);
      CHECK(seen_b.insert(match.index_b).second);
    }
  }
}

TEST_CASE("empty descriptor lists yield an empty match set") {
  Rng rng(3);
  const auto d = random_descriptors(5, rng);
  CHECK(match_descriptors({}, d).matches.empty());
  CHECK(match_descriptors(d, {}).matches.empty());
}

TEST_CASE("max_distance filters matches") {
  Rng rng(9);
  const auto a = random_descriptors(10, rng);
  auto b = a;
  b[3].bits[1] ^= 0xFFULL; // 8 bits away from its twin
  const MatchSet strict = match_descriptors(a, b, 4, true);
  for (const Match& m : strict.matches) CHECK(m.index_a != 3);
}
