#include "pipeframe/synth.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "pipeframe/error.hpp"

namespace pipeframe {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// splitmix64-style integer hash -> [0, 1).
double lattice_value(std::uint64_t seed, std::uint64_t octave, std::int64_t iu, std::int64_t iv) {
  std::uint64_t z = seed ^ (octave * 0x9E3779B97F4A7C15ULL) ^
                    (std::uint64_t(iu) * 0xD1B54A32D192ED03ULL) ^
                    (std::uint64_t(iv) * 0x8CB92BA72F3D8DD7ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return double(z >> 11) * 0x1.0p-53;
}

inline double fade(double t) { return t * t * (3.0 - 2.0 * t); }

// One octave of value noise, periodic in fu with integer period pu.
double noise_octave(std::uint64_t seed, std::uint64_t octave, double fu, double fv,
                    std::int64_t pu) {
  const double fu_floor = std::floor(fu);
  const double fv_floor = std::floor(fv);
  std::int64_t iu = std::int64_t(fu_floor), iv = std::int64_t(fv_floor);
  const double tu = fade(fu - fu_floor), tv = fade(fv - fv_floor);

  auto wrap = [pu](std::int64_t i) {
    std::int64_t m = i % pu;
    return m < 0 ? m + pu : m;
  };
  const double v00 = lattice_value(seed, octave, wrap(iu), iv);
  const double v10 = lattice_value(seed, octave, wrap(iu + 1), iv);
  const double v01 = lattice_value(seed, octave, wrap(iu), iv + 1);
  const double v11 = lattice_value(seed, octave, wrap(iu + 1), iv + 1);
  return (v00 * (1.0 - tu) + v10 * tu) * (1.0 - tv) + (v01 * (1.0 - tu) + v11 * tu) * tv;
}

} // namespace

double tube_texture(std::uint64_t seed, double texture_scale, double radius, double u, double v) {
  // Integer cell count around the circumference keeps the texture seamless.
  const std::int64_t pu = std::max<std::int64_t>(4, std::llround(texture_scale * kTwoPi * radius));
  const double base_u = u / kTwoPi * double(pu);
  const double base_v = v * texture_scale;

  constexpr int kOctaves = 5;
  double total = 0.0, amp_sum = 0.0, amp = 1.0;
  for (int o = 0; o < kOctaves; ++o) {
    const double f = double(1 << o);
    total += amp * noise_octave(seed, std::uint64_t(o), base_u * f, base_v * f, pu << o);
    amp_sum += amp;
    amp *= 0.55;
  }
  double t = total / amp_sum;
  // Stretch contrast around the midpoint; fbm concentrates near 0.5.
  t = 0.5 + (t - 0.5) * 2.2;
  return t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
}

std::optional<RayHit> ray_cylinder_intersect(const Eigen::Vector3d& origin,
                                             const Eigen::Vector3d& direction, double radius,
                                             double length) {
  double best_t = std::numeric_limits<double>::infinity();
  RayHit hit;

  // Wall: quadratic in the xy-plane.
  const double a = direction.x() * direction.x() + direction.y() * direction.y();
  if (a > 1e-16) {
    const double b = 2.0 * (origin.x() * direction.x() + origin.y() * direction.y());
    const double c = origin.x() * origin.x() + origin.y() * origin.y() - radius * radius;
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
        if (t <= 1e-12 || t >= best_t) continue;
        const Eigen::Vector3d p = origin + t * direction;
        if (p.z() < 0.0 || p.z() > length) continue;
        best_t = t;
        hit.position = p;
        hit.normal = Eigen::Vector3d(-p.x(), -p.y(), 0.0).normalized();
        hit.on_cap = false;
      }
    }
  }

  // Caps at z = 0 and z = length.
  if (std::abs(direction.z()) > 1e-16) {
    for (double plane_z : {0.0, length}) {
      const double t = (plane_z - origin.z()) / direction.z();
      if (t <= 1e-12 || t >= best_t) continue;
      const Eigen::Vector3d p = origin + t * direction;
      if (p.x() * p.x() + p.y() * p.y() > radius * radius) continue;
      best_t = t;
      hit.position = p;
      hit.normal = Eigen::Vector3d(0.0, 0.0, plane_z == 0.0 ? 1.0 : -1.0);
      hit.on_cap = true;
    }
  }

  if (!std::isfinite(best_t)) return std::nullopt;
  hit.distance = best_t;
  return hit;
}

void SceneConfig::validate() const {
  if (radius <= 0.0 || length <= 0.0) throw Error(Errc::invalid_config, "radius and length must be positive");
  if (focal <= 0.0) throw Error(Errc::invalid_config, "focal length must be positive");
  if (width < 32 || height < 32) throw Error(Errc::invalid_config, "image size must be at least 32x32");
  if (texture_scale <= 0.0) throw Error(Errc::invalid_config, "texture_scale must be positive");
  if (light_falloff < 0.0) throw Error(Errc::invalid_config, "light_falloff must be non-negative");
  if (trajectory.empty()) throw Error(Errc::invalid_config, "trajectory is empty");
  for (const Pose& p : trajectory) {
    const double r2 = p.center.x() * p.center.x() + p.center.y() * p.center.y();
    if (r2 >= radius * radius || p.center.z() <= 0.0 || p.center.z() >= length)
      throw Error(Errc::invalid_config,
                  "camera center " + std::to_string(p.id) + " is not strictly inside the tube");
    if (!is_valid_rotation(p.rotation, 1e-9))
      throw Error(Errc::invalid_config, "pose " + std::to_string(p.id) + " rotation is not in SO(3)");
  }
}

RenderedScene render_scene(const SceneConfig& config, bool with_depth) {
  config.validate();

  RenderedScene scene;
  scene.poses = config.trajectory;
  scene.frames.source = "synthetic";
  scene.frames.frames.reserve(config.trajectory.size());

  const double cx = 0.5 * (config.width - 1);
  const double cy = 0.5 * (config.height - 1);

  for (std::size_t fi = 0; fi < config.trajectory.size(); ++fi) {
    const Pose& pose = config.trajectory[fi];
    Frame frame;
    frame.index = int(fi);
    frame.width = config.width;
    frame.height = config.height;
    frame.pixels.resize(std::size_t(config.width) * config.height);

    std::vector<float> depth;
    if (with_depth) depth.resize(frame.pixels.size());

    for (int y = 0; y < config.height; ++y) {
      for (int x = 0; x < config.width; ++x) {
        const Eigen::Vector3d dir_cam((x - cx) / config.focal, (y - cy) / config.focal, 1.0);
        const Eigen::Vector3d dir = (pose.rotation * dir_cam).normalized();
        const auto hit = ray_cylinder_intersect(pose.center, dir, config.radius, config.length);
        double intensity = 0.0;
        double d = 0.0;
        if (hit) {
          d = hit->distance;
          const double u = std::atan2(hit->position.y(), hit->position.x());
          const double v = hit->position.z();
          const double tex =
              tube_texture(config.texture_seed, config.texture_scale, config.radius,
                           u < 0.0 ? u + kTwoPi : u, v);
          double brightness = 1.0;
          if (config.light_falloff > 0.0) {
            const double d2 = std::max(d * d, 1e-9);
            brightness = std::min(1.0, 1.0 / (config.light_falloff * d2));
          }
          intensity = tex * brightness;
        }
        frame.at(x, y) = std::uint8_t(std::lround(255.0 * intensity));
        if (with_depth) depth[std::size_t(y) * config.width + x] = float(d);
      }
    }
    scene.frames.frames.push_back(std::move(frame));
    if (with_depth) scene.depth_maps.push_back(std::move(depth));
  }
  return scene;
}

namespace {

Eigen::Matrix3d rot_x(double rad) {
  return Eigen::AngleAxisd(rad, Eigen::Vector3d::UnitX()).toRotationMatrix();
}
Eigen::Matrix3d rot_y(double rad) {
  return Eigen::AngleAxisd(rad, Eigen::Vector3d::UnitY()).toRotationMatrix();
}
Eigen::Matrix3d rot_z(double rad) {
  return Eigen::AngleAxisd(rad, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}
constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

} // namespace

std::vector<Pose> dolly_trajectory(int frame_count, double z_start, double z_step) {
  std::vector<Pose> poses(std::size_t(frame_count), Pose{});
  for (int i = 0; i < frame_count; ++i) {
    poses[std::size_t(i)].id = i;
    poses[std::size_t(i)].center = Eigen::Vector3d(0.0, 0.0, z_start + i * z_step);
  }
  return poses;
}

std::vector<Pose> pan_trajectory(int frame_count, double z_pos, double yaw_step_deg) {
  std::vector<Pose> poses(std::size_t(frame_count), Pose{});
  for (int i = 0; i < frame_count; ++i) {
    poses[std::size_t(i)].id = i;
    poses[std::size_t(i)].center = Eigen::Vector3d(0.0, 0.0, z_pos);
    poses[std::size_t(i)].rotation = rot_y(deg2rad(i * yaw_step_deg));
  }
  return poses;
}

std::vector<Pose> tilt_trajectory(int frame_count, double z_start, double z_step,
                                  double tilt_step_deg) {
  std::vector<Pose> poses(std::size_t(frame_count), Pose{});
  for (int i = 0; i < frame_count; ++i) {
    poses[std::size_t(i)].id = i;
    poses[std::size_t(i)].center = Eigen::Vector3d(0.0, 0.0, z_start + i * z_step);
    const double a = deg2rad(i * tilt_step_deg);
    poses[std::size_t(i)].rotation = rot_x(a) * rot_y(a); // diagonal tilt
  }
  return poses;
}

std::vector<Pose> roll_trajectory(int frame_count, double z_start, double z_step,
                                  double roll_step_deg) {
  std::vector<Pose> poses(std::size_t(frame_count), Pose{});
  for (int i = 0; i < frame_count; ++i) {
    poses[std::size_t(i)].id = i;
    poses[std::size_t(i)].center = Eigen::Vector3d(0.0, 0.0, z_start + i * z_step);
    poses[std::size_t(i)].rotation = rot_z(deg2rad(i * roll_step_deg));
  }
  return poses;
}

void write_depth(const std::filesystem::path& path, const std::vector<float>& depth, int width,
                 int height) {
  if (int(depth.size()) != width * height)
    throw Error(Errc::size_mismatch, "depth buffer does not match the stated size");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  const char magic[4] = {'P', 'F', 'D', 'P'};
  out.write(magic, 4);
  const std::uint32_t w = std::uint32_t(width), h = std::uint32_t(height);
  out.write(reinterpret_cast<const char*>(&w), 4);
  out.write(reinterpret_cast<const char*>(&h), 4);
  out.write(reinterpret_cast<const char*>(depth.data()), std::streamsize(depth.size() * 4));
  if (!out) throw Error(Errc::io_error, "depth write failed: " + path.string());
}

std::vector<float> read_depth(const std::filesystem::path& path, int& width, int& height) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, "PFDP", 4) != 0)
    throw Error(Errc::decode_error, "not a depth file: " + path.string());
  std::uint32_t w = 0, h = 0;
  in.read(reinterpret_cast<char*>(&w), 4);
  in.read(reinterpret_cast<char*>(&h), 4);
  std::vector<float> depth(std::size_t(w) * h);
  in.read(reinterpret_cast<char*>(depth.data()), std::streamsize(depth.size() * 4));
  if (in.gcount() != std::streamsize(depth.size() * 4))
    throw Error(Errc::decode_error, "truncated depth file: " + path.string());
  width = int(w);
  height = int(h);
  return depth;
}

} // namespace pipeframe
