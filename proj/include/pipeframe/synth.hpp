#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "pipeframe/image.hpp"
#include "pipeframe/sim3.hpp"

namespace pipeframe {

// Capped cylinder interior: wall x^2 + y^2 = radius^2, caps z = 0 and
// z = length. Cameras must sit strictly inside.
struct SceneConfig {
  double radius = 1.0;         // m
  double length = 20.0;        // m
  std::uint64_t texture_seed = 1;
  double texture_scale = 4.0;  // base noise cycles per meter on the wall
  double light_falloff = 0.05; // 1/m^2; brightness = min(1, 1/(falloff*d^2))
  int width = 256;
  int height = 144;
  double focal = 160.0;        // px
  std::vector<Pose> trajectory;

  void validate() const; // throws InvalidConfig
};

struct RayHit {
  Eigen::Vector3d position;
  Eigen::Vector3d normal; // unit, pointing into the tube interior
  double distance = 0.0;
  bool on_cap = false;
};

// Nearest positive intersection with the capped tube. |direction| must be 1;
// always hits when the origin is inside.
std::optional<RayHit> ray_cylinder_intersect(const Eigen::Vector3d& origin,
                                             const Eigen::Vector3d& direction, double radius,
                                             double length);

// Seamless multi-octave value noise on the unrolled wall, in [0, 1].
// u is the angle around the axis, v the axial position in meters.
double tube_texture(std::uint64_t seed, double texture_scale, double radius, double u, double v);

struct RenderedScene {
  FrameSequence frames;
  std::vector<Pose> poses;
  std::vector<std::vector<float>> depth_maps; // meters; empty unless requested
};

RenderedScene render_scene(const SceneConfig& config, bool with_depth = false);

// Trajectory presets. All cameras look along +z (the tube axis) before the
// per-frame rotation is applied; rotations are world-from-camera.
std::vector<Pose> dolly_trajectory(int frame_count, double z_start, double z_step);
std::vector<Pose> pan_trajectory(int frame_count, double z_pos, double yaw_step_deg);
std::vector<Pose> tilt_trajectory(int frame_count, double z_start, double z_step,
                                  double tilt_step_deg);
// In-plane rotation about the optical axis; used to build scenes with a
// controlled angular difference between frames.
std::vector<Pose> roll_trajectory(int frame_count, double z_start, double z_step,
                                  double roll_step_deg);

// Depth files: magic "PFDP", uint32 width, uint32 height (little-endian),
// then width*height float32 row-major.
void write_depth(const std::filesystem::path& path, const std::vector<float>& depth, int width,
                 int height);
std::vector<float> read_depth(const std::filesystem::path& path, int& width, int& height);

} // namespace pipeframe
