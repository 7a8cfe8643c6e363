#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <vector>

namespace pipeframe {

// Camera pose: world-from-camera rotation and the camera center in world
// coordinates.
struct Pose {
  int id = 0;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
};

bool is_valid_rotation(const Eigen::Matrix3d& R, double tol = 1e-9);

// x -> s * R * x + t
struct Sim3Transform {
  double s = 1.0;
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Vector3d t = Eigen::Vector3d::Zero();

  Eigen::Vector3d apply(const Eigen::Vector3d& x) const { return s * (R * x) + t; }
  Sim3Transform inverse() const;
  // Composition: (*this)(inner(x)).
  Sim3Transform after(const Sim3Transform& inner) const;
};

struct UmeyamaResult {
  Sim3Transform transform;
  // Set when the two smallest singular values of the cross-covariance are
  // below 1e-12 of the largest: rotation about the point line is ambiguous.
  bool collinear_warning = false;
};

// Closed-form least-squares Sim(3): minimizes sum |s*R*source_i + t - target_i|^2.
UmeyamaResult umeyama(const std::vector<Eigen::Vector3d>& source,
                      const std::vector<Eigen::Vector3d>& target, bool with_scale = true);

struct NormalizationResult {
  std::vector<Pose> poses;
  Sim3Transform transform; // the normalization that was applied to the centers
};

// Centers translated so their centroid is the origin, scaled to unit RMS
// distance; rotations unchanged.
NormalizationResult normalize_trajectory(const std::vector<Pose>& poses);

struct AlignmentReport {
  Sim3Transform transform; // maps raw GT centers into the prediction frame
  double rmse = 0.0;
  std::vector<double> per_point_residuals;
  bool collinear_warning = false;
};

AlignmentReport align_trajectories(const std::vector<Pose>& gt, const std::vector<Pose>& pred,
                                   bool normalize_gt = true);

// JSON pose files: {"poses": [{"id": ..., "rotation": [9, row-major], "center": [3]}]}
std::vector<Pose> load_poses(const std::filesystem::path& path);
void save_poses(const std::filesystem::path& path, const std::vector<Pose>& poses);

} // namespace pipeframe
