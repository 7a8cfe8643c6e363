#include "pipeframe/sim3.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "pipeframe/error.hpp"

namespace pipeframe {

using nlohmann::json;

bool is_valid_rotation(const Eigen::Matrix3d& R, double tol) {
  const double orth = (R.transpose() * R - Eigen::Matrix3d::Identity()).norm();
  return orth <= tol && std::abs(R.determinant() - 1.0) <= tol;
}

Sim3Transform Sim3Transform::inverse() const {
  Sim3Transform inv;
  inv.s = 1.0 / s;
  inv.R = R.transpose();
  inv.t = -(inv.s * (inv.R * t));
  return inv;
}

Sim3Transform Sim3Transform::after(const Sim3Transform& inner) const {
  // x -> s * R * (s_i * R_i * x + t_i) + t
  Sim3Transform out;
  out.s = s * inner.s;
  out.R = R * inner.R;
  out.t = s * (R * inner.t) + t;
  return out;
}

UmeyamaResult umeyama(const std::vector<Eigen::Vector3d>& source,
                      const std::vector<Eigen::Vector3d>& target, bool with_scale) {
  const std::size_t n = source.size();
  if (n != target.size()) throw Error(Errc::count_mismatch, "point counts differ");
  if (n < 3) throw Error(Errc::too_few_points, "need at least 3 point pairs");

  Eigen::Vector3d mu_s = Eigen::Vector3d::Zero(), mu_t = Eigen::Vector3d::Zero();
  for (std::size_t k = 0; k < n; ++k) {
    mu_s += source[k];
    mu_t += target[k];
  }
  mu_s /= double(n);
  mu_t /= double(n);

  Eigen::Matrix3d sigma = Eigen::Matrix3d::Zero();
  double var_s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::Vector3d ds = source[k] - mu_s;
    const Eigen::Vector3d dt = target[k] - mu_t;
    sigma += dt * ds.transpose();
    var_s += ds.squaredNorm();
  }
  sigma /= double(n);
  var_s /= double(n);
  if (var_s <= 0.0)
    throw Error(Errc::degenerate_configuration, "source points are all coincident");

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(sigma, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d d = svd.singularValues();
  Eigen::Vector3d s_diag(1.0, 1.0, 1.0);
  if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0) s_diag(2) = -1.0;

  UmeyamaResult result;
  result.collinear_warning = d(0) > 0.0 && d(1) < 1e-12 * d(0) && d(2) < 1e-12 * d(0);
  result.transform.R = svd.matrixU() * s_diag.asDiagonal() * svd.matrixV().transpose();
  result.transform.s = with_scale ? d.dot(s_diag) / var_s : 1.0;
  if (result.transform.s <= 0.0)
    throw Error(Errc::degenerate_configuration, "target points are all coincident");
  result.transform.t = mu_t - result.transform.s * (result.transform.R * mu_s);
  return result;
}

NormalizationResult normalize_trajectory(const std::vector<Pose>& poses) {
  if (poses.size() < 2)
    throw Error(Errc::too_few_points, "need at least 2 poses to normalize");

  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const Pose& p : poses) centroid += p.center;
  centroid /= double(poses.size());

  double ms = 0.0;
  for (const Pose& p : poses) ms += (p.center - centroid).squaredNorm();
  ms /= double(poses.size());
  if (ms <= 0.0)
    throw Error(Errc::degenerate_configuration, "all camera centers coincide");

  NormalizationResult result;
  result.transform.s = 1.0 / std::sqrt(ms);
  result.transform.R = Eigen::Matrix3d::Identity();
  result.transform.t = -result.transform.s * centroid;
  result.poses = poses;
  for (Pose& p : result.poses) p.center = result.transform.apply(p.center);
  return result;
}

AlignmentReport align_trajectories(const std::vector<Pose>& gt, const std::vector<Pose>& pred,
                                   bool normalize_gt) {
  if (gt.size() != pred.size())
    throw Error(Errc::count_mismatch, "trajectory lengths differ");
  if (gt.size() < 3) throw Error(Errc::too_few_points, "need at least 3 poses");

  Sim3Transform pre; // identity unless normalizing
  std::vector<Eigen::Vector3d> source;
  source.reserve(gt.size());
  if (normalize_gt) {
    NormalizationResult norm = normalize_trajectory(gt);
    pre = norm.transform;
    for (const Pose& p : norm.poses) source.push_back(p.center);
  } else {
    for (const Pose& p : gt) source.push_back(p.center);
  }

  std::vector<Eigen::Vector3d> target;
  target.reserve(pred.size());
  for (const Pose& p : pred) target.push_back(p.center);

  const UmeyamaResult fit = umeyama(source, target, true);

  AlignmentReport report;
  report.transform = fit.transform.after(pre);
  report.collinear_warning = fit.collinear_warning;
  report.per_point_residuals.reserve(gt.size());
  double sum_sq = 0.0;
  for (std::size_t k = 0; k < gt.size(); ++k) {
    const double r = (report.transform.apply(gt[k].center) - pred[k].center).norm();
    report.per_point_residuals.push_back(r);
    sum_sq += r * r;
  }
  report.rmse = std::sqrt(sum_sq / double(gt.size()));
  return report;
}

std::vector<Pose> load_poses(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, path.string() + ": " + e.what());
  }
  if (!doc.contains("poses") || !doc["poses"].is_array())
    throw Error(Errc::parse_error, path.string() + ": missing 'poses' array");

  std::vector<Pose> poses;
  poses.reserve(doc["poses"].size());
  for (const json& jp : doc["poses"]) {
    try {
      Pose p;
      p.id = jp.at("id").get<int>();
      const auto rot = jp.at("rotation").get<std::vector<double>>();
      const auto ctr = jp.at("center").get<std::vector<double>>();
      if (rot.size() != 9 || ctr.size() != 3)
        throw Error(Errc::parse_error, path.string() + ": rotation must have 9 values, center 3");
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) p.rotation(r, c) = rot[std::size_t(3 * r + c)];
      p.center = Eigen::Vector3d(ctr[0], ctr[1], ctr[2]);
      if (!is_valid_rotation(p.rotation))
        throw Error(Errc::parse_error,
                    path.string() + ": pose " + std::to_string(p.id) + " rotation is not in SO(3)");
      poses.push_back(p);
    } catch (const json::exception& e) {
      throw Error(Errc::parse_error, path.string() + ": " + e.what());
    }
  }
  return poses;
}

void save_poses(const std::filesystem::path& path, const std::vector<Pose>& poses) {
  nlohmann::ordered_json doc;
  doc["poses"] = nlohmann::ordered_json::array();
  for (const Pose& p : poses) {
    nlohmann::ordered_json jp;
    jp["id"] = p.id;
    std::vector<double> rot(9);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) rot[std::size_t(3 * r + c)] = p.rotation(r, c);
    jp["rotation"] = rot;
    jp["center"] = std::vector<double>{p.center.x(), p.center.y(), p.center.z()};
    doc["poses"].push_back(jp);
  }
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out << doc.dump(2) << "\n";
}

} // namespace pipeframe
