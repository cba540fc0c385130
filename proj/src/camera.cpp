#include "seqhand/camera.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

namespace seqhand {

bool CameraParams::valid() const {
  return std::isfinite(s) && s > 0.0 && t.allFinite() && r.allFinite() &&
         r.norm() <= std::numbers::pi + 1e-12;
}

Mat3 skew(const Vec3& v) {
  Mat3 k;
  k << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return k;
}

Mat3 rodrigues(const Vec3& r) {
  const double angle_sq = r.squaredNorm();
  if (angle_sq < 1e-16) {
    // Second-order series; exact identity at r = 0.
    const Mat3 k = skew(r);
    return Mat3::Identity() + k + 0.5 * k * k;
  }
  const double angle = std::sqrt(angle_sq);
  const Mat3 k = skew(r / angle);
  return Mat3::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * k * k;
}

Vec3 rotation_to_axis_angle(const Mat3& rotation) {
  const Eigen::AngleAxisd aa(rotation);
  return canonical_axis_angle(aa.axis() * aa.angle());
}

Vec2 project_weak(const Vec3& point, const CameraParams& cam) {
  const Vec3 rotated = rodrigues(cam.r) * point;
  return cam.s * rotated.head<2>() + cam.t;
}

std::vector<Vec2> project_weak(std::span<const Vec3> points, const CameraParams& cam) {
  const Mat3 rot = rodrigues(cam.r);
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    const Vec3 rotated = rot * p;
    out.emplace_back(cam.s * rotated.head<2>() + cam.t);
  }
  return out;
}

std::vector<double> camera_depth(std::span<const Vec3> points, const CameraParams& cam) {
  const Mat3 rot = rodrigues(cam.r);
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(rot.row(2).dot(p));
  return out;
}

}  // namespace seqhand
