#pragma once

#include <span>
#include <vector>

#include "seqhand/types.hpp"

namespace seqhand {

// Weak-perspective camera: x2d = s * Pi(R(r) * x3d) + t.
//
// Image convention: origin at the top-left pixel centre, x to the right, y
// down, units of pixels. Pixel (i, j) is centred on the integer coordinate
// (i, j). After rotation the camera looks down +z; smaller z is nearer.
struct CameraParams {
  double s = 1.0;
  Vec2 t = Vec2::Zero();
  Vec3 r = Vec3::Zero();

  bool valid() const;
};

Mat3 rodrigues(const Vec3& r);

// Inverse of rodrigues, returning the canonical vector with norm <= pi.
Vec3 rotation_to_axis_angle(const Mat3& rotation);

Mat3 skew(const Vec3& v);

Vec2 project_weak(const Vec3& point, const CameraParams& cam);
std::vector<Vec2> project_weak(std::span<const Vec3> points, const CameraParams& cam);

// Rotated depth of each point (the coordinate dropped by the projection).
std::vector<double> camera_depth(std::span<const Vec3> points, const CameraParams& cam);

}  // namespace seqhand
