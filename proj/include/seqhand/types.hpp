#pragma once

#include <array>
#include <cstddef>
#include <span>

#include <Eigen/Core>

namespace seqhand {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr int kJointCount = 21;
inline constexpr int kArticulatedCount = 15;
inline constexpr int kPoseDim = 3 * kArticulatedCount;
inline constexpr int kShapeDim = 10;
inline constexpr int kJointCoords = 3 * kJointCount;

// Joint order: wrist, then thumb, index, middle, ring, pinky, each finger as
// MCP, PIP, DIP, TIP.
enum class Finger { Thumb = 0, Index, Middle, Ring, Pinky };

constexpr int finger_joint(Finger f, int segment) {
  return 1 + 4 * static_cast<int>(f) + segment;
}

constexpr bool is_tip(int joint) { return joint > 0 && joint % 4 == 0; }

// Eigen fixed-size types are not zeroed by value-initialization.
template <class T, std::size_t N>
std::array<T, N> zeros() {
  std::array<T, N> a;
  a.fill(T::Zero());
  return a;
}

// 21 root-relative joint positions in millimetres.
struct JointSet {
  std::array<Vec3, kJointCount> p = zeros<Vec3, kJointCount>();

  Vec3& operator[](int j) { return p[static_cast<std::size_t>(j)]; }
  const Vec3& operator[](int j) const { return p[static_cast<std::size_t>(j)]; }

  // Row-major x0 y0 z0 x1 ... as used by the pose database and its index.
  std::array<double, kJointCoords> flatten() const;
  static JointSet from_flat(std::span<const double> coords);

  bool finite() const;
  bool operator==(const JointSet& other) const;
};

// Axis-angle rotation per articulated joint, 15 x 3, in joint order
// (thumb MCP, PIP, DIP, index MCP, ...).
struct HandPose {
  Eigen::Matrix<double, kPoseDim, 1> theta = Eigen::Matrix<double, kPoseDim, 1>::Zero();

  Vec3 joint_rotation(int articulated) const { return theta.segment<3>(3 * articulated); }
  void set_joint_rotation(int articulated, const Vec3& r) {
    theta.segment<3>(3 * articulated) = r;
  }
};

struct HandShape {
  Eigen::Matrix<double, kShapeDim, 1> beta = Eigen::Matrix<double, kShapeDim, 1>::Zero();

  static constexpr double kLimit = 2.0;
  bool in_range() const;
};

// Wraps an axis-angle vector onto the canonical representative with norm <= pi.
Vec3 canonical_axis_angle(const Vec3& r);

double squared_distance(const JointSet& a, const JointSet& b);

}  // namespace seqhand
