#include <cmath>
#include <numbers>

#include "seqhand/error.hpp"
#include "seqhand/types.hpp"

namespace seqhand {

const char* error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::Io: return "io";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Internal: return "internal";
  }
  return "internal";
}

std::array<double, kJointCoords> JointSet::flatten() const {
  std::array<double, kJointCoords> out{};
  for (int j = 0; j < kJointCount; ++j) {
    for (int c = 0; c < 3; ++c) out[static_cast<std::size_t>(3 * j + c)] = (*this)[j][c];
  }
  return out;
}

JointSet JointSet::from_flat(std::span<const double> coords) {
  if (coords.size() != kJointCoords) {
    fail(ErrorKind::InvalidArgument, "joint set needs 63 coordinates, got " +
                                         std::to_string(coords.size()));
  }
  JointSet js;
  for (int j = 0; j < kJointCount; ++j) {
    js[j] = Vec3(coords[3 * j], coords[3 * j + 1], coords[3 * j + 2]);
  }
  return js;
}

bool JointSet::finite() const {
  for (const auto& q : p) {
    if (!q.allFinite()) return false;
  }
  return true;
}

bool JointSet::operator==(const JointSet& other) const {
  for (int j = 0; j < kJointCount; ++j) {
    if ((*this)[j] != other[j]) return false;
  }
  return true;
}

bool HandShape::in_range() const {
  return beta.allFinite() && beta.cwiseAbs().maxCoeff() <= kLimit;
}

Vec3 canonical_axis_angle(const Vec3& r) {
  const double angle = r.norm();
  if (angle <= std::numbers::pi) return r;
  const Vec3 axis = r / angle;
  double wrapped = std::fmod(angle, 2.0 * std::numbers::pi);
  if (wrapped > std::numbers::pi) return -axis * (2.0 * std::numbers::pi - wrapped);
  return axis * wrapped;
}

double squared_distance(const JointSet& a, const JointSet& b) {
  double sum = 0.0;
  for (int j = 0; j < kJointCount; ++j) {
    for (int c = 0; c < 3; ++c) {
      const double d = a[j][c] - b[j][c];
      sum += d * d;
    }
  }
  return sum;
}

}  // namespace seqhand
