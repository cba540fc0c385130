#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "seqhand/types.hpp"

namespace seqhand {

class Rng;

struct KinematicTree {
  std::array<int, kJointCount> parent{};
  std::array<Vec3, kJointCount> template_offsets = zeros<Vec3, kJointCount>();
  std::array<std::string, kJointCount> names{};
  // Joints that carry a rotation: every non-root, non-tip joint (15).
  std::array<int, kArticulatedCount> articulated{};

  // Position of joint j in `articulated`, or -1.
  int articulated_slot(int joint) const;
  // The unique child of a non-tip joint.
  int child(int joint) const;
};

struct SkinInfluence {
  int joint = 0;  // transform owner
  double weight = 0.0;
};

struct HandMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  // At most four influences per vertex, weights sum to one.
  std::vector<std::vector<SkinInfluence>> skin;
  std::vector<std::array<std::uint8_t, 3>> colors;
  // Bone (identified by its end joint) each vertex was generated from.
  std::vector<int> vertex_bone;
};

// Rigid transform of one joint frame: x -> rotation * (x - rest_origin) + origin.
struct JointTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 rest_origin = Vec3::Zero();
  Vec3 origin = Vec3::Zero();

  Vec3 apply(const Vec3& x) const { return rotation * (x - rest_origin) + origin; }
};

struct PoseBasis {
  Eigen::Matrix<double, kPoseDim, 1> mean;
  // Columns are orthonormal components ordered by decreasing variance.
  Eigen::Matrix<double, kPoseDim, Eigen::Dynamic> components;
  Eigen::VectorXd variances;
  double total_variance = 0.0;

  int k() const { return static_cast<int>(components.cols()); }
  double explained_variance() const { return variances.sum(); }
};

struct FitResult {
  HandPose pose;
  double residual = 0.0;  // RMS joint error in mm
};

struct JointLimits {
  Vec3 curl_normal = Vec3::UnitZ();
  double flex_min = 0.0;
  double flex_max = 0.0;
  double abd_min = 0.0;
  double abd_max = 0.0;
};

struct ColorTemplate {
  int id = 0;
  std::string name;
  std::array<std::uint8_t, 3> base{};
};

enum class VertexClass { Palm = 0, Finger, Nail };

// Procedural parametric hand. Immutable after construction; all queries are
// const and safe to call concurrently.
class HandModel {
 public:
  static HandModel load(const std::filesystem::path& path);
  static HandModel parse(std::string_view text, std::string_view source = "<memory>");
  // The asset shipped with the library, compiled in.
  static const HandModel& builtin();

  int version() const { return version_; }
  const KinematicTree& tree() const { return tree_; }
  const std::vector<ColorTemplate>& color_templates() const { return colors_; }
  const JointLimits& limits(int articulated_slot) const {
    return limits_[static_cast<std::size_t>(articulated_slot)];
  }

  // Rest offsets J(beta) before accumulation.
  std::array<Vec3, kJointCount> shape_offsets(const HandShape& beta) const;
  // Rest skeleton J(beta).
  JointSet shape_skeleton(const HandShape& beta) const;
  JointSet joints_fk(const HandPose& theta, const HandShape& beta) const;
  // Per-joint frames for skinning; tips inherit their parent's frame.
  std::array<JointTransform, kJointCount> joint_transforms(const HandPose& theta,
                                                            const HandShape& beta) const;

  HandMesh rest_mesh(const HandShape& beta) const;
  HandMesh mesh_lbs(const HandPose& theta, const HandShape& beta) const;
  void apply_color_template(HandMesh& mesh, int template_id) const;

  FitResult fit_pose_params(const JointSet& target, const HandShape& beta) const;

  // Zero-twist pose drawn uniformly inside the per-joint flexion/abduction
  // ranges.
  HandPose sample_natural_pose(Rng& rng) const;

  // Zero-twist pose from six latent factors (one curl per finger, one shared
  // spread) plus small per-joint jitter. Captured hand motion concentrates on
  // such a low-dimensional set, which keeps synthetic databases dense enough
  // for nearest-neighbour snapping to move between records.
  HandPose sample_synergy_pose(Rng& rng) const;

  // Rotation axes used by sample_natural_pose, both orthogonal to the rest
  // bone direction of the joint.
  Vec3 flex_axis(int articulated_slot) const;
  Vec3 abduction_axis(int articulated_slot) const;

 private:
  HandModel() = default;
  void validate() const;

  int version_ = 0;
  KinematicTree tree_;
  std::array<std::array<Vec3, kJointCount>, kShapeDim> blend_ = blend_zeros();
  static std::array<std::array<Vec3, kJointCount>, kShapeDim> blend_zeros() {
    std::array<std::array<Vec3, kJointCount>, kShapeDim> b;
    b.fill(zeros<Vec3, kJointCount>());
    return b;
  }
  std::array<std::string, kShapeDim> blend_names_{};
  std::array<double, kJointCount> radius_start_{};
  std::array<double, kJointCount> radius_end_{};
  std::array<JointLimits, kArticulatedCount> limits_{};
  int rings_ = 4;
  int segments_ = 10;
  double skin_blend_ = 0.3;
  std::vector<ColorTemplate> colors_;
  std::array<double, 3> color_factor_{1.0, 1.0, 1.0};
};

PoseBasis pose_pca_fit(std::span<const HandPose> poses, int k);
Eigen::VectorXd pose_pca_project(const PoseBasis& basis, const HandPose& pose);
HandPose pose_pca_reconstruct(const PoseBasis& basis, const Eigen::VectorXd& coeffs);

// Bone segment lengths, indexed by end joint (entry 0 unused).
std::array<double, kJointCount> bone_lengths(const JointSet& joints, const KinematicTree& tree);

}  // namespace seqhand
