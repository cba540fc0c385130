#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "seqhand/camera.hpp"
#include "seqhand/types.hpp"

namespace seqhand {

// Training losses as standalone kernels.
//
// Reduction convention: every norm is reduced by the MEAN over its scalar
// coordinates, so L1 over 21 2D joints divides by 42 and squared L2 over N 3D
// points divides by 3N. Ground truth is assumed to be expressed in the same
// frame as the (rotated) prediction.

struct LossWeights {
  double lambda_2d = 5.0;
  double lambda_3d = 100.0;
  double lambda_temp = 100.0;
  // Pose part of the temporal term; 0.01 is a common stronger setting.
  double lambda_temp_theta = 2e-4;
  double lambda_cam = 1.0;
  double lambda_mask = 10.0;

  bool valid() const;
};

// Binary hand mask, row-major, non-zero means hand.
struct MaskView {
  int width = 0;
  int height = 0;
  std::span<const std::uint8_t> pixels;

  // H(x): lookup at the rounded pixel, zero outside the frame.
  bool inside(const Vec2& x) const;
};

double loss_joint_2d(std::span<const Vec2> pred, std::span<const Vec2> truth);

// Squared L2. When non-null, grad_pred receives dL/dpred (dL/dtruth is its
// negation).
double loss_joint_3d(std::span<const Vec3> pred_rotated, std::span<const Vec3> truth,
                     std::vector<Vec3>* grad_pred = nullptr);
double loss_mesh_3d(std::span<const Vec3> pred_vertices, std::span<const Vec3> truth_vertices,
                    std::vector<Vec3>* grad_pred = nullptr);

// Fraction of projected vertices outside the mask. Not differentiable.
double loss_mask(std::span<const Vec2> vertices2d, const MaskView& mask);

struct TemporalGrad {
  Eigen::VectorXd beta_prev, beta_cur, theta_prev, theta_cur;
};

double loss_temporal(const Eigen::VectorXd& beta_prev, const Eigen::VectorXd& beta_cur,
                     const Eigen::VectorXd& theta_prev, const Eigen::VectorXd& theta_cur,
                     double lambda_temp_theta, TemporalGrad* grad = nullptr);

// {theta, beta, r, t, s} regression target.
struct CameraState {
  Eigen::VectorXd theta;
  Eigen::VectorXd beta;
  Vec3 r = Vec3::Zero();
  Vec2 t = Vec2::Zero();
  double s = 1.0;
};

// Sum over the five groups of each group's mean squared difference. grad
// receives dL/dpred in the same layout.
double loss_camera(const CameraState& pred, const CameraState& truth, CameraState* grad = nullptr);

struct FramePrediction {
  Eigen::VectorXd theta;
  Eigen::VectorXd beta;
  CameraParams cam;
  std::vector<Vec3> joints3d;  // J(theta, beta), rotated by R(cam.r) inside the totals
  std::vector<Vec2> joints2d;
  std::optional<std::vector<Vec3>> vertices3d;
};

struct OwnedMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  MaskView view() const { return {width, height, pixels}; }
};

struct FrameTruth {
  Eigen::VectorXd theta;
  Eigen::VectorXd beta;
  CameraParams cam;
  std::vector<Vec3> joints3d;
  std::vector<Vec2> joints2d;
  std::optional<std::vector<Vec3>> vertices3d;
  std::optional<OwnedMask> mask;
};

struct FramePair {
  FramePrediction pred;
  FrameTruth truth;
};

// Per-term values (each averaged over the frames where it applies) and the
// weighted total. Mesh and mask terms are skipped when their inputs are absent;
// the mesh term shares lambda_3d with the joint term.
struct LossBreakdown {
  double joint_2d = 0.0;
  double joint_3d = 0.0;
  double mesh_3d = 0.0;
  double mask = 0.0;
  double temporal = 0.0;
  double camera = 0.0;
  bool has_mesh = false;
  bool has_mask = false;
  bool has_temporal = false;
  double total = 0.0;
};

// Synthetic sequence criterion: 2D, 3D, temporal, camera and mask terms.
LossBreakdown loss_total_seqhand(std::span<const FramePair> frames, const LossWeights& weights);
// Real-image adaptation criterion: as above without the camera term.
LossBreakdown loss_total_real(std::span<const FramePair> frames, const LossWeights& weights);

}  // namespace seqhand
