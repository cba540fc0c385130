#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seqhand/camera.hpp"
#include "seqhand/hand_model.hpp"
#include "seqhand/pose_db.hpp"
#include "seqhand/types.hpp"

namespace seqhand {

class Rng;

using Vec2i = Eigen::Vector2i;

struct FlowConfig {
  int n_frames = 10;
  double alpha = 3.0;
  double noise_sigma = 0.0;  // mm, per coordinate, applied before snapping
  int width = 224;
  int height = 224;
  std::uint64_t seed = 0;

  void validate() const;
};

// Endpoint camera sampling ranges. Scale is relative to the fit-to-frame
// scale, translation is a fraction of the frame size, rotation magnitude is
// radians (uniform over the ball of that radius).
struct CameraBounds {
  double scale_min = 0.5;
  double scale_max = 1.5;
  double translate_min = 1.0 / 3.0;
  double translate_max = 2.0 / 3.0;
  double rotation_max = 3.14159265358979323846;
};

// Scale at which the neutral hand's reach is half the shorter frame side.
double fit_to_frame_scale(const HandModel& model, int width, int height);

struct FlowFrame {
  std::int64_t pose_record_id = 0;
  JointSet joints3d;      // snapped database pose, root-relative mm
  HandPose theta;         // fitted to joints3d under beta
  double fit_residual = 0.0;
  HandShape beta;
  CameraParams cam;
  Vec2i bg_offset = Vec2i::Zero();
  std::array<Vec2, kJointCount> joints2d = zeros<Vec2, kJointCount>();
};

struct PoseFlowSeq {
  std::vector<FlowFrame> frames;
  int color_template_id = 0;
  HandShape beta;
  FlowConfig config;
  std::string db_fingerprint;
};

struct FlowOptions {
  // Forces the endpoint records (database positions) instead of sampling them.
  std::optional<std::size_t> initial_index;
  std::optional<std::size_t> final_index;
  // Background source size; defaults to the frame size (single valid crop).
  int bg_width = 0;
  int bg_height = 0;
  CameraBounds camera_bounds;
  // When set, receives the pre-snap pose of frames 1..n-1.
  std::vector<JointSet>* pre_snap_trace = nullptr;
};

// One step toward `final`: prev - (alpha / n) * (prev - final), plus optional
// Gaussian jitter on every non-wrist coordinate. alpha == n returns `final`
// exactly when noise is off.
JointSet update_pose(const JointSet& prev, const JointSet& final_pose, double alpha, int n,
                     double noise_sigma, Rng& rng);

std::pair<CameraParams, CameraParams> sample_endpoint_cams(Rng& rng, const CameraBounds& bounds,
                                                           double fit_scale, int width, int height);
CameraParams interp_camera(const CameraParams& prev, const CameraParams& final_cam, double alpha, int n);

// Per-frame integer crop offsets for a source of src_width x src_height.
std::vector<Vec2i> background_traj(int src_width, int src_height, const FlowConfig& cfg, Rng& rng);

HandShape sample_shape(Rng& rng);

PoseFlowSeq generate_flow(const HandModel& model, const PoseDB& db, const PoseIndex& index,
                          const FlowConfig& cfg, Rng& rng, const FlowOptions& options = {});

}  // namespace seqhand
