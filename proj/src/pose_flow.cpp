#include "seqhand/pose_flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "seqhand/error.hpp"
#include "seqhand/random.hpp"

namespace seqhand {

void FlowConfig::validate() const {
  if (n_frames < 1) fail(ErrorKind::InvalidArgument, "n_frames must be >= 1");
  if (!(alpha > 0.0 && alpha <= n_frames)) {
    fail(ErrorKind::InvalidArgument, "alpha must lie in (0, n_frames]");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    fail(ErrorKind::InvalidArgument, "noise_sigma must be finite and >= 0");
  }
  if (width <= 0 || height <= 0) fail(ErrorKind::InvalidArgument, "frame size must be positive");
}

double fit_to_frame_scale(const HandModel& model, int width, int height) {
  const JointSet rest = model.shape_skeleton(HandShape{});
  double reach = 0.0;
  for (const auto& p : rest.p) reach = std::max(reach, p.norm());
  return 0.5 * std::min(width, height) / reach;
}

JointSet update_pose(const JointSet& prev, const JointSet& final_pose, double alpha, int n,
                     double noise_sigma, Rng& rng) {
  if (n < 1 || !(alpha > 0.0 && alpha <= n)) {
    fail(ErrorKind::InvalidArgument, "update gain alpha / n must lie in (0, 1]");
  }
  JointSet out;
  if (alpha == static_cast<double>(n)) {
    out = final_pose;
  } else {
    const double gain = alpha / n;
    for (int j = 0; j < kJointCount; ++j) {
      for (int c = 0; c < 3; ++c) out[j][c] = prev[j][c] - gain * (prev[j][c] - final_pose[j][c]);
    }
  }
  if (noise_sigma > 0.0) {
    for (int j = 1; j < kJointCount; ++j) {
      for (int c = 0; c < 3; ++c) out[j][c] += noise_sigma * rng.normal();
    }
  }
  return out;
}

std::pair<CameraParams, CameraParams> sample_endpoint_cams(Rng& rng, const CameraBounds& bounds,
                                                           double fit_scale, int width, int height) {
  auto sample = [&] {
    CameraParams cam;
    cam.s = fit_scale * rng.uniform(bounds.scale_min, bounds.scale_max);
    cam.t = Vec2(width * rng.uniform(bounds.translate_min, bounds.translate_max),
                 height * rng.uniform(bounds.translate_min, bounds.translate_max));
    // Uniform in the ball: isotropic direction, radius ~ cbrt(u).
    Vec3 dir(rng.normal(), rng.normal(), rng.normal());
    while (dir.squaredNorm() < 1e-24) dir = Vec3(rng.normal(), rng.normal(), rng.normal());
    cam.r = dir.normalized() * (bounds.rotation_max * std::cbrt(rng.uniform()));
    return cam;
  };
  CameraParams first = sample();
  CameraParams last = sample();
  return {first, last};
}

CameraParams interp_camera(const CameraParams& prev, const CameraParams& final_cam, double alpha, int n) {
  if (n < 1 || !(alpha > 0.0 && alpha <= n)) {
    fail(ErrorKind::InvalidArgument, "update gain alpha / n must lie in (0, 1]");
  }
  if (alpha == static_cast<double>(n)) return final_cam;
  const double gain = alpha / n;
  CameraParams out;
  out.s = std::max(prev.s - gain * (prev.s - final_cam.s), std::numeric_limits<double>::min());
  out.t = prev.t - gain * (prev.t - final_cam.t);
  out.r = prev.r - gain * (prev.r - final_cam.r);
  return out;
}

std::vector<Vec2i> background_traj(int src_width, int src_height, const FlowConfig& cfg, Rng& rng) {
  cfg.validate();
  if (src_width < cfg.width || src_height < cfg.height) {
    fail(ErrorKind::InvalidArgument, "background source " + std::to_string(src_width) + "x" +
                                         std::to_string(src_height) + " is smaller than the frame");
  }
  const int max_x = src_width - cfg.width;
  const int max_y = src_height - cfg.height;
  auto sample = [&] {
    return Vec2(static_cast<double>(rng.below(static_cast<std::uint64_t>(max_x) + 1)),
                static_cast<double>(rng.below(static_cast<std::uint64_t>(max_y) + 1)));
  };
  Vec2 cur = sample();
  const Vec2 target = sample();
  const double gain = cfg.alpha / cfg.n_frames;
  std::vector<Vec2i> out;
  out.reserve(static_cast<std::size_t>(cfg.n_frames));
  for (int k = 0; k < cfg.n_frames; ++k) {
    if (k > 0) cur = cfg.alpha == cfg.n_frames ? target : Vec2(cur - gain * (cur - target));
    out.emplace_back(std::clamp(static_cast<int>(std::lround(cur.x())), 0, max_x),
                     std::clamp(static_cast<int>(std::lround(cur.y())), 0, max_y));
  }
  return out;
}

HandShape sample_shape(Rng& rng) {
  HandShape shape;
  for (int i = 0; i < kShapeDim; ++i) shape.beta[i] = rng.uniform(-HandShape::kLimit, HandShape::kLimit);
  return shape;
}

PoseFlowSeq generate_flow(const HandModel& model, const PoseDB& db, const PoseIndex& index,
                          const FlowConfig& cfg, Rng& rng, const FlowOptions& options) {
  cfg.validate();
  if (db.empty() || index.size() != db.size()) {
    fail(ErrorKind::InvalidArgument, "pose flow needs a non-empty database and its index");
  }
  auto check_index = [&](std::size_t i) {
    if (i >= db.size()) fail(ErrorKind::InvalidArgument, "endpoint index out of range");
    return i;
  };

  // Draw order is fixed: endpoints, shape, colour, cameras, background, noise.
  const std::size_t initial = options.initial_index ? check_index(*options.initial_index)
                                                    : static_cast<std::size_t>(rng.below(db.size()));
  const std::size_t last = options.final_index ? check_index(*options.final_index)
                                               : static_cast<std::size_t>(rng.below(db.size()));
  PoseFlowSeq seq;
  seq.config = cfg;
  seq.db_fingerprint = db.fingerprint();
  seq.beta = sample_shape(rng);
  seq.color_template_id = static_cast<int>(rng.below(model.color_templates().size()));

  const double fit_scale = fit_to_frame_scale(model, cfg.width, cfg.height);
  auto [cam, cam_final] = sample_endpoint_cams(rng, options.camera_bounds, fit_scale, cfg.width, cfg.height);
  const int bg_w = options.bg_width > 0 ? options.bg_width : cfg.width;
  const int bg_h = options.bg_height > 0 ? options.bg_height : cfg.height;
  const auto offsets = background_traj(bg_w, bg_h, cfg, rng);

  const JointSet& final_pose = db[last].joints;
  std::size_t current = initial;
  seq.frames.reserve(static_cast<std::size_t>(cfg.n_frames));
  for (int k = 0; k < cfg.n_frames; ++k) {
    if (k > 0) {
      const JointSet updated = update_pose(db[current].joints, final_pose, cfg.alpha, cfg.n_frames,
                                           cfg.noise_sigma, rng);
      if (options.pre_snap_trace) options.pre_snap_trace->push_back(updated);
      current = index.nearest(updated).index;
      cam = interp_camera(cam, cam_final, cfg.alpha, cfg.n_frames);
    }
    FlowFrame frame;
    frame.pose_record_id = db[current].id;
    frame.joints3d = db[current].joints;
    frame.beta = seq.beta;
    const FitResult fit = model.fit_pose_params(frame.joints3d, seq.beta);
    frame.theta = fit.pose;
    frame.fit_residual = fit.residual;
    frame.cam = cam;
    frame.bg_offset = offsets[static_cast<std::size_t>(k)];
    const auto projected = project_weak(std::span<const Vec3>(frame.joints3d.p), cam);
    std::copy(projected.begin(), projected.end(), frame.joints2d.begin());
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

}  // namespace seqhand
