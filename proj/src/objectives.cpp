#include "seqhand/objectives.hpp"

#include <cmath>

#include "seqhand/error.hpp"

namespace seqhand {

namespace {

template <typename A, typename B>
void require_same_size(const A& a, const B& b, const char* what) {
  if (a.size() != b.size()) {
    fail(ErrorKind::InvalidArgument, std::string(what) + ": dimension mismatch (" +
                                         std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
}

double mean_squared_points(std::span<const Vec3> pred, std::span<const Vec3> truth,
                           std::vector<Vec3>* grad, const char* what) {
  require_same_size(pred, truth, what);
  if (pred.empty()) fail(ErrorKind::InvalidArgument, std::string(what) + ": no points");
  const double n = 3.0 * static_cast<double>(pred.size());
  double sum = 0.0;
  if (grad) grad->resize(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const Vec3 d = pred[i] - truth[i];
    sum += d.squaredNorm();
    if (grad) (*grad)[i] = 2.0 * d / n;
  }
  return sum / n;
}

double mean_squared(const Eigen::VectorXd& a, const Eigen::VectorXd& b, Eigen::VectorXd* grad,
                    const char* what) {
  require_same_size(a, b, what);
  if (a.size() == 0) {
    if (grad) grad->resize(0);
    return 0.0;
  }
  const Eigen::VectorXd d = a - b;
  const auto n = static_cast<double>(a.size());
  if (grad) *grad = 2.0 * d / n;
  return d.squaredNorm() / n;
}

std::vector<Vec3> rotated(std::span<const Vec3> pts, const Vec3& r) {
  const Mat3 rot = rodrigues(r);
  std::vector<Vec3> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.emplace_back(rot * p);
  return out;
}

CameraState camera_state(const Eigen::VectorXd& theta, const Eigen::VectorXd& beta, const CameraParams& cam) {
  return {theta, beta, cam.r, cam.t, cam.s};
}

LossBreakdown accumulate(std::span<const FramePair> frames, const LossWeights& weights, bool with_camera) {
  if (!weights.valid()) fail(ErrorKind::InvalidArgument, "loss weights must be finite and non-negative");
  if (frames.empty()) fail(ErrorKind::InvalidArgument, "no frames");
  LossBreakdown out;
  int mesh_frames = 0;
  int mask_frames = 0;
  for (const auto& f : frames) {
    out.joint_2d += loss_joint_2d(f.pred.joints2d, f.truth.joints2d);
    const auto pred3d = rotated(f.pred.joints3d, f.pred.cam.r);
    out.joint_3d += loss_joint_3d(pred3d, f.truth.joints3d);
    if (f.pred.vertices3d && f.truth.vertices3d) {
      out.mesh_3d += loss_mesh_3d(rotated(*f.pred.vertices3d, f.pred.cam.r), *f.truth.vertices3d);
      ++mesh_frames;
    }
    if (f.pred.vertices3d && f.truth.mask) {
      const auto v2d = project_weak(std::span<const Vec3>(*f.pred.vertices3d), f.pred.cam);
      out.mask += loss_mask(v2d, f.truth.mask->view());
      ++mask_frames;
    }
    if (with_camera) {
      out.camera += loss_camera(camera_state(f.pred.theta, f.pred.beta, f.pred.cam),
                                camera_state(f.truth.theta, f.truth.beta, f.truth.cam));
    }
  }
  const auto n = static_cast<double>(frames.size());
  out.joint_2d /= n;
  out.joint_3d /= n;
  out.camera /= n;
  out.has_mesh = mesh_frames > 0;
  out.has_mask = mask_frames > 0;
  if (out.has_mesh) out.mesh_3d /= mesh_frames;
  if (out.has_mask) out.mask /= mask_frames;

  out.has_temporal = frames.size() > 1;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    out.temporal += loss_temporal(frames[i - 1].pred.beta, frames[i].pred.beta, frames[i - 1].pred.theta,
                                  frames[i].pred.theta, weights.lambda_temp_theta);
  }
  if (out.has_temporal) out.temporal /= static_cast<double>(frames.size() - 1);

  out.total = weights.lambda_2d * out.joint_2d + weights.lambda_3d * (out.joint_3d + out.mesh_3d) +
              weights.lambda_temp * out.temporal + weights.lambda_mask * out.mask;
  if (with_camera) out.total += weights.lambda_cam * out.camera;
  return out;
}

}  // namespace

bool LossWeights::valid() const {
  for (const double w : {lambda_2d, lambda_3d, lambda_temp, lambda_temp_theta, lambda_cam, lambda_mask}) {
    if (!(w >= 0.0) || !std::isfinite(w)) return false;
  }
  return true;
}

bool MaskView::inside(const Vec2& x) const {
  if (!x.allFinite()) return false;
  const double px = std::round(x.x());
  const double py = std::round(x.y());
  if (px < 0.0 || py < 0.0 || px >= width || py >= height) return false;
  return pixels[static_cast<std::size_t>(py) * static_cast<std::size_t>(width) + static_cast<std::size_t>(px)] != 0;
}

double loss_joint_2d(std::span<const Vec2> pred, std::span<const Vec2> truth) {
  require_same_size(pred, truth, "loss_joint_2d");
  if (pred.empty()) fail(ErrorKind::InvalidArgument, "loss_joint_2d: no points");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) sum += (pred[i] - truth[i]).cwiseAbs().sum();
  return sum / (2.0 * static_cast<double>(pred.size()));
}

double loss_joint_3d(std::span<const Vec3> pred_rotated, std::span<const Vec3> truth, std::vector<Vec3>* grad_pred) {
  return mean_squared_points(pred_rotated, truth, grad_pred, "loss_joint_3d");
}

double loss_mesh_3d(std::span<const Vec3> pred_vertices, std::span<const Vec3> truth_vertices,
                    std::vector<Vec3>* grad_pred) {
  return mean_squared_points(pred_vertices, truth_vertices, grad_pred, "loss_mesh_3d");
}

double loss_mask(std::span<const Vec2> vertices2d, const MaskView& mask) {
  if (vertices2d.empty()) fail(ErrorKind::InvalidArgument, "loss_mask: no vertices");
  if (mask.width <= 0 || mask.height <= 0 ||
      mask.pixels.size() != static_cast<std::size_t>(mask.width) * static_cast<std::size_t>(mask.height)) {
    fail(ErrorKind::InvalidArgument, "loss_mask: mask size does not match its dimensions");
  }
  std::size_t hits = 0;
  for (const auto& v : vertices2d) hits += mask.inside(v) ? 1 : 0;
  return 1.0 - static_cast<double>(hits) / static_cast<double>(vertices2d.size());
}

double loss_temporal(const Eigen::VectorXd& beta_prev, const Eigen::VectorXd& beta_cur,
                     const Eigen::VectorXd& theta_prev, const Eigen::VectorXd& theta_cur,
                     double lambda_temp_theta, TemporalGrad* grad) {
  if (!(lambda_temp_theta >= 0.0)) fail(ErrorKind::InvalidArgument, "lambda_temp_theta must be >= 0");
  Eigen::VectorXd gb;
  Eigen::VectorXd gt;
  const double shape_term = mean_squared(beta_prev, beta_cur, grad ? &gb : nullptr, "loss_temporal beta");
  double pose_term = 0.0;
  if (lambda_temp_theta != 0.0) {
    pose_term = mean_squared(theta_prev, theta_cur, grad ? &gt : nullptr, "loss_temporal theta");
  } else {
    gt = Eigen::VectorXd::Zero(theta_prev.size());
  }
  if (grad) {
    grad->beta_prev = gb;
    grad->beta_cur = -gb;
    grad->theta_prev = lambda_temp_theta * gt;
    grad->theta_cur = -lambda_temp_theta * gt;
  }
  return shape_term + lambda_temp_theta * pose_term;
}

double loss_camera(const CameraState& pred, const CameraState& truth, CameraState* grad) {
  Eigen::VectorXd g_theta;
  Eigen::VectorXd g_beta;
  Eigen::VectorXd g_r;
  Eigen::VectorXd g_t;
  Eigen::VectorXd g_s;
  const bool want = grad != nullptr;
  double total = mean_squared(pred.theta, truth.theta, want ? &g_theta : nullptr, "loss_camera theta");
  total += mean_squared(pred.beta, truth.beta, want ? &g_beta : nullptr, "loss_camera beta");
  total += mean_squared(Eigen::VectorXd(pred.r), Eigen::VectorXd(truth.r), want ? &g_r : nullptr, "loss_camera r");
  total += mean_squared(Eigen::VectorXd(pred.t), Eigen::VectorXd(truth.t), want ? &g_t : nullptr, "loss_camera t");
  total += mean_squared(Eigen::VectorXd::Constant(1, pred.s), Eigen::VectorXd::Constant(1, truth.s),
                        want ? &g_s : nullptr, "loss_camera s");
  if (grad) {
    grad->theta = g_theta;
    grad->beta = g_beta;
    grad->r = g_r;
    grad->t = g_t;
    grad->s = g_s[0];
  }
  return total;
}

LossBreakdown loss_total_seqhand(std::span<const FramePair> frames, const LossWeights& weights) {
  return accumulate(frames, weights, true);
}

LossBreakdown loss_total_real(std::span<const FramePair> frames, const LossWeights& weights) {
  return accumulate(frames, weights, false);
}

}  // namespace seqhand
