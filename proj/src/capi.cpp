#include "seqhand/seqhand.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <optional>
#include <string>

#include "seqhand/camera.hpp"
#include "seqhand/dataset.hpp"
#include "seqhand/error.hpp"
#include "seqhand/hand_model.hpp"
#include "seqhand/metrics.hpp"
#include "seqhand/objectives.hpp"
#include "seqhand/pose_db.hpp"
#include "seqhand/random.hpp"

struct sh_model {
  seqhand::HandModel model;
};
struct sh_db {
  seqhand::PoseDB db;
};
struct sh_index {
  seqhand::PoseIndex index;
};

namespace {

using namespace seqhand;

thread_local std::string g_last_error;

sh_status to_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return SH_ERR_INVALID_ARGUMENT;
    case ErrorKind::Io: return SH_ERR_IO;
    case ErrorKind::Parse: return SH_ERR_PARSE;
    case ErrorKind::Numeric: return SH_ERR_NUMERIC;
    case ErrorKind::Validation: return SH_ERR_VALIDATION;
    case ErrorKind::Internal: return SH_ERR_INTERNAL;
  }
  return SH_ERR_INTERNAL;
}

template <typename F>
sh_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return SH_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return SH_ERR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SH_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SH_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) fail(ErrorKind::InvalidArgument, what);
}

HandPose pose_from(const double* theta) {
  HandPose p;
  for (int i = 0; i < kPoseDim; ++i) p.theta[i] = theta[i];
  return p;
}

HandShape shape_from(const double* beta) {
  HandShape s;
  if (beta) {
    for (int i = 0; i < kShapeDim; ++i) s.beta[i] = beta[i];
  }
  return s;
}

void joints_to(const JointSet& js, double* out) {
  const auto flat = js.flatten();
  std::memcpy(out, flat.data(), sizeof(double) * flat.size());
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename V, int N>
std::vector<V> points_from(const double* data, size_t count) {
  std::vector<V> out(count);
  for (size_t i = 0; i < count; ++i) {
    for (int c = 0; c < N; ++c) out[i][c] = data[N * i + static_cast<size_t>(c)];
  }
  return out;
}

}  // namespace

extern "C" {

const char* sh_last_error(void) { return g_last_error.c_str(); }

const char* sh_status_name(sh_status status) {
  switch (status) {
    case SH_OK: return "ok";
    case SH_ERR_INVALID_ARGUMENT: return error_kind_name(ErrorKind::InvalidArgument);
    case SH_ERR_IO: return error_kind_name(ErrorKind::Io);
    case SH_ERR_PARSE: return error_kind_name(ErrorKind::Parse);
    case SH_ERR_NUMERIC: return error_kind_name(ErrorKind::Numeric);
    case SH_ERR_VALIDATION: return error_kind_name(ErrorKind::Validation);
    case SH_ERR_INTERNAL: return error_kind_name(ErrorKind::Internal);
  }
  return "internal";
}

const char* sh_version(void) { return "1.0.0"; }

void sh_string_free(char* s) { std::free(s); }

sh_status sh_model_builtin(sh_model** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = new sh_model{HandModel::builtin()};
  });
}

sh_status sh_model_load(const char* path, sh_model** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new sh_model{HandModel::load(path)};
  });
}

void sh_model_free(sh_model* model) { delete model; }

sh_status sh_model_joints_fk(const sh_model* model, const double theta[45], const double beta[10],
                             double joints_out[63]) {
  return guarded([&] {
    require(model && theta && joints_out, "null argument");
    joints_to(model->model.joints_fk(pose_from(theta), shape_from(beta)), joints_out);
  });
}

sh_status sh_model_shape_skeleton(const sh_model* model, const double beta[10], double joints_out[63]) {
  return guarded([&] {
    require(model && joints_out, "null argument");
    joints_to(model->model.shape_skeleton(shape_from(beta)), joints_out);
  });
}

sh_status sh_model_fit_pose(const sh_model* model, const double joints[63], const double beta[10],
                            double theta_out[45], double* residual_mm) {
  return guarded([&] {
    require(model && joints && theta_out, "null argument");
    const FitResult fit =
        model->model.fit_pose_params(JointSet::from_flat(std::span<const double>(joints, kJointCoords)), shape_from(beta));
    for (int i = 0; i < kPoseDim; ++i) theta_out[i] = fit.pose.theta[i];
    if (residual_mm) *residual_mm = fit.residual;
  });
}

sh_status sh_model_mesh_size(const sh_model* model, size_t* vertex_count, size_t* face_count) {
  return guarded([&] {
    require(model != nullptr, "null model");
    const HandMesh mesh = model->model.rest_mesh(HandShape{});
    if (vertex_count) *vertex_count = mesh.vertices.size();
    if (face_count) *face_count = mesh.faces.size();
  });
}

sh_status sh_model_mesh_lbs(const sh_model* model, const double theta[45], const double beta[10],
                            double* vertices_out, int32_t* faces_out) {
  return guarded([&] {
    require(model && theta && vertices_out, "null argument");
    const HandMesh mesh = model->model.mesh_lbs(pose_from(theta), shape_from(beta));
    for (size_t v = 0; v < mesh.vertices.size(); ++v) {
      for (int c = 0; c < 3; ++c) vertices_out[3 * v + static_cast<size_t>(c)] = mesh.vertices[v][c];
    }
    if (faces_out) {
      for (size_t f = 0; f < mesh.faces.size(); ++f) {
        for (size_t c = 0; c < 3; ++c) faces_out[3 * f + c] = mesh.faces[f][c];
      }
    }
  });
}

sh_status sh_db_load(const char* path, sh_db** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new sh_db{PoseDB::load(path)};
  });
}

sh_status sh_db_save(const sh_db* db, const char* path) {
  return guarded([&] {
    require(db && path, "null argument");
    db->db.save(path);
  });
}

sh_status sh_db_synthesize(const sh_model* model, size_t count, uint64_t seed, sh_db** out) {
  return guarded([&] {
    require(model && out, "null argument");
    require(count >= 1, "count must be >= 1");
    Rng rng(seed);
    *out = new sh_db{synthesize_db(model->model, count, rng)};
  });
}

void sh_db_free(sh_db* db) { delete db; }

size_t sh_db_size(const sh_db* db) { return db ? db->db.size() : 0; }

sh_status sh_db_fingerprint(const sh_db* db, char buf[17]) {
  return guarded([&] {
    require(db && buf, "null argument");
    const std::string fp = db->db.fingerprint();
    std::memcpy(buf, fp.c_str(), 17);
  });
}

sh_status sh_db_record(const sh_db* db, size_t position, int64_t* id_out, double joints_out[63]) {
  return guarded([&] {
    require(db != nullptr, "null database");
    require(position < db->db.size(), "record position out of range");
    const auto& r = db->db[position];
    if (id_out) *id_out = r.id;
    if (joints_out) joints_to(r.joints, joints_out);
  });
}

sh_status sh_index_build(const sh_db* db, sh_index** out) {
  return guarded([&] {
    require(db && out, "null argument");
    *out = new sh_index{PoseIndex(db->db)};
  });
}

void sh_index_free(sh_index* index) { delete index; }

sh_status sh_index_query(const sh_index* index, const double joints[63], int64_t* id_out, double* distance_mm) {
  return guarded([&] {
    require(index && joints, "null argument");
    const NearestPose hit = index->index.nearest(JointSet::from_flat(std::span<const double>(joints, kJointCoords)));
    if (id_out) *id_out = hit.id;
    if (distance_mm) *distance_mm = hit.distance;
  });
}

sh_status sh_rodrigues(const double r[3], double rotation_out[9]) {
  return guarded([&] {
    require(r && rotation_out, "null argument");
    const Vec3 rv(r[0], r[1], r[2]);
    require(rv.allFinite(), "non-finite rotation vector");
    const Mat3 m = rodrigues(rv);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) rotation_out[3 * i + j] = m(i, j);
    }
  });
}

sh_status sh_project_weak(const double* points, size_t count, const sh_camera* cam, double* out) {
  return guarded([&] {
    require(cam && (count == 0 || (points && out)), "null argument");
    CameraParams c;
    c.s = cam->s;
    c.t = Vec2(cam->t[0], cam->t[1]);
    c.r = Vec3(cam->r[0], cam->r[1], cam->r[2]);
    require(c.valid(), "invalid camera (need s > 0, finite t, |r| <= pi)");
    const auto pts = points_from<Vec3, 3>(points, count);
    const auto proj = project_weak(std::span<const Vec3>(pts), c);
    for (size_t i = 0; i < count; ++i) {
      out[2 * i] = proj[i].x();
      out[2 * i + 1] = proj[i].y();
    }
  });
}

sh_status sh_loss_joint_2d(const double* pred, const double* truth, size_t count, double* out) {
  return guarded([&] {
    require(pred && truth && out, "null argument");
    *out = loss_joint_2d(points_from<Vec2, 2>(pred, count), points_from<Vec2, 2>(truth, count));
  });
}

sh_status sh_loss_joint_3d(const double* pred, const double* truth, size_t count, double* out) {
  return guarded([&] {
    require(pred && truth && out, "null argument");
    *out = loss_joint_3d(points_from<Vec3, 3>(pred, count), points_from<Vec3, 3>(truth, count));
  });
}

sh_status sh_loss_mask(const double* vertices2d, size_t count, const uint8_t* mask, int width, int height,
                       double* out) {
  return guarded([&] {
    require(vertices2d && mask && out, "null argument");
    require(width > 0 && height > 0, "mask size must be positive");
    const MaskView view{width, height,
                        std::span<const std::uint8_t>(mask, static_cast<size_t>(width) * static_cast<size_t>(height))};
    *out = loss_mask(points_from<Vec2, 2>(vertices2d, count), view);
  });
}

sh_status sh_loss_temporal(const double* beta_prev, const double* beta_cur, size_t beta_dim, const double* theta_prev,
                           const double* theta_cur, size_t theta_dim, double lambda_temp_theta, double* out) {
  return guarded([&] {
    require(out && (beta_dim == 0 || (beta_prev && beta_cur)) && (theta_dim == 0 || (theta_prev && theta_cur)),
            "null argument");
    auto vec = [](const double* p, size_t n) {
      Eigen::VectorXd v(static_cast<Eigen::Index>(n));
      for (size_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = p[i];
      return v;
    };
    *out = loss_temporal(vec(beta_prev, beta_dim), vec(beta_cur, beta_dim), vec(theta_prev, theta_dim),
                         vec(theta_cur, theta_dim), lambda_temp_theta);
  });
}

sh_status sh_pck3d(const double* preds, const double* truths, size_t count, const double* thresholds,
                   size_t threshold_count, double* fractions_out) {
  return guarded([&] {
    require(preds && truths && thresholds && fractions_out, "null argument");
    const auto curve = pck3d(points_from<Vec3, 3>(preds, count), points_from<Vec3, 3>(truths, count),
                             std::span<const double>(thresholds, threshold_count));
    std::copy(curve.fractions.begin(), curve.fractions.end(), fractions_out);
  });
}

sh_status sh_auc(const double* thresholds, const double* fractions, size_t count, double* out) {
  return guarded([&] {
    require(thresholds && fractions && out, "null argument");
    PckCurve curve;
    curve.thresholds.assign(thresholds, thresholds + count);
    curve.fractions.assign(fractions, fractions + count);
    *out = auc(curve);
  });
}

void sh_gen_job_defaults(sh_gen_job* job) {
  if (!job) return;
  const FlowConfig flow;
  const CameraBounds bounds;
  *job = sh_gen_job{};
  job->sequence_count = 1;
  job->n_frames = flow.n_frames;
  job->alpha = flow.alpha;
  job->noise_sigma = flow.noise_sigma;
  job->width = flow.width;
  job->height = flow.height;
  job->seed = 0;
  job->workers = 1;
  job->scale_min = bounds.scale_min;
  job->scale_max = bounds.scale_max;
  job->translate_min = bounds.translate_min;
  job->translate_max = bounds.translate_max;
  job->rotation_max = bounds.rotation_max;
}

sh_status sh_gen(const sh_gen_job* job, size_t* frames_written) {
  return guarded([&] {
    require(job && job->db_path && job->background_dir && job->output_dir, "gen job needs db, backgrounds and output");
    GenJob j;
    j.db_path = job->db_path;
    j.background_dir = job->background_dir;
    j.output_dir = job->output_dir;
    if (job->model_path) j.model_path = job->model_path;
    j.sequence_count = job->sequence_count;
    j.flow.n_frames = job->n_frames;
    j.flow.alpha = job->alpha;
    j.flow.noise_sigma = job->noise_sigma;
    j.flow.width = job->width;
    j.flow.height = job->height;
    j.flow.seed = job->seed;
    j.workers = job->workers;
    j.camera_bounds = {job->scale_min, job->scale_max, job->translate_min, job->translate_max, job->rotation_max};
    const GenSummary summary = run_gen(j);
    if (frames_written) *frames_written = summary.frames;
  });
}

sh_status sh_eval(const char* pred_path, const char* truth_path, const double* thresholds, size_t threshold_count,
                  const char* csv_path, sh_eval_summary* out) {
  return guarded([&] {
    require(pred_path && truth_path && out, "null argument");
    const std::vector<double> grid = thresholds ? std::vector<double>(thresholds, thresholds + threshold_count)
                                                : default_pck_thresholds();
    const EvalSummary s = run_eval(pred_path, truth_path, grid);
    if (csv_path) {
      require(s.dims == 3, "PCK curve output needs 3D keypoints");
      write_pck_csv(csv_path, s.curve);
    }
    out->dims = s.dims;
    out->frames = s.frames;
    out->auc = s.dims == 3 ? s.auc : std::numeric_limits<double>::quiet_NaN();
    out->mean_error = s.mean_error;
  });
}

sh_status sh_ik_file(const sh_model* model, const char* joints_path, const double beta[10], char** report_out,
                     size_t* rows_out, double* max_residual_out) {
  return guarded([&] {
    require(model && joints_path, "null argument");
    const auto rows = run_ik(model->model, joints_path, shape_from(beta));
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.fit.residual);
    if (rows_out) *rows_out = rows.size();
    if (max_residual_out) *max_residual_out = worst;
    if (report_out) *report_out = dup_string(ik_report(rows));
  });
}

sh_status sh_inspect(const char* dataset_dir, const char* db_path, char** report_out, size_t* failures_out) {
  return guarded([&] {
    require(dataset_dir != nullptr, "null dataset directory");
    std::optional<std::filesystem::path> db;
    if (db_path) db = db_path;
    const InspectReport report = run_inspect(dataset_dir, db);
    if (failures_out) *failures_out = report.failures.size();
    if (report_out) *report_out = dup_string(report.text());
  });
}

}  // extern "C"
