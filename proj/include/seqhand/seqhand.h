/* seqhand C API.
 *
 * Opaque handles own their C++ objects; every call returns an sh_status and
 * leaves a message retrievable with sh_last_error() on the calling thread.
 * Joint arrays are 63 doubles (21 joints x xyz, mm, joint order wrist, then
 * thumb/index/middle/ring/pinky each MCP PIP DIP TIP). Pose arrays are 45
 * doubles (15 articulated joints x axis-angle), shape arrays 10 doubles.
 */
#ifndef SEQHAND_SEQHAND_H
#define SEQHAND_SEQHAND_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SH_API __declspec(dllexport)
#else
#define SH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sh_status {
  SH_OK = 0,
  SH_ERR_INVALID_ARGUMENT = 1,
  SH_ERR_IO = 2,
  SH_ERR_PARSE = 3,
  SH_ERR_NUMERIC = 4,
  SH_ERR_VALIDATION = 5,
  SH_ERR_INTERNAL = 6
} sh_status;

typedef struct sh_model sh_model;
typedef struct sh_db sh_db;
typedef struct sh_index sh_index;

/* Message of the last failed call on this thread ("" after success). */
SH_API const char* sh_last_error(void);
/* Stable lowercase token for a status, e.g. "parse". */
SH_API const char* sh_status_name(sh_status status);
SH_API const char* sh_version(void);
/* Frees strings returned through char** out-parameters. */
SH_API void sh_string_free(char* s);

/* ---- hand model ---- */
SH_API sh_status sh_model_builtin(sh_model** out);
SH_API sh_status sh_model_load(const char* path, sh_model** out);
SH_API void sh_model_free(sh_model* model);
SH_API sh_status sh_model_joints_fk(const sh_model* model, const double theta[45], const double beta[10],
                                    double joints_out[63]);
SH_API sh_status sh_model_shape_skeleton(const sh_model* model, const double beta[10], double joints_out[63]);
SH_API sh_status sh_model_fit_pose(const sh_model* model, const double joints[63], const double beta[10],
                                   double theta_out[45], double* residual_mm);
/* Vertex and face counts of the skinned mesh (independent of pose/shape). */
SH_API sh_status sh_model_mesh_size(const sh_model* model, size_t* vertex_count, size_t* face_count);
/* vertices_out: 3 * vertex_count doubles; faces_out: 3 * face_count ints (may be NULL). */
SH_API sh_status sh_model_mesh_lbs(const sh_model* model, const double theta[45], const double beta[10],
                                   double* vertices_out, int32_t* faces_out);

/* ---- pose database / nearest-neighbour index ---- */
SH_API sh_status sh_db_load(const char* path, sh_db** out);
SH_API sh_status sh_db_save(const sh_db* db, const char* path);
/* Random neutral-shape poses of the model, ids 0..count-1. */
SH_API sh_status sh_db_synthesize(const sh_model* model, size_t count, uint64_t seed, sh_db** out);
SH_API void sh_db_free(sh_db* db);
SH_API size_t sh_db_size(const sh_db* db);
/* Writes the 16-hex-digit fingerprint plus NUL into buf[17]. */
SH_API sh_status sh_db_fingerprint(const sh_db* db, char buf[17]);
SH_API sh_status sh_db_record(const sh_db* db, size_t position, int64_t* id_out, double joints_out[63]);

SH_API sh_status sh_index_build(const sh_db* db, sh_index** out);
SH_API void sh_index_free(sh_index* index);
SH_API sh_status sh_index_query(const sh_index* index, const double joints[63], int64_t* id_out,
                                double* distance_mm);

/* ---- camera ---- */
typedef struct sh_camera {
  double s;
  double t[2];
  double r[3];
} sh_camera;

SH_API sh_status sh_rodrigues(const double r[3], double rotation_out[9]); /* row-major */
SH_API sh_status sh_project_weak(const double* points, size_t count, const sh_camera* cam, double* out);

/* ---- losses and metrics ---- */
SH_API sh_status sh_loss_joint_2d(const double* pred, const double* truth, size_t count, double* out);
SH_API sh_status sh_loss_joint_3d(const double* pred, const double* truth, size_t count, double* out);
SH_API sh_status sh_loss_mask(const double* vertices2d, size_t count, const uint8_t* mask, int width, int height,
                              double* out);
SH_API sh_status sh_loss_temporal(const double* beta_prev, const double* beta_cur, size_t beta_dim,
                                  const double* theta_prev, const double* theta_cur, size_t theta_dim,
                                  double lambda_temp_theta, double* out);
/* fractions_out receives threshold_count values. */
SH_API sh_status sh_pck3d(const double* preds, const double* truths, size_t count, const double* thresholds,
                          size_t threshold_count, double* fractions_out);
SH_API sh_status sh_auc(const double* thresholds, const double* fractions, size_t count, double* out);

/* ---- dataset workflows ---- */
typedef struct sh_gen_job {
  const char* db_path;
  const char* background_dir;
  const char* output_dir;
  const char* model_path; /* NULL: builtin model */
  size_t sequence_count;
  int n_frames;
  double alpha;
  double noise_sigma;
  int width;
  int height;
  uint64_t seed;
  int workers;
  double scale_min;
  double scale_max;
  double translate_min;
  double translate_max;
  double rotation_max;
} sh_gen_job;

/* Fills a job with the default configuration (paths NULL). */
SH_API void sh_gen_job_defaults(sh_gen_job* job);
SH_API sh_status sh_gen(const sh_gen_job* job, size_t* frames_written);

typedef struct sh_eval_summary {
  int dims;
  size_t frames;
  double auc;        /* NaN for 2D input */
  double mean_error; /* mm (3D) or px (2D) */
} sh_eval_summary;

/* thresholds NULL: 20..50 mm in 1 mm steps. csv_path NULL: no curve output. */
SH_API sh_status sh_eval(const char* pred_path, const char* truth_path, const double* thresholds,
                         size_t threshold_count, const char* csv_path, sh_eval_summary* out);

/* Fits every row of a 3D keypoint file; *report_out receives the text report. */
SH_API sh_status sh_ik_file(const sh_model* model, const char* joints_path, const double beta[10], char** report_out,
                            size_t* rows_out, double* max_residual_out);

/* *report_out receives the audit text; *failures_out the failure count. */
SH_API sh_status sh_inspect(const char* dataset_dir, const char* db_path, char** report_out, size_t* failures_out);

#ifdef __cplusplus
}
#endif

#endif /* SEQHAND_SEQHAND_H */
