#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "seqhand/hand_model.hpp"
#include "seqhand/metrics.hpp"
#include "seqhand/pose_flow.hpp"

namespace seqhand {

inline constexpr int kDatasetFormatVersion = 1;

// Dataset layout written by run_gen:
//   <out>/manifest.json
//   <out>/seq_%06d/frame_%03d.png        RGB frame
//   <out>/seq_%06d/frame_%03d_mask.png   hand mask, 0 / 255
//   <out>/seq_%06d/annot.json            all per-frame annotations
struct GenJob {
  std::filesystem::path db_path;
  std::filesystem::path background_dir;
  std::filesystem::path output_dir;
  std::optional<std::filesystem::path> model_path;  // builtin model when empty
  std::size_t sequence_count = 1;
  FlowConfig flow;  // flow.seed is the master seed
  CameraBounds camera_bounds;
  int workers = 1;

  void validate() const;
};

struct GenSummary {
  std::size_t sequences = 0;
  std::size_t frames = 0;
  std::string db_fingerprint;
};

GenSummary run_gen(const GenJob& job);

// Canonical text of one sequence's annotation file.
std::string annotation_json(const PoseFlowSeq& seq, std::size_t sequence_index, const std::string& background,
                            int bg_width, int bg_height);

struct EvalSummary {
  int dims = 3;
  std::size_t frames = 0;
  PckCurve curve;  // empty for 2D input
  double auc = 0.0;
  double mean_error = 0.0;
};

// Frames are matched by id; both files must hold the same id set.
EvalSummary run_eval(const std::filesystem::path& pred_path, const std::filesystem::path& truth_path,
                     std::span<const double> thresholds);
void write_pck_csv(const std::filesystem::path& path, const PckCurve& curve);

struct IkRow {
  std::int64_t id = 0;
  FitResult fit;
};

std::vector<IkRow> run_ik(const HandModel& model, const std::filesystem::path& joints_path, const HandShape& beta);
std::string ik_report(const std::vector<IkRow>& rows);

struct InspectReport {
  std::size_t sequences = 0;
  std::size_t checks = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
  std::string text() const;
};

InspectReport run_inspect(const std::filesystem::path& dataset_dir,
                          const std::optional<std::filesystem::path>& db_path = std::nullopt);

// Square crop for a detector box: side 2.2 * (longer box edge), same centre.
struct SquareCrop {
  double center_x = 0.0;
  double center_y = 0.0;
  double side = 0.0;
};
SquareCrop crop_about_box(double x0, double y0, double x1, double y1);

}  // namespace seqhand
