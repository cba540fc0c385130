#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "seqhand/types.hpp"

namespace seqhand {

struct PckCurve {
  std::vector<double> thresholds;  // ascending, mm
  std::vector<double> fractions;   // in [0, 1], non-decreasing
};

// 20..50 mm in 1 mm steps.
std::vector<double> default_pck_thresholds();

// A joint is correct at threshold tau when its error is <= tau. Inputs are
// flat lists of corresponding keypoints (all frames, all joints).
PckCurve pck3d(std::span<const Vec3> preds, std::span<const Vec3> truths, std::span<const double> thresholds);

// Trapezoidal area normalised by the threshold span; a single threshold
// returns its fraction.
double auc(const PckCurve& curve);

double mean_error(std::span<const Vec3> preds, std::span<const Vec3> truths);
double mean_error(std::span<const Vec2> preds, std::span<const Vec2> truths);

// Keypoint file: one frame per line, `<frame id>` followed by 21 x 3 (3D) or
// 21 x 2 (2D) coordinates. '#' starts a comment.
struct KeypointFrame {
  std::int64_t id = 0;
  std::vector<double> coords;
};

struct KeypointFile {
  int dims = 3;  // 2 or 3
  std::vector<KeypointFrame> frames;
};

KeypointFile read_keypoint_file(const std::filesystem::path& path);

}  // namespace seqhand
