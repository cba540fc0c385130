#include "seqhand/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "seqhand/error.hpp"

namespace seqhand {

std::vector<double> default_pck_thresholds() {
  std::vector<double> out;
  for (int mm = 20; mm <= 50; ++mm) out.push_back(mm);
  return out;
}

PckCurve pck3d(std::span<const Vec3> preds, std::span<const Vec3> truths, std::span<const double> thresholds) {
  if (preds.size() != truths.size()) fail(ErrorKind::InvalidArgument, "pck3d: prediction/truth count mismatch");
  if (preds.empty()) fail(ErrorKind::InvalidArgument, "pck3d: no keypoints");
  if (thresholds.empty()) fail(ErrorKind::InvalidArgument, "pck3d: no thresholds");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0) || (i > 0 && !(thresholds[i] > thresholds[i - 1]))) {
      fail(ErrorKind::InvalidArgument, "pck3d: thresholds must be positive and strictly ascending");
    }
  }
  std::vector<double> errors(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) errors[i] = (preds[i] - truths[i]).norm();
  std::sort(errors.begin(), errors.end());

  PckCurve curve;
  curve.thresholds.assign(thresholds.begin(), thresholds.end());
  for (const double tau : thresholds) {
    const auto correct = std::upper_bound(errors.begin(), errors.end(), tau) - errors.begin();
    curve.fractions.push_back(static_cast<double>(correct) / static_cast<double>(errors.size()));
  }
  return curve;
}

double auc(const PckCurve& curve) {
  const auto& x = curve.thresholds;
  const auto& y = curve.fractions;
  if (x.empty() || x.size() != y.size()) fail(ErrorKind::InvalidArgument, "auc: malformed curve");
  if (x.size() == 1) return y.front();
  // Normalising by the widths summed in the same order keeps a constant curve
  // exact (all-correct gives 1.0 on any grid).
  double area = 0.0;
  double span = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double dx = x[i] - x[i - 1];
    area += 0.5 * (y[i] + y[i - 1]) * dx;
    span += dx;
  }
  return area / span;
}

template <typename V>
static double mean_error_impl(std::span<const V> preds, std::span<const V> truths) {
  if (preds.size() != truths.size()) fail(ErrorKind::InvalidArgument, "mean_error: count mismatch");
  if (preds.empty()) fail(ErrorKind::InvalidArgument, "mean_error: no keypoints");
  double sum = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) sum += (preds[i] - truths[i]).norm();
  return sum / static_cast<double>(preds.size());
}

double mean_error(std::span<const Vec3> preds, std::span<const Vec3> truths) {
  return mean_error_impl(preds, truths);
}

double mean_error(std::span<const Vec2> preds, std::span<const Vec2> truths) {
  return mean_error_impl(preds, truths);
}

KeypointFile read_keypoint_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open keypoint file " + path.string());
  KeypointFile file;
  file.dims = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    KeypointFrame frame;
    if (!(row >> frame.id)) {
      if (row.eof() && line.find_first_not_of(" \t\r") == std::string::npos) continue;
      fail(ErrorKind::Parse, path.string() + ":" + std::to_string(line_no) + ": bad frame id");
    }
    std::string tok;
    while (row >> tok) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size() || !std::isfinite(v)) {
        fail(ErrorKind::Parse, path.string() + ":" + std::to_string(line_no) + ": bad coordinate '" + tok + "'");
      }
      frame.coords.push_back(v);
    }
    int dims = 0;
    if (frame.coords.size() == 3 * kJointCount) dims = 3;
    else if (frame.coords.size() == 2 * kJointCount) dims = 2;
    else {
      fail(ErrorKind::Parse, path.string() + ":" + std::to_string(line_no) + ": expected 63 or 42 coordinates, got " +
                                 std::to_string(frame.coords.size()));
    }
    if (file.dims != 0 && dims != file.dims) {
      fail(ErrorKind::Parse, path.string() + ":" + std::to_string(line_no) + ": mixed 2D and 3D rows");
    }
    file.dims = dims;
    file.frames.push_back(std::move(frame));
  }
  if (file.frames.empty()) fail(ErrorKind::Validation, path.string() + ": no frames");
  return file;
}

}  // namespace seqhand
