#include "seqhand/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "seqhand/error.hpp"
#include "seqhand/image.hpp"
#include "seqhand/random.hpp"
#include "seqhand/render.hpp"

namespace seqhand {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kProjectionTolerancePx = 1e-6;

std::string seq_dir_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "seq_%06zu", index);
  return buf;
}

std::string frame_name(int k, bool mask) {
  char buf[32];
  std::snprintf(buf, sizeof buf, mask ? "frame_%03d_mask.png" : "frame_%03d.png", k);
  return buf;
}

template <typename V>
json vec_json(const V& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f || !f.write(text.data(), static_cast<std::streamsize>(text.size()))) {
    fail(ErrorKind::Io, "cannot write " + path.string());
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot open " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json config_json(const GenJob& job) {
  const auto& b = job.camera_bounds;
  return {
      {"n_frames", job.flow.n_frames},
      {"alpha", job.flow.alpha},
      {"noise_sigma", job.flow.noise_sigma},
      {"width", job.flow.width},
      {"height", job.flow.height},
      {"seed", job.flow.seed},
      {"sequence_count", job.sequence_count},
      {"camera_bounds",
       {{"scale_min", b.scale_min},
        {"scale_max", b.scale_max},
        {"translate_min", b.translate_min},
        {"translate_max", b.translate_max},
        {"rotation_max", b.rotation_max}}},
  };
}

struct Background {
  std::string name;
  Image image;
};

std::vector<Background> load_backgrounds(const fs::path& dir, const FlowConfig& cfg) {
  if (!fs::is_directory(dir)) fail(ErrorKind::Io, "background directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) fail(ErrorKind::Io, "no PNG backgrounds in " + dir.string());
  std::vector<Background> out;
  for (const auto& f : files) {
    Image img = read_png(f);
    if (img.width < cfg.width || img.height < cfg.height) {
      fail(ErrorKind::Validation, "background " + f.filename().string() + " is smaller than the " +
                                      std::to_string(cfg.width) + "x" + std::to_string(cfg.height) + " frame");
    }
    out.push_back({f.filename().string(), std::move(img)});
  }
  return out;
}

struct SequenceResult {
  json manifest_entry;
};

SequenceResult generate_sequence(const HandModel& model, const PoseDB& db, const PoseIndex& index,
                                 const std::vector<Background>& backgrounds, const GenJob& job,
                                 std::size_t seq_index) {
  Rng rng = Rng::derive(job.flow.seed, seq_index);
  const auto& bg = backgrounds[static_cast<std::size_t>(rng.below(backgrounds.size()))];
  FlowOptions opts;
  opts.bg_width = bg.image.width;
  opts.bg_height = bg.image.height;
  opts.camera_bounds = job.camera_bounds;
  const PoseFlowSeq seq = generate_flow(model, db, index, job.flow, rng, opts);

  const fs::path dir = job.output_dir / seq_dir_name(seq_index);
  fs::create_directories(dir);
  for (int k = 0; k < static_cast<int>(seq.frames.size()); ++k) {
    const auto& f = seq.frames[static_cast<std::size_t>(k)];
    HandMesh mesh = model.mesh_lbs(f.theta, f.beta);
    model.apply_color_template(mesh, seq.color_template_id);
    const Raster raster = rasterize(mesh, f.cam, job.flow.width, job.flow.height);
    write_png(dir / frame_name(k, false), composite(raster, bg.image, f.bg_offset.x(), f.bg_offset.y()));
    write_png(dir / frame_name(k, true), raster.mask_image());
  }
  write_text(dir / "annot.json", annotation_json(seq, seq_index, bg.name, bg.image.width, bg.image.height));

  SequenceResult res;
  res.manifest_entry = {
      {"directory", seq_dir_name(seq_index)},
      {"seed", job.flow.seed},
      {"stream", seq_index},
      {"color_template_id", seq.color_template_id},
      {"beta", vec_json(seq.beta.beta)},
      {"background", bg.name},
  };
  return res;
}

}  // namespace

void GenJob::validate() const {
  flow.validate();
  if (sequence_count < 1) fail(ErrorKind::InvalidArgument, "sequence count must be >= 1");
  if (workers < 1) fail(ErrorKind::InvalidArgument, "worker count must be >= 1");
  if (!(camera_bounds.scale_min > 0.0 && camera_bounds.scale_min <= camera_bounds.scale_max)) {
    fail(ErrorKind::InvalidArgument, "camera scale bounds must satisfy 0 < min <= max");
  }
  if (!(camera_bounds.rotation_max >= 0.0 && camera_bounds.rotation_max <= std::numbers::pi)) {
    fail(ErrorKind::InvalidArgument, "camera rotation bound must lie in [0, pi]");
  }
  if (output_dir.empty()) fail(ErrorKind::InvalidArgument, "output directory required");
}

std::string annotation_json(const PoseFlowSeq& seq, std::size_t sequence_index, const std::string& background,
                            int bg_width, int bg_height) {
  json frames = json::array();
  for (std::size_t k = 0; k < seq.frames.size(); ++k) {
    const auto& f = seq.frames[k];
    json j3 = json::array();
    json j2 = json::array();
    for (int j = 0; j < kJointCount; ++j) {
      j3.push_back(vec_json(f.joints3d[j]));
      j2.push_back(vec_json(f.joints2d[static_cast<std::size_t>(j)]));
    }
    frames.push_back({
        {"index", k},
        {"image", frame_name(static_cast<int>(k), false)},
        {"mask", frame_name(static_cast<int>(k), true)},
        {"pose_record_id", f.pose_record_id},
        {"theta", vec_json(f.theta.theta)},
        {"fit_residual", f.fit_residual},
        {"beta", vec_json(f.beta.beta)},
        {"cam", {{"s", f.cam.s}, {"t", vec_json(f.cam.t)}, {"r", vec_json(f.cam.r)}}},
        {"bg_offset", {f.bg_offset.x(), f.bg_offset.y()}},
        {"joints3d", j3},
        {"joints2d", j2},
    });
  }
  const json doc = {
      {"format", "seqhand-annotation"},
      {"version", kDatasetFormatVersion},
      {"sequence", sequence_index},
      {"n_frames", seq.config.n_frames},
      {"width", seq.config.width},
      {"height", seq.config.height},
      {"alpha", seq.config.alpha},
      {"noise_sigma", seq.config.noise_sigma},
      {"db_fingerprint", seq.db_fingerprint},
      {"color_template_id", seq.color_template_id},
      {"beta", vec_json(seq.beta.beta)},
      {"background", background},
      {"background_size", {bg_width, bg_height}},
      {"frames", frames},
  };
  return doc.dump(1) + "\n";
}

GenSummary run_gen(const GenJob& job) {
  job.validate();
  const HandModel model = job.model_path ? HandModel::load(*job.model_path) : HandModel::builtin();
  const PoseDB db = PoseDB::load(job.db_path);
  const PoseIndex index(db);
  const auto backgrounds = load_backgrounds(job.background_dir, job.flow);

  fs::create_directories(job.output_dir);
  std::vector<json> entries(job.sequence_count);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= job.sequence_count) return;
      try {
        entries[i] = generate_sequence(model, db, index, backgrounds, job, i).manifest_entry;
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
      }
    }
  };

  const auto n_workers = static_cast<std::size_t>(std::min<std::size_t>(job.workers, job.sequence_count));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  if (first_error) {
    // Remove everything this run may have written.
    std::error_code ec;
    for (std::size_t i = 0; i < job.sequence_count; ++i) fs::remove_all(job.output_dir / seq_dir_name(i), ec);
    std::rethrow_exception(first_error);
  }

  json backgrounds_json = json::array();
  for (const auto& b : backgrounds) backgrounds_json.push_back(b.name);
  const json manifest = {
      {"format", "seqhand-manifest"},
      {"version", kDatasetFormatVersion},
      {"model_version", model.version()},
      {"config", config_json(job)},
      {"db_fingerprint", db.fingerprint()},
      {"db_records", db.size()},
      {"backgrounds", backgrounds_json},
      {"sequences", entries},
  };
  write_text(job.output_dir / "manifest.json", manifest.dump(1) + "\n");
  return {job.sequence_count, job.sequence_count * static_cast<std::size_t>(job.flow.n_frames), db.fingerprint()};
}

EvalSummary run_eval(const fs::path& pred_path, const fs::path& truth_path, std::span<const double> thresholds) {
  const KeypointFile pred = read_keypoint_file(pred_path);
  const KeypointFile truth = read_keypoint_file(truth_path);
  if (pred.dims != truth.dims) fail(ErrorKind::Validation, "prediction and truth files differ in dimension");

  std::map<std::int64_t, const KeypointFrame*> truth_by_id;
  for (const auto& f : truth.frames) {
    if (!truth_by_id.emplace(f.id, &f).second) {
      fail(ErrorKind::Validation, "duplicate frame id " + std::to_string(f.id) + " in " + truth_path.string());
    }
  }
  std::set<std::int64_t> pred_ids;
  for (const auto& f : pred.frames) {
    if (!pred_ids.insert(f.id).second) {
      fail(ErrorKind::Validation, "duplicate frame id " + std::to_string(f.id) + " in " + pred_path.string());
    }
    if (!truth_by_id.contains(f.id)) {
      fail(ErrorKind::Validation, "frame id " + std::to_string(f.id) + " has no ground truth");
    }
  }
  if (pred_ids.size() != truth_by_id.size()) {
    for (const auto& [id, _] : truth_by_id) {
      if (!pred_ids.contains(id)) fail(ErrorKind::Validation, "frame id " + std::to_string(id) + " has no prediction");
    }
  }

  EvalSummary out;
  out.dims = pred.dims;
  out.frames = pred.frames.size();
  if (pred.dims == 3) {
    std::vector<Vec3> p;
    std::vector<Vec3> t;
    for (const auto& f : pred.frames) {
      const auto& g = truth_by_id.at(f.id)->coords;
      for (int j = 0; j < kJointCount; ++j) {
        p.emplace_back(f.coords[3 * j], f.coords[3 * j + 1], f.coords[3 * j + 2]);
        t.emplace_back(g[3 * j], g[3 * j + 1], g[3 * j + 2]);
      }
    }
    out.curve = pck3d(p, t, thresholds);
    out.auc = auc(out.curve);
    out.mean_error = mean_error(std::span<const Vec3>(p), std::span<const Vec3>(t));
  } else {
    std::vector<Vec2> p;
    std::vector<Vec2> t;
    for (const auto& f : pred.frames) {
      const auto& g = truth_by_id.at(f.id)->coords;
      for (int j = 0; j < kJointCount; ++j) {
        p.emplace_back(f.coords[2 * j], f.coords[2 * j + 1]);
        t.emplace_back(g[2 * j], g[2 * j + 1]);
      }
    }
    out.mean_error = mean_error(std::span<const Vec2>(p), std::span<const Vec2>(t));
  }
  return out;
}

void write_pck_csv(const fs::path& path, const PckCurve& curve) {
  std::string text = "threshold,fraction\n";
  char buf[64];
  for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", curve.thresholds[i], curve.fractions[i]);
    text += buf;
  }
  write_text(path, text);
}

std::vector<IkRow> run_ik(const HandModel& model, const fs::path& joints_path, const HandShape& beta) {
  if (!beta.in_range()) fail(ErrorKind::InvalidArgument, "shape parameters must lie in [-2, 2]");
  const KeypointFile file = read_keypoint_file(joints_path);
  if (file.dims != 3) fail(ErrorKind::Validation, "ik needs 3D joints (63 coordinates per row)");
  std::vector<IkRow> rows;
  rows.reserve(file.frames.size());
  for (const auto& f : file.frames) {
    try {
      rows.push_back({f.id, model.fit_pose_params(JointSet::from_flat(f.coords), beta)});
    } catch (const Error& e) {
      throw Error(e.kind(), "record " + std::to_string(f.id) + ": " + e.what());
    }
  }
  return rows;
}

std::string ik_report(const std::vector<IkRow>& rows) {
  std::string out = "# id residual_mm theta[0..44] (axis-angle per articulated joint, radians)\n";
  char buf[64];
  for (const auto& r : rows) {
    out += std::to_string(r.id);
    std::snprintf(buf, sizeof buf, " %.17g", r.fit.residual);
    out += buf;
    for (int i = 0; i < kPoseDim; ++i) {
      std::snprintf(buf, sizeof buf, " %.17g", r.fit.pose.theta[i]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string InspectReport::text() const {
  std::string out;
  for (const auto& f : failures) out += "FAIL " + f + "\n";
  out += "inspect: " + std::to_string(sequences) + " sequences, " + std::to_string(checks) + " checks, " +
         std::to_string(failures.size()) + " failures\n";
  return out;
}

namespace {

class Auditor {
 public:
  explicit Auditor(InspectReport& report) : report_(report) {}

  bool check(bool ok, const std::string& where, const std::string& what) {
    ++report_.checks;
    if (!ok) report_.failures.push_back(where + ": " + what);
    return ok;
  }

 private:
  InspectReport& report_;
};

bool is_number_array(const json& j, std::size_t n) {
  if (!j.is_array() || j.size() != n) return false;
  return std::all_of(j.begin(), j.end(), [](const json& v) { return v.is_number() && std::isfinite(v.get<double>()); });
}

Eigen::VectorXd to_vec(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

void inspect_sequence(const fs::path& root, const json& entry, const json& config, const std::string& fingerprint,
                      const PoseDB* db, Auditor& audit) {
  const std::string dir_name = entry.value("directory", std::string{});
  const fs::path dir = root / dir_name;
  if (!audit.check(!dir_name.empty() && fs::is_directory(dir), dir_name.empty() ? "manifest" : dir_name,
                   "sequence directory missing")) {
    return;
  }
  const fs::path annot_path = dir / "annot.json";
  json annot;
  try {
    annot = json::parse(read_text(annot_path));
  } catch (const std::exception& e) {
    audit.check(false, dir_name + "/annot.json", std::string("unreadable annotation: ") + e.what());
    return;
  }
  const std::string where = dir_name + "/annot.json";
  try {
    const int n_frames = config.at("n_frames").get<int>();
    const int width = config.at("width").get<int>();
    const int height = config.at("height").get<int>();
    audit.check(annot.value("format", "") == "seqhand-annotation" && annot.value("version", 0) == kDatasetFormatVersion,
                where, "unknown annotation format or version");
    audit.check(annot.value("db_fingerprint", "") == fingerprint, where, "db fingerprint differs from manifest");
    audit.check(annot.value("width", 0) == width && annot.value("height", 0) == height, where,
                "frame size differs from manifest");
    const json& beta_seq = annot.at("beta");
    if (audit.check(is_number_array(beta_seq, kShapeDim), where, "beta must hold 10 finite numbers")) {
      const Eigen::VectorXd b = to_vec(beta_seq);
      audit.check(b.cwiseAbs().maxCoeff() <= HandShape::kLimit, where, "beta outside [-2, 2]");
      audit.check(beta_seq == entry.at("beta"), where, "beta differs from manifest entry");
    }
    const int color = annot.at("color_template_id").get<int>();
    audit.check(color == entry.at("color_template_id").get<int>(), where, "color template differs from manifest");
    audit.check(annot.value("background", "") == entry.value("background", ""), where,
                "background differs from manifest");
    const json& bg_size = annot.at("background_size");
    const int bg_w = bg_size.at(0).get<int>();
    const int bg_h = bg_size.at(1).get<int>();
    audit.check(bg_w >= width && bg_h >= height, where, "background smaller than frame");

    const json& frames = annot.at("frames");
    if (!audit.check(frames.is_array() && static_cast<int>(frames.size()) == n_frames, where,
                     "expected " + std::to_string(n_frames) + " frames")) {
      return;
    }
    for (std::size_t k = 0; k < frames.size(); ++k) {
      const json& f = frames[k];
      const std::string fw = where + " frame " + std::to_string(k);
      audit.check(f.at("beta") == beta_seq, fw, "beta changes within the sequence");
      const json& theta = f.at("theta");
      if (audit.check(is_number_array(theta, kPoseDim), fw, "theta must hold 45 finite numbers")) {
        const Eigen::VectorXd th = to_vec(theta);
        bool canonical = true;
        for (int s = 0; s < kArticulatedCount; ++s) canonical &= th.segment<3>(3 * s).norm() <= std::numbers::pi + 1e-9;
        audit.check(canonical, fw, "theta joint rotation exceeds pi");
      }
      const json& cam_j = f.at("cam");
      CameraParams cam;
      bool cam_ok = cam_j.at("s").is_number() && is_number_array(cam_j.at("t"), 2) && is_number_array(cam_j.at("r"), 3);
      if (cam_ok) {
        cam.s = cam_j.at("s").get<double>();
        cam.t = Vec2(to_vec(cam_j.at("t")));
        cam.r = Vec3(to_vec(cam_j.at("r")));
        cam_ok = cam.valid();
      }
      audit.check(cam_ok, fw, "camera invalid (need s > 0, |r| <= pi)");

      const json& j3 = f.at("joints3d");
      const json& j2 = f.at("joints2d");
      bool joints_ok = j3.is_array() && j3.size() == kJointCount && j2.is_array() && j2.size() == kJointCount;
      for (std::size_t j = 0; joints_ok && j < kJointCount; ++j) {
        joints_ok = is_number_array(j3[j], 3) && is_number_array(j2[j], 2);
      }
      if (audit.check(joints_ok, fw, "joints3d/joints2d must be 21 finite points")) {
        JointSet js;
        for (int j = 0; j < kJointCount; ++j) js[j] = Vec3(to_vec(j3[static_cast<std::size_t>(j)]));
        audit.check(js[0] == Vec3::Zero(), fw, "wrist is not at the origin");
        if (cam_ok) {
          double worst = 0.0;
          for (int j = 0; j < kJointCount; ++j) {
            const Vec2 expect = project_weak(js[j], cam);
            worst = std::max(worst, (expect - Vec2(to_vec(j2[static_cast<std::size_t>(j)]))).cwiseAbs().maxCoeff());
          }
          audit.check(worst <= kProjectionTolerancePx, fw, "joints2d differ from projected joints3d by " + std::to_string(worst) + " px");
        }
        if (db) {
          const auto id = f.at("pose_record_id").get<std::int64_t>();
          const auto pos = db->find(id);
          audit.check(pos >= 0 && (*db)[static_cast<std::size_t>(pos)].joints == js, fw,
                      "pose_record_id " + std::to_string(id) + " does not match a database record");
        }
      }
      const json& off = f.at("bg_offset");
      const bool off_ok = off.is_array() && off.size() == 2 && off[0].is_number_integer() && off[1].is_number_integer();
      audit.check(off_ok && off[0].get<int>() >= 0 && off[1].get<int>() >= 0 && off[0].get<int>() <= bg_w - width &&
                      off[1].get<int>() <= bg_h - height,
                  fw, "background offset out of bounds");

      const std::string image_name = f.value("image", "");
      const std::string mask_name = f.value("mask", "");
      const fs::path image_path = dir / image_name;
      const fs::path mask_path = dir / mask_name;
      if (audit.check(!image_name.empty() && fs::is_regular_file(image_path), dir_name + "/" + image_name,
                      "frame image missing")) {
        try {
          const Image img = read_png(image_path);
          audit.check(img.width == width && img.height == height, dir_name + "/" + image_name, "wrong image size");
        } catch (const Error& e) {
          audit.check(false, dir_name + "/" + image_name, e.what());
        }
      }
      if (audit.check(!mask_name.empty() && fs::is_regular_file(mask_path), dir_name + "/" + mask_name,
                      "mask image missing")) {
        try {
          const Image m = read_png(mask_path, true);
          const bool binary = std::all_of(m.data.begin(), m.data.end(), [](std::uint8_t v) { return v == 0 || v == 255; });
          audit.check(m.width == width && m.height == height && binary, dir_name + "/" + mask_name,
                      "mask must be a binary image of frame size");
        } catch (const Error& e) {
          audit.check(false, dir_name + "/" + mask_name, e.what());
        }
      }
    }
  } catch (const json::exception& e) {
    audit.check(false, where, std::string("malformed annotation: ") + e.what());
  }
}

}  // namespace

InspectReport run_inspect(const fs::path& dataset_dir, const std::optional<fs::path>& db_path) {
  InspectReport report;
  Auditor audit(report);
  const fs::path manifest_path = dataset_dir / "manifest.json";
  if (!audit.check(fs::is_regular_file(manifest_path), "manifest.json", "missing")) return report;
  json manifest;
  try {
    manifest = json::parse(read_text(manifest_path));
  } catch (const std::exception& e) {
    audit.check(false, "manifest.json", std::string("unreadable: ") + e.what());
    return report;
  }
  std::optional<PoseDB> db;
  if (db_path) db = PoseDB::load(*db_path);
  try {
    audit.check(manifest.value("format", "") == "seqhand-manifest" && manifest.value("version", 0) == kDatasetFormatVersion,
                "manifest.json", "unknown manifest format or version");
    const json& config = manifest.at("config");
    FlowConfig cfg;
    cfg.n_frames = config.at("n_frames").get<int>();
    cfg.alpha = config.at("alpha").get<double>();
    cfg.noise_sigma = config.at("noise_sigma").get<double>();
    cfg.width = config.at("width").get<int>();
    cfg.height = config.at("height").get<int>();
    bool cfg_ok = true;
    try {
      cfg.validate();
    } catch (const Error&) {
      cfg_ok = false;
    }
    if (!audit.check(cfg_ok, "manifest.json", "invalid flow configuration")) return report;
    const std::string fingerprint = manifest.at("db_fingerprint").get<std::string>();
    if (db) audit.check(db->fingerprint() == fingerprint, "manifest.json", "db fingerprint does not match " + db_path->string());
    const json& sequences = manifest.at("sequences");
    audit.check(sequences.is_array() && sequences.size() == config.at("sequence_count").get<std::size_t>(),
                "manifest.json", "sequence count differs from config");
    std::set<std::string> dirs;
    for (const auto& entry : sequences) {
      ++report.sequences;
      audit.check(dirs.insert(entry.value("directory", "")).second, "manifest.json",
                  "duplicate sequence directory " + entry.value("directory", ""));
      inspect_sequence(dataset_dir, entry, config, fingerprint, db ? &*db : nullptr, audit);
    }
  } catch (const json::exception& e) {
    audit.check(false, "manifest.json", std::string("malformed manifest: ") + e.what());
  }
  return report;
}

SquareCrop crop_about_box(double x0, double y0, double x1, double y1) {
  if (!(x1 > x0 && y1 > y0)) fail(ErrorKind::InvalidArgument, "crop box must have positive extent");
  return {0.5 * (x0 + x1), 0.5 * (y0 + y1), 2.2 * std::max(x1 - x0, y1 - y0)};
}

}  // namespace seqhand
