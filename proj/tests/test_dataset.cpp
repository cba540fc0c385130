#include <doctest.h>

#include <json.hpp>

#include "seqhand/dataset.hpp"
#include "seqhand/error.hpp"
#include "seqhand/pose_db.hpp"
#include "test_support.hpp"

using namespace seqhand;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Workspace {
  test::TempDir dir{"dataset"};
  fs::path db_path = dir / "poses.txt";
  fs::path bg_dir = dir / "bg";

  Workspace() {
    Rng rng(11);
    synthesize_db(HandModel::builtin(), 3000, rng).save(db_path);
    test::write_backgrounds(bg_dir, 3, 300, 260, 5);
  }

  GenJob job(const std::string& out, std::uint64_t seed, int workers, std::size_t count = 4) const {
    GenJob j;
    j.db_path = db_path;
    j.background_dir = bg_dir;
    j.output_dir = dir / out;
    j.sequence_count = count;
    j.flow.n_frames = 6;
    j.flow.width = 96;
    j.flow.height = 80;
    j.flow.seed = seed;
    j.workers = workers;
    return j;
  }
};

// Every file of a dataset, relative path to contents.
std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = test::read_file(e.path());
  }
  return out;
}

std::string keypoint_row(std::int64_t id, const JointSet& j) {
  std::string row = std::to_string(id);
  char buf[40];
  for (double v : j.flatten()) {
    std::snprintf(buf, sizeof buf, " %.17g", v);
    row += buf;
  }
  return row + "\n";
}

}  // namespace

TEST_CASE("generation layout, inspection and determinism") {
  Workspace ws;
  const GenSummary s = run_gen(ws.job("a", 42, 1));
  CHECK(s.sequences == 4);
  CHECK(s.frames == 24);
  CHECK(s.db_fingerprint == PoseDB::load(ws.db_path).fingerprint());

  const fs::path a = ws.dir / "a";
  CHECK(fs::is_regular_file(a / "manifest.json"));
  for (int i = 0; i < 4; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "seq_%06d", i);
    const fs::path seq = a / name;
    CHECK(fs::is_regular_file(seq / "annot.json"));
    for (int k = 0; k < 6; ++k) {
      char f[32];
      std::snprintf(f, sizeof f, "frame_%03d.png", k);
      CHECK(fs::is_regular_file(seq / f));
      std::snprintf(f, sizeof f, "frame_%03d_mask.png", k);
      const Image m = read_png(seq / f, true);
      CHECK(m.width == 96);
      CHECK(m.height == 80);
    }
  }

  const json annot = json::parse(test::read_file(a / "seq_000002" / "annot.json"));
  CHECK(annot["n_frames"] == 6);
  CHECK(annot["frames"].size() == 6);
  for (const auto& f : annot["frames"]) CHECK(f["beta"] == annot["beta"]);

  const InspectReport report = run_inspect(a, ws.db_path);
  INFO(report.text());
  CHECK(report.ok());
  CHECK(report.sequences == 4);
  CHECK(report.checks > 100);

  SUBCASE("same seed is byte-identical across worker counts") {
    run_gen(ws.job("b", 42, 1));
    run_gen(ws.job("c", 42, 3));
    const auto ref = snapshot(a);
    CHECK(snapshot(ws.dir / "b") == ref);
    CHECK(snapshot(ws.dir / "c") == ref);
  }
  SUBCASE("different seeds differ") {
    run_gen(ws.job("d", 43, 1));
    CHECK(test::read_file(ws.dir / "d" / "seq_000000" / "annot.json") !=
          test::read_file(a / "seq_000000" / "annot.json"));
  }
  SUBCASE("missing frame is reported by name") {
    fs::remove(a / "seq_000001" / "frame_003.png");
    const InspectReport r = run_inspect(a);
    REQUIRE(r.failures.size() == 1);
    CHECK(r.failures[0].find("seq_000001/frame_003.png") != std::string::npos);
  }
  SUBCASE("corrupted annotation fields are reported") {
    json doc = json::parse(test::read_file(a / "seq_000003" / "annot.json"));
    doc["frames"][2]["joints2d"][5][0] = doc["frames"][2]["joints2d"][5][0].get<double>() + 0.5;
    doc["frames"][4]["beta"][0] = 7.0;
    test::write_file(a / "seq_000003" / "annot.json", doc.dump(1));
    const InspectReport r = run_inspect(a);
    const std::string text = r.text();
    CHECK(text.find("seq_000003/annot.json frame 2: joints2d differ") != std::string::npos);
    CHECK(text.find("seq_000003/annot.json frame 4: beta changes") != std::string::npos);
    CHECK(r.failures.size() == 2);
  }
  SUBCASE("pose ids are checked against the database") {
    json doc = json::parse(test::read_file(a / "seq_000000" / "annot.json"));
    doc["frames"][1]["joints3d"][8][2] = doc["frames"][1]["joints3d"][8][2].get<double>() + 1.0;
    test::write_file(a / "seq_000000" / "annot.json", doc.dump(1));
    const InspectReport r = run_inspect(a, ws.db_path);
    const std::string text = r.text();
    CHECK(text.find("frame 1: joints2d differ") != std::string::npos);
    CHECK(text.find("frame 1: pose_record_id") != std::string::npos);
  }
  SUBCASE("missing manifest") {
    fs::remove(a / "manifest.json");
    CHECK_FALSE(run_inspect(a).ok());
  }
}

TEST_CASE("generation argument errors") {
  Workspace ws;
  GenJob j = ws.job("x", 1, 1);
  j.workers = 0;
  CHECK_THROWS_AS(run_gen(j), Error);
  j = ws.job("x", 1, 1);
  j.flow.alpha = 7.0;  // > n_frames - 1
  CHECK_THROWS_AS(run_gen(j), Error);
  j = ws.job("x", 1, 1);
  j.flow.width = 400;  // larger than the backgrounds
  try {
    run_gen(j);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
  }
  j = ws.job("x", 1, 1);
  j.background_dir = ws.dir / "nowhere";
  try {
    run_gen(j);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
}

TEST_CASE("eval against itself and with mismatched ids") {
  test::TempDir dir("eval");
  const HandModel& model = HandModel::builtin();
  Rng rng(6);
  std::string truth, pred, shifted;
  for (int i = 0; i < 20; ++i) {
    const JointSet j = model.joints_fk(model.sample_natural_pose(rng), HandShape{});
    truth += keypoint_row(100 + i, j);
    pred += keypoint_row(100 + (19 - i), j);  // reversed order, mismatched content
    JointSet moved = j;
    for (int k = 0; k < kJointCount; ++k) moved[k] += Vec3(0, 0, 30.5);
    shifted += keypoint_row(100 + i, moved);
  }
  test::write_file(dir / "truth.txt", truth);
  test::write_file(dir / "pred.txt", pred);
  test::write_file(dir / "shifted.txt", shifted);

  const EvalSummary self = run_eval(dir / "truth.txt", dir / "truth.txt", default_pck_thresholds());
  CHECK(self.frames == 20);
  CHECK(self.auc == 1.0);
  CHECK(self.mean_error == 0.0);

  // 30.5 mm everywhere: wrong up to 30 mm, correct from 31 mm on.
  const EvalSummary sh = run_eval(dir / "shifted.txt", dir / "truth.txt", default_pck_thresholds());
  CHECK(sh.mean_error == doctest::Approx(30.5).epsilon(1e-12));
  CHECK(sh.curve.fractions[10] == 0.0);
  CHECK(sh.curve.fractions[11] == 1.0);
  CHECK(sh.auc == doctest::Approx(19.5 / 30.0).epsilon(1e-12));

  // Matching is by id, not by line.
  const EvalSummary byid = run_eval(dir / "pred.txt", dir / "truth.txt", default_pck_thresholds());
  CHECK(byid.mean_error > 0.0);

  test::write_file(dir / "short.txt", keypoint_row(100, JointSet{}));
  CHECK_THROWS_AS(run_eval(dir / "short.txt", dir / "truth.txt", default_pck_thresholds()), Error);
  test::write_file(dir / "stray.txt", truth + keypoint_row(5000, JointSet{}));
  CHECK_THROWS_AS(run_eval(dir / "stray.txt", dir / "truth.txt", default_pck_thresholds()), Error);
  test::write_file(dir / "dup.txt", truth + keypoint_row(100, JointSet{}));
  CHECK_THROWS_AS(run_eval(dir / "dup.txt", dir / "truth.txt", default_pck_thresholds()), Error);

  write_pck_csv(dir / "curve.csv", sh.curve);
  const std::string csv = test::read_file(dir / "curve.csv");
  CHECK(csv.rfind("threshold,fraction\n20,0\n", 0) == 0);
  CHECK(csv.find("\n50,1\n") != std::string::npos);
}

TEST_CASE("ik over a keypoint file") {
  test::TempDir dir("ik");
  const HandModel& model = HandModel::builtin();
  Rng rng(8);
  std::string text = "# fk joints\n" + keypoint_row(0, model.joints_fk(HandPose{}, HandShape{}));
  std::vector<HandPose> poses;
  for (int i = 1; i <= 30; ++i) {
    poses.push_back(model.sample_natural_pose(rng));
    text += keypoint_row(i, model.joints_fk(poses.back(), HandShape{}));
  }
  test::write_file(dir / "joints.txt", text);
  const auto rows = run_ik(model, dir / "joints.txt", HandShape{});
  REQUIRE(rows.size() == 31);
  CHECK(rows[0].fit.pose.theta.norm() < 1e-12);
  for (const auto& r : rows) CHECK(r.fit.residual < 1e-6);
  const std::string report = ik_report(rows);
  CHECK(std::count(report.begin(), report.end(), '\n') == 32);

  HandShape wide;
  wide.beta[0] = 3.0;
  CHECK_THROWS_AS(run_ik(model, dir / "joints.txt", wide), Error);
  std::string flat2d = "1";
  for (int i = 0; i < 42; ++i) flat2d += " 0";
  test::write_file(dir / "flat.txt", flat2d + "\n");
  CHECK_THROWS_AS(run_ik(model, dir / "flat.txt", HandShape{}), Error);
  test::write_file(dir / "bad.txt", "1 2 3\n");
  CHECK_THROWS_AS(run_ik(model, dir / "bad.txt", HandShape{}), Error);
}

TEST_CASE("square crop about a detector box") {
  const SquareCrop c = crop_about_box(10, 20, 50, 40);
  CHECK(c.center_x == 30.0);
  CHECK(c.center_y == 30.0);
  CHECK(c.side == doctest::Approx(88.0).epsilon(1e-15));
  CHECK(crop_about_box(0, 0, 10, 30).side == doctest::Approx(66.0).epsilon(1e-15));
  CHECK_THROWS_AS(crop_about_box(5, 5, 5, 10), Error);
}
