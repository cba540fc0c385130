#include <doctest.h>

#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "seqhand/camera.hpp"
#include "seqhand/error.hpp"
#include "seqhand/hand_model.hpp"
#include "test_support.hpp"

using namespace seqhand;

namespace {

const HandModel& model() { return HandModel::builtin(); }

// Blend table read straight from the asset text, independent of the loader.
std::array<std::array<Vec3, kJointCount>, kShapeDim> blend_table_from_asset() {
  std::array<std::array<Vec3, kJointCount>, kShapeDim> table;
  for (auto& mode : table) mode.fill(Vec3::Zero());
  std::ifstream in(SEQHAND_ASSET_PATH);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string kind, name;
    int mode = 0, joint = 0;
    double cx = 0, cy = 0, cz = 0;
    if (!(row >> kind) || kind != "blend") continue;
    row >> mode >> name >> joint >> cx >> cy >> cz;
    table[static_cast<std::size_t>(mode)][static_cast<std::size_t>(joint)] += Vec3(cx, cy, cz);
  }
  return table;
}

HandShape random_shape(Rng& rng) {
  HandShape b;
  for (int i = 0; i < kShapeDim; ++i) b.beta[i] = rng.uniform(-2.0, 2.0);
  return b;
}

// Arbitrary rotations (with twist), not just the sampling ranges.
HandPose random_full_pose(Rng& rng) {
  HandPose p;
  for (int s = 0; s < kArticulatedCount; ++s) {
    Vec3 axis = test::random_vec3(rng, -1.0, 1.0).normalized();
    p.set_joint_rotation(s, axis * rng.uniform(0.0, std::numbers::pi));
  }
  return p;
}

std::set<int> subtree(const KinematicTree& tree, int root) {
  std::set<int> out{root};
  for (int j = 1; j < kJointCount; ++j) {
    for (int a = j; a > 0; a = tree.parent[static_cast<std::size_t>(a)]) {
      if (a == root) out.insert(j);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("kinematic tree has the canonical 21-joint topology") {
  const auto& tree = model().tree();
  CHECK(tree.parent[0] == -1);
  int articulated = 0;
  for (int j = 1; j < kJointCount; ++j) {
    const int p = tree.parent[static_cast<std::size_t>(j)];
    CHECK(p >= 0);
    CHECK(p < j);  // parents precede children, so no cycles
    if (is_tip(j)) {
      CHECK(tree.articulated_slot(j) == -1);
    } else {
      CHECK(tree.articulated_slot(j) >= 0);
      ++articulated;
    }
  }
  CHECK(articulated == kArticulatedCount);
  CHECK(tree.articulated_slot(0) == -1);
  // Every finger chain hangs off the wrist: MCP <- wrist, PIP <- MCP, ...
  for (int f = 0; f < 5; ++f) {
    CHECK(tree.parent[static_cast<std::size_t>(1 + 4 * f)] == 0);
    for (int s = 1; s < 4; ++s) CHECK(tree.parent[static_cast<std::size_t>(1 + 4 * f + s)] == 4 * f + s);
  }
}

TEST_CASE("rest pose equals accumulated template offsets") {
  const auto& tree = model().tree();
  const JointSet fk = model().joints_fk(HandPose{}, HandShape{});
  const JointSet rest = model().shape_skeleton(HandShape{});
  for (int j = 0; j < kJointCount; ++j) {
    Vec3 expect = Vec3::Zero();
    for (int a = j; a > 0; a = tree.parent[static_cast<std::size_t>(a)]) expect += tree.template_offsets[static_cast<std::size_t>(a)];
    CHECK((fk[j] - expect).norm() < 1e-12);
    CHECK(rest[j] == fk[j]);
  }
  CHECK(fk[0] == Vec3::Zero());
}

TEST_CASE("shape skeleton matches the asset blend table") {
  const auto table = blend_table_from_asset();
  const auto& tree = model().tree();
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const HandShape b = random_shape(rng);
    const auto offsets = model().shape_offsets(b);
    for (int j = 1; j < kJointCount; ++j) {
      Vec3 scale = Vec3::Ones();
      for (int m = 0; m < kShapeDim; ++m) scale += b.beta[m] * table[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)];
      const Vec3 expect = tree.template_offsets[static_cast<std::size_t>(j)].cwiseProduct(scale);
      CHECK((offsets[static_cast<std::size_t>(j)] - expect).norm() < 1e-12);
    }
  }
}

TEST_CASE("global size mode scales every bone by the same factor") {
  HandShape b;
  b.beta[0] = 2.0;
  const auto rest = bone_lengths(model().shape_skeleton(HandShape{}), model().tree());
  const auto grown = bone_lengths(model().shape_skeleton(b), model().tree());
  const double f = grown[1] / rest[1];
  CHECK(f > 1.0);
  CHECK(f <= 1.2);
  for (int j = 1; j < kJointCount; ++j) {
    CHECK(grown[static_cast<std::size_t>(j)] == doctest::Approx(f * rest[static_cast<std::size_t>(j)]).epsilon(1e-12));
  }
}

TEST_CASE("bone elongation stays within 20% over the whole shape box") {
  const auto rest = bone_lengths(model().shape_skeleton(HandShape{}), model().tree());
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    HandShape b;
    // Corners of the box are the extremes of a linear map.
    for (int i = 0; i < kShapeDim; ++i) b.beta[i] = rng.below(2) ? 2.0 : -2.0;
    const auto len = bone_lengths(model().shape_skeleton(b), model().tree());
    for (int j = 1; j < kJointCount; ++j) {
      const double ratio = len[static_cast<std::size_t>(j)] / rest[static_cast<std::size_t>(j)];
      CHECK(ratio <= 1.2 + 1e-12);
      CHECK(ratio >= 0.8 - 1e-12);
    }
  }
}

TEST_CASE("shape deformation is odd in beta") {
  Rng rng(3);
  const JointSet rest = model().shape_skeleton(HandShape{});
  for (int trial = 0; trial < 20; ++trial) {
    const HandShape b = random_shape(rng);
    HandShape nb;
    nb.beta = -b.beta;
    const JointSet plus = model().shape_skeleton(b);
    const JointSet minus = model().shape_skeleton(nb);
    for (int j = 0; j < kJointCount; ++j) CHECK(((plus[j] - rest[j]) + (minus[j] - rest[j])).norm() < 1e-12);
  }
}

TEST_CASE("forward kinematics preserves bone lengths and is deterministic") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const HandShape b = random_shape(rng);
    const HandPose p = random_full_pose(rng);
    const auto rest = bone_lengths(model().shape_skeleton(b), model().tree());
    const JointSet posed = model().joints_fk(p, b);
    const auto len = bone_lengths(posed, model().tree());
    for (int j = 1; j < kJointCount; ++j) {
      CHECK(std::abs(len[static_cast<std::size_t>(j)] - rest[static_cast<std::size_t>(j)]) < 1e-9);
    }
    CHECK(posed == model().joints_fk(p, b));
    CHECK(posed[0] == Vec3::Zero());
  }
}

TEST_CASE("forward kinematics rejects non-finite input") {
  HandPose p;
  p.theta[4] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(model().joints_fk(p, HandShape{}), Error);
}

TEST_CASE("inverse kinematics round trip on zero-twist poses") {
  Rng rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const HandShape b = random_shape(rng);
    const HandPose p = model().sample_natural_pose(rng);
    const JointSet joints = model().joints_fk(p, b);
    const FitResult fit = model().fit_pose_params(joints, b);
    worst = std::max(worst, fit.residual);
    CHECK((fit.pose.theta - p.theta).cwiseAbs().maxCoeff() < 1e-9);
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("inverse kinematics of the rest skeleton is the zero pose") {
  const FitResult fit = model().fit_pose_params(model().shape_skeleton(HandShape{}), HandShape{});
  CHECK(fit.pose.theta.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(fit.residual < 1e-9);
}

TEST_CASE("inverse kinematics accepts targets that are not root-centred") {
  Rng rng(4);
  const HandPose p = model().sample_natural_pose(rng);
  JointSet joints = model().joints_fk(p, HandShape{});
  for (auto& q : joints.p) q += Vec3(40.0, -7.0, 12.5);
  const FitResult fit = model().fit_pose_params(joints, HandShape{});
  CHECK(fit.residual < 1e-6);
}

TEST_CASE("inverse kinematics residual on mismatched bone lengths equals the alignment floor") {
  // Swing-only fitting aligns every articulated bone with its target
  // direction; palm bones are fixed by the shape. Rebuild that chain by hand.
  const auto& tree = model().tree();
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const HandShape source = random_shape(rng);
    const HandShape fit_shape = random_shape(rng);
    const JointSet target = model().joints_fk(model().sample_natural_pose(rng), source);
    const auto offsets = model().shape_offsets(fit_shape);
    JointSet chain;
    for (int j = 1; j < kJointCount; ++j) {
      const int p = tree.parent[static_cast<std::size_t>(j)];
      if (p == 0) {
        chain[j] = offsets[static_cast<std::size_t>(j)];
      } else {
        chain[j] = chain[p] + offsets[static_cast<std::size_t>(j)].norm() * (target[j] - target[p]).normalized();
      }
    }
    const double floor = std::sqrt(squared_distance(chain, target) / kJointCount);
    const FitResult fit = model().fit_pose_params(target, fit_shape);
    CHECK(fit.residual == doctest::Approx(floor).epsilon(1e-9));
    CHECK(fit.residual > 0.0);
  }
}

TEST_CASE("inverse kinematics rejects zero-length bones") {
  JointSet joints = model().shape_skeleton(HandShape{});
  joints[7] = joints[6];
  try {
    model().fit_pose_params(joints, HandShape{});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArgument);
    CHECK(std::string(e.what()).find("zero-length") != std::string::npos);
  }
}

TEST_CASE("mesh structure and skin weights") {
  const HandMesh mesh = model().rest_mesh(HandShape{});
  const auto v = mesh.vertices.size();
  CHECK(v == 840);
  CHECK(mesh.faces.size() == 1600);
  CHECK(mesh.skin.size() == v);
  CHECK(mesh.vertex_bone.size() == v);
  for (const auto& infl : mesh.skin) {
    CHECK(!infl.empty());
    CHECK(infl.size() <= 4);
    double sum = 0.0;
    for (const auto& w : infl) {
      CHECK(w.weight >= 0.0);
      sum += w.weight;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
  for (const auto& f : mesh.faces) {
    for (int i : f) {
      CHECK(i >= 0);
      CHECK(static_cast<std::size_t>(i) < v);
    }
    const Vec3& a = mesh.vertices[static_cast<std::size_t>(f[0])];
    const Vec3& b = mesh.vertices[static_cast<std::size_t>(f[1])];
    const Vec3& c = mesh.vertices[static_cast<std::size_t>(f[2])];
    CHECK((b - a).cross(c - a).norm() > 1e-6);
  }
}

TEST_CASE("skinning at the zero pose returns the rest mesh") {
  Rng rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const HandShape b = trial == 0 ? HandShape{} : random_shape(rng);
    const HandMesh rest = model().rest_mesh(b);
    const HandMesh posed = model().mesh_lbs(HandPose{}, b);
    REQUIRE(rest.vertices.size() == posed.vertices.size());
    for (std::size_t i = 0; i < rest.vertices.size(); ++i) CHECK((rest.vertices[i] - posed.vertices[i]).norm() < 1e-12);
  }
}

TEST_CASE("single-influence vertices move rigidly with their bone") {
  Rng rng(12);
  const HandShape b = random_shape(rng);
  const HandPose p = random_full_pose(rng);
  const HandMesh rest = model().rest_mesh(b);
  const HandMesh posed = model().mesh_lbs(p, b);
  const auto xf = model().joint_transforms(p, b);
  int rigid = 0;
  for (std::size_t i = 0; i < rest.vertices.size(); ++i) {
    if (rest.skin[i].size() != 1) continue;
    ++rigid;
    const auto& t = xf[static_cast<std::size_t>(rest.skin[i][0].joint)];
    const Vec3 expect = t.rotation * (rest.vertices[i] - t.rest_origin) + t.origin;
    CHECK((posed.vertices[i] - expect).norm() < 1e-9);
  }
  CHECK(rigid > 100);
}

TEST_CASE("joint transforms carry the skeleton") {
  Rng rng(21);
  const HandShape b = random_shape(rng);
  const HandPose p = random_full_pose(rng);
  const auto xf = model().joint_transforms(p, b);
  const JointSet rest = model().shape_skeleton(b);
  const JointSet posed = model().joints_fk(p, b);
  for (int j = 0; j < kJointCount; ++j) {
    CHECK((xf[static_cast<std::size_t>(j)].apply(rest[j]) - posed[j]).norm() < 1e-9);
    const Mat3& r = xf[static_cast<std::size_t>(j)].rotation;
    CHECK((r.transpose() * r - Mat3::Identity()).norm() < 1e-12);
  }
}

TEST_CASE("bending one PIP joint moves only its subtree's skin") {
  const auto& tree = model().tree();
  const HandShape b;
  const HandMesh rest = model().rest_mesh(b);
  const JointSet joints = model().shape_skeleton(b);
  for (const int pip : {6, 10, 14, 18}) {
    const int slot = tree.articulated_slot(pip);
    HandPose p;
    p.set_joint_rotation(slot, (std::numbers::pi / 2) * model().flex_axis(slot));
    const HandMesh posed = model().mesh_lbs(p, b);
    // Oracle: joints in the PIP subtree rotate rigidly about the PIP joint,
    // everything else stays put.
    const auto moving = subtree(tree, pip);
    const Mat3 rot = rodrigues((std::numbers::pi / 2) * model().flex_axis(slot));
    const Vec3 pivot = joints[pip];
    for (std::size_t i = 0; i < rest.vertices.size(); ++i) {
      const Vec3& v = rest.vertices[i];
      Vec3 expect = Vec3::Zero();
      bool touched = false;
      for (const auto& w : rest.skin[i]) {
        if (moving.count(w.joint) && w.weight > 0.0) {
          touched = true;
          expect += w.weight * (rot * (v - pivot) + pivot);
        } else {
          expect += w.weight * v;
        }
      }
      CHECK((posed.vertices[i] - expect).norm() < 1e-9);
      if (!touched) CHECK(posed.vertices[i] == v);
    }
  }
}

TEST_CASE("skinned vertices are convex combinations of their rigid images") {
  Rng rng(31);
  const HandShape b = random_shape(rng);
  const HandPose p = model().sample_natural_pose(rng);
  const HandMesh rest = model().rest_mesh(b);
  const HandMesh posed = model().mesh_lbs(p, b);
  const auto xf = model().joint_transforms(p, b);
  for (std::size_t i = 0; i < rest.vertices.size(); ++i) {
    const auto& infl = rest.skin[i];
    if (infl.size() != 2) continue;
    // Two influences: the result must lie on the segment between the images.
    const Vec3 a = xf[static_cast<std::size_t>(infl[0].joint)].apply(rest.vertices[i]);
    const Vec3 c = xf[static_cast<std::size_t>(infl[1].joint)].apply(rest.vertices[i]);
    const Vec3 v = posed.vertices[i];
    const Vec3 d = c - a;
    if (d.norm() < 1e-9) {
      CHECK((v - a).norm() < 1e-9);
      continue;
    }
    const double t = (v - a).dot(d) / d.squaredNorm();
    CHECK(t >= -1e-9);
    CHECK(t <= 1.0 + 1e-9);
    CHECK((a + t * d - v).norm() < 1e-9);
  }
}

TEST_CASE("color templates apply per-class factors") {
  std::map<std::string, double> factor;
  {
    std::istringstream in(test::read_file(SEQHAND_ASSET_PATH));
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream row(line);
      std::string kind, cls;
      double f = 0;
      if (row >> kind && kind == "color_factor" && row >> cls >> f) factor[cls] = f;
    }
  }
  REQUIRE(factor.size() == 3);
  auto scaled = [](const std::array<std::uint8_t, 3>& base, double f) {
    std::array<std::uint8_t, 3> out{};
    for (int c = 0; c < 3; ++c) out[static_cast<std::size_t>(c)] = static_cast<std::uint8_t>(std::min(255.0, std::round(base[static_cast<std::size_t>(c)] * f)));
    return out;
  };
  const auto& tree = model().tree();
  const auto& templates = model().color_templates();
  CHECK(templates.size() >= 2);
  HandMesh mesh = model().rest_mesh(HandShape{});
  for (const auto& t : templates) {
    model().apply_color_template(mesh, t.id);
    REQUIRE(mesh.colors.size() == mesh.vertices.size());
    int nails = 0;
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
      const int bone = mesh.vertex_bone[i];
      if (tree.parent[static_cast<std::size_t>(bone)] == 0) {
        CHECK(mesh.colors[i] == scaled(t.base, factor["palm"]));
      } else if (!is_tip(bone)) {
        CHECK(mesh.colors[i] == scaled(t.base, factor["finger"]));
      } else if (mesh.colors[i] == scaled(t.base, factor["nail"])) {
        ++nails;
      } else {
        CHECK(mesh.colors[i] == scaled(t.base, factor["finger"]));
      }
    }
    CHECK(nails > 0);
  }
  CHECK_THROWS_AS(model().apply_color_template(mesh, 999), Error);
}

TEST_CASE("PCA basis is orthonormal, ordered and complete") {
  Rng rng(17);
  std::vector<HandPose> poses;
  for (int i = 0; i < 400; ++i) poses.push_back(random_full_pose(rng));
  const PoseBasis full = pose_pca_fit(poses, kPoseDim);

  // Oracle: covariance trace computed directly.
  Eigen::Matrix<double, kPoseDim, 1> mean = Eigen::Matrix<double, kPoseDim, 1>::Zero();
  for (const auto& p : poses) mean += p.theta;
  mean /= static_cast<double>(poses.size());
  double trace = 0.0;
  for (const auto& p : poses) trace += (p.theta - mean).squaredNorm();
  trace /= static_cast<double>(poses.size() - 1);
  CHECK(test::relative_error(full.total_variance, trace) < 1e-12);
  CHECK(test::relative_error(full.explained_variance(), trace) < 1e-9);

  const auto gram = full.components.transpose() * full.components;
  CHECK((gram - Eigen::MatrixXd::Identity(kPoseDim, kPoseDim)).cwiseAbs().maxCoeff() < 1e-9);
  for (int i = 1; i < full.k(); ++i) CHECK(full.variances[i] <= full.variances[i - 1]);
  CHECK((full.mean - mean).norm() < 1e-12);

  const PoseBasis six = pose_pca_fit(poses, 6);
  CHECK(six.k() == 6);
  for (int i = 0; i < 6; ++i) CHECK(six.variances[i] == doctest::Approx(full.variances[i]).epsilon(1e-9));
  // Anything in the span round-trips.
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd c(6);
    for (int i = 0; i < 6; ++i) c[i] = rng.uniform(-1.0, 1.0);
    const HandPose x = pose_pca_reconstruct(six, c);
    const Eigen::VectorXd back = pose_pca_project(six, x);
    CHECK((back - c).norm() < 1e-9);
    CHECK((pose_pca_reconstruct(six, back).theta - x.theta).norm() < 1e-9);
  }
  // The mean projects to zero.
  HandPose m;
  m.theta = six.mean;
  CHECK(pose_pca_project(six, m).norm() < 1e-12);
}

TEST_CASE("PCA argument and degeneracy errors") {
  Rng rng(1);
  std::vector<HandPose> poses(5, model().sample_natural_pose(rng));
  try {
    pose_pca_fit(poses, 2);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Numeric);
  }
  poses[1] = model().sample_natural_pose(rng);
  CHECK_THROWS_AS(pose_pca_fit(poses, 0), Error);
  CHECK_THROWS_AS(pose_pca_fit(poses, 46), Error);
  CHECK_THROWS_AS(pose_pca_fit(std::span<const HandPose>(poses.data(), 1), 1), Error);
  CHECK_NOTHROW(pose_pca_fit(poses, 2));
}

TEST_CASE("asset parsing reports the offending line") {
  const std::string good = test::read_file(SEQHAND_ASSET_PATH);
  CHECK_NOTHROW(HandModel::parse(good));
  CHECK(HandModel::parse(good).version() == 1);

  auto expect_parse_error = [](const std::string& text, const std::string& needle) {
    try {
      HandModel::parse(text, "asset");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  std::string bad = good;
  const auto pos = bad.find("joint 7 ");
  REQUIRE(pos != std::string::npos);
  bad.insert(pos, "joint banana\n");
  expect_parse_error(bad, "asset:");
  expect_parse_error(good + "\nfrobnicate 1 2 3\n", "frobnicate");
  CHECK_THROWS_AS(HandModel::load("/nonexistent/hand.txt"), Error);
}
