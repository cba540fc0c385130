#include "seqhand/hand_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "seqhand/camera.hpp"
#include "seqhand/error.hpp"
#include "seqhand/random.hpp"

namespace seqhand {

extern const char* const kBuiltinHandModelAsset;

namespace {

constexpr std::array<const char*, 3> kColorClassNames{"palm", "finger", "nail"};

// Fixed topology: wrist, then four-joint chains per finger.
int canonical_parent(int joint) {
  if (joint == 0) return -1;
  return (joint - 1) % 4 == 0 ? 0 : joint - 1;
}

[[noreturn]] void parse_fail(std::string_view source, int line, const std::string& what) {
  fail(ErrorKind::Parse, std::string(source) + ":" + std::to_string(line) + ": " + what);
}

Vec3 any_perpendicular(const Vec3& w) {
  const Vec3 ref = std::abs(w.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
  return w.cross(ref).normalized();
}

// Shortest rotation taking unit vector `from` onto unit vector `to`, as an
// axis-angle vector orthogonal to `from`. Antiparallel inputs rotate about
// `fallback_axis`.
Vec3 swing_rotation(const Vec3& from, const Vec3& to, const Vec3& fallback_axis) {
  const Vec3 cross = from.cross(to);
  const double sin_angle = cross.norm();
  const double cos_angle = from.dot(to);
  const double angle = std::atan2(sin_angle, cos_angle);
  if (sin_angle < 1e-300) {
    return cos_angle > 0.0 ? Vec3::Zero() : Vec3(fallback_axis * std::numbers::pi);
  }
  return cross / sin_angle * angle;
}

}  // namespace

int KinematicTree::articulated_slot(int joint) const {
  for (int i = 0; i < kArticulatedCount; ++i) {
    if (articulated[static_cast<std::size_t>(i)] == joint) return i;
  }
  return -1;
}

int KinematicTree::child(int joint) const {
  for (int j = joint + 1; j < kJointCount; ++j) {
    if (parent[static_cast<std::size_t>(j)] == joint) return j;
  }
  return -1;
}

HandModel HandModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open hand model asset " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

const HandModel& HandModel::builtin() {
  static const HandModel model = parse(kBuiltinHandModelAsset, "<builtin hand_model_v1>");
  return model;
}

HandModel HandModel::parse(std::string_view text, std::string_view source) {
  HandModel m;
  std::array<bool, kJointCount> seen_joint{};
  std::array<bool, kJointCount> seen_radius{};
  std::array<bool, kArticulatedCount> seen_limits{};
  bool seen_mesh = false;

  {
    int slot = 0;
    for (int j = 0; j < kJointCount; ++j) {
      if (j != 0 && !is_tip(j)) m.tree_.articulated[static_cast<std::size_t>(slot++)] = j;
    }
  }

  std::istringstream lines{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::string kind;
    if (!(row >> kind)) continue;

    auto read_joint = [&](int& j) {
      if (!(row >> j) || j < 0 || j >= kJointCount) parse_fail(source, line_no, "bad joint index");
    };

    if (kind == "version") {
      if (!(row >> m.version_)) parse_fail(source, line_no, "bad version");
    } else if (kind == "joint") {
      int j = 0;
      int parent = 0;
      std::string name;
      Vec3 off;
      read_joint(j);
      if (!(row >> name >> parent >> off.x() >> off.y() >> off.z())) {
        parse_fail(source, line_no, "joint needs: index name parent dx dy dz");
      }
      if (parent != canonical_parent(j)) {
        parse_fail(source, line_no, "joint " + std::to_string(j) + " must have parent " +
                                        std::to_string(canonical_parent(j)));
      }
      const auto uj = static_cast<std::size_t>(j);
      m.tree_.parent[uj] = parent;
      m.tree_.names[uj] = name;
      m.tree_.template_offsets[uj] = off;
      seen_joint[uj] = true;
    } else if (kind == "radius") {
      int j = 0;
      read_joint(j);
      const auto uj = static_cast<std::size_t>(j);
      if (j == 0 || !(row >> m.radius_start_[uj] >> m.radius_end_[uj]) ||
          m.radius_start_[uj] <= 0.0 || m.radius_end_[uj] <= 0.0) {
        parse_fail(source, line_no, "radius needs a non-root joint and two positive radii");
      }
      seen_radius[uj] = true;
    } else if (kind == "blend") {
      int mode = 0;
      int j = 0;
      std::string name;
      Vec3 c;
      if (!(row >> mode) || mode < 0 || mode >= kShapeDim) parse_fail(source, line_no, "bad blend mode");
      if (!(row >> name)) parse_fail(source, line_no, "blend needs a name");
      read_joint(j);
      if (!(row >> c.x() >> c.y() >> c.z())) parse_fail(source, line_no, "blend needs cx cy cz");
      m.blend_[static_cast<std::size_t>(mode)][static_cast<std::size_t>(j)] += c;
      m.blend_names_[static_cast<std::size_t>(mode)] = name;
    } else if (kind == "limits") {
      int j = 0;
      read_joint(j);
      const int slot = m.tree_.articulated_slot(j);
      if (slot < 0) parse_fail(source, line_no, "limits given for a non-articulated joint");
      JointLimits lim;
      if (!(row >> lim.curl_normal.x() >> lim.curl_normal.y() >> lim.curl_normal.z() >>
            lim.flex_min >> lim.flex_max >> lim.abd_min >> lim.abd_max)) {
        parse_fail(source, line_no, "limits needs: joint nx ny nz flex_min flex_max abd_min abd_max");
      }
      if (lim.flex_min > lim.flex_max || lim.abd_min > lim.abd_max) {
        parse_fail(source, line_no, "limits ranges must be ordered");
      }
      m.limits_[static_cast<std::size_t>(slot)] = lim;
      seen_limits[static_cast<std::size_t>(slot)] = true;
    } else if (kind == "mesh") {
      if (!(row >> m.rings_ >> m.segments_ >> m.skin_blend_) || m.rings_ < 2 || m.segments_ < 3 ||
          !(m.skin_blend_ > 0.0 && m.skin_blend_ <= 0.5)) {
        parse_fail(source, line_no, "mesh needs rings >= 2, segments >= 3, 0 < skin_blend <= 0.5");
      }
      seen_mesh = true;
    } else if (kind == "color") {
      ColorTemplate ct;
      int r = 0;
      int g = 0;
      int b = 0;
      if (!(row >> ct.id >> ct.name >> r >> g >> b) || r < 0 || r > 255 || g < 0 || g > 255 ||
          b < 0 || b > 255) {
        parse_fail(source, line_no, "color needs: id name r g b (0..255)");
      }
      if (ct.id != static_cast<int>(m.colors_.size())) {
        parse_fail(source, line_no, "color ids must be consecutive from 0");
      }
      ct.base = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                 static_cast<std::uint8_t>(b)};
      m.colors_.push_back(ct);
    } else if (kind == "color_factor") {
      std::string cls;
      double f = 0.0;
      if (!(row >> cls >> f) || f <= 0.0) parse_fail(source, line_no, "color_factor needs: class factor");
      const auto it = std::find(kColorClassNames.begin(), kColorClassNames.end(), cls);
      if (it == kColorClassNames.end()) parse_fail(source, line_no, "unknown color class " + cls);
      m.color_factor_[static_cast<std::size_t>(it - kColorClassNames.begin())] = f;
    } else {
      parse_fail(source, line_no, "unknown record '" + kind + "'");
    }
    std::string extra;
    if (row >> extra) parse_fail(source, line_no, "trailing token '" + extra + "'");
  }

  if (m.version_ != 1) fail(ErrorKind::Parse, std::string(source) + ": unsupported version");
  for (int j = 0; j < kJointCount; ++j) {
    if (!seen_joint[static_cast<std::size_t>(j)]) {
      fail(ErrorKind::Parse, std::string(source) + ": missing joint " + std::to_string(j));
    }
    if (j != 0 && !seen_radius[static_cast<std::size_t>(j)]) {
      fail(ErrorKind::Parse, std::string(source) + ": missing radius for joint " + std::to_string(j));
    }
  }
  for (int s = 0; s < kArticulatedCount; ++s) {
    if (!seen_limits[static_cast<std::size_t>(s)]) {
      fail(ErrorKind::Parse, std::string(source) + ": missing limits for joint " +
                                 std::to_string(m.tree_.articulated[static_cast<std::size_t>(s)]));
    }
  }
  if (!seen_mesh) fail(ErrorKind::Parse, std::string(source) + ": missing mesh record");
  if (m.colors_.empty()) fail(ErrorKind::Parse, std::string(source) + ": no color templates");
  m.validate();
  return m;
}

void HandModel::validate() const {
  if (tree_.template_offsets[0] != Vec3::Zero()) {
    fail(ErrorKind::Validation, "wrist template offset must be zero");
  }
  for (int j = 1; j < kJointCount; ++j) {
    if (!(tree_.template_offsets[static_cast<std::size_t>(j)].norm() > 0.0)) {
      fail(ErrorKind::Validation, "zero-length template bone at joint " + std::to_string(j));
    }
  }
  // Shape blends must keep every bone component positive over beta in [-2, 2].
  for (int j = 1; j < kJointCount; ++j) {
    Vec3 total = Vec3::Zero();
    for (const auto& mode : blend_) total += mode[static_cast<std::size_t>(j)].cwiseAbs();
    if (HandShape::kLimit * total.maxCoeff() >= 1.0) {
      fail(ErrorKind::Validation, "shape blends collapse bone " + std::to_string(j));
    }
  }
  for (int s = 0; s < kArticulatedCount; ++s) {
    const int j = tree_.articulated[static_cast<std::size_t>(s)];
    const Vec3 u = tree_.template_offsets[static_cast<std::size_t>(tree_.child(j))].normalized();
    if (u.cross(limits_[static_cast<std::size_t>(s)].curl_normal).norm() < 1e-6) {
      fail(ErrorKind::Validation, "curl normal parallel to bone at joint " + std::to_string(j));
    }
  }
}

std::array<Vec3, kJointCount> HandModel::shape_offsets(const HandShape& beta) const {
  if (!beta.in_range()) fail(ErrorKind::InvalidArgument, "shape parameters must be finite and lie in [-2, 2]");
  std::array<Vec3, kJointCount> offsets{};
  for (int j = 0; j < kJointCount; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    Vec3 scale = Vec3::Zero();
    for (int mode = 0; mode < kShapeDim; ++mode) {
      scale += beta.beta[mode] * blend_[static_cast<std::size_t>(mode)][uj];
    }
    const Vec3& t = tree_.template_offsets[uj];
    offsets[uj] = t + t.cwiseProduct(scale);
  }
  return offsets;
}

JointSet HandModel::shape_skeleton(const HandShape& beta) const {
  const auto offsets = shape_offsets(beta);
  JointSet out;
  for (int j = 1; j < kJointCount; ++j) {
    out[j] = out[tree_.parent[static_cast<std::size_t>(j)]] + offsets[static_cast<std::size_t>(j)];
  }
  return out;
}

std::array<JointTransform, kJointCount> HandModel::joint_transforms(const HandPose& theta,
                                                                     const HandShape& beta) const {
  if (!theta.theta.allFinite()) fail(ErrorKind::InvalidArgument, "non-finite pose parameters");
  const auto offsets = shape_offsets(beta);
  std::array<JointTransform, kJointCount> xf{};
  for (int j = 1; j < kJointCount; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const auto& parent = xf[static_cast<std::size_t>(tree_.parent[uj])];
    auto& cur = xf[uj];
    cur.rest_origin = parent.rest_origin + offsets[uj];
    cur.origin = parent.origin + parent.rotation * offsets[uj];
    const int slot = tree_.articulated_slot(j);
    cur.rotation = slot >= 0 ? Mat3(parent.rotation * rodrigues(theta.joint_rotation(slot)))
                             : parent.rotation;
  }
  return xf;
}

JointSet HandModel::joints_fk(const HandPose& theta, const HandShape& beta) const {
  const auto xf = joint_transforms(theta, beta);
  JointSet out;
  for (int j = 0; j < kJointCount; ++j) out[j] = xf[static_cast<std::size_t>(j)].origin;
  return out;
}

HandMesh HandModel::rest_mesh(const HandShape& beta) const {
  const auto offsets = shape_offsets(beta);
  const JointSet rest = shape_skeleton(beta);
  HandMesh mesh;
  const int per_bone = rings_ * segments_ + 2;
  mesh.vertices.reserve(static_cast<std::size_t>(per_bone * (kJointCount - 1)));

  auto add_vertex = [&](const Vec3& p, int bone, std::vector<SkinInfluence> skin) {
    mesh.vertices.push_back(p);
    mesh.vertex_bone.push_back(bone);
    mesh.skin.push_back(std::move(skin));
  };

  for (int c = 1; c < kJointCount; ++c) {
    const auto uc = static_cast<std::size_t>(c);
    const int p = tree_.parent[uc];
    const Vec3 a = rest[p];
    const Vec3 b = rest[c];
    const double length = offsets[uc].norm();
    const Vec3 w = (b - a) / length;
    const Vec3 e1 = any_perpendicular(w);
    const Vec3 e2 = w.cross(e1);
    const double scale = length / tree_.template_offsets[uc].norm();
    const double r0 = radius_start_[uc] * scale;
    const double r1 = radius_end_[uc] * scale;

    // Skin weights along the bone: the owning frame is the parent joint's;
    // near each end the weight blends half-way into the neighbouring bone.
    const int prev_owner = p == 0 ? -1 : tree_.parent[static_cast<std::size_t>(p)];
    const int next_owner = is_tip(c) ? -1 : c;
    auto weights_at = [&](double t) {
      double w_prev = 0.0;
      double w_next = 0.0;
      if (prev_owner >= 0 && t < skin_blend_) w_prev = 0.5 * (1.0 - t / skin_blend_);
      if (next_owner >= 0 && t > 1.0 - skin_blend_) w_next = 0.5 * (t - (1.0 - skin_blend_)) / skin_blend_;
      std::vector<SkinInfluence> skin{{p, 1.0 - w_prev - w_next}};
      if (w_prev > 0.0) skin.push_back({prev_owner, w_prev});
      if (w_next > 0.0) skin.push_back({next_owner, w_next});
      return skin;
    };

    const int base = static_cast<int>(mesh.vertices.size());
    for (int i = 0; i < rings_; ++i) {
      const double t = static_cast<double>(i) / (rings_ - 1);
      const double radius = r0 + (r1 - r0) * t;
      const Vec3 centre = a + t * (b - a);
      for (int k = 0; k < segments_; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / segments_;
        add_vertex(centre + radius * (std::cos(phi) * e1 + std::sin(phi) * e2), c, weights_at(t));
      }
    }
    const int cap_start = static_cast<int>(mesh.vertices.size());
    add_vertex(a - 0.5 * r0 * w, c, weights_at(0.0));
    const int cap_end = cap_start + 1;
    add_vertex(b + 0.5 * r1 * w, c, weights_at(1.0));

    for (int i = 0; i + 1 < rings_; ++i) {
      for (int k = 0; k < segments_; ++k) {
        const int k1 = (k + 1) % segments_;
        const int v00 = base + i * segments_ + k;
        const int v01 = base + i * segments_ + k1;
        const int v10 = base + (i + 1) * segments_ + k;
        const int v11 = base + (i + 1) * segments_ + k1;
        mesh.faces.push_back({v00, v10, v11});
        mesh.faces.push_back({v00, v11, v01});
      }
    }
    const int last = base + (rings_ - 1) * segments_;
    for (int k = 0; k < segments_; ++k) {
      const int k1 = (k + 1) % segments_;
      mesh.faces.push_back({cap_start, base + k1, base + k});
      mesh.faces.push_back({cap_end, last + k, last + k1});
    }
  }
  apply_color_template(mesh, 0);
  return mesh;
}

void HandModel::apply_color_template(HandMesh& mesh, int template_id) const {
  if (template_id < 0 || template_id >= static_cast<int>(colors_.size())) {
    fail(ErrorKind::InvalidArgument, "unknown color template " + std::to_string(template_id));
  }
  const auto& base = colors_[static_cast<std::size_t>(template_id)].base;
  mesh.colors.resize(mesh.vertices.size());
  const int per_bone = rings_ * segments_ + 2;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const int bone = mesh.vertex_bone[v];
    const int local = static_cast<int>(v) % per_bone;
    VertexClass cls = VertexClass::Finger;
    if (tree_.parent[static_cast<std::size_t>(bone)] == 0) {
      cls = VertexClass::Palm;
    } else if (is_tip(bone) &&
               (local == per_bone - 1 || (local >= (rings_ - 1) * segments_ && local < rings_ * segments_))) {
      cls = VertexClass::Nail;
    }
    const double f = color_factor_[static_cast<std::size_t>(cls)];
    for (int ch = 0; ch < 3; ++ch) {
      const double value = std::round(base[static_cast<std::size_t>(ch)] * f);
      mesh.colors[v][static_cast<std::size_t>(ch)] = static_cast<std::uint8_t>(std::clamp(value, 0.0, 255.0));
    }
  }
}

HandMesh HandModel::mesh_lbs(const HandPose& theta, const HandShape& beta) const {
  HandMesh mesh = rest_mesh(beta);
  const auto xf = joint_transforms(theta, beta);
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const Vec3 rest = mesh.vertices[v];
    Vec3 posed = Vec3::Zero();
    for (const auto& inf : mesh.skin[v]) {
      posed += inf.weight * xf[static_cast<std::size_t>(inf.joint)].apply(rest);
    }
    mesh.vertices[v] = posed;
  }
  return mesh;
}

FitResult HandModel::fit_pose_params(const JointSet& target_in, const HandShape& beta) const {
  if (!target_in.finite()) fail(ErrorKind::InvalidArgument, "non-finite target joints");
  JointSet target = target_in;
  const Vec3 wrist = target[0];
  for (auto& q : target.p) q -= wrist;

  for (int j = 1; j < kJointCount; ++j) {
    const auto& q = target[tree_.parent[static_cast<std::size_t>(j)]];
    if ((target[j] - q).norm() == 0.0) {
      fail(ErrorKind::InvalidArgument, "zero-length bone ending at joint " + std::to_string(j) +
                                           " (" + tree_.names[static_cast<std::size_t>(j)] + ")");
    }
  }

  const auto offsets = shape_offsets(beta);
  FitResult result;
  std::array<Mat3, kJointCount> global{};
  global[0] = Mat3::Identity();
  for (int j = 1; j < kJointCount; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const Mat3& parent_rot = global[static_cast<std::size_t>(tree_.parent[uj])];
    const int slot = tree_.articulated_slot(j);
    if (slot < 0) {
      global[uj] = parent_rot;
      continue;
    }
    // Swing-only rotation aligning the rest bone with the target bone,
    // expressed in the parent frame. Twist about the bone is left at zero.
    const int c = tree_.child(j);
    const Vec3 rest_dir = offsets[static_cast<std::size_t>(c)].normalized();
    const Vec3 want = parent_rot.transpose() * (target[c] - target[j]).normalized();
    const Vec3 r = swing_rotation(rest_dir, want, flex_axis(slot));
    result.pose.set_joint_rotation(slot, r);
    global[uj] = parent_rot * rodrigues(r);
  }

  const JointSet fitted = joints_fk(result.pose, beta);
  result.residual = std::sqrt(squared_distance(fitted, target) / kJointCount);
  return result;
}

Vec3 HandModel::flex_axis(int slot) const {
  const int j = tree_.articulated[static_cast<std::size_t>(slot)];
  const Vec3 u = tree_.template_offsets[static_cast<std::size_t>(tree_.child(j))].normalized();
  return u.cross(limits_[static_cast<std::size_t>(slot)].curl_normal).normalized();
}

Vec3 HandModel::abduction_axis(int slot) const {
  const int j = tree_.articulated[static_cast<std::size_t>(slot)];
  const Vec3 u = tree_.template_offsets[static_cast<std::size_t>(tree_.child(j))].normalized();
  const Vec3& n = limits_[static_cast<std::size_t>(slot)].curl_normal;
  return (n - n.dot(u) * u).normalized();
}

HandPose HandModel::sample_natural_pose(Rng& rng) const {
  HandPose pose;
  for (int s = 0; s < kArticulatedCount; ++s) {
    const auto& lim = limits_[static_cast<std::size_t>(s)];
    const double flex = rng.uniform(lim.flex_min, lim.flex_max);
    const double abd = rng.uniform(lim.abd_min, lim.abd_max);
    pose.set_joint_rotation(s, flex * flex_axis(s) + abd * abduction_axis(s));
  }
  return pose;
}

HandPose HandModel::sample_synergy_pose(Rng& rng) const {
  constexpr double kJitter = 0.04;
  std::array<double, 5> curl{};
  for (auto& c : curl) c = rng.uniform();
  const double spread = rng.uniform();
  HandPose pose;
  for (int s = 0; s < kArticulatedCount; ++s) {
    const auto& lim = limits_[static_cast<std::size_t>(s)];
    const int finger = s / 3;
    const double fc = std::clamp(curl[static_cast<std::size_t>(finger)] + kJitter * rng.normal(), 0.0, 1.0);
    // Ring and pinky fan out the opposite way to thumb, index and middle.
    const double side = finger >= 3 ? 1.0 - spread : spread;
    const double fa = std::clamp(side + kJitter * rng.normal(), 0.0, 1.0);
    const double flex = lim.flex_min + fc * (lim.flex_max - lim.flex_min);
    const double abd = lim.abd_min + fa * (lim.abd_max - lim.abd_min);
    pose.set_joint_rotation(s, flex * flex_axis(s) + abd * abduction_axis(s));
  }
  return pose;
}

std::array<double, kJointCount> bone_lengths(const JointSet& joints, const KinematicTree& tree) {
  std::array<double, kJointCount> out{};
  for (int j = 1; j < kJointCount; ++j) {
    out[static_cast<std::size_t>(j)] = (joints[j] - joints[tree.parent[static_cast<std::size_t>(j)]]).norm();
  }
  return out;
}

PoseBasis pose_pca_fit(std::span<const HandPose> poses, int k) {
  if (k < 1 || k > kPoseDim) fail(ErrorKind::InvalidArgument, "PCA dimension must be in 1..45");
  if (poses.size() < 2 || poses.size() < static_cast<std::size_t>(k)) {
    fail(ErrorKind::InvalidArgument, "PCA needs at least max(2, k) poses");
  }
  using Vec45 = Eigen::Matrix<double, kPoseDim, 1>;
  using Mat45 = Eigen::Matrix<double, kPoseDim, kPoseDim>;

  Vec45 mean = Vec45::Zero();
  for (const auto& p : poses) mean += p.theta;
  mean /= static_cast<double>(poses.size());

  Mat45 cov = Mat45::Zero();
  for (const auto& p : poses) {
    const Vec45 d = p.theta - mean;
    cov.noalias() += d * d.transpose();
  }
  cov /= static_cast<double>(poses.size() - 1);

  // Identical poses leave only rounding noise in the covariance.
  const bool all_same = std::all_of(poses.begin(), poses.end(),
                                    [&](const HandPose& p) { return p.theta == poses.front().theta; });
  const double total = cov.trace();
  if (all_same || !(total > 0.0)) fail(ErrorKind::Numeric, "degenerate pose covariance (all poses identical)");

  Eigen::SelfAdjointEigenSolver<Mat45> solver(cov);
  if (solver.info() != Eigen::Success) fail(ErrorKind::Numeric, "pose covariance eigensolve failed");

  PoseBasis basis;
  basis.mean = mean;
  basis.total_variance = total;
  basis.components.resize(kPoseDim, k);
  basis.variances.resize(k);
  // Eigen returns ascending eigenvalues.
  for (int i = 0; i < k; ++i) {
    const int src = kPoseDim - 1 - i;
    basis.components.col(i) = solver.eigenvectors().col(src);
    basis.variances[i] = std::max(0.0, solver.eigenvalues()[src]);
  }
  return basis;
}

Eigen::VectorXd pose_pca_project(const PoseBasis& basis, const HandPose& pose) {
  return basis.components.transpose() * (pose.theta - basis.mean);
}

HandPose pose_pca_reconstruct(const PoseBasis& basis, const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != basis.k()) {
    fail(ErrorKind::InvalidArgument, "PCA coefficient count does not match basis");
  }
  HandPose out;
  out.theta = basis.mean + basis.components * coeffs;
  return out;
}

}  // namespace seqhand
