#include "seqhand/pose_db.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "seqhand/error.hpp"
#include "seqhand/hand_model.hpp"
#include "seqhand/random.hpp"

namespace seqhand {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Next whitespace-separated token; advances `s`.
std::string_view next_token(std::string_view& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    s = {};
    return {};
  }
  s.remove_prefix(b);
  const auto e = s.find_first_of(" \t\r");
  const auto tok = s.substr(0, e);
  s.remove_prefix(e == std::string_view::npos ? s.size() : e);
  return tok;
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

void append_number(std::string& out, double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

inline double sq_dist(const double* a, const double* b) {
  double sum = 0.0;
  for (int c = 0; c < kJointCoords; ++c) {
    const double d = a[c] - b[c];
    sum += d * d;
  }
  return sum;
}

struct Best {
  double d2 = std::numeric_limits<double>::infinity();
  std::size_t index = 0;
  std::int64_t id = std::numeric_limits<std::int64_t>::max();

  void offer(double d2_candidate, std::size_t i, std::int64_t candidate_id) {
    if (d2_candidate < d2 || (d2_candidate == d2 && candidate_id < id)) {
      d2 = d2_candidate;
      index = i;
      id = candidate_id;
    }
  }
};

}  // namespace

PoseDB::PoseDB(std::vector<PoseRecord> records) : records_(std::move(records)) {
  std::unordered_set<std::int64_t> ids;
  for (auto& r : records_) {
    if (!r.joints.finite()) {
      fail(ErrorKind::Validation, "pose record " + std::to_string(r.id) + " has a non-finite coordinate");
    }
    if (!ids.insert(r.id).second) {
      fail(ErrorKind::Validation, "duplicate pose record id " + std::to_string(r.id));
    }
    const Vec3 wrist = r.joints[0];
    for (auto& q : r.joints.p) q -= wrist;
  }
}

PoseDB PoseDB::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open pose database " + path.string());
  std::vector<PoseRecord> records;
  std::string line;
  int line_no = 0;
  const std::string where = path.string() + ":";
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = line;
    std::string tags;
    if (const auto hash = rest.find('#'); hash != std::string_view::npos) {
      tags = std::string(trim(rest.substr(hash + 1)));
      rest = rest.substr(0, hash);
    }
    if (trim(rest).empty()) continue;

    PoseRecord rec;
    rec.tags = std::move(tags);
    const auto id_tok = next_token(rest);
    if (!parse_number(id_tok, rec.id)) {
      fail(ErrorKind::Parse, where + std::to_string(line_no) + ": bad record id '" +
                                 std::string(id_tok) + "'");
    }
    std::array<double, kJointCoords> coords{};
    for (int c = 0; c < kJointCoords; ++c) {
      const auto tok = next_token(rest);
      if (tok.empty()) {
        fail(ErrorKind::Parse, where + std::to_string(line_no) + ": record " + std::to_string(rec.id) +
                                   " has " + std::to_string(c) + " coordinates, expected 63");
      }
      if (!parse_number(tok, coords[static_cast<std::size_t>(c)])) {
        fail(ErrorKind::Parse, where + std::to_string(line_no) + ": record " + std::to_string(rec.id) +
                                   ": bad coordinate '" + std::string(tok) + "'");
      }
      if (!std::isfinite(coords[static_cast<std::size_t>(c)])) {
        fail(ErrorKind::Validation, where + std::to_string(line_no) + ": record " +
                                        std::to_string(rec.id) + " has a non-finite coordinate");
      }
    }
    if (!next_token(rest).empty()) {
      fail(ErrorKind::Parse, where + std::to_string(line_no) + ": record " + std::to_string(rec.id) +
                                 " has more than 63 coordinates");
    }
    rec.joints = JointSet::from_flat(coords);
    records.push_back(std::move(rec));
  }
  if (records.size() < 2) {
    fail(ErrorKind::Validation, path.string() + ": pose database needs at least 2 records, found " +
                                    std::to_string(records.size()));
  }
  return PoseDB(std::move(records));
}

void PoseDB::save(const std::filesystem::path& path) const {
  std::string out;
  out.reserve(records_.size() * 64 * 12);
  out += "# seqhand pose database: id then 21 x (x y z) mm\n";
  for (const auto& r : records_) {
    out += std::to_string(r.id);
    for (const double v : r.joints.flatten()) {
      out += ' ';
      append_number(out, v);
    }
    if (!r.tags.empty()) {
      out += " # ";
      out += r.tags;
    }
    out += '\n';
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f || !f.write(out.data(), static_cast<std::streamsize>(out.size()))) {
    fail(ErrorKind::Io, "cannot write pose database " + path.string());
  }
}

std::ptrdiff_t PoseDB::find(std::int64_t id) const {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].id == id) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

std::string PoseDB::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(records_.size());
  for (const auto& r : records_) {
    mix(static_cast<std::uint64_t>(r.id));
    for (const double v : r.joints.flatten()) mix(std::bit_cast<std::uint64_t>(v));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// k-d tree over the flattened coordinates. Each node splits on the axis of
// widest spread at the median; leaves hold up to kLeafSize points.
struct PoseIndex::Impl {
  static constexpr std::size_t kLeafSize = 12;

  struct Node {
    int axis = -1;  // -1 for a leaf
    double split = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
  };

  std::vector<double> points;  // size * 63, in original record order
  std::vector<std::int64_t> ids;
  std::vector<std::uint32_t> order;  // permutation referenced by leaves
  std::vector<Node> nodes;

  const double* point(std::size_t i) const { return points.data() + i * kJointCoords; }

  std::uint32_t build(std::uint32_t begin, std::uint32_t end) {
    const auto id = static_cast<std::uint32_t>(nodes.size());
    nodes.emplace_back();
    if (end - begin <= kLeafSize) {
      nodes[id].begin = begin;
      nodes[id].end = end;
      return id;
    }
    int axis = 0;
    double widest = -1.0;
    for (int c = 0; c < kJointCoords; ++c) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (auto i = begin; i < end; ++i) {
        const double v = point(order[i])[c];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi - lo > widest) {
        widest = hi - lo;
        axis = c;
      }
    }
    if (widest <= 0.0) {
      // All points coincide; keep them in one leaf.
      nodes[id].begin = begin;
      nodes[id].end = end;
      return id;
    }
    const auto mid = begin + (end - begin) / 2;
    std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) { return point(a)[axis] < point(b)[axis]; });
    const double split = point(order[mid])[axis];
    nodes[id].axis = axis;
    nodes[id].split = split;
    const auto left = build(begin, mid);
    const auto right = build(mid, end);
    nodes[id].left = left;
    nodes[id].right = right;
    return id;
  }

  // `bound` is a lower bound on the squared distance from the query to any
  // point under `node`; `offsets` holds the per-axis components of it.
  void search(std::uint32_t node_id, const double* q, double bound, std::array<double, kJointCoords>& offsets,
              Best& best) const {
    const Node& node = nodes[node_id];
    if (node.axis < 0) {
      for (auto i = node.begin; i < node.end; ++i) {
        const auto idx = order[i];
        best.offer(sq_dist(q, point(idx)), idx, ids[idx]);
      }
      return;
    }
    const auto axis = static_cast<std::size_t>(node.axis);
    const double diff = q[axis] - node.split;
    // Left holds values <= split, right holds values >= split.
    const std::uint32_t near = diff < 0.0 ? node.left : node.right;
    const std::uint32_t far = diff < 0.0 ? node.right : node.left;
    search(near, q, bound, offsets, best);

    const double old = offsets[axis];
    const double far_bound = bound - old * old + diff * diff;
    // Slack keeps rounding in the incremental bound from pruning an exact tie.
    if (far_bound * (1.0 - 1e-9) <= best.d2) {
      offsets[axis] = diff;
      search(far, q, far_bound, offsets, best);
      offsets[axis] = old;
    }
  }
};

PoseIndex::PoseIndex(const PoseDB& db) : impl_(std::make_unique<Impl>()) {
  if (db.empty()) fail(ErrorKind::InvalidArgument, "cannot index an empty pose database");
  if (db.size() >= std::numeric_limits<std::uint32_t>::max()) {
    fail(ErrorKind::InvalidArgument, "pose database too large to index");
  }
  impl_->points.reserve(db.size() * kJointCoords);
  for (const auto& r : db.records()) {
    const auto flat = r.joints.flatten();
    impl_->points.insert(impl_->points.end(), flat.begin(), flat.end());
    impl_->ids.push_back(r.id);
  }
  impl_->order.resize(db.size());
  std::iota(impl_->order.begin(), impl_->order.end(), 0U);
  impl_->build(0, static_cast<std::uint32_t>(db.size()));
}

PoseIndex::~PoseIndex() = default;
PoseIndex::PoseIndex(PoseIndex&&) noexcept = default;
PoseIndex& PoseIndex::operator=(PoseIndex&&) noexcept = default;

std::size_t PoseIndex::size() const { return impl_ ? impl_->ids.size() : 0; }

NearestPose PoseIndex::nearest(const JointSet& query) const {
  if (size() == 0) fail(ErrorKind::InvalidArgument, "query on an empty pose index");
  if (!query.finite()) fail(ErrorKind::InvalidArgument, "non-finite query pose");
  const auto q = query.flatten();
  std::array<double, kJointCoords> offsets{};
  Best best;
  impl_->search(0, q.data(), 0.0, offsets, best);
  return {best.index, best.id, std::sqrt(best.d2)};
}

NearestPose brute_force_nearest(const PoseDB& db, const JointSet& query) {
  if (db.empty()) fail(ErrorKind::InvalidArgument, "query on an empty pose database");
  const auto q = query.flatten();
  Best best;
  for (std::size_t i = 0; i < db.size(); ++i) {
    const auto p = db[i].joints.flatten();
    best.offer(sq_dist(q.data(), p.data()), i, db[i].id);
  }
  return {best.index, best.id, std::sqrt(best.d2)};
}

PoseDB synthesize_db(const HandModel& model, std::size_t count, Rng& rng) {
  std::vector<PoseRecord> records;
  records.reserve(count);
  const HandShape neutral;
  for (std::size_t i = 0; i < count; ++i) {
    PoseRecord r;
    r.id = static_cast<std::int64_t>(i);
    r.joints = model.joints_fk(model.sample_synergy_pose(rng), neutral);
    records.push_back(std::move(r));
  }
  return PoseDB(std::move(records));
}

}  // namespace seqhand
