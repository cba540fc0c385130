#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "seqhand/types.hpp"

namespace seqhand {

class HandModel;
class Rng;

struct PoseRecord {
  std::int64_t id = 0;
  JointSet joints;
  std::string tags;
};

// Static pool of root-relative poses.
//
// File format, one record per line:
//   <id> <x0> <y0> <z0> ... <x20> <y20> <z20> [# tags]
// Coordinates are millimetres in joint order wrist, thumb MCP PIP DIP TIP,
// index ..., middle ..., ring ..., pinky .... Blank lines and lines starting
// with '#' are skipped. Text after a '#' on a record line is kept as tags.
class PoseDB {
 public:
  PoseDB() = default;
  explicit PoseDB(std::vector<PoseRecord> records);

  static PoseDB load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const PoseRecord& operator[](std::size_t i) const { return records_[i]; }
  const std::vector<PoseRecord>& records() const { return records_; }

  // Position of the record with the given id, or -1.
  std::ptrdiff_t find(std::int64_t id) const;

  // 64-bit FNV-1a over ids and coordinate bit patterns, as 16 hex digits.
  std::string fingerprint() const;

 private:
  std::vector<PoseRecord> records_;
};

struct NearestPose {
  std::size_t index = 0;  // position in the database
  std::int64_t id = 0;
  double distance = 0.0;  // mm, Euclidean over the 63 coordinates
};

// Exact nearest-neighbour index over flattened 63-vectors. Ties resolve to the
// lowest record id. Immutable after construction.
class PoseIndex {
 public:
  explicit PoseIndex(const PoseDB& db);
  ~PoseIndex();
  PoseIndex(PoseIndex&&) noexcept;
  PoseIndex& operator=(PoseIndex&&) noexcept;

  std::size_t size() const;
  NearestPose nearest(const JointSet& query) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Linear scan with the same distance arithmetic and tie-break as PoseIndex.
NearestPose brute_force_nearest(const PoseDB& db, const JointSet& query);

// Synergy-sampled poses of `model` with beta = 0, ids 0..count-1.
PoseDB synthesize_db(const HandModel& model, std::size_t count, Rng& rng);

}  // namespace seqhand
