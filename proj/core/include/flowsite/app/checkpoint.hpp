// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "flowsite/diff/array.hpp"
#include "flowsite/flow/model.hpp"

namespace flowsite::app {

inline constexpr int kCheckpointVersion = 1;

struct CheckpointArray {
  std::string name;
  std::string kind;  // param | adam_m | adam_v | buffer
  std::int64_t step = 0;  // Adam step count, for adam_m entries
  diff::Array value;
};

/// Layout: 8-byte little-endian header length, JSON header (version, config,
/// epoch, rng, array directory), then every array as little-endian float64
/// in directory order.
struct Checkpoint {
  int version = kCheckpointVersion;
  std::vector<std::pair<std::string, std::string>> config;
  std::uint64_t epoch = 0;   // completed epochs
  std::uint64_t seed = 0;    // base seed; per-epoch streams derive from (seed, epoch)
  double best_validation = 0.0;
  bool has_best = false;
  std::vector<CheckpointArray> arrays;

  std::string encode() const;
  static Checkpoint decode(const std::string& bytes);
};

Checkpoint capture(flow::FlowModel& model);
/// Copies parameters, Adam moments and buffers into `model`. Throws when a
/// name is missing or a shape differs.
void restore(const Checkpoint& checkpoint, flow::FlowModel& model);

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace flowsite::app
