// Copyright 2026 The vgsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vgsynth/catalog.hpp"
#include "vgsynth/error.hpp"
#include "vgsynth/geometry.hpp"

namespace vgsynth {

enum class SpatialRelation {
  kClosest,
  kFarthest,
  kNextTo,
  kLeft,
  kRight,
  kLargest,
  kSmallest,
};

inline constexpr std::array<SpatialRelation, 7> kAllRelations = {
    SpatialRelation::kClosest, SpatialRelation::kFarthest,
    SpatialRelation::kNextTo,  SpatialRelation::kLeft,
    SpatialRelation::kRight,   SpatialRelation::kLargest,
    SpatialRelation::kSmallest,
};

// Machine name used in files and on the command line.
inline std::string_view relation_name(SpatialRelation r) {
  switch (r) {
    case SpatialRelation::kClosest: return "closest";
    case SpatialRelation::kFarthest: return "farthest";
    case SpatialRelation::kNextTo: return "next_to";
    case SpatialRelation::kLeft: return "left";
    case SpatialRelation::kRight: return "right";
    case SpatialRelation::kLargest: return "largest";
    case SpatialRelation::kSmallest: return "smallest";
  }
  return "";
}

// Column heading used in statistics tables.
inline std::string_view relation_title(SpatialRelation r) {
  switch (r) {
    case SpatialRelation::kClosest: return "Closest";
    case SpatialRelation::kFarthest: return "Farthest";
    case SpatialRelation::kNextTo: return "Next to";
    case SpatialRelation::kLeft: return "Left";
    case SpatialRelation::kRight: return "Right";
    case SpatialRelation::kLargest: return "Largest";
    case SpatialRelation::kSmallest: return "Smallest";
  }
  return "";
}

inline std::optional<SpatialRelation> parse_relation(std::string_view name) {
  for (auto r : kAllRelations) {
    if (relation_name(r) == name) return r;
  }
  if (name == "nextto" || name == "next-to") return SpatialRelation::kNextTo;
  return std::nullopt;
}

inline std::size_t relation_index(SpatialRelation r) {
  return static_cast<std::size_t>(r);
}

// Largest and Smallest compare candidates among themselves; every other
// relation is measured against an anchor object.
inline bool relation_uses_anchor(SpatialRelation r) {
  return r != SpatialRelation::kLargest && r != SpatialRelation::kSmallest;
}

using ObjectId = std::int64_t;

struct ObjectInstance {
  ObjectId id = 0;
  std::string class_name;
  Point3 center;
  Dims3 dims;

  Aabb box() const { return aabb_from_center_dims(center, dims); }

  friend bool operator==(const ObjectInstance&,
                         const ObjectInstance&) = default;
};

struct SceneConfig {
  double room_width = 6.0;
  double room_length = 6.0;
  int candidate_count_min = 2;
  int candidate_count_max = 5;
  int min_objects = 51;
  double jitter = kDefaultJitter;
  // Minimum gap between the winning and runner-up distance, in meters; also
  // the minimum lateral offset for Left/Right.
  double margin = 0.3;
  // Largest/Smallest: winner volume must exceed the runner-up by this ratio.
  double margin_ratio = 0.25;
  // NextTo: target within this radius of the anchor, all other candidates
  // beyond twice the radius.
  double next_to_radius = 0.8;
  int max_placement_retries = 200;
  std::uint64_t seed = 0;

  friend bool operator==(const SceneConfig&, const SceneConfig&) = default;
};

inline void validate_config(const SceneConfig& c) {
  auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kInvalidConfig, why);
  };
  if (!(std::isfinite(c.room_width) && c.room_width > 0 &&
        std::isfinite(c.room_length) && c.room_length > 0)) {
    fail("room dimensions must be positive");
  }
  if (c.candidate_count_min < 1 ||
      c.candidate_count_max < c.candidate_count_min) {
    fail("candidate_count_range must satisfy 1 <= min <= max");
  }
  if (c.min_objects < c.candidate_count_max + 2) {
    fail("min_objects must be at least candidate_count_max + 2");
  }
  if (!(c.jitter >= 0.0 && c.jitter < 1.0)) {
    throw Error(ErrorCode::kInvalidJitter, "jitter must lie in [0, 1)");
  }
  if (!(c.margin > 0.0) || !(c.margin_ratio > 0.0) ||
      !(c.next_to_radius > 0.0)) {
    fail("margin, margin_ratio and next_to_radius must be positive");
  }
  if (c.max_placement_retries < 1) fail("max_placement_retries must be >= 1");
}

struct SceneLayout {
  std::string scene_id;
  SceneConfig config;
  std::vector<ObjectInstance> objects;
  SpatialRelation relation = SpatialRelation::kClosest;
  std::optional<ObjectId> anchor_id;
  std::vector<ObjectId> candidate_ids;
  ObjectId target_id = 0;
  std::string query;
  int template_index = 0;

  const ObjectInstance* find(ObjectId id) const {
    for (const auto& o : objects) {
      if (o.id == id) return &o;
    }
    return nullptr;
  }

  friend bool operator==(const SceneLayout&, const SceneLayout&) = default;
};

}  // namespace vgsynth
