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

// Axis-aligned box algebra used by scene generation and evaluation.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "vgsynth/error.hpp"

namespace vgsynth {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
};

// Object extents in (width, length, height) order: width along x, length
// along y, height along z.
struct Dims3 {
  double width = 0.0;
  double length = 0.0;
  double height = 0.0;

  double volume() const { return width * length * height; }

  friend bool operator==(const Dims3&, const Dims3&) = default;
};

inline bool is_finite(const Point3& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

inline bool is_valid(const Dims3& d) {
  return std::isfinite(d.width) && std::isfinite(d.length) &&
         std::isfinite(d.height) && d.width > 0.0 && d.length > 0.0 &&
         d.height > 0.0;
}

inline void require_finite(const Point3& p, const char* what) {
  if (!is_finite(p)) {
    throw Error(ErrorCode::kInvalidGeometry,
                std::string(what) + " has a non-finite coordinate");
  }
}

inline void require_valid(const Dims3& d, const char* what) {
  if (!is_valid(d)) {
    throw Error(ErrorCode::kInvalidGeometry,
                std::string(what) + " must be finite and strictly positive");
  }
}

class Aabb {
 public:
  Aabb() = default;

  // Throws InvalidGeometry unless both corners are finite and min <= max on
  // every axis.
  Aabb(const Point3& min_corner, const Point3& max_corner)
      : min_(min_corner), max_(max_corner) {
    require_finite(min_, "box min corner");
    require_finite(max_, "box max corner");
    if (min_.x > max_.x || min_.y > max_.y || min_.z > max_.z) {
      throw Error(ErrorCode::kInvalidGeometry,
                  "box min corner exceeds max corner");
    }
  }

  const Point3& min_corner() const { return min_; }
  const Point3& max_corner() const { return max_; }

  Point3 center() const {
    return {(min_.x + max_.x) / 2, (min_.y + max_.y) / 2,
            (min_.z + max_.z) / 2};
  }
  Dims3 extents() const {
    return {max_.x - min_.x, max_.y - min_.y, max_.z - min_.z};
  }
  double volume() const { return extents().volume(); }

  Aabb translated(const Point3& offset) const {
    return Aabb({min_.x + offset.x, min_.y + offset.y, min_.z + offset.z},
                {max_.x + offset.x, max_.y + offset.y, max_.z + offset.z});
  }

  friend bool operator==(const Aabb&, const Aabb&) = default;

 private:
  Point3 min_;
  Point3 max_;
};

inline Aabb aabb_from_center_dims(const Point3& center, const Dims3& dims) {
  require_finite(center, "box center");
  require_valid(dims, "box dimensions");
  const double hw = dims.width / 2;
  const double hl = dims.length / 2;
  const double hh = dims.height / 2;
  return Aabb({center.x - hw, center.y - hl, center.z - hh},
              {center.x + hw, center.y + hl, center.z + hh});
}

namespace detail {

inline double overlap_length(double a_min, double a_max, double b_min,
                             double b_max) {
  return std::max(0.0, std::min(a_max, b_max) - std::max(a_min, b_min));
}

}  // namespace detail

inline double intersection_volume(const Aabb& a, const Aabb& b) {
  const auto& amin = a.min_corner();
  const auto& amax = a.max_corner();
  const auto& bmin = b.min_corner();
  const auto& bmax = b.max_corner();
  return detail::overlap_length(amin.x, amax.x, bmin.x, bmax.x) *
         detail::overlap_length(amin.y, amax.y, bmin.y, bmax.y) *
         detail::overlap_length(amin.z, amax.z, bmin.z, bmax.z);
}

// Intersection over union. Two degenerate (zero-volume) boxes have IoU 1 when
// identical and 0 otherwise.
inline double iou(const Aabb& a, const Aabb& b) {
  const double inter = intersection_volume(a, b);
  if (inter <= 0.0) {
    return (a == b) ? 1.0 : 0.0;
  }
  const double uni = a.volume() + b.volume() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

// True iff the xy projections share a region of positive area. Touching
// edges count as disjoint.
inline bool footprint_overlaps(const Aabb& a, const Aabb& b) {
  const auto& amin = a.min_corner();
  const auto& amax = a.max_corner();
  const auto& bmin = b.min_corner();
  const auto& bmax = b.max_corner();
  return std::min(amax.x, bmax.x) > std::max(amin.x, bmin.x) &&
         std::min(amax.y, bmax.y) > std::max(amin.y, bmin.y);
}

inline double center_distance_xy(const Point3& a, const Point3& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace vgsynth
