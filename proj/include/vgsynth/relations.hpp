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

// Ground-truth resolution of spatial relations and the query template bank.

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vgsynth/error.hpp"
#include "vgsynth/geometry.hpp"
#include "vgsynth/scene_types.hpp"

namespace vgsynth {

inline constexpr double kTieTolerance = 1e-9;
inline constexpr double kDefaultNextToRadius = 0.8;

// Observer position for viewpoint-relative relations. When a query states no
// situation the viewer stands at the room center.
struct Viewer {
  Point3 position;
};

inline Viewer room_center_viewer(const SceneConfig& config) {
  return {{config.room_width / 2, config.room_length / 2, 0.0}};
}

// Signed distance of `candidate` from the viewer->anchor line in the xy
// plane. Positive means the candidate is on the viewer's left.
inline double lateral_offset(const Point3& viewer, const Point3& anchor,
                             const Point3& candidate) {
  const double dx = anchor.x - viewer.x;
  const double dy = anchor.y - viewer.y;
  const double norm = std::hypot(dx, dy);
  if (norm <= kTieTolerance) return 0.0;
  const double cx = candidate.x - anchor.x;
  const double cy = candidate.y - anchor.y;
  return (dx * cy - dy * cx) / norm;
}

struct ResolveOptions {
  double next_to_radius = kDefaultNextToRadius;
};

namespace detail {

inline const ObjectInstance& lookup(const std::vector<ObjectInstance>& objects,
                                    ObjectId id) {
  for (const auto& o : objects) {
    if (o.id == id) return o;
  }
  throw Error(ErrorCode::kInvalidConfig,
              "object id " + std::to_string(id) + " not present in scene");
}

[[noreturn]] inline void ambiguous(const std::string& why) {
  throw Error(ErrorCode::kAmbiguousRelation, why);
}

// Returns the candidate with the extreme metric; throws AmbiguousRelation
// when the best two are within kTieTolerance.
template <typename Metric>
ObjectId pick_extreme(const std::vector<const ObjectInstance*>& candidates,
                      Metric metric, bool maximize) {
  std::vector<std::pair<double, ObjectId>> scored;
  scored.reserve(candidates.size());
  for (const auto* c : candidates) {
    double m = metric(*c);
    scored.emplace_back(maximize ? -m : m, c->id);
  }
  std::sort(scored.begin(), scored.end());
  if (scored.size() > 1 &&
      std::abs(scored[1].first - scored[0].first) <= kTieTolerance) {
    ambiguous("candidates " + std::to_string(scored[0].second) + " and " +
              std::to_string(scored[1].second) + " tie");
  }
  return scored.front().second;
}

}  // namespace detail

inline ObjectId resolve_target(const std::vector<ObjectInstance>& objects,
                               SpatialRelation relation,
                               std::optional<ObjectId> anchor_id,
                               const std::vector<ObjectId>& candidate_ids,
                               const Viewer& viewer,
                               const ResolveOptions& options = {}) {
  if (candidate_ids.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "candidate set is empty");
  }
  std::vector<const ObjectInstance*> candidates;
  for (ObjectId id : candidate_ids) {
    candidates.push_back(&detail::lookup(objects, id));
  }

  if (!relation_uses_anchor(relation)) {
    auto volume = [](const ObjectInstance& o) { return o.dims.volume(); };
    return detail::pick_extreme(candidates, volume,
                                relation == SpatialRelation::kLargest);
  }

  if (!anchor_id) {
    throw Error(ErrorCode::kMissingAnchor,
                std::string(relation_name(relation)) + " requires an anchor");
  }
  const auto anchor_it = std::find_if(objects.begin(), objects.end(),
                                      [&](const auto& o) { return o.id == *anchor_id; });
  if (anchor_it == objects.end()) {
    throw Error(ErrorCode::kMissingAnchor,
                "anchor id " + std::to_string(*anchor_id) + " not present in scene");
  }
  const ObjectInstance& anchor = *anchor_it;
  auto distance = [&](const ObjectInstance& o) {
    return center_distance_xy(o.center, anchor.center);
  };

  switch (relation) {
    case SpatialRelation::kClosest:
      return detail::pick_extreme(candidates, distance, false);
    case SpatialRelation::kFarthest:
      return detail::pick_extreme(candidates, distance, true);
    case SpatialRelation::kNextTo: {
      std::optional<ObjectId> found;
      for (const auto* c : candidates) {
        if (distance(*c) <= options.next_to_radius + kTieTolerance) {
          if (found) {
            detail::ambiguous("more than one candidate within next-to radius");
          }
          found = c->id;
        }
      }
      if (!found) detail::ambiguous("no candidate within next-to radius");
      return *found;
    }
    case SpatialRelation::kLeft:
    case SpatialRelation::kRight: {
      if (center_distance_xy(viewer.position, anchor.center) <= kTieTolerance) {
        detail::ambiguous("anchor coincides with the viewer");
      }
      const double side = relation == SpatialRelation::kLeft ? 1.0 : -1.0;
      std::optional<ObjectId> found;
      for (const auto* c : candidates) {
        const double offset =
            side * lateral_offset(viewer.position, anchor.center, c->center);
        if (std::abs(offset) <= kTieTolerance) {
          detail::ambiguous("candidate " + std::to_string(c->id) +
                            " lies on the viewing line");
        }
        if (offset > 0) {
          if (found) detail::ambiguous("more than one candidate on that side");
          found = c->id;
        }
      }
      if (!found) detail::ambiguous("no candidate on the requested side");
      return *found;
    }
    default:
      break;
  }
  detail::ambiguous("unhandled relation");
}

// ---------------------------------------------------------------------------
// Query templates

struct QueryTemplate {
  SpatialRelation relation = SpatialRelation::kClosest;
  int index = 0;
  std::string pattern;

  bool requires_anchor() const {
    return pattern.find("{anchor}") != std::string::npos;
  }

  friend bool operator==(const QueryTemplate&, const QueryTemplate&) = default;
};

inline constexpr int kTemplatesPerRelation = 7;

inline std::string render_query(const QueryTemplate& tmpl,
                                const std::string& target_class,
                                const std::optional<std::string>& anchor_class) {
  if (tmpl.requires_anchor() && !anchor_class) {
    throw Error(ErrorCode::kMissingAnchorClass,
                "template '" + tmpl.pattern + "' needs an anchor class");
  }
  std::string out;
  out.reserve(tmpl.pattern.size() + 32);
  const std::string& p = tmpl.pattern;
  std::size_t i = 0;
  while (i < p.size()) {
    if (p.compare(i, 8, "{target}") == 0) {
      out += target_class;
      i += 8;
    } else if (p.compare(i, 8, "{anchor}") == 0) {
      out += *anchor_class;
      i += 8;
    } else {
      out += p[i++];
    }
  }
  const auto open = out.find('{');
  if (open != std::string::npos && out.find('}', open) != std::string::npos) {
    throw Error(ErrorCode::kUnfilledPlaceholder,
                "unresolved placeholder in '" + out + "'");
  }
  return out;
}

class TemplateBank {
 public:
  TemplateBank() = default;

  // Validates placeholder rules and requires exactly seven templates,
  // indexed 0..6, for every relation.
  explicit TemplateBank(std::vector<QueryTemplate> templates) {
    for (auto& t : templates) {
      const bool has_target = t.pattern.find("{target}") != std::string::npos;
      const bool has_anchor = t.requires_anchor();
      const std::string where = std::string(relation_name(t.relation)) + "#" +
                                std::to_string(t.index);
      if (!has_target) {
        throw Error(ErrorCode::kSchemaError, where + " lacks {target}");
      }
      if (has_anchor != relation_uses_anchor(t.relation)) {
        throw Error(ErrorCode::kSchemaError,
                    where + (has_anchor ? " must not use {anchor}"
                                        : " must use {anchor}"));
      }
      if (t.index < 0 || t.index >= kTemplatesPerRelation) {
        throw Error(ErrorCode::kSchemaError, where + " index out of range");
      }
      auto& slot = by_relation_[relation_index(t.relation)];
      if (slot.size() < kTemplatesPerRelation) slot.resize(kTemplatesPerRelation);
      if (!slot[t.index].pattern.empty()) {
        throw Error(ErrorCode::kSchemaError, where + " defined twice");
      }
      slot[t.index] = std::move(t);
    }
    for (auto r : kAllRelations) {
      const auto& slot = by_relation_[relation_index(r)];
      const bool complete =
          slot.size() == kTemplatesPerRelation &&
          std::none_of(slot.begin(), slot.end(),
                       [](const auto& t) { return t.pattern.empty(); });
      if (!complete) {
        throw Error(ErrorCode::kSchemaError,
                    std::string(relation_name(r)) + " needs 7 templates");
      }
    }
  }

  const QueryTemplate& get(SpatialRelation r, int index) const {
    if (index < 0 || index >= kTemplatesPerRelation) {
      throw Error(ErrorCode::kInvalidConfig, "template index out of range");
    }
    return by_relation_[relation_index(r)].at(index);
  }

  std::vector<QueryTemplate> all() const {
    std::vector<QueryTemplate> out;
    for (const auto& slot : by_relation_) out.insert(out.end(), slot.begin(), slot.end());
    return out;
  }

  friend bool operator==(const TemplateBank& a, const TemplateBank& b) {
    return a.by_relation_ == b.by_relation_;
  }

 private:
  std::array<std::vector<QueryTemplate>, 7> by_relation_;
};

inline const TemplateBank& builtin_templates() {
  using R = SpatialRelation;
  static const TemplateBank bank([] {
    const std::map<R, std::vector<std::string>> patterns = {
        {R::kClosest,
         {"The {target} that is closest to the {anchor}.",
          "Find the {target} nearest to the {anchor}.",
          "Which {target} is the closest one to the {anchor}?",
          "The {target} located nearest the {anchor}.",
          "Select the {target} with the shortest distance to the {anchor}.",
          "Among all the {target} objects, the one closest to the {anchor}.",
          "The {target} that sits closest to the {anchor}."}},
        {R::kFarthest,
         {"The {target} that is farthest from the {anchor}.",
          "Find the {target} farthest away from the {anchor}.",
          "Which {target} is the farthest one from the {anchor}?",
          "The {target} located most distant from the {anchor}.",
          "Select the {target} with the longest distance to the {anchor}.",
          "Among all the {target} objects, the one farthest from the {anchor}.",
          "The {target} that sits farthest from the {anchor}."}},
        {R::kNextTo,
         {"The {target} that is next to the {anchor}.",
          "Find the {target} placed next to the {anchor}.",
          "Which {target} is next to the {anchor}?",
          "The {target} positioned beside the {anchor}.",
          "Select the {target} that is adjacent to the {anchor}.",
          "The {target} immediately next to the {anchor}.",
          "The {target} standing by the {anchor}."}},
        {R::kLeft,
         {"The {target} that is on the left of the {anchor}.",
          "Find the {target} to the left of the {anchor}.",
          "Which {target} is on the left side of the {anchor}?",
          "The {target} located left of the {anchor}.",
          "Select the {target} positioned on the left of the {anchor}.",
          "Looking at the {anchor}, the {target} on its left.",
          "The {target} that stands to the left of the {anchor}."}},
        {R::kRight,
         {"The {target} that is on the right of the {anchor}.",
          "Find the {target} to the right of the {anchor}.",
          "Which {target} is on the right side of the {anchor}?",
          "The {target} located right of the {anchor}.",
          "Select the {target} positioned on the right of the {anchor}.",
          "Looking at the {anchor}, the {target} on its right.",
          "The {target} that stands to the right of the {anchor}."}},
        {R::kLargest,
         {"The largest {target} in the room.",
          "Find the biggest {target}.",
          "Which {target} is the largest one?",
          "The {target} with the largest size.",
          "Select the {target} that takes up the most space.",
          "Among all the {target} objects, the largest one.",
          "The {target} that is bigger than every other {target}."}},
        {R::kSmallest,
         {"The smallest {target} in the room.",
          "Find the tiniest {target}.",
          "Which {target} is the smallest one?",
          "The {target} with the smallest size.",
          "Select the {target} that takes up the least space.",
          "Among all the {target} objects, the smallest one.",
          "The {target} that is smaller than every other {target}."}},
    };
    std::vector<QueryTemplate> out;
    for (const auto& [relation, list] : patterns) {
      for (std::size_t i = 0; i < list.size(); ++i) {
        out.push_back({relation, static_cast<int>(i), list[i]});
      }
    }
    return out;
  }());
  return bank;
}

// Template bank file: JSON Lines of {"relation", "index", "pattern"}.
inline std::string templates_to_jsonl(const TemplateBank& bank) {
  std::string out;
  for (const auto& t : bank.all()) {
    nlohmann::ordered_json rec;
    rec["relation"] = relation_name(t.relation);
    rec["index"] = t.index;
    rec["pattern"] = t.pattern;
    out += rec.dump() + "\n";
  }
  return out;
}

inline TemplateBank templates_from_jsonl(std::istream& in) {
  std::vector<QueryTemplate> templates;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto rec = nlohmann::json::parse(line);
      if (!rec.is_object() || rec.size() != 3) {
        throw MalformedLineError(line_no,
                                 "expected keys relation, index, pattern");
      }
      auto relation = parse_relation(rec.at("relation").get<std::string>());
      if (!relation) throw MalformedLineError(line_no, "unknown relation");
      templates.push_back({*relation, rec.at("index").get<int>(),
                           rec.at("pattern").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw MalformedLineError(line_no, e.what());
    }
  }
  return TemplateBank(std::move(templates));
}

inline TemplateBank load_templates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open templates " + path);
  return templates_from_jsonl(in);
}

}  // namespace vgsynth
