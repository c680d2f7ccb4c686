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

// Procedural scene layouts built around one spatial relation: an anchor and
// same-class candidates are placed first, the target is fixed by the
// relation oracle, and the room is then filled with off-class objects.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vgsynth/catalog.hpp"
#include "vgsynth/error.hpp"
#include "vgsynth/geometry.hpp"
#include "vgsynth/random.hpp"
#include "vgsynth/relations.hpp"
#include "vgsynth/scene_types.hpp"

namespace vgsynth {

// Layout coordinates are stored at 1e-4 m resolution.
inline double quantize4(double v) { return std::round(v * 1e4) / 1e4; }

inline std::string default_scene_id(SpatialRelation r, std::uint64_t seed) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%06llu",
                static_cast<unsigned long long>(seed));
  return std::string(relation_name(r)) + buf;
}

namespace detail {

inline Dims3 quantized_dims(Dims3 d) {
  auto q = [](double v) { return std::max(quantize4(v), 1e-4); };
  return {q(d.width), q(d.length), q(d.height)};
}

inline bool inside_room(const Aabb& box, const SceneConfig& config) {
  return box.min_corner().x >= 0.0 && box.min_corner().y >= 0.0 &&
         box.max_corner().x <= config.room_width &&
         box.max_corner().y <= config.room_length;
}

using PlacementTest = std::function<bool(const Point3&)>;

// Rejection sampling: uniform xy center over the positions that keep the box
// in the room; accepted iff footprint-disjoint from `placed` and `accept`
// holds. Returns nullopt after `max_draws` rejections.
inline std::optional<ObjectInstance> place_object(
    const std::string& class_name, const Dims3& dims,
    const std::vector<ObjectInstance>& placed, const SceneConfig& config,
    RandomEngine& rng, const PlacementTest& accept = nullptr) {
  if (dims.width > config.room_width || dims.length > config.room_length) {
    return std::nullopt;
  }
  for (int draw = 0; draw < config.max_placement_retries; ++draw) {
    const double x = quantize4(uniform_real(rng, dims.width / 2,
                                            config.room_width - dims.width / 2));
    const double y = quantize4(uniform_real(
        rng, dims.length / 2, config.room_length - dims.length / 2));
    ObjectInstance obj{0, class_name, {x, y, quantize4(dims.height / 2)}, dims};
    const Aabb box = obj.box();
    if (!inside_room(box, config)) continue;
    if (accept && !accept(obj.center)) continue;
    const bool clash = std::any_of(
        placed.begin(), placed.end(), [&](const ObjectInstance& other) {
          return footprint_overlaps(box, other.box());
        });
    if (clash) continue;
    return obj;
  }
  return std::nullopt;
}

inline const std::string& random_class(const std::vector<const ObjectClass*>& pool,
                                       RandomEngine& rng) {
  const auto i = uniform_int(rng, 0, static_cast<std::int64_t>(pool.size()) - 1);
  return pool[static_cast<std::size_t>(i)]->name;
}

// Winner-versus-runner-up separation required by the generator on top of
// the oracle's tie check.
inline bool margin_holds(const std::vector<ObjectInstance>& objects,
                         SpatialRelation relation,
                         std::optional<ObjectId> anchor_id,
                         const std::vector<ObjectId>& candidate_ids,
                         const SceneConfig& config) {
  if (candidate_ids.size() < 2) return true;
  std::vector<double> metric;
  for (ObjectId id : candidate_ids) {
    const auto& c = lookup(objects, id);
    if (relation_uses_anchor(relation)) {
      metric.push_back(
          center_distance_xy(c.center, lookup(objects, *anchor_id).center));
    } else {
      metric.push_back(c.dims.volume());
    }
  }
  std::sort(metric.begin(), metric.end());
  const std::size_t n = metric.size();
  switch (relation) {
    case SpatialRelation::kClosest:
      return metric[1] - metric[0] >= config.margin;
    case SpatialRelation::kFarthest:
      return metric[n - 1] - metric[n - 2] >= config.margin;
    case SpatialRelation::kLargest:
      return metric[n - 1] >= (1.0 + config.margin_ratio) * metric[n - 2];
    case SpatialRelation::kSmallest:
      return metric[1] >= (1.0 + config.margin_ratio) * metric[0];
    default:
      // NextTo, Left and Right enforce their separation during placement.
      return true;
  }
}

struct CoreArrangement {
  std::vector<ObjectInstance> objects;
  std::optional<ObjectId> anchor_id;
  std::vector<ObjectId> candidate_ids;
  ObjectId target_id = 0;
};

// One attempt at steps 2-4: pick classes, place anchor and candidates, and
// determine the target. Returns nullopt when this attempt must be resampled.
inline std::optional<CoreArrangement> try_core_arrangement(
    SpatialRelation relation, const SceneConfig& config,
    const Catalog& catalog, RandomEngine& rng) {
  std::vector<const ObjectClass*> pool;
  for (const auto& c : catalog.classes()) pool.push_back(&c);
  const std::string candidate_class = random_class(pool, rng);
  const auto count = static_cast<int>(
      uniform_int(rng, config.candidate_count_min, config.candidate_count_max));

  CoreArrangement core;
  const Viewer viewer = room_center_viewer(config);
  std::optional<Point3> anchor_center;

  if (relation_uses_anchor(relation)) {
    std::vector<const ObjectClass*> others;
    for (const auto* c : pool) {
      if (c->name != candidate_class) others.push_back(c);
    }
    const std::string& anchor_class = random_class(others, rng);
    const Dims3 dims = quantized_dims(
        sample_dims(catalog, anchor_class, config.jitter, rng));
    PlacementTest accept = nullptr;
    if (relation == SpatialRelation::kLeft ||
        relation == SpatialRelation::kRight) {
      accept = [&](const Point3& p) {
        return center_distance_xy(p, viewer.position) >= config.margin;
      };
    }
    auto anchor = place_object(anchor_class, dims, core.objects, config, rng,
                               accept);
    if (!anchor) return std::nullopt;
    anchor->id = 0;
    core.objects.push_back(*anchor);
    core.anchor_id = 0;
    anchor_center = anchor->center;
  }

  for (int i = 0; i < count; ++i) {
    const bool designated = (i == 0);
    PlacementTest accept = nullptr;
    if (relation == SpatialRelation::kNextTo) {
      const double r = config.next_to_radius;
      accept = [&, designated, r](const Point3& p) {
        const double d = center_distance_xy(p, *anchor_center);
        return designated ? d <= r : d >= 2 * r;
      };
    } else if (relation == SpatialRelation::kLeft ||
               relation == SpatialRelation::kRight) {
      const double side = relation == SpatialRelation::kLeft ? 1.0 : -1.0;
      accept = [&, designated, side](const Point3& p) {
        const double off =
            side * lateral_offset(viewer.position, *anchor_center, p);
        return designated ? off >= config.margin : off <= -config.margin;
      };
    }
    const Dims3 dims = quantized_dims(
        sample_dims(catalog, candidate_class, config.jitter, rng));
    auto obj = place_object(candidate_class, dims, core.objects, config, rng,
                            accept);
    if (!obj) return std::nullopt;
    obj->id = static_cast<ObjectId>(core.objects.size());
    core.candidate_ids.push_back(obj->id);
    core.objects.push_back(*obj);
  }

  if (!margin_holds(core.objects, relation, core.anchor_id, core.candidate_ids,
                    config)) {
    return std::nullopt;
  }
  try {
    core.target_id =
        resolve_target(core.objects, relation, core.anchor_id,
                       core.candidate_ids, viewer, {config.next_to_radius});
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kAmbiguousRelation) return std::nullopt;
    throw;
  }
  return core;
}

}  // namespace detail

// Adds off-class objects at non-overlapping positions until the scene holds
// config.min_objects objects. Classes are drawn uniformly from the catalog,
// excluding the candidate and anchor classes, and placed largest footprint
// first. Existing objects and relation fields are left untouched; new ids
// continue after the current maximum id.
inline SceneLayout enrich_scene(const SceneLayout& layout,
                                const SceneConfig& config,
                                const Catalog& catalog, RandomEngine& rng) {
  SceneLayout out = layout;
  const auto need =
      static_cast<std::ptrdiff_t>(config.min_objects) -
      static_cast<std::ptrdiff_t>(layout.objects.size());
  if (need <= 0) return out;

  std::vector<std::string> excluded;
  if (!layout.candidate_ids.empty()) {
    if (const auto* c = layout.find(layout.candidate_ids.front())) {
      excluded.push_back(c->class_name);
    }
  }
  if (layout.anchor_id) {
    if (const auto* a = layout.find(*layout.anchor_id)) {
      excluded.push_back(a->class_name);
    }
  }
  std::vector<const ObjectClass*> pool;
  for (const auto& c : catalog.classes()) {
    if (std::find(excluded.begin(), excluded.end(), c.name) == excluded.end()) {
      pool.push_back(&c);
    }
  }
  if (pool.empty()) {
    throw Error(ErrorCode::kPlacementExhausted,
                "catalog has no classes available for enrichment");
  }

  struct Pending {
    std::string class_name;
    Dims3 dims;
  };
  std::vector<Pending> pending;
  pending.reserve(static_cast<std::size_t>(need));
  for (std::ptrdiff_t i = 0; i < need; ++i) {
    const std::string& name = detail::random_class(pool, rng);
    pending.push_back(
        {name, detail::quantized_dims(sample_dims(catalog, name, config.jitter, rng))});
  }
  std::stable_sort(pending.begin(), pending.end(),
                   [](const Pending& a, const Pending& b) {
                     return a.dims.width * a.dims.length >
                            b.dims.width * b.dims.length;
                   });

  ObjectId next_id = 0;
  for (const auto& o : out.objects) next_id = std::max(next_id, o.id + 1);
  for (const auto& p : pending) {
    auto obj = detail::place_object(p.class_name, p.dims, out.objects, config, rng);
    if (!obj) {
      throw Error(ErrorCode::kPlacementExhausted,
                  "could not place " + p.class_name + " after " +
                      std::to_string(config.max_placement_retries) + " draws");
    }
    obj->id = next_id++;
    out.objects.push_back(*obj);
  }
  return out;
}

// Steps 1-5 of scene synthesis. Each attempt resamples the whole arrangement;
// PlacementExhausted after config.max_placement_retries failed attempts.
inline SceneLayout generate_scene(SpatialRelation relation,
                                  const SceneConfig& config,
                                  const Catalog& catalog,
                                  const TemplateBank& templates = builtin_templates()) {
  validate_config(config);
  if (catalog.size() < (relation_uses_anchor(relation) ? 3u : 2u)) {
    throw Error(ErrorCode::kInvalidConfig, "catalog too small");
  }
  RandomEngine rng = make_engine(config.seed, relation_index(relation) + 1);

  for (int attempt = 0; attempt < config.max_placement_retries; ++attempt) {
    auto core = detail::try_core_arrangement(relation, config, catalog, rng);
    if (!core) continue;

    SceneLayout layout;
    layout.config = config;
    layout.relation = relation;
    layout.objects = std::move(core->objects);
    layout.anchor_id = core->anchor_id;
    layout.candidate_ids = core->candidate_ids;
    layout.target_id = core->target_id;
    try {
      layout = enrich_scene(layout, config, catalog, rng);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kPlacementExhausted) continue;
      throw;
    }

    // Shuffle ids so that roles cannot be read off placement order.
    const std::size_t n = layout.objects.size();
    std::vector<ObjectId> remap(n);
    std::iota(remap.begin(), remap.end(), ObjectId{0});
    for (std::size_t i = n - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(
          uniform_int(rng, 0, static_cast<std::int64_t>(i)));
      std::swap(remap[i], remap[j]);
    }
    auto mapped = [&](ObjectId id) { return remap[static_cast<std::size_t>(id)]; };
    for (auto& o : layout.objects) o.id = mapped(o.id);
    std::sort(layout.objects.begin(), layout.objects.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    if (layout.anchor_id) layout.anchor_id = mapped(*layout.anchor_id);
    for (auto& id : layout.candidate_ids) id = mapped(id);
    std::sort(layout.candidate_ids.begin(), layout.candidate_ids.end());
    layout.target_id = mapped(layout.target_id);

    layout.template_index =
        static_cast<int>(uniform_int(rng, 0, kTemplatesPerRelation - 1));
    const auto& tmpl = templates.get(relation, layout.template_index);
    std::optional<std::string> anchor_class;
    if (layout.anchor_id) anchor_class = layout.find(*layout.anchor_id)->class_name;
    layout.query =
        render_query(tmpl, layout.find(layout.target_id)->class_name, anchor_class);
    layout.scene_id = default_scene_id(relation, config.seed);
    return layout;
  }
  throw Error(ErrorCode::kPlacementExhausted,
              "no valid arrangement after " +
                  std::to_string(config.max_placement_retries) + " attempts");
}

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  kDuplicateId,
  kInvalidDims,
  kOutOfBounds,
  kNotOnFloor,
  kFootprintOverlap,
  kTooFewObjects,
  kUnknownId,
  kMissingAnchor,
  kUnexpectedAnchor,
  kNoCandidates,
  kCandidateClassMismatch,
  kTargetNotCandidate,
  kRelationMismatch,
};

inline std::string_view violation_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::kDuplicateId: return "DuplicateId";
    case ViolationKind::kInvalidDims: return "InvalidDims";
    case ViolationKind::kOutOfBounds: return "OutOfBounds";
    case ViolationKind::kNotOnFloor: return "NotOnFloor";
    case ViolationKind::kFootprintOverlap: return "FootprintOverlap";
    case ViolationKind::kTooFewObjects: return "TooFewObjects";
    case ViolationKind::kUnknownId: return "UnknownId";
    case ViolationKind::kMissingAnchor: return "MissingAnchor";
    case ViolationKind::kUnexpectedAnchor: return "UnexpectedAnchor";
    case ViolationKind::kNoCandidates: return "NoCandidates";
    case ViolationKind::kCandidateClassMismatch: return "CandidateClassMismatch";
    case ViolationKind::kTargetNotCandidate: return "TargetNotCandidate";
    case ViolationKind::kRelationMismatch: return "RelationMismatch";
  }
  return "";
}

struct Violation {
  ViolationKind kind;
  std::vector<ObjectId> ids;
  std::string detail;

  std::string to_string() const {
    std::string s(violation_name(kind));
    s += '(';
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(ids[i]);
    }
    s += ')';
    if (!detail.empty()) s += ": " + detail;
    return s;
  }
};

// Never throws; reports one entry per violated invariant.
inline std::vector<Violation> validate_scene(const SceneLayout& layout) {
  std::vector<Violation> out;
  const auto& cfg = layout.config;
  constexpr double kBoundsTol = 1e-9;
  constexpr double kFloorTol = 0.5e-4 + 1e-9;

  std::vector<ObjectId> seen;
  for (const auto& o : layout.objects) {
    if (std::find(seen.begin(), seen.end(), o.id) != seen.end()) {
      out.push_back({ViolationKind::kDuplicateId, {o.id}, ""});
    }
    seen.push_back(o.id);
    if (!is_valid(o.dims) || !is_finite(o.center)) {
      out.push_back({ViolationKind::kInvalidDims, {o.id}, ""});
      continue;
    }
    const Aabb box = o.box();
    if (box.min_corner().x < -kBoundsTol || box.min_corner().y < -kBoundsTol ||
        box.max_corner().x > cfg.room_width + kBoundsTol ||
        box.max_corner().y > cfg.room_length + kBoundsTol) {
      out.push_back({ViolationKind::kOutOfBounds, {o.id}, ""});
    }
    if (std::abs(o.center.z - o.dims.height / 2) > kFloorTol) {
      out.push_back({ViolationKind::kNotOnFloor, {o.id}, ""});
    }
  }
  for (std::size_t i = 0; i < layout.objects.size(); ++i) {
    const auto& a = layout.objects[i];
    if (!is_valid(a.dims) || !is_finite(a.center)) continue;
    for (std::size_t j = i + 1; j < layout.objects.size(); ++j) {
      const auto& b = layout.objects[j];
      if (!is_valid(b.dims) || !is_finite(b.center)) continue;
      if (footprint_overlaps(a.box(), b.box())) {
        out.push_back({ViolationKind::kFootprintOverlap, {a.id, b.id}, ""});
      }
    }
  }
  if (layout.objects.size() < static_cast<std::size_t>(std::max(cfg.min_objects, 0))) {
    out.push_back({ViolationKind::kTooFewObjects, {},
                   std::to_string(layout.objects.size()) + " < " +
                       std::to_string(cfg.min_objects)});
  }

  bool ids_resolve = true;
  auto check_id = [&](ObjectId id) {
    if (!layout.find(id)) {
      out.push_back({ViolationKind::kUnknownId, {id}, ""});
      ids_resolve = false;
    }
  };
  if (relation_uses_anchor(layout.relation)) {
    if (!layout.anchor_id) {
      out.push_back({ViolationKind::kMissingAnchor, {}, ""});
      ids_resolve = false;
    } else {
      check_id(*layout.anchor_id);
    }
  } else if (layout.anchor_id) {
    out.push_back({ViolationKind::kUnexpectedAnchor, {*layout.anchor_id}, ""});
  }
  if (layout.candidate_ids.empty()) {
    out.push_back({ViolationKind::kNoCandidates, {}, ""});
    ids_resolve = false;
  }
  for (ObjectId id : layout.candidate_ids) check_id(id);
  check_id(layout.target_id);
  if (std::find(layout.candidate_ids.begin(), layout.candidate_ids.end(),
                layout.target_id) == layout.candidate_ids.end()) {
    out.push_back({ViolationKind::kTargetNotCandidate, {layout.target_id}, ""});
    ids_resolve = false;
  }
  if (!ids_resolve) return out;

  const std::string& cls = layout.find(layout.candidate_ids.front())->class_name;
  std::vector<ObjectId> mismatched;
  for (ObjectId id : layout.candidate_ids) {
    if (layout.find(id)->class_name != cls) mismatched.push_back(id);
  }
  if (!mismatched.empty()) {
    out.push_back({ViolationKind::kCandidateClassMismatch, mismatched, ""});
    return out;
  }
  try {
    const ObjectId resolved = resolve_target(
        layout.objects, layout.relation, layout.anchor_id, layout.candidate_ids,
        room_center_viewer(cfg), {cfg.next_to_radius});
    if (resolved != layout.target_id) {
      out.push_back({ViolationKind::kRelationMismatch,
                     {layout.target_id, resolved},
                     "oracle resolves a different target"});
    }
  } catch (const Error& e) {
    out.push_back({ViolationKind::kRelationMismatch, {layout.target_id}, e.what()});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Layout file: JSON Lines, one scene per line. Field names are documented in
// docs/formats.md; numbers are written at 1e-4 resolution.

inline nlohmann::ordered_json config_to_json(const SceneConfig& c) {
  nlohmann::ordered_json j;
  j["room_width"] = quantize4(c.room_width);
  j["room_length"] = quantize4(c.room_length);
  j["candidate_count_min"] = c.candidate_count_min;
  j["candidate_count_max"] = c.candidate_count_max;
  j["min_objects"] = c.min_objects;
  j["jitter"] = quantize4(c.jitter);
  j["margin"] = quantize4(c.margin);
  j["margin_ratio"] = quantize4(c.margin_ratio);
  j["next_to_radius"] = quantize4(c.next_to_radius);
  j["max_placement_retries"] = c.max_placement_retries;
  j["seed"] = c.seed;
  return j;
}

inline SceneConfig config_from_json(const nlohmann::json& j) {
  SceneConfig c;
  c.room_width = j.at("room_width").get<double>();
  c.room_length = j.at("room_length").get<double>();
  c.candidate_count_min = j.at("candidate_count_min").get<int>();
  c.candidate_count_max = j.at("candidate_count_max").get<int>();
  c.min_objects = j.at("min_objects").get<int>();
  c.jitter = j.at("jitter").get<double>();
  c.margin = j.at("margin").get<double>();
  c.margin_ratio = j.at("margin_ratio").get<double>();
  c.next_to_radius = j.at("next_to_radius").get<double>();
  c.max_placement_retries = j.at("max_placement_retries").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

inline nlohmann::ordered_json layout_to_json(const SceneLayout& s) {
  nlohmann::ordered_json j;
  j["scene_id"] = s.scene_id;
  j["relation"] = relation_name(s.relation);
  j["config"] = config_to_json(s.config);
  auto& objects = j["objects"] = nlohmann::ordered_json::array();
  for (const auto& o : s.objects) {
    nlohmann::ordered_json oj;
    oj["id"] = o.id;
    oj["class"] = o.class_name;
    oj["center"] = {quantize4(o.center.x), quantize4(o.center.y),
                    quantize4(o.center.z)};
    oj["dims"] = {quantize4(o.dims.width), quantize4(o.dims.length),
                  quantize4(o.dims.height)};
    objects.push_back(std::move(oj));
  }
  j["anchor_id"] = s.anchor_id ? nlohmann::ordered_json(*s.anchor_id)
                               : nlohmann::ordered_json(nullptr);
  j["candidate_ids"] = s.candidate_ids;
  j["target_id"] = s.target_id;
  j["template_index"] = s.template_index;
  j["query"] = s.query;
  return j;
}

inline SceneLayout layout_from_json(const nlohmann::json& j) {
  SceneLayout s;
  s.scene_id = j.at("scene_id").get<std::string>();
  auto relation = parse_relation(j.at("relation").get<std::string>());
  if (!relation) {
    throw Error(ErrorCode::kSchemaError,
                "unknown relation " + j.at("relation").dump());
  }
  s.relation = *relation;
  s.config = config_from_json(j.at("config"));
  for (const auto& oj : j.at("objects")) {
    const auto& c = oj.at("center");
    const auto& d = oj.at("dims");
    if (c.size() != 3 || d.size() != 3) {
      throw Error(ErrorCode::kSchemaError, "center and dims need 3 values");
    }
    s.objects.push_back({oj.at("id").get<ObjectId>(),
                         oj.at("class").get<std::string>(),
                         {c[0].get<double>(), c[1].get<double>(), c[2].get<double>()},
                         {d[0].get<double>(), d[1].get<double>(), d[2].get<double>()}});
  }
  if (!j.at("anchor_id").is_null()) s.anchor_id = j.at("anchor_id").get<ObjectId>();
  s.candidate_ids = j.at("candidate_ids").get<std::vector<ObjectId>>();
  s.target_id = j.at("target_id").get<ObjectId>();
  s.template_index = j.at("template_index").get<int>();
  s.query = j.at("query").get<std::string>();
  return s;
}

inline std::string layout_to_line(const SceneLayout& s) {
  return layout_to_json(s).dump();
}

inline std::vector<SceneLayout> read_layouts(std::istream& in) {
  std::vector<SceneLayout> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(layout_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw MalformedLineError(line_no, e.what());
    } catch (const MalformedLineError&) {
      throw;
    } catch (const Error& e) {
      throw MalformedLineError(line_no, e.what());
    }
  }
  return out;
}

inline std::vector<SceneLayout> load_layouts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open layouts " + path);
  return read_layouts(in);
}

}  // namespace vgsynth
