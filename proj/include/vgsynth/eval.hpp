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

// Grounding metrics: box-IoU accuracy with Unique/Multiple splits, and
// object-id accuracy with Easy/Hard and view-dependent/independent splits.

#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "vgsynth/collect.hpp"
#include "vgsynth/error.hpp"
#include "vgsynth/geometry.hpp"
#include "vgsynth/scene_types.hpp"

namespace vgsynth {

enum class SplitLabel {
  kUnique,
  kMultiple,
  kEasy,
  kHard,
  kViewDependent,
  kViewIndependent,
};

inline std::string_view split_label_name(SplitLabel l) {
  switch (l) {
    case SplitLabel::kUnique: return "unique";
    case SplitLabel::kMultiple: return "multiple";
    case SplitLabel::kEasy: return "easy";
    case SplitLabel::kHard: return "hard";
    case SplitLabel::kViewDependent: return "view_dep";
    case SplitLabel::kViewIndependent: return "view_indep";
  }
  return "";
}

inline std::string_view split_label_title(SplitLabel l) {
  switch (l) {
    case SplitLabel::kUnique: return "Unique";
    case SplitLabel::kMultiple: return "Multiple";
    case SplitLabel::kEasy: return "Easy";
    case SplitLabel::kHard: return "Hard";
    case SplitLabel::kViewDependent: return "Dep.";
    case SplitLabel::kViewIndependent: return "Indep.";
  }
  return "";
}

inline std::optional<SplitLabel> parse_split_label(std::string_view s) {
  for (auto l : {SplitLabel::kUnique, SplitLabel::kMultiple, SplitLabel::kEasy,
                 SplitLabel::kHard, SplitLabel::kViewDependent,
                 SplitLabel::kViewIndependent}) {
    if (split_label_name(l) == s) return l;
  }
  return std::nullopt;
}

struct Proposal {
  ObjectId id = 0;
  std::string class_name;
  Aabb box;
};

struct ProposalSet {
  std::string scene_id;
  std::vector<Proposal> proposals;

  // Throws DuplicateId when two proposals share an id.
  void validate() const {
    std::set<ObjectId> ids;
    for (const auto& p : proposals) {
      if (!ids.insert(p.id).second) {
        throw Error(ErrorCode::kDuplicateId,
                    scene_id + ": proposal " + std::to_string(p.id));
      }
    }
  }

  // Proposals as scene objects, ready for serialize_scene.
  std::vector<ObjectInstance> as_objects() const {
    std::vector<ObjectInstance> out;
    for (const auto& p : proposals) {
      out.push_back({p.id, p.class_name, p.box.center(), p.box.extents()});
    }
    return out;
  }
};

inline Aabb resolve_predicted_box(const ProposalSet& proposals, ObjectId predicted_id) {
  for (const auto& p : proposals.proposals) {
    if (p.id == predicted_id) return p.box;
  }
  throw Error(ErrorCode::kUnknownProposalId,
              proposals.scene_id + ": " + std::to_string(predicted_id));
}

struct EvalItem {
  std::string scene_id;
  std::string query_id;
  std::string query;
  std::optional<Aabb> gt_box;
  std::optional<ObjectId> gt_id;
  std::set<SplitLabel> labels;
};

// Unique iff the target's class occurs exactly once among the scene's
// ground-truth objects.
inline SplitLabel classify_unique_multiple(const std::string& gt_class,
                                           std::span<const std::string> scene_gt_classes) {
  const auto n = std::count(scene_gt_classes.begin(), scene_gt_classes.end(), gt_class);
  if (n == 0) throw Error(ErrorCode::kClassNotInScene, gt_class);
  return n == 1 ? SplitLabel::kUnique : SplitLabel::kMultiple;
}

struct BoxPrediction {
  std::string scene_id;
  std::string query_id;
  // Absent when the model named an id that is not among the proposals.
  std::optional<Aabb> box;
};

struct IdPrediction {
  std::string scene_id;
  std::string query_id;
  // Absent when the model gave no parseable answer; scored incorrect.
  std::optional<ObjectId> predicted_id;
};

struct SplitMetrics {
  std::string name;
  std::size_t count = 0;
  std::vector<std::size_t> correct;  // one entry per threshold

  double accuracy(std::size_t k = 0) const {
    return count ? static_cast<double>(correct.at(k)) / static_cast<double>(count) : 0.0;
  }
};

struct MetricsReport {
  std::string protocol;
  std::vector<double> thresholds;  // empty for the id protocol
  std::vector<SplitMetrics> splits;
  std::size_t unknown_proposal_ids = 0;

  const SplitMetrics& split(std::string_view name) const {
    for (const auto& s : splits) {
      if (s.name == name) return s;
    }
    throw Error(ErrorCode::kInvalidConfig, "no split " + std::string(name));
  }
};

namespace detail {

using ItemKey = std::pair<std::string, std::string>;

template <typename Pred>
std::map<ItemKey, const Pred*> index_predictions(std::span<const Pred> predictions) {
  std::map<ItemKey, const Pred*> out;
  for (const auto& p : predictions) {
    if (!out.emplace(ItemKey{p.scene_id, p.query_id}, &p).second) {
      throw Error(ErrorCode::kDuplicatePrediction, p.scene_id + "/" + p.query_id);
    }
  }
  return out;
}

template <typename Pred>
const Pred& matching_prediction(const std::map<ItemKey, const Pred*>& index,
                                const EvalItem& item) {
  auto it = index.find({item.scene_id, item.query_id});
  if (it == index.end()) {
    throw Error(ErrorCode::kMissingPrediction, item.scene_id + "/" + item.query_id);
  }
  return *it->second;
}

inline void check_unique_items(std::span<const EvalItem> items) {
  std::set<ItemKey> keys;
  for (const auto& item : items) {
    if (!keys.insert({item.scene_id, item.query_id}).second) {
      throw Error(ErrorCode::kSchemaError,
                  "duplicate ground-truth item " + item.scene_id + "/" + item.query_id);
    }
  }
}

template <typename Pred>
void check_no_stray(const std::map<ItemKey, const Pred*>& index,
                    std::span<const EvalItem> items) {
  if (index.size() <= items.size()) return;
  std::set<ItemKey> keys;
  for (const auto& item : items) keys.insert({item.scene_id, item.query_id});
  for (const auto& [key, _] : index) {
    if (!keys.count(key)) {
      throw Error(ErrorCode::kSchemaError,
                  "prediction for unknown item " + key.first + "/" + key.second);
    }
  }
}

inline SplitLabel require_one_of(const EvalItem& item, SplitLabel a, SplitLabel b) {
  const bool has_a = item.labels.count(a) > 0;
  const bool has_b = item.labels.count(b) > 0;
  if (has_a == has_b) {
    throw Error(ErrorCode::kMissingSplitLabel,
                item.scene_id + "/" + item.query_id + " needs exactly one of " +
                    std::string(split_label_name(a)) + ", " +
                    std::string(split_label_name(b)));
  }
  return has_a ? a : b;
}

}  // namespace detail

inline MetricsReport score_box_protocol(std::span<const EvalItem> items,
                                        std::span<const BoxPrediction> predictions,
                                        std::vector<double> thresholds = {0.25, 0.5}) {
  if (thresholds.empty()) throw Error(ErrorCode::kInvalidConfig, "no IoU thresholds");
  for (double t : thresholds) {
    if (!(t > 0.0 && t < 1.0)) {
      throw Error(ErrorCode::kInvalidConfig, "IoU thresholds must lie in (0, 1)");
    }
  }
  detail::check_unique_items(items);
  const auto index = detail::index_predictions(predictions);
  detail::check_no_stray(index, items);

  MetricsReport report;
  report.protocol = "box";
  report.thresholds = thresholds;
  const std::size_t k = thresholds.size();
  SplitMetrics unique{"Unique", 0, std::vector<std::size_t>(k)};
  SplitMetrics multiple{"Multiple", 0, std::vector<std::size_t>(k)};
  SplitMetrics overall{"Overall", 0, std::vector<std::size_t>(k)};

  for (const auto& item : items) {
    if (!item.gt_box) {
      throw Error(ErrorCode::kSchemaError,
                  item.scene_id + "/" + item.query_id + " has no gt_box");
    }
    const SplitLabel split =
        detail::require_one_of(item, SplitLabel::kUnique, SplitLabel::kMultiple);
    const auto& pred = detail::matching_prediction(index, item);
    auto& bucket = split == SplitLabel::kUnique ? unique : multiple;
    ++bucket.count;
    ++overall.count;
    if (!pred.box) {
      ++report.unknown_proposal_ids;
      continue;
    }
    const double overlap = iou(*pred.box, *item.gt_box);
    for (std::size_t t = 0; t < k; ++t) {
      if (overlap >= thresholds[t]) {
        ++bucket.correct[t];
        ++overall.correct[t];
      }
    }
  }
  report.splits = {unique, multiple, overall};
  return report;
}

inline MetricsReport score_id_protocol(std::span<const EvalItem> items,
                                       std::span<const IdPrediction> predictions) {
  detail::check_unique_items(items);
  const auto index = detail::index_predictions(predictions);
  detail::check_no_stray(index, items);

  MetricsReport report;
  report.protocol = "id";
  SplitMetrics easy{"Easy", 0, {0}};
  SplitMetrics hard{"Hard", 0, {0}};
  SplitMetrics dep{"Dep.", 0, {0}};
  SplitMetrics indep{"Indep.", 0, {0}};
  SplitMetrics overall{"Overall", 0, {0}};

  for (const auto& item : items) {
    if (!item.gt_id) {
      throw Error(ErrorCode::kSchemaError,
                  item.scene_id + "/" + item.query_id + " has no gt_id");
    }
    const SplitLabel difficulty =
        detail::require_one_of(item, SplitLabel::kEasy, SplitLabel::kHard);
    const SplitLabel view = detail::require_one_of(item, SplitLabel::kViewDependent,
                                                   SplitLabel::kViewIndependent);
    const auto& pred = detail::matching_prediction(index, item);
    const std::size_t hit = pred.predicted_id == item.gt_id ? 1 : 0;
    for (SplitMetrics* s : {difficulty == SplitLabel::kEasy ? &easy : &hard,
                            view == SplitLabel::kViewDependent ? &dep : &indep,
                            &overall}) {
      ++s->count;
      s->correct[0] += hit;
    }
  }
  report.splits = {easy, hard, dep, indep, overall};
  return report;
}

// ---------------------------------------------------------------------------
// Reports

inline std::string threshold_label(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "Acc@%g", t);
  return buf;
}

inline std::string format_accuracy(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline std::string report_to_text(const MetricsReport& r) {
  std::vector<std::string> columns;
  if (r.thresholds.empty()) {
    columns.push_back("Accuracy");
  } else {
    for (double t : r.thresholds) columns.push_back(threshold_label(t));
  }
  std::string out = "protocol: " + r.protocol + "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-10s %7s", "Split", "Count");
  out += buf;
  for (const auto& c : columns) {
    std::snprintf(buf, sizeof buf, " %9s", c.c_str());
    out += buf;
  }
  out += '\n';
  for (const auto& s : r.splits) {
    std::snprintf(buf, sizeof buf, "%-10s %7zu", s.name.c_str(), s.count);
    out += buf;
    for (std::size_t k = 0; k < columns.size(); ++k) {
      std::snprintf(buf, sizeof buf, " %9s", format_accuracy(s.accuracy(k)).c_str());
      out += buf;
    }
    out += '\n';
  }
  const auto& overall = r.split("Overall");
  out += "Overall:";
  for (std::size_t k = 0; k < columns.size(); ++k) {
    out += (k ? ", " : " ") + columns[k] + " = " + format_accuracy(overall.accuracy(k));
  }
  out += '\n';
  if (r.protocol == "box") {
    out += "unknown proposal ids: " + std::to_string(r.unknown_proposal_ids) + "\n";
  }
  return out;
}

inline nlohmann::ordered_json report_to_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["protocol"] = r.protocol;
  j["thresholds"] = r.thresholds;
  j["unknown_proposal_ids"] = r.unknown_proposal_ids;
  auto& splits = j["splits"] = nlohmann::ordered_json::array();
  for (const auto& s : r.splits) {
    nlohmann::ordered_json sj;
    sj["name"] = s.name;
    sj["count"] = s.count;
    sj["correct"] = s.correct;
    std::vector<double> acc;
    for (std::size_t k = 0; k < s.correct.size(); ++k) acc.push_back(s.accuracy(k));
    sj["accuracy"] = acc;
    splits.push_back(std::move(sj));
  }
  return j;
}

// ---------------------------------------------------------------------------
// Files (JSON Lines; see docs/formats.md)

namespace detail {

inline Aabb box_from_json(const nlohmann::json& j) {
  const auto& lo = j.at("min");
  const auto& hi = j.at("max");
  if (lo.size() != 3 || hi.size() != 3) {
    throw Error(ErrorCode::kSchemaError, "box corners need 3 values");
  }
  return Aabb({lo[0].get<double>(), lo[1].get<double>(), lo[2].get<double>()},
              {hi[0].get<double>(), hi[1].get<double>(), hi[2].get<double>()});
}

}  // namespace detail

inline nlohmann::ordered_json box_to_json(const Aabb& b) {
  nlohmann::ordered_json j;
  j["min"] = {b.min_corner().x, b.min_corner().y, b.min_corner().z};
  j["max"] = {b.max_corner().x, b.max_corner().y, b.max_corner().z};
  return j;
}

inline ProposalSet proposal_set_from_json(const nlohmann::json& j) {
  ProposalSet set;
  set.scene_id = j.at("scene_id").get<std::string>();
  for (const auto& p : j.at("proposals")) {
    set.proposals.push_back({p.at("id").get<ObjectId>(), p.at("class").get<std::string>(),
                             detail::box_from_json(p)});
  }
  set.validate();
  return set;
}

inline nlohmann::ordered_json proposal_set_to_json(const ProposalSet& set) {
  nlohmann::ordered_json j;
  j["scene_id"] = set.scene_id;
  auto& arr = j["proposals"] = nlohmann::ordered_json::array();
  for (const auto& p : set.proposals) {
    nlohmann::ordered_json pj;
    pj["id"] = p.id;
    pj["class"] = p.class_name;
    auto box = box_to_json(p.box);
    pj["min"] = box["min"];
    pj["max"] = box["max"];
    arr.push_back(std::move(pj));
  }
  return j;
}

// Ground truth. When both gt_class and scene_gt_classes are given the
// Unique/Multiple label is derived from them and overrides any provided one.
inline EvalItem eval_item_from_json(const nlohmann::json& j) {
  EvalItem item;
  item.scene_id = j.at("scene_id").get<std::string>();
  item.query_id = j.at("query_id").get<std::string>();
  item.query = j.value("query", std::string());
  if (j.contains("gt_box") && !j.at("gt_box").is_null()) {
    item.gt_box = detail::box_from_json(j.at("gt_box"));
  }
  if (j.contains("gt_id") && !j.at("gt_id").is_null()) {
    item.gt_id = j.at("gt_id").get<ObjectId>();
  }
  if (!item.gt_box && !item.gt_id) {
    throw Error(ErrorCode::kSchemaError, "item needs gt_box or gt_id");
  }
  if (j.contains("labels")) {
    for (const auto& l : j.at("labels")) {
      auto label = parse_split_label(l.get<std::string>());
      if (!label) throw Error(ErrorCode::kSchemaError, "unknown split label " + l.dump());
      item.labels.insert(*label);
    }
  }
  if (j.contains("gt_class") && j.contains("scene_gt_classes")) {
    const auto classes = j.at("scene_gt_classes").get<std::vector<std::string>>();
    item.labels.erase(SplitLabel::kUnique);
    item.labels.erase(SplitLabel::kMultiple);
    item.labels.insert(
        classify_unique_multiple(j.at("gt_class").get<std::string>(), classes));
  }
  return item;
}

inline nlohmann::ordered_json eval_item_to_json(const EvalItem& item) {
  nlohmann::ordered_json j;
  j["scene_id"] = item.scene_id;
  j["query_id"] = item.query_id;
  j["query"] = item.query;
  if (item.gt_id) j["gt_id"] = *item.gt_id;
  if (item.gt_box) j["gt_box"] = box_to_json(*item.gt_box);
  std::vector<std::string> labels;
  for (auto l : item.labels) labels.emplace_back(split_label_name(l));
  j["labels"] = labels;
  return j;
}

// One prediction record: predicted_id, predicted_box, or both (id wins when
// proposals are available). Neither means the model gave no usable answer.
struct PredictionRecord {
  std::string scene_id;
  std::string query_id;
  std::optional<ObjectId> predicted_id;
  std::optional<Aabb> predicted_box;
};

inline PredictionRecord prediction_from_json(const nlohmann::json& j) {
  PredictionRecord p;
  p.scene_id = j.at("scene_id").get<std::string>();
  p.query_id = j.at("query_id").get<std::string>();
  if (j.contains("predicted_id") && !j.at("predicted_id").is_null()) {
    p.predicted_id = j.at("predicted_id").get<ObjectId>();
  }
  if (j.contains("predicted_box") && !j.at("predicted_box").is_null()) {
    p.predicted_box = detail::box_from_json(j.at("predicted_box"));
  }
  return p;
}

inline nlohmann::ordered_json prediction_to_json(const PredictionRecord& p) {
  nlohmann::ordered_json j;
  j["scene_id"] = p.scene_id;
  j["query_id"] = p.query_id;
  j["predicted_id"] = p.predicted_id ? nlohmann::ordered_json(*p.predicted_id)
                                     : nlohmann::ordered_json(nullptr);
  if (p.predicted_box) j["predicted_box"] = box_to_json(*p.predicted_box);
  return j;
}

inline std::vector<ProposalSet> load_proposals(const std::string& path) {
  return read_jsonl<ProposalSet>(path, proposal_set_from_json);
}
inline std::vector<EvalItem> load_eval_items(const std::string& path) {
  return read_jsonl<EvalItem>(path, eval_item_from_json);
}
inline std::vector<PredictionRecord> load_predictions(const std::string& path) {
  return read_jsonl<PredictionRecord>(path, prediction_from_json);
}

// Turns prediction records into box predictions, resolving ids through the
// per-scene proposals. Ids missing from the proposals yield an empty box.
inline std::vector<BoxPrediction> to_box_predictions(
    std::span<const PredictionRecord> records, std::span<const ProposalSet> proposals) {
  std::map<std::string, const ProposalSet*> by_scene;
  for (const auto& p : proposals) by_scene[p.scene_id] = &p;
  std::vector<BoxPrediction> out;
  for (const auto& r : records) {
    BoxPrediction b{r.scene_id, r.query_id, std::nullopt};
    if (r.predicted_id) {
      auto it = by_scene.find(r.scene_id);
      if (it != by_scene.end()) {
        try {
          b.box = resolve_predicted_box(*it->second, *r.predicted_id);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kUnknownProposalId) throw;
        }
      }
      if (!b.box && r.predicted_box) b.box = r.predicted_box;
    } else {
      b.box = r.predicted_box;
    }
    out.push_back(std::move(b));
  }
  return out;
}

inline std::vector<IdPrediction> to_id_predictions(std::span<const PredictionRecord> records) {
  std::vector<IdPrediction> out;
  for (const auto& r : records) out.push_back({r.scene_id, r.query_id, r.predicted_id});
  return out;
}

}  // namespace vgsynth
