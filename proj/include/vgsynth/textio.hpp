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

// Scene-to-text serialization, prompt construction and parsing of four-stage
// reasoning responses. The text grammar and answer pattern are the contract
// with the external model; see docs/formats.md.

#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vgsynth/error.hpp"
#include "vgsynth/geometry.hpp"
#include "vgsynth/scene_types.hpp"

namespace vgsynth {

struct SceneText {
  std::vector<std::string> lines;

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (i) out += '\n';
      out += lines[i];
    }
    return out;
  }
};

// Fixed two-decimal rendering, rounding half away from zero. The value is
// first resolved to 1e-4, the resolution of stored layouts, so that decimal
// ties such as 1.005 round the way they read.
inline std::string format_fixed2(double v) {
  const auto ticks = std::llround(v * 1e4);
  const long long mag = (ticks < 0 ? -ticks : ticks);
  const long long hundredths = (mag + 50) / 100;
  std::string out;
  if (ticks < 0 && hundredths != 0) out += '-';
  out += std::to_string(hundredths / 100);
  out += '.';
  const long long frac = hundredths % 100;
  if (frac < 10) out += '0';
  out += std::to_string(frac);
  return out;
}

// Sizes never render below one hundredth; a coin 3 mm thick would otherwise
// print as 0.00 and the line could not be parsed back.
inline std::string format_size2(double v) {
  return format_fixed2(std::max(v, 0.01));
}

inline std::string format_object_line(const ObjectInstance& o) {
  std::string s = "ID " + std::to_string(o.id) + ": " + o.class_name;
  s += ", center=(" + format_fixed2(o.center.x) + ", " +
       format_fixed2(o.center.y) + ", " + format_fixed2(o.center.z) + ")";
  s += ", size=(" + format_size2(o.dims.width) + ", " +
       format_size2(o.dims.length) + ", " + format_size2(o.dims.height) + ")";
  return s;
}

// One line per object in increasing id order.
inline SceneText serialize_scene(std::vector<ObjectInstance> objects) {
  if (objects.empty()) throw Error(ErrorCode::kEmptyScene, "no objects");
  std::sort(objects.begin(), objects.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  SceneText text;
  text.lines.reserve(objects.size());
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (i > 0 && objects[i].id == objects[i - 1].id) {
      throw Error(ErrorCode::kDuplicateId, std::to_string(objects[i].id));
    }
    text.lines.push_back(format_object_line(objects[i]));
  }
  return text;
}

namespace detail {

class LineCursor {
 public:
  LineCursor(std::string_view line, std::size_t line_no)
      : rest_(line), line_no_(line_no) {}

  void expect(std::string_view token) {
    if (rest_.substr(0, token.size()) != token) {
      fail("expected '" + std::string(token) + "'");
    }
    rest_.remove_prefix(token.size());
  }

  std::int64_t integer() {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(rest_.data(), rest_.data() + rest_.size(), v);
    if (ec != std::errc() || ptr == rest_.data()) fail("expected an integer");
    rest_.remove_prefix(static_cast<std::size_t>(ptr - rest_.data()));
    return v;
  }

  double number() {
    double v = 0;
    auto [ptr, ec] = std::from_chars(rest_.data(), rest_.data() + rest_.size(), v,
                                     std::chars_format::fixed);
    if (ec != std::errc() || ptr == rest_.data() || !std::isfinite(v)) {
      fail("expected a number");
    }
    rest_.remove_prefix(static_cast<std::size_t>(ptr - rest_.data()));
    return v;
  }

  std::string until(std::string_view delimiter) {
    const auto pos = rest_.find(delimiter);
    if (pos == std::string_view::npos) {
      fail("expected '" + std::string(delimiter) + "'");
    }
    std::string out(rest_.substr(0, pos));
    rest_.remove_prefix(pos);
    return out;
  }

  bool done() const { return rest_.empty(); }

  [[noreturn]] void fail(const std::string& why) const {
    throw MalformedLineError(line_no_, why);
  }

 private:
  std::string_view rest_;
  std::size_t line_no_;
};

inline Point3 parse_triple(LineCursor& cur) {
  Point3 p;
  cur.expect("(");
  p.x = cur.number();
  cur.expect(", ");
  p.y = cur.number();
  cur.expect(", ");
  p.z = cur.number();
  cur.expect(")");
  return p;
}

}  // namespace detail

// Inverse of serialize_scene. Blank lines are skipped; anything else that
// does not match the grammar raises MalformedLine with its 1-based number.
inline std::vector<ObjectInstance> parse_scene_text(std::string_view text) {
  std::vector<ObjectInstance> out;
  std::size_t line_no = 0;
  while (!text.empty() || line_no == 0) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = (nl == std::string_view::npos) ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      if (text.empty()) break;
      continue;
    }
    detail::LineCursor cur(line, line_no);
    ObjectInstance obj;
    cur.expect("ID ");
    obj.id = cur.integer();
    cur.expect(": ");
    obj.class_name = cur.until(", center=(");
    if (obj.class_name.empty()) cur.fail("empty class name");
    cur.expect(", center=");
    obj.center = detail::parse_triple(cur);
    cur.expect(", size=");
    const Point3 size = detail::parse_triple(cur);
    obj.dims = {size.x, size.y, size.z};
    if (!cur.done()) cur.fail("trailing characters");
    if (!is_valid(obj.dims)) cur.fail("size must be strictly positive");
    if (!out.empty() && obj.id <= out.back().id) cur.fail("ids must increase");
    out.push_back(std::move(obj));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Prompts

inline constexpr std::string_view kTagRelatedObjects = "[RELATED OBJECTS]";
inline constexpr std::string_view kTagSituation = "[SITUATION]";
inline constexpr std::string_view kTagReasoning = "[REASONING]";
inline constexpr std::string_view kTagConclusion = "[CONCLUSION]";
inline constexpr std::string_view kAnswerPrefix = "Final Answer:";
inline constexpr std::string_view kAnswerFormat = "Final Answer: <id>";

struct StageTag {
  std::string_view tag;
  std::string_view name;
};

inline constexpr std::array<StageTag, 4> kStages = {{
    {kTagRelatedObjects, "Related Objects"},
    {kTagSituation, "Situation"},
    {kTagReasoning, "Reasoning"},
    {kTagConclusion, "Conclusion"},
}};

inline constexpr std::string_view kSystemMessage =
    "You are a careful assistant for 3D visual grounding. You locate the "
    "object a query refers to in a scene given as a list of objects.";

// Spatial-hallucination guard included in both prompts.
inline constexpr std::string_view kGroundingRules =
    "Important rules:\n"
    "- Use only the objects listed in the scene. Never invent objects, IDs or "
    "coordinates.\n"
    "- Copy each object's center and size exactly as listed before using "
    "them.\n"
    "- Compute distances from the listed center coordinates in the x-y "
    "(floor) plane, and sizes as width x length x height.\n"
    "- Left and right are judged by a viewer looking at the reference "
    "object.\n"
    "- Verify every calculation before you write the conclusion.";

inline std::string stage_instructions() {
  std::string s;
  s += "Answer in exactly four stages, each starting with its tag on its own "
       "line:\n";
  s += std::string(kTagRelatedObjects) +
       " List every object that may be relevant to the query with its ID, "
       "class, center and size.\n";
  s += std::string(kTagSituation) +
       " State the viewer position. If the query gives no situation, assume "
       "the viewer stands in the middle of the scene and give that "
       "coordinate.\n";
  s += std::string(kTagReasoning) +
       " Carry out the calculations and logical steps needed to identify the "
       "target.\n";
  s += std::string(kTagConclusion) +
       " Give the result on a single line in the format \"" +
       std::string(kAnswerFormat) + "\", where <id> is the object ID.\n";
  return s;
}

// Prompt sent to the data-collection model. The scene text appears verbatim
// and each stage tag occurs exactly once.
inline std::string build_collection_prompt(const SceneText& scene,
                                           const std::string& query) {
  std::string p;
  p += "You are given a 3D indoor scene as a list of objects. Each line reads "
       "\"ID <id>: <class>, center=(x, y, z), size=(width, length, "
       "height)\" in meters; z is up and objects rest on the floor.\n\n";
  p += stage_instructions();
  p += "\nExample calculation: the distance between centers (1.00, 2.00) and "
       "(4.00, 6.00) is sqrt((4.00 - 1.00)^2 + (6.00 - 2.00)^2) = "
       "sqrt(9.00 + 16.00) = 5.00. The size of an object with size=(0.50, "
       "0.40, 1.00) is 0.50 x 0.40 x 1.00 = 0.20.\n\n";
  p += kGroundingRules;
  p += "\n\nScene:\n";
  p += scene.str();
  p += "\n\nQuery: ";
  p += query;
  p += "\n";
  return p;
}

inline constexpr std::string_view kInferencePromptTemplate =
    "Below is a 3D scene given as object proposals, one per line, in the "
    "format \"ID <id>: <class>, center=(x, y, z), size=(width, length, "
    "height)\".\n"
    "Scene:\n{scene}\n\n"
    "Find the object that the query refers to. Reason in four stages "
    "([RELATED OBJECTS], [SITUATION], [REASONING], [CONCLUSION]) and finish "
    "the conclusion with \"Final Answer: <id>\".\n"
    "Query: {query}\n";

inline std::string build_inference_prompt(const SceneText& scene,
                                          const std::string& query) {
  std::string p(kInferencePromptTemplate);
  // {scene} precedes {query}; filling the later slot first keeps substituted
  // text from being scanned for placeholders.
  p.replace(p.find("{query}"), 7, query);
  p.replace(p.find("{scene}"), 7, scene.str());
  return p;
}

// ---------------------------------------------------------------------------
// Response parsing

struct ReasoningResponse {
  std::string related_objects;
  std::string situation;
  std::string reasoning;
  std::string conclusion;
  std::optional<ObjectId> predicted_id;

  friend bool operator==(const ReasoningResponse&,
                         const ReasoningResponse&) = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// First "Final Answer:" followed by optional blanks and a decimal integer.
inline std::optional<ObjectId> find_answer(std::string_view text) {
  std::size_t from = 0;
  while (true) {
    const auto pos = text.find(kAnswerPrefix, from);
    if (pos == std::string_view::npos) return std::nullopt;
    std::size_t i = pos + kAnswerPrefix.size();
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), v);
    if (ec == std::errc() && ptr != text.data() + i && v >= 0) return v;
    from = pos + 1;
  }
}

}  // namespace detail

// Splits a response at the four stage tags, which must appear in order.
// Throws MissingStage(name) or NoAnswerFound; both mark a format violation.
inline ReasoningResponse parse_reasoning_response(std::string_view text) {
  std::array<std::size_t, 4> starts{};
  std::array<std::size_t, 4> bodies{};
  std::size_t from = 0;
  for (std::size_t i = 0; i < kStages.size(); ++i) {
    const auto pos = text.find(kStages[i].tag, from);
    if (pos == std::string_view::npos) {
      throw MissingStageError(std::string(kStages[i].name));
    }
    starts[i] = pos;
    bodies[i] = pos + kStages[i].tag.size();
    from = bodies[i];
  }
  auto body = [&](std::size_t i) {
    const std::size_t end = (i + 1 < kStages.size()) ? starts[i + 1] : text.size();
    return detail::trim(text.substr(bodies[i], end - bodies[i]));
  };
  ReasoningResponse r;
  r.related_objects = body(0);
  r.situation = body(1);
  r.reasoning = body(2);
  r.conclusion = body(3);
  r.predicted_id = detail::find_answer(r.conclusion);
  if (!r.predicted_id) {
    throw Error(ErrorCode::kNoAnswerFound,
                "conclusion lacks \"" + std::string(kAnswerFormat) + "\"");
  }
  return r;
}

}  // namespace vgsynth
