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

// Deterministic stand-ins for a chat-completion model.

#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vgsynth/collect.hpp"
#include "vgsynth/random.hpp"
#include "vgsynth/relations.hpp"
#include "vgsynth/textio.hpp"

namespace vgsynth {

// Renders a response in the four-stage tagged format.
inline std::string format_four_stage_response(const std::string& related,
                                              const std::string& situation,
                                              const std::string& reasoning,
                                              ObjectId answer) {
  std::string s;
  s += std::string(kTagRelatedObjects) + "\n" + related + "\n\n";
  s += std::string(kTagSituation) + "\n" + situation + "\n\n";
  s += std::string(kTagReasoning) + "\n" + reasoning + "\n\n";
  s += std::string(kTagConclusion) + "\n" + std::string(kAnswerPrefix) + " " +
       std::to_string(answer) + "\n";
  return s;
}

// Wraps a callable; handy for scripted test behavior.
class FunctionClient : public ModelClient {
 public:
  using Fn = std::function<std::string(const ChatRequest&)>;
  explicit FunctionClient(Fn fn) : fn_(std::move(fn)) {}

  std::string complete(const ChatRequest& request) override {
    ++calls_;
    return fn_(request);
  }
  std::size_t calls() const { return calls_.load(); }

 private:
  Fn fn_;
  std::atomic<std::size_t> calls_{0};
};

// Answers collection prompts for known layouts. With probability
// `wrong_rate` (decided per prompt from the seed, so independent of request
// order) it names a wrong object; prompts it does not recognize get untagged
// prose.
class OracleMockClient : public ModelClient {
 public:
  OracleMockClient(std::span<const SceneLayout> layouts, double wrong_rate,
                   std::uint64_t seed)
      : wrong_rate_(wrong_rate), seed_(seed) {
    for (const auto& layout : layouts) {
      const std::string prompt =
          build_collection_prompt(serialize_scene(layout.objects), layout.query);
      by_prompt_.emplace(prompt, make_entry(layout));
    }
  }

  std::string complete(const ChatRequest& request) override {
    ++calls_;
    auto it = by_prompt_.find(request.user);
    if (it == by_prompt_.end()) {
      return "I am not sure which object the query refers to.";
    }
    const Entry& e = it->second;
    const std::uint64_t h =
        mix64(seed_ ^ fnv1a64(request.user.data(), request.user.size()));
    const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    const ObjectId answer = (u < wrong_rate_) ? e.wrong : e.target;
    return format_four_stage_response(e.related, e.situation,
                                      "Compared the candidates using the listed "
                                      "coordinates.",
                                      answer);
  }

  std::size_t calls() const { return calls_.load(); }

 private:
  struct Entry {
    ObjectId target = 0;
    ObjectId wrong = 0;
    std::string related;
    std::string situation;
  };

  static Entry make_entry(const SceneLayout& layout) {
    Entry e;
    e.target = layout.target_id;
    e.wrong = layout.target_id;
    for (ObjectId id : layout.candidate_ids) {
      if (id != layout.target_id) {
        e.wrong = id;
        break;
      }
    }
    if (e.wrong == layout.target_id) {
      for (const auto& o : layout.objects) {
        if (o.id != layout.target_id) {
          e.wrong = o.id;
          break;
        }
      }
    }
    std::vector<ObjectInstance> related;
    for (ObjectId id : layout.candidate_ids) related.push_back(*layout.find(id));
    if (layout.anchor_id) related.push_back(*layout.find(*layout.anchor_id));
    e.related = serialize_scene(related).str();
    const auto viewer = room_center_viewer(layout.config);
    e.situation = "No situation is given, so the viewer is in the middle of the "
                  "scene at (" +
                  format_fixed2(viewer.position.x) + ", " +
                  format_fixed2(viewer.position.y) + ", 0.00).";
    return e;
  }

  std::unordered_map<std::string, Entry> by_prompt_;
  double wrong_rate_;
  std::uint64_t seed_;
  std::atomic<std::size_t> calls_{0};
};

// Scripted baseline predictor for inference prompts: answers with the first
// listed object whose class name occurs in the query (longest name wins),
// or the first object when nothing matches.
class ClassMatchMockClient : public ModelClient {
 public:
  std::string complete(const ChatRequest& request) override {
    const std::string& p = request.user;
    const auto scene_begin = p.find("Scene:\n");
    const auto query_begin = p.rfind("Query: ");
    if (scene_begin == std::string::npos || query_begin == std::string::npos) {
      return "No scene found.";
    }
    const auto body = scene_begin + 7;
    const auto scene_end = p.find("\n\n", body);
    std::vector<ObjectInstance> objects;
    try {
      objects = parse_scene_text(std::string_view(p).substr(body, scene_end - body));
    } catch (const Error&) {
      return "Could not read the scene.";
    }
    if (objects.empty()) return "The scene is empty.";
    const std::string query = lower(p.substr(query_begin + 7));
    const ObjectInstance* best = &objects.front();
    std::size_t best_len = 0;
    for (const auto& o : objects) {
      const std::string name = lower(o.class_name);
      if (name.size() > best_len && query.find(name) != std::string::npos) {
        best = &o;
        best_len = name.size();
      }
    }
    return format_four_stage_response(format_object_line(*best),
                                      "The viewer is in the middle of the scene.",
                                      "Picked the first object whose class is "
                                      "named in the query.",
                                      best->id);
  }

 private:
  static std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
  }
};

}  // namespace vgsynth
