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

// Runs a grounding model over benchmark queries: proposals are rendered as
// scene text, sent with the inference prompt, and the answer id is parsed.

#pragma once

#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "vgsynth/collect.hpp"
#include "vgsynth/eval.hpp"
#include "vgsynth/textio.hpp"

namespace vgsynth {

struct InferenceQuery {
  std::string scene_id;
  std::string query_id;
  std::string query;
};

struct InferenceResult {
  std::vector<PredictionRecord> predictions;  // input order
  std::size_t failures = 0;
};

inline InferenceResult run_inference(std::span<const InferenceQuery> queries,
                                     std::span<const ProposalSet> proposals,
                                     const EndpointConfig& endpoint, ModelClient& client,
                                     const RetryPolicy& retry = {},
                                     const std::function<void(const std::string&)>& log = {}) {
  validate_endpoint(endpoint);
  const std::string api_key = resolve_api_key(endpoint);
  std::map<std::string, std::string> scene_text;
  for (const auto& p : proposals) {
    if (!p.proposals.empty()) scene_text[p.scene_id] = serialize_scene(p.as_objects()).str();
  }

  InferenceResult result;
  result.predictions.resize(queries.size());
  std::vector<char> failed(queries.size(), 0);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  std::exception_ptr fatal;
  std::atomic<bool> abort{false};

  auto work = [&] {
    while (!abort.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= queries.size()) return;
      const auto& q = queries[i];
      auto& rec = result.predictions[i];
      rec.scene_id = q.scene_id;
      rec.query_id = q.query_id;
      std::string why;
      try {
        auto it = scene_text.find(q.scene_id);
        if (it == scene_text.end()) {
          why = "no proposals for scene";
        } else {
          const std::string prompt =
              build_inference_prompt(SceneText{{it->second}}, q.query);
          const auto raw = detail::request_with_retries(
              endpoint, make_chat_request(endpoint, prompt, api_key), client, retry);
          if (auto parsed = try_parse_response(raw, &why)) rec.predicted_id = parsed->predicted_id;
        }
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kAuthError) {
          std::lock_guard lock(log_mutex);
          if (!fatal) fatal = std::current_exception();
          abort = true;
          return;
        }
        why = e.what();
      } catch (const std::exception& e) {
        why = e.what();
      }
      if (!rec.predicted_id) {
        failed[i] = 1;
        if (log) {
          std::lock_guard lock(log_mutex);
          log(q.scene_id + "/" + q.query_id + ": " + why);
        }
      }
    }
  };
  const auto workers = std::min<std::size_t>(
      static_cast<std::size_t>(endpoint.max_in_flight), std::max<std::size_t>(queries.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (fatal) std::rethrow_exception(fatal);
  for (char f : failed) result.failures += static_cast<std::size_t>(f);
  return result;
}

}  // namespace vgsynth
