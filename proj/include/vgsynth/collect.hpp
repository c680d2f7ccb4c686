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

// Batch collection of four-stage reasoning responses from a chat-completion
// model, answer verification, and training-record emission.

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "vgsynth/error.hpp"
#include "vgsynth/scene.hpp"
#include "vgsynth/scene_types.hpp"
#include "vgsynth/textio.hpp"

namespace vgsynth {

struct EndpointConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model_name = "gpt-4o";
  // Name of the environment variable holding the bearer token. Empty means
  // the endpoint needs no credentials.
  std::string api_key_env_var = "OPENAI_API_KEY";
  double temperature = 0.0;
  int max_in_flight = 4;
  int max_retries = 3;
  double timeout_seconds = 120.0;
};

inline void validate_endpoint(const EndpointConfig& e) {
  if (e.max_in_flight < 1) {
    throw Error(ErrorCode::kInvalidConfig, "max_in_flight must be >= 1");
  }
  if (!(e.temperature >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "temperature must be >= 0");
  }
  if (e.max_retries < 0) {
    throw Error(ErrorCode::kInvalidConfig, "max_retries must be >= 0");
  }
}

struct ChatRequest {
  std::string model;
  std::string system;
  std::string user;
  double temperature = 0.0;
  std::string api_key;
};

// OpenAI-compatible chat-completions body. Field order is fixed so the same
// request always serializes to the same bytes; the key is never included.
inline std::string chat_request_body(const ChatRequest& r) {
  nlohmann::ordered_json body;
  body["model"] = r.model;
  body["messages"] = nlohmann::ordered_json::array();
  body["messages"].push_back({{"role", "system"}, {"content", r.system}});
  body["messages"].push_back({{"role", "user"}, {"content", r.user}});
  body["temperature"] = r.temperature;
  return body.dump();
}

// Raised by clients. Retryable failures (timeouts, 429, 5xx) are retried by
// request_reasoning; others fail immediately.
class EndpointFailure : public Error {
 public:
  EndpointFailure(bool retryable, const std::string& detail)
      : Error(ErrorCode::kEndpointError, detail), retryable_(retryable) {}
  bool retryable() const noexcept { return retryable_; }

 private:
  bool retryable_;
};

class ModelClient {
 public:
  virtual ~ModelClient() = default;
  // Returns the assistant message text. Must be safe to call concurrently.
  virtual std::string complete(const ChatRequest& request) = 0;
};

struct RetryPolicy {
  std::chrono::milliseconds initial_delay{500};
  std::chrono::milliseconds max_delay{8000};
  std::function<void(std::chrono::milliseconds)> sleep =
      [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };

  std::chrono::milliseconds delay_for(int attempt) const {
    auto d = initial_delay * (std::int64_t{1} << std::min(attempt, 20));
    return std::min(d, max_delay);
  }
};

inline std::string resolve_api_key(const EndpointConfig& endpoint) {
  if (endpoint.api_key_env_var.empty()) return {};
  const char* value = std::getenv(endpoint.api_key_env_var.c_str());
  if (value == nullptr || *value == '\0') {
    throw Error(ErrorCode::kAuthError,
                "environment variable " + endpoint.api_key_env_var +
                    " is not set");
  }
  return value;
}

inline ChatRequest make_chat_request(const EndpointConfig& endpoint,
                                     const std::string& prompt,
                                     std::string api_key) {
  return {endpoint.model_name, std::string(kSystemMessage), prompt,
          endpoint.temperature, std::move(api_key)};
}

namespace detail {

inline std::string request_with_retries(const EndpointConfig& endpoint,
                                        const ChatRequest& request,
                                        ModelClient& client,
                                        const RetryPolicy& retry) {
  for (int attempt = 0;; ++attempt) {
    try {
      return client.complete(request);
    } catch (const EndpointFailure& e) {
      if (!e.retryable()) throw;
      if (attempt >= endpoint.max_retries) {
        throw EndpointFailure(false, "giving up after " +
                                         std::to_string(attempt + 1) +
                                         " attempts: " + e.what());
      }
    }
    if (retry.sleep) retry.sleep(retry.delay_for(attempt));
  }
}

}  // namespace detail

// Sends one prompt, retrying transient failures with exponential backoff.
// AuthError is raised before any request when the key variable is unset.
inline std::string request_reasoning(const EndpointConfig& endpoint,
                                     const std::string& prompt,
                                     ModelClient& client,
                                     const RetryPolicy& retry = {}) {
  if (prompt.empty()) throw Error(ErrorCode::kInvalidConfig, "empty prompt");
  validate_endpoint(endpoint);
  const auto request = make_chat_request(endpoint, prompt, resolve_api_key(endpoint));
  return detail::request_with_retries(endpoint, request, client, retry);
}

// ---------------------------------------------------------------------------
// Verification

enum class Verdict { kKeep, kDropWrongAnswer, kDropMalformed };

inline std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kKeep: return "Keep";
    case Verdict::kDropWrongAnswer: return "DropWrongAnswer";
    case Verdict::kDropMalformed: return "DropMalformed";
  }
  return "";
}

// `parsed` is nullopt when the response failed format parsing.
inline Verdict verify_sample(const std::optional<ReasoningResponse>& parsed,
                             ObjectId target_id) {
  if (!parsed || !parsed->predicted_id) return Verdict::kDropMalformed;
  return *parsed->predicted_id == target_id ? Verdict::kKeep
                                            : Verdict::kDropWrongAnswer;
}

inline std::optional<ReasoningResponse> try_parse_response(std::string_view text,
                                                           std::string* error = nullptr) {
  try {
    return parse_reasoning_response(text);
  } catch (const Error& e) {
    if (error) *error = e.what();
    return std::nullopt;
  }
}

struct VerifiedSample {
  SceneLayout scene;
  std::string query;
  ReasoningResponse response;
  std::string raw_text;

  friend bool operator==(const VerifiedSample&, const VerifiedSample&) = default;
};

struct CollectionStats {
  std::size_t attempted = 0;
  std::size_t kept = 0;
  std::size_t dropped_wrong = 0;
  std::size_t dropped_malformed = 0;
  std::map<SpatialRelation, std::size_t> per_relation_kept;

  double retention() const {
    return attempted ? static_cast<double>(kept) / static_cast<double>(attempted)
                     : 0.0;
  }
  bool consistent() const {
    return attempted == kept + dropped_wrong + dropped_malformed;
  }
};

inline nlohmann::ordered_json stats_to_json(const CollectionStats& s) {
  nlohmann::ordered_json j;
  j["attempted"] = s.attempted;
  j["kept"] = s.kept;
  j["dropped_wrong"] = s.dropped_wrong;
  j["dropped_malformed"] = s.dropped_malformed;
  nlohmann::ordered_json per;
  for (auto r : kAllRelations) {
    auto it = s.per_relation_kept.find(r);
    per[std::string(relation_name(r))] = it == s.per_relation_kept.end() ? 0 : it->second;
  }
  j["per_relation_kept"] = per;
  return j;
}

struct SampleOutcome {
  std::string scene_id;
  Verdict verdict = Verdict::kDropMalformed;
  std::string reason;
};

struct CollectionResult {
  std::vector<VerifiedSample> kept;
  CollectionStats stats;
  std::vector<SampleOutcome> outcomes;
  std::size_t skipped_resumed = 0;
};

struct CollectionOptions {
  RetryPolicy retry;
  // When set, scene ids already listed in this file are skipped and every
  // finished sample is appended to it.
  std::optional<std::string> resume_path;
  std::function<void(const std::string&)> log;
};

inline std::set<std::string> read_resume_file(const std::string& path) {
  std::set<std::string> done;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) done.insert(line);
  }
  return done;
}

// Prompts, requests, parses and verifies every sample. Endpoint failures drop
// the sample as malformed; only configuration errors (bad endpoint config,
// missing or rejected credentials) abort the batch. Results merge in input
// order regardless of completion order.
inline CollectionResult run_collection(std::span<const SceneLayout> samples,
                                       const EndpointConfig& endpoint,
                                       ModelClient& client,
                                       const CollectionOptions& options = {}) {
  if (samples.empty()) throw Error(ErrorCode::kInvalidConfig, "no samples");
  validate_endpoint(endpoint);
  const std::string api_key = resolve_api_key(endpoint);

  std::set<std::string> done;
  std::ofstream resume_out;
  if (options.resume_path) {
    done = read_resume_file(*options.resume_path);
    resume_out.open(*options.resume_path, std::ios::app);
    if (!resume_out) {
      throw Error(ErrorCode::kIoError, "cannot open resume file " + *options.resume_path);
    }
  }

  struct Slot {
    bool skipped = false;
    SampleOutcome outcome;
    std::optional<VerifiedSample> sample;
  };
  std::vector<Slot> slots(samples.size());
  std::atomic<std::size_t> next{0};
  std::mutex io_mutex;
  std::exception_ptr fatal;
  std::atomic<bool> abort{false};

  auto log = [&](const std::string& msg) {
    if (!options.log) return;
    std::lock_guard lock(io_mutex);
    options.log(msg);
  };

  auto work = [&] {
    while (!abort.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= samples.size()) return;
      const SceneLayout& scene = samples[i];
      Slot& slot = slots[i];
      slot.outcome.scene_id = scene.scene_id;
      if (done.count(scene.scene_id)) {
        slot.skipped = true;
        continue;
      }
      try {
        const std::string prompt =
            build_collection_prompt(serialize_scene(scene.objects), scene.query);
        const auto request = make_chat_request(endpoint, prompt, api_key);
        std::string raw =
            detail::request_with_retries(endpoint, request, client, options.retry);
        std::string parse_error;
        auto parsed = try_parse_response(raw, &parse_error);
        slot.outcome.verdict = verify_sample(parsed, scene.target_id);
        if (slot.outcome.verdict == Verdict::kKeep) {
          slot.sample = VerifiedSample{scene, scene.query, *parsed, std::move(raw)};
        } else if (slot.outcome.verdict == Verdict::kDropWrongAnswer) {
          slot.outcome.reason = "predicted " + std::to_string(*parsed->predicted_id) +
                                ", expected " + std::to_string(scene.target_id);
        } else {
          slot.outcome.reason = parse_error;
        }
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kAuthError || e.code() == ErrorCode::kInvalidConfig) {
          std::lock_guard lock(io_mutex);
          if (!fatal) fatal = std::current_exception();
          abort = true;
          return;
        }
        slot.outcome.verdict = Verdict::kDropMalformed;
        slot.outcome.reason = e.what();
      } catch (const std::exception& e) {
        slot.outcome.verdict = Verdict::kDropMalformed;
        slot.outcome.reason = e.what();
      }
      if (slot.outcome.verdict != Verdict::kKeep) {
        log(scene.scene_id + ": " + std::string(verdict_name(slot.outcome.verdict)) +
            ": " + slot.outcome.reason);
      }
      if (resume_out.is_open()) {
        std::lock_guard lock(io_mutex);
        resume_out << scene.scene_id << '\n';
        resume_out.flush();
      }
    }
  };

  const auto workers = std::min<std::size_t>(
      static_cast<std::size_t>(endpoint.max_in_flight), samples.size());
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  CollectionResult result;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    auto& slot = slots[i];
    if (slot.skipped) {
      ++result.skipped_resumed;
      continue;
    }
    ++result.stats.attempted;
    switch (slot.outcome.verdict) {
      case Verdict::kKeep:
        ++result.stats.kept;
        ++result.stats.per_relation_kept[samples[i].relation];
        result.kept.push_back(std::move(*slot.sample));
        break;
      case Verdict::kDropWrongAnswer:
        ++result.stats.dropped_wrong;
        break;
      case Verdict::kDropMalformed:
        ++result.stats.dropped_malformed;
        break;
    }
    result.outcomes.push_back(std::move(slot.outcome));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Files

// The fine-tuning input pairs the inference-time prompt (scene text and
// query) with the verified response as the target sequence.
struct TrainingRecord {
  std::string prompt;
  std::string completion;
  SpatialRelation relation = SpatialRelation::kClosest;
  std::string scene_id;
  ObjectId target_id = 0;

  friend bool operator==(const TrainingRecord&, const TrainingRecord&) = default;
};

inline TrainingRecord make_training_record(const VerifiedSample& s) {
  return {build_inference_prompt(serialize_scene(s.scene.objects), s.query),
          s.raw_text, s.scene.relation, s.scene.scene_id, s.scene.target_id};
}

inline nlohmann::ordered_json training_record_to_json(const TrainingRecord& r) {
  nlohmann::ordered_json j;
  j["prompt"] = r.prompt;
  j["completion"] = r.completion;
  j["relation"] = relation_name(r.relation);
  j["scene_id"] = r.scene_id;
  j["target_id"] = r.target_id;
  return j;
}

inline TrainingRecord training_record_from_json(const nlohmann::json& j) {
  static const std::array<const char*, 5> kKeys = {"prompt", "completion", "relation",
                                                   "scene_id", "target_id"};
  if (!j.is_object() || j.size() != kKeys.size()) {
    throw Error(ErrorCode::kSchemaError,
                "training record needs exactly prompt, completion, relation, "
                "scene_id, target_id");
  }
  TrainingRecord r;
  r.prompt = j.at("prompt").get<std::string>();
  r.completion = j.at("completion").get<std::string>();
  auto relation = parse_relation(j.at("relation").get<std::string>());
  if (!relation) throw Error(ErrorCode::kSchemaError, "unknown relation");
  r.relation = *relation;
  r.scene_id = j.at("scene_id").get<std::string>();
  r.target_id = j.at("target_id").get<ObjectId>();
  return r;
}

inline std::size_t emit_training_records(std::span<const VerifiedSample> dataset,
                                         const std::string& path) {
  if (dataset.empty()) throw Error(ErrorCode::kInvalidConfig, "empty dataset");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  for (const auto& s : dataset) {
    out << training_record_to_json(make_training_record(s)).dump() << '\n';
  }
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path);
  return dataset.size();
}

template <typename Record, typename FromJson>
std::vector<Record> read_jsonl(const std::string& path, FromJson from_json) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::vector<Record> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(from_json(nlohmann::json::parse(line)));
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

inline std::vector<TrainingRecord> read_training_records(const std::string& path) {
  return read_jsonl<TrainingRecord>(path, training_record_from_json);
}

// Verified-sample file written by `collect`: the full layout plus the raw
// response, so records can be re-emitted without contacting the model.
inline nlohmann::ordered_json verified_sample_to_json(const VerifiedSample& s) {
  nlohmann::ordered_json j;
  j["scene_id"] = s.scene.scene_id;
  j["relation"] = relation_name(s.scene.relation);
  j["target_id"] = s.scene.target_id;
  j["query"] = s.query;
  j["response"] = s.raw_text;
  j["scene"] = layout_to_json(s.scene);
  return j;
}

inline VerifiedSample verified_sample_from_json(const nlohmann::json& j) {
  VerifiedSample s;
  s.scene = layout_from_json(j.at("scene"));
  s.query = j.at("query").get<std::string>();
  s.raw_text = j.at("response").get<std::string>();
  s.response = parse_reasoning_response(s.raw_text);
  if (s.response.predicted_id != s.scene.target_id) {
    throw Error(ErrorCode::kSchemaError,
                "verified sample " + s.scene.scene_id + " answers the wrong id");
  }
  return s;
}

inline std::vector<VerifiedSample> read_verified_samples(const std::string& path) {
  return read_jsonl<VerifiedSample>(path, verified_sample_from_json);
}

inline void write_verified_samples(std::span<const VerifiedSample> samples,
                                   const std::string& path, bool append = false) {
  std::ofstream out(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc));
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  for (const auto& s : samples) out << verified_sample_to_json(s).dump() << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

}  // namespace vgsynth
