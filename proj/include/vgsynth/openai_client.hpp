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

// HTTP backend speaking the OpenAI-compatible chat-completions schema.

#pragma once

#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "vgsynth/collect.hpp"
#include "vgsynth/error.hpp"

namespace vgsynth {

class ChatCompletionsClient : public ModelClient {
 public:
  // `base_url` is scheme://host[:port][/prefix]; requests go to
  // <prefix>/chat/completions.
  explicit ChatCompletionsClient(const std::string& base_url,
                                 double timeout_seconds = 120.0)
      : timeout_seconds_(timeout_seconds) {
    const auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos) {
      throw Error(ErrorCode::kInvalidConfig, "endpoint must include a scheme: " + base_url);
    }
    const auto path_begin = base_url.find('/', scheme_end + 3);
    origin_ = base_url.substr(0, path_begin);
    std::string prefix =
        path_begin == std::string::npos ? std::string() : base_url.substr(path_begin);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    path_ = prefix + "/chat/completions";
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (base_url.rfind("https://", 0) == 0) {
      throw Error(ErrorCode::kInvalidConfig, "built without TLS support: " + base_url);
    }
#endif
  }

  std::string complete(const ChatRequest& request) override {
    httplib::Client http(origin_);
    const auto secs = static_cast<time_t>(timeout_seconds_);
    const auto usecs = static_cast<time_t>((timeout_seconds_ - secs) * 1e6);
    http.set_connection_timeout(secs, usecs);
    http.set_read_timeout(secs, usecs);
    http.set_write_timeout(secs, usecs);
    httplib::Headers headers;
    if (!request.api_key.empty()) {
      headers.emplace("Authorization", "Bearer " + request.api_key);
    }
    auto res = http.Post(path_, headers, chat_request_body(request), "application/json");
    if (!res) {
      throw EndpointFailure(true, "transport error: " + httplib::to_string(res.error()));
    }
    if (res->status == 401 || res->status == 403) {
      throw Error(ErrorCode::kAuthError, "endpoint rejected credentials (HTTP " +
                                             std::to_string(res->status) + ")");
    }
    if (res->status == 429 || res->status == 408 || res->status >= 500) {
      throw EndpointFailure(true, "HTTP " + std::to_string(res->status));
    }
    if (res->status != 200) {
      throw EndpointFailure(false, "HTTP " + std::to_string(res->status) + ": " +
                                       res->body.substr(0, 200));
    }
    try {
      const auto body = nlohmann::json::parse(res->body);
      return body.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw EndpointFailure(false, std::string("unexpected response body: ") + e.what());
    }
  }

  const std::string& origin() const { return origin_; }
  const std::string& path() const { return path_; }

 private:
  std::string origin_;
  std::string path_;
  double timeout_seconds_;
};

}  // namespace vgsynth
