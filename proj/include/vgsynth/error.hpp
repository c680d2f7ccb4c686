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

#include <stdexcept>
#include <string>
#include <string_view>

namespace vgsynth {

enum class ErrorCode {
  kInvalidGeometry,
  kUnknownClass,
  kInvalidJitter,
  kInvalidConfig,
  kPlacementExhausted,
  kMissingAnchor,
  kAmbiguousRelation,
  kMissingAnchorClass,
  kUnfilledPlaceholder,
  kEmptyScene,
  kDuplicateId,
  kMalformedLine,
  kMissingStage,
  kNoAnswerFound,
  kEndpointError,
  kAuthError,
  kClassNotInScene,
  kMissingPrediction,
  kDuplicatePrediction,
  kMissingSplitLabel,
  kUnknownProposalId,
  kSchemaError,
  kIoError,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidGeometry: return "InvalidGeometry";
    case ErrorCode::kUnknownClass: return "UnknownClass";
    case ErrorCode::kInvalidJitter: return "InvalidJitter";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kPlacementExhausted: return "PlacementExhausted";
    case ErrorCode::kMissingAnchor: return "MissingAnchor";
    case ErrorCode::kAmbiguousRelation: return "AmbiguousRelation";
    case ErrorCode::kMissingAnchorClass: return "MissingAnchorClass";
    case ErrorCode::kUnfilledPlaceholder: return "UnfilledPlaceholder";
    case ErrorCode::kEmptyScene: return "EmptyScene";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kMissingStage: return "MissingStage";
    case ErrorCode::kNoAnswerFound: return "NoAnswerFound";
    case ErrorCode::kEndpointError: return "EndpointError";
    case ErrorCode::kAuthError: return "AuthError";
    case ErrorCode::kClassNotInScene: return "ClassNotInScene";
    case ErrorCode::kMissingPrediction: return "MissingPrediction";
    case ErrorCode::kDuplicatePrediction: return "DuplicatePrediction";
    case ErrorCode::kMissingSplitLabel: return "MissingSplitLabel";
    case ErrorCode::kUnknownProposalId: return "UnknownProposalId";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

// Every library failure is reported through this type; code() identifies the
// failure class and what() carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse errors that point at a specific input line.
class MalformedLineError : public Error {
 public:
  MalformedLineError(std::size_t line, const std::string& detail)
      : Error(ErrorCode::kMalformedLine,
              "line " + std::to_string(line) + ": " + detail),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class MissingStageError : public Error {
 public:
  explicit MissingStageError(std::string stage)
      : Error(ErrorCode::kMissingStage, stage), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace vgsynth
