// Copyright 2026 The idsens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
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

namespace idsens {

enum class ErrorCode {
    // data ingestion / preprocessing
    MissingColumn,
    MalformedRow,
    EmptyInput,
    UnknownClassName,
    InvalidSchema,
    FeatureMismatch,
    UnknownFeature,
    // analysis
    ZeroClass,
    // models
    ArityMismatch,
    InvalidArgument,
    // overlap correction
    LengthMismatch,
    AlignmentMismatch,
    NotFitted,
    NotResolved,
    // evaluation
    ShapeMismatch,
    EmptyMatrix,
    SchemaMismatch,
    // persistence
    UnsupportedVersion,
    CorruptArtifact,
    Io,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::UnknownClassName: return "UnknownClassName";
    case ErrorCode::InvalidSchema: return "InvalidSchema";
    case ErrorCode::FeatureMismatch: return "FeatureMismatch";
    case ErrorCode::UnknownFeature: return "UnknownFeature";
    case ErrorCode::ZeroClass: return "ZeroClass";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::AlignmentMismatch: return "AlignmentMismatch";
    case ErrorCode::NotFitted: return "NotFitted";
    case ErrorCode::NotResolved: return "NotResolved";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::CorruptArtifact: return "CorruptArtifact";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

/// Single exception type for the library; `code()` tells callers what failed.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace idsens
