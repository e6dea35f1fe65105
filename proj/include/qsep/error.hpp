// Copyright 2026 The qsep-mc Authors
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

namespace qsep {

enum class ErrorCode {
    InvalidArgument,
    NotHermitian,
    NoConvergence,
    SingularInput,
    DimensionMismatch,
    IllConditionedBlock,
    RankCollapse,
    UnsupportedDimensions,
    ConfigMismatch,
    EmptyRun,
};

constexpr std::string_view error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::SingularInput: return "SingularInput";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::IllConditionedBlock: return "IllConditionedBlock";
        case ErrorCode::RankCollapse: return "RankCollapse";
        case ErrorCode::UnsupportedDimensions: return "UnsupportedDimensions";
        case ErrorCode::ConfigMismatch: return "ConfigMismatch";
        case ErrorCode::EmptyRun: return "EmptyRun";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// message is prefixed with the code name so it can be printed verbatim.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace qsep
