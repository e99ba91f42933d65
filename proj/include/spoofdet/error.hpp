// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace spoofdet {

enum class ErrorCode {
    MalformedWav,
    UnsupportedEncoding,
    AllSilent,
    EmptyClass,
    DuplicatePath,
    ClipTooShort,
    TooFewBins,
    NoVoicedContent,
    TooFewCycles,
    EmptySeries,
    AllFeaturesDropped,
    NoFeatureSurvives,
    NotFitted,
    TooFewRows,
    SingularCovariance,
    EmptyComponent,
    ClassTooSmall,
    SchemaMismatch,
    SingleClass,
    LengthMismatch,
    TrainingFailed,
    TooManySkips,
    LockHeld,
    BadConfig,
    IoError,
};

const char* error_code_name(ErrorCode code);

// All recoverable failures surface as Error; the code identifies the
// condition so callers can branch without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
          code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace spoofdet
