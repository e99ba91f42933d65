// Copyright 2026 The spoofdet Authors
// SPDX-License-Identifier: Apache-2.0

#include "spoofdet/error.hpp"

namespace spoofdet {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedWav: return "MalformedWav";
        case ErrorCode::UnsupportedEncoding: return "UnsupportedEncoding";
        case ErrorCode::AllSilent: return "AllSilent";
        case ErrorCode::EmptyClass: return "EmptyClass";
        case ErrorCode::DuplicatePath: return "DuplicatePath";
        case ErrorCode::ClipTooShort: return "ClipTooShort";
        case ErrorCode::TooFewBins: return "TooFewBins";
        case ErrorCode::NoVoicedContent: return "NoVoicedContent";
        case ErrorCode::TooFewCycles: return "TooFewCycles";
        case ErrorCode::EmptySeries: return "EmptySeries";
        case ErrorCode::AllFeaturesDropped: return "AllFeaturesDropped";
        case ErrorCode::NoFeatureSurvives: return "NoFeatureSurvives";
        case ErrorCode::NotFitted: return "NotFitted";
        case ErrorCode::TooFewRows: return "TooFewRows";
        case ErrorCode::SingularCovariance: return "SingularCovariance";
        case ErrorCode::EmptyComponent: return "EmptyComponent";
        case ErrorCode::ClassTooSmall: return "ClassTooSmall";
        case ErrorCode::SchemaMismatch: return "SchemaMismatch";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::TrainingFailed: return "TrainingFailed";
        case ErrorCode::TooManySkips: return "TooManySkips";
        case ErrorCode::LockHeld: return "LockHeld";
        case ErrorCode::BadConfig: return "BadConfig";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace spoofdet
