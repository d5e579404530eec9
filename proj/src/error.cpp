// Copyright 2026 The cd-engine Authors
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

#include "cdengine/error.hpp"

namespace cdengine {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidLogits: return "InvalidLogits";
    case ErrorCode::InvalidVocab: return "InvalidVocab";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyVariantSet: return "EmptyVariantSet";
    case ErrorCode::InvalidBeta: return "InvalidBeta";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::StepOutOfRange: return "StepOutOfRange";
    case ErrorCode::RatioTooLarge: return "RatioTooLarge";
    case ErrorCode::InvalidImage: return "InvalidImage";
    case ErrorCode::InvalidAnswerMap: return "InvalidAnswerMap";
    case ErrorCode::InvalidGold: return "InvalidGold";
    case ErrorCode::RecordFormatError: return "RecordFormatError";
    case ErrorCode::DatasetFormatError: return "DatasetFormatError";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::MissingVariant: return "MissingVariant";
    case ErrorCode::AmbiguousVariant: return "AmbiguousVariant";
    case ErrorCode::MissingAnswerMap: return "MissingAnswerMap";
    case ErrorCode::ImageFormatError: return "ImageFormatError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool is_data_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidLogits:
    case ErrorCode::InvalidVocab:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::InvalidAnswerMap:
    case ErrorCode::InvalidGold:
    case ErrorCode::RecordFormatError:
    case ErrorCode::DatasetFormatError:
    case ErrorCode::EmptyDataset:
    case ErrorCode::MissingVariant:
    case ErrorCode::AmbiguousVariant:
    case ErrorCode::MissingAnswerMap:
    case ErrorCode::ImageFormatError:
    case ErrorCode::IoError:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

MissingVariantError::MissingVariantError(std::string sample_id, std::string kind)
    : Error(ErrorCode::MissingVariant,
            "no record for (" + sample_id + ", " + kind + ")"),
      sample_id_(std::move(sample_id)),
      kind_(std::move(kind)) {}

}  // namespace cdengine
