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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cdengine {

enum class ErrorCode {
  InvalidLogits,
  InvalidVocab,
  ShapeMismatch,
  EmptyVariantSet,
  InvalidBeta,
  InvalidAlpha,
  StepOutOfRange,
  RatioTooLarge,
  InvalidImage,
  InvalidAnswerMap,
  InvalidGold,
  RecordFormatError,
  DatasetFormatError,
  EmptyDataset,
  MissingVariant,
  AmbiguousVariant,
  MissingAnswerMap,
  ImageFormatError,
  IoError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// True for errors caused by the content of input data (records, datasets,
/// images) rather than by how the engine was invoked.
bool is_data_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// Message without the error-code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

/// Raised when a provider cannot serve a (sample_id, variant kind) pair.
class MissingVariantError : public Error {
 public:
  MissingVariantError(std::string sample_id, std::string kind);

  const std::string& sample_id() const noexcept { return sample_id_; }
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string sample_id_;
  std::string kind_;
};

}  // namespace cdengine
