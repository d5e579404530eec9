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

#include <optional>
#include <string_view>

namespace cdengine {

enum class FusionMode { Single, Naive, Weighted };

/// Per-variant weight used by weighted fusion.
enum class WeightMetric { Entropy, Confidence, Unconfidence, PDD };

std::string_view to_string(FusionMode mode);
std::string_view to_string(WeightMetric metric);
std::optional<WeightMetric> parse_weight_metric(std::string_view name);

struct CalibrationConfig {
  /// Contrast strength for single-sample and naive fusion.
  double alpha = 1.0;
  /// Plausibility threshold relative to the original maximum probability.
  double beta = 0.2;
  FusionMode fusion = FusionMode::Single;
  /// Only consulted when fusion == Weighted.
  WeightMetric metric = WeightMetric::Entropy;
  /// Naive fusion subtracts alpha/k per variant instead of alpha.
  bool normalize_naive = false;
  /// Global multiplier applied to metric weights in weighted fusion.
  double weight_scale = 1.0;

  /// Throws InvalidAlpha / InvalidBeta / InvalidArgument.
  void validate() const;

  bool operator==(const CalibrationConfig&) const = default;
};

}  // namespace cdengine
