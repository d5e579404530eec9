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

#include <span>
#include <utility>
#include <vector>

#include "cdengine/calibration_config.hpp"
#include "cdengine/logits.hpp"
#include "cdengine/variant.hpp"

namespace cdengine {

// All transforms below work on densified scores and return dense vectors.
//
// -inf handling: a -inf original score stays -inf, and any (original - variant)
// difference where either side is -inf contributes nothing. Sparse records
// therefore never turn an unlisted token into a finite or +inf score.

/// (1 + alpha) * original - alpha * variant, evaluated as
/// original + alpha * (original - variant).
LogitVector cd_single(const LogitVector& original, const LogitVector& variant, double alpha);

/// Equal-weight fusion. normalize == false applies the literal
/// (1 + alpha) * original - alpha * sum_i variant_i; normalize == true
/// replaces alpha by alpha / k in the subtracted sum.
LogitVector fuse_naive(const LogitVector& original, std::span<const LogitVector> variants, double alpha,
                       bool normalize);

/// original + sum_i weights[i] * (original - variants[i]).
LogitVector fuse_with_weights(const LogitVector& original, std::span<const LogitVector> variants,
                              std::span<const double> weights);

/// Weight for one variant under `metric`: entropy (nats), confidence,
/// 1 / confidence, or Hellinger distance to the original distribution.
double fusion_weight(const Distribution& original, const Distribution& variant, WeightMetric metric);

struct WeightedFusion {
  LogitVector logits;
  std::vector<double> weights;
};

/// Metric-weighted fusion; weights are computed from each variant's softmax
/// and multiplied by `scale`.
WeightedFusion fuse_weighted(const LogitVector& original, std::span<const LogitVector> variants,
                             WeightMetric metric, double scale = 1.0);

struct CalibrationOutput {
  Distribution distribution;
  std::vector<double> weights_used;
  /// Sorted token ids that passed the plausibility constraint.
  std::vector<TokenId> survivors;
};

/// Tokens whose probability under `raw` is at least beta times the maximum.
std::vector<TokenId> plausible_tokens(const Distribution& raw, double beta);

/// Restricts softmax(calibrated) to tokens that are plausible under the
/// ORIGINAL logits `raw`; every other token gets probability exactly 0.
CalibrationOutput apply_plausibility(const LogitVector& raw, const LogitVector& calibrated, double beta);

struct CalibrationInput {
  LogitVector original;
  std::vector<std::pair<VariantKind, LogitVector>> variants;
  CalibrationConfig config;
};

/// Runs the configured fusion and then the plausibility constraint.
CalibrationOutput calibrate(const CalibrationInput& input);

}  // namespace cdengine
