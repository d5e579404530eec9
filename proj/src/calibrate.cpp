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

#include "cdengine/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cdengine/error.hpp"
#include "cdengine/metrics.hpp"

namespace cdengine {

std::string_view to_string(FusionMode mode) {
  switch (mode) {
    case FusionMode::Single: return "single";
    case FusionMode::Naive: return "naive";
    case FusionMode::Weighted: return "weighted";
  }
  return "single";
}

std::string_view to_string(WeightMetric metric) {
  switch (metric) {
    case WeightMetric::Entropy: return "entropy";
    case WeightMetric::Confidence: return "confidence";
    case WeightMetric::Unconfidence: return "unconfidence";
    case WeightMetric::PDD: return "pdd";
  }
  return "entropy";
}

std::optional<WeightMetric> parse_weight_metric(std::string_view name) {
  for (auto m : {WeightMetric::Entropy, WeightMetric::Confidence, WeightMetric::Unconfidence, WeightMetric::PDD}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

void CalibrationConfig::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::InvalidAlpha, "alpha must be finite and >= 0, got " + std::to_string(alpha));
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::InvalidBeta, "beta must lie in [0, 1], got " + std::to_string(beta));
  }
  if (!std::isfinite(weight_scale) || weight_scale < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "weight_scale must be finite and >= 0");
  }
}

namespace {

// Dense view that keeps a densified copy alive when the input is sparse.
class DenseScores {
 public:
  explicit DenseScores(const LogitVector& logits)
      : owned_(logits.is_dense() ? std::nullopt : std::optional<LogitVector>(densify(logits))),
        values_(owned_ ? owned_->values() : logits.values()) {}

  std::span<const double> values() const { return values_; }

 private:
  std::optional<LogitVector> owned_;
  std::span<const double> values_;
};

void check_shapes(const LogitVector& original, std::span<const LogitVector> variants) {
  for (const auto& v : variants) {
    if (v.vocab_size() != original.vocab_size()) {
      throw Error(ErrorCode::ShapeMismatch, "variant vocab " + std::to_string(v.vocab_size()) +
                                                " differs from original vocab " +
                                                std::to_string(original.vocab_size()));
    }
  }
}

double difference(double original, double variant) {
  if (original == kNegInf || variant == kNegInf) return 0.0;
  return original - variant;
}

std::vector<DenseScores> dense_all(std::span<const LogitVector> variants) {
  std::vector<DenseScores> out;
  out.reserve(variants.size());
  for (const auto& v : variants) out.emplace_back(v);
  return out;
}

}  // namespace

LogitVector cd_single(const LogitVector& original, const LogitVector& variant, double alpha) {
  check_shapes(original, std::span(&variant, 1));
  const DenseScores o(original);
  const DenseScores v(variant);
  std::vector<double> out(original.vocab_size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    const double ot = o.values()[t];
    out[t] = ot == kNegInf ? kNegInf : ot + alpha * difference(ot, v.values()[t]);
  }
  return LogitVector::dense(std::move(out));
}

LogitVector fuse_naive(const LogitVector& original, std::span<const LogitVector> variants, double alpha,
                       bool normalize) {
  if (variants.empty()) throw Error(ErrorCode::EmptyVariantSet, "naive fusion needs at least one variant");
  check_shapes(original, variants);
  const DenseScores o(original);
  const auto vs = dense_all(variants);
  const std::size_t k = variants.size();
  const double coeff = normalize ? alpha / static_cast<double>(k) : alpha;

  std::vector<double> out(original.vocab_size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    const double ot = o.values()[t];
    if (ot == kNegInf) {
      out[t] = kNegInf;
      continue;
    }
    double acc = difference(ot, vs[0].values()[t]);
    for (std::size_t i = 1; i < vs.size(); ++i) acc += difference(ot, vs[i].values()[t]);
    // sum_i (o - v_i) = k*o - sum_i v_i; the literal form only subtracts one
    // copy of o, so remove the surplus (k-1)*o.
    double value = ot + coeff * acc;
    if (!normalize && k > 1) value -= coeff * static_cast<double>(k - 1) * ot;
    out[t] = value;
  }
  return LogitVector::dense(std::move(out));
}

LogitVector fuse_with_weights(const LogitVector& original, std::span<const LogitVector> variants,
                              std::span<const double> weights) {
  if (variants.empty()) throw Error(ErrorCode::EmptyVariantSet, "fusion needs at least one variant");
  if (weights.size() != variants.size()) {
    throw Error(ErrorCode::ShapeMismatch, "one weight per variant required");
  }
  check_shapes(original, variants);
  const DenseScores o(original);
  const auto vs = dense_all(variants);

  std::vector<double> out(original.vocab_size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    const double ot = o.values()[t];
    if (ot == kNegInf) {
      out[t] = kNegInf;
      continue;
    }
    double acc = weights[0] * difference(ot, vs[0].values()[t]);
    for (std::size_t i = 1; i < vs.size(); ++i) acc += weights[i] * difference(ot, vs[i].values()[t]);
    out[t] = ot + acc;
  }
  return LogitVector::dense(std::move(out));
}

double fusion_weight(const Distribution& original, const Distribution& variant, WeightMetric metric) {
  switch (metric) {
    case WeightMetric::Entropy: return entropy(variant);
    case WeightMetric::Confidence: return confidence(variant);
    case WeightMetric::Unconfidence: return 1.0 / confidence(variant);
    case WeightMetric::PDD: return hellinger(original, variant);
  }
  return 0.0;
}

WeightedFusion fuse_weighted(const LogitVector& original, std::span<const LogitVector> variants,
                             WeightMetric metric, double scale) {
  if (variants.empty()) throw Error(ErrorCode::EmptyVariantSet, "weighted fusion needs at least one variant");
  check_shapes(original, variants);
  const Distribution p_original = softmax(original);
  std::vector<double> weights;
  weights.reserve(variants.size());
  for (const auto& v : variants) weights.push_back(scale * fusion_weight(p_original, softmax(v), metric));
  auto logits = fuse_with_weights(original, variants, weights);
  return WeightedFusion{std::move(logits), std::move(weights)};
}

std::vector<TokenId> plausible_tokens(const Distribution& raw, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::InvalidBeta, "beta must lie in [0, 1], got " + std::to_string(beta));
  }
  const double threshold = beta * raw.confidence();
  std::vector<TokenId> survivors;
  for (std::size_t t = 0; t < raw.size(); ++t) {
    if (raw[t] >= threshold) survivors.push_back(static_cast<TokenId>(t));
  }
  return survivors;
}

CalibrationOutput apply_plausibility(const LogitVector& raw, const LogitVector& calibrated, double beta) {
  if (raw.vocab_size() != calibrated.vocab_size()) {
    throw Error(ErrorCode::ShapeMismatch, "raw and calibrated logits differ in vocab size");
  }
  auto survivors = plausible_tokens(softmax(raw), beta);

  const DenseScores scores(calibrated);
  double max_score = kNegInf;
  for (TokenId t : survivors) max_score = std::max(max_score, scores.values()[t]);
  if (max_score == kNegInf) {
    throw Error(ErrorCode::InvalidLogits, "every plausible token has a -inf calibrated score");
  }
  if (!std::isfinite(max_score)) throw Error(ErrorCode::InvalidLogits, "calibrated scores overflowed");

  std::vector<double> probs(calibrated.vocab_size(), 0.0);
  double total = 0.0;
  for (TokenId t : survivors) {
    probs[t] = std::exp(scores.values()[t] - max_score);
    total += probs[t];
  }
  for (TokenId t : survivors) probs[t] /= total;
  return CalibrationOutput{Distribution::from_probs(std::move(probs)), {}, std::move(survivors)};
}

CalibrationOutput calibrate(const CalibrationInput& input) {
  const auto& cfg = input.config;
  cfg.validate();
  if (input.variants.empty()) throw Error(ErrorCode::EmptyVariantSet, "calibration needs at least one variant");

  std::vector<LogitVector> variants;
  variants.reserve(input.variants.size());
  for (const auto& [kind, logits] : input.variants) variants.push_back(logits);

  std::vector<double> weights;
  LogitVector calibrated = input.original;
  switch (cfg.fusion) {
    case FusionMode::Single:
      if (variants.size() != 1) {
        throw Error(ErrorCode::InvalidArgument, "single-sample calibration takes exactly one variant, got " +
                                                    std::to_string(variants.size()));
      }
      calibrated = cd_single(input.original, variants.front(), cfg.alpha);
      weights = {cfg.alpha};
      break;
    case FusionMode::Naive: {
      calibrated = fuse_naive(input.original, variants, cfg.alpha, cfg.normalize_naive);
      const double w = cfg.normalize_naive ? cfg.alpha / static_cast<double>(variants.size()) : cfg.alpha;
      weights.assign(variants.size(), w);
      break;
    }
    case FusionMode::Weighted: {
      auto fused = fuse_weighted(input.original, variants, cfg.metric, cfg.weight_scale);
      calibrated = std::move(fused.logits);
      weights = std::move(fused.weights);
      break;
    }
  }

  auto out = apply_plausibility(input.original, calibrated, cfg.beta);
  out.weights_used = std::move(weights);
  return out;
}

}  // namespace cdengine
