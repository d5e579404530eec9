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

#include "cdengine/logits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "cdengine/error.hpp"

namespace cdengine {
namespace {

bool is_admissible_score(double v) { return !std::isnan(v) && v != std::numeric_limits<double>::infinity(); }

void check_vocab(std::size_t vocab_size) {
  if (vocab_size < 2) {
    throw Error(ErrorCode::InvalidVocab,
                "vocab_size must be at least 2, got " + std::to_string(vocab_size));
  }
}

}  // namespace

LogitVector LogitVector::dense(std::vector<double> values) {
  check_vocab(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!is_admissible_score(values[i])) {
      throw Error(ErrorCode::InvalidLogits, "non-finite score at token " + std::to_string(i));
    }
  }
  const std::size_t n = values.size();
  return LogitVector(n, std::move(values));
}

LogitVector LogitVector::sparse(std::size_t vocab_size, std::vector<TokenId> ids,
                                std::vector<double> values, double floor) {
  check_vocab(vocab_size);
  if (ids.size() != values.size()) {
    throw Error(ErrorCode::InvalidLogits, "sparse ids and values differ in length");
  }
  if (!is_admissible_score(floor)) {
    throw Error(ErrorCode::InvalidLogits, "sparse floor must be finite or -inf");
  }
  std::unordered_set<TokenId> seen;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= vocab_size) {
      throw Error(ErrorCode::InvalidLogits, "token id " + std::to_string(ids[i]) +
                                                " out of range for vocab " + std::to_string(vocab_size));
    }
    if (!seen.insert(ids[i]).second) {
      throw Error(ErrorCode::InvalidLogits, "duplicate token id " + std::to_string(ids[i]));
    }
    if (!is_admissible_score(values[i])) {
      throw Error(ErrorCode::InvalidLogits, "non-finite score for token " + std::to_string(ids[i]));
    }
  }
  return LogitVector(vocab_size, Sparse{std::move(ids), std::move(values), floor});
}

std::span<const double> LogitVector::values() const {
  const auto* dense = std::get_if<std::vector<double>>(&storage_);
  if (dense == nullptr) {
    throw Error(ErrorCode::InvalidArgument, "values() called on a sparse logit vector");
  }
  return *dense;
}

const LogitVector::Sparse& LogitVector::sparse_entries() const {
  const auto* sparse = std::get_if<Sparse>(&storage_);
  if (sparse == nullptr) {
    throw Error(ErrorCode::InvalidArgument, "sparse_entries() called on a dense logit vector");
  }
  return *sparse;
}

double LogitVector::at(TokenId token) const {
  if (token >= vocab_size_) {
    throw Error(ErrorCode::InvalidArgument, "token id out of range");
  }
  if (const auto* dense = std::get_if<std::vector<double>>(&storage_)) {
    return (*dense)[token];
  }
  const auto& sparse = std::get<Sparse>(storage_);
  for (std::size_t i = 0; i < sparse.ids.size(); ++i) {
    if (sparse.ids[i] == token) return sparse.values[i];
  }
  return sparse.floor;
}

LogitVector densify(const LogitVector& logits) {
  if (logits.is_dense()) return logits;
  const auto& sparse = logits.sparse_entries();
  std::vector<double> out(logits.vocab_size(), sparse.floor);
  for (std::size_t i = 0; i < sparse.ids.size(); ++i) {
    out[sparse.ids[i]] = sparse.values[i];
  }
  return LogitVector::dense(std::move(out));
}

TokenId argmax(std::span<const double> scores) {
  // std::max_element returns the first of equal maxima.
  const auto it = std::max_element(scores.begin(), scores.end());
  return static_cast<TokenId>(std::distance(scores.begin(), it));
}

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  double h = 0.0;
  std::size_t support = 0;
  bool flat = true;
  double first = 0.0;
  for (double p : probs_) {
    if (p <= 0.0) continue;
    h -= p * std::log(p);
    if (support++ == 0) first = p;
    flat = flat && p == first;
  }
  // Uniform over k tokens: ln k exactly rather than a rounded sum.
  if (flat) h = std::log(static_cast<double>(support));
  const double upper = std::log(static_cast<double>(probs_.size()));
  entropy_ = std::clamp(h, 0.0, upper);
  argmax_ = cdengine::argmax(probs_);
  confidence_ = probs_[argmax_];
}

Distribution Distribution::from_probs(std::vector<double> probs) {
  check_vocab(probs.size());
  double total = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      throw Error(ErrorCode::InvalidLogits, "probabilities must be finite and non-negative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidLogits, "probabilities sum to " + std::to_string(total));
  }
  return Distribution(std::move(probs));
}

Distribution softmax(std::span<const double> scores) {
  check_vocab(scores.size());
  double max_score = kNegInf;
  for (double s : scores) {
    if (!is_admissible_score(s)) {
      throw Error(ErrorCode::InvalidLogits, "NaN or +inf score");
    }
    max_score = std::max(max_score, s);
  }
  if (max_score == kNegInf) {
    throw Error(ErrorCode::InvalidLogits, "every score is -inf");
  }
  std::vector<double> probs(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    probs[i] = std::exp(scores[i] - max_score);
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return Distribution(std::move(probs));
}

Distribution softmax(const LogitVector& logits) {
  if (logits.is_dense()) return softmax(logits.values());
  const LogitVector dense = densify(logits);
  return softmax(dense.values());
}

}  // namespace cdengine
