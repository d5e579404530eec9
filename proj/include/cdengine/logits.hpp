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

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <variant>
#include <vector>

namespace cdengine {

using TokenId = std::uint32_t;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Pre-softmax scores over a vocabulary for a single decoding step.
///
/// Dense vectors hold one score per token. Sparse vectors list a subset of
/// tokens and give every unlisted token the same `floor` score, which may be
/// -inf to mean "impossible". Scores may be finite or -inf; NaN and +inf are
/// rejected.
class LogitVector {
 public:
  struct Sparse {
    std::vector<TokenId> ids;
    std::vector<double> values;
    double floor = kNegInf;

    bool operator==(const Sparse&) const = default;
  };

  static LogitVector dense(std::vector<double> values);
  static LogitVector sparse(std::size_t vocab_size, std::vector<TokenId> ids,
                            std::vector<double> values, double floor);

  std::size_t vocab_size() const noexcept { return vocab_size_; }
  bool is_dense() const noexcept { return std::holds_alternative<std::vector<double>>(storage_); }

  /// Requires is_dense().
  std::span<const double> values() const;
  /// Requires !is_dense().
  const Sparse& sparse_entries() const;

  double at(TokenId token) const;

  bool operator==(const LogitVector&) const = default;

 private:
  LogitVector(std::size_t vocab_size, std::variant<std::vector<double>, Sparse> storage)
      : vocab_size_(vocab_size), storage_(std::move(storage)) {}

  std::size_t vocab_size_;
  std::variant<std::vector<double>, Sparse> storage_;
};

/// Dense copy of `logits`; unlisted sparse tokens take the floor score.
LogitVector densify(const LogitVector& logits);

/// Index of the largest score; ties go to the lowest token id.
TokenId argmax(std::span<const double> scores);

/// A normalized probability vector with its entropy (nats) and confidence
/// (max probability) computed once at construction.
class Distribution {
 public:
  /// Validates non-negativity and that the mass sums to 1 within 1e-9.
  static Distribution from_probs(std::vector<double> probs);

  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

  double entropy() const noexcept { return entropy_; }
  double confidence() const noexcept { return confidence_; }
  TokenId argmax() const noexcept { return argmax_; }

  bool operator==(const Distribution& other) const { return probs_ == other.probs_; }

 private:
  friend Distribution softmax(std::span<const double> scores);
  explicit Distribution(std::vector<double> probs);

  std::vector<double> probs_;
  double entropy_ = 0.0;
  double confidence_ = 0.0;
  TokenId argmax_ = 0;
};

/// Numerically stable softmax (max subtraction). Sparse input is densified
/// first, so both forms give bit-identical results.
Distribution softmax(const LogitVector& logits);
Distribution softmax(std::span<const double> scores);

}  // namespace cdengine
