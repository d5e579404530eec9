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

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdengine/logits.hpp"
#include "cdengine/variant.hpp"

namespace cdengine {

/// Shannon entropy in nats, with 0 * ln 0 taken as 0.
double entropy(const Distribution& d);

/// Largest probability.
double confidence(const Distribution& d);

/// Normalized Hellinger distance (1/sqrt 2) * ||sqrt p - sqrt q||_2, in [0, 1].
double hellinger(std::span<const double> p, std::span<const double> q);
double hellinger(const Distribution& p, const Distribution& q);

enum class AnswerClass { Yes, No, Other };

enum class RevisionClass { UnchangedCorrect, UnchangedWrong, ReviseCorrect, ReviseWrong };

std::string_view to_string(AnswerClass c);
std::string_view to_string(RevisionClass c);
/// Accepts "yes"/"no" in any letter case.
std::optional<AnswerClass> parse_gold(std::string_view text);

AnswerClass classify_token(TokenId token, const AnswerTokenMap& answers);

/// Maps the argmax token (lowest id on ties) to Yes / No / Other.
AnswerClass classify_answer(const Distribution& d, const AnswerTokenMap& answers);

/// An Other answer is never correct. Throws InvalidGold when gold is Other.
RevisionClass classify_revision(AnswerClass original, AnswerClass calibrated, AnswerClass gold);

/// |a ∩ b| / |a ∪ b|; two empty sets are identical and score 1.
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

/// Fixed-width bins over [lo, hi]. Values outside the range land in the edge
/// bins; hi itself belongs to the last bin.
class Histogram {
 public:
  Histogram(double lo, double hi, std::size_t bins);

  void add(double value);
  void merge(const Histogram& other);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  std::uint64_t total() const noexcept;

  bool operator==(const Histogram&) const = default;

 private:
  double lo_;
  double hi_;
  std::vector<std::uint64_t> counts_;
};

}  // namespace cdengine
