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

#include "cdengine/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "cdengine/error.hpp"

namespace cdengine {

double entropy(const Distribution& d) { return d.entropy(); }

double confidence(const Distribution& d) { return d.confidence(); }

double hellinger(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::ShapeMismatch, "hellinger needs equal-length distributions (" +
                                              std::to_string(p.size()) + " vs " + std::to_string(q.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
    sum += d * d;
  }
  return std::min(std::sqrt(0.5 * sum), 1.0);
}

double hellinger(const Distribution& p, const Distribution& q) { return hellinger(p.probs(), q.probs()); }

std::string_view to_string(AnswerClass c) {
  switch (c) {
    case AnswerClass::Yes: return "yes";
    case AnswerClass::No: return "no";
    case AnswerClass::Other: return "other";
  }
  return "other";
}

std::string_view to_string(RevisionClass c) {
  switch (c) {
    case RevisionClass::UnchangedCorrect: return "unchanged_correct";
    case RevisionClass::UnchangedWrong: return "unchanged_wrong";
    case RevisionClass::ReviseCorrect: return "revise_correct";
    case RevisionClass::ReviseWrong: return "revise_wrong";
  }
  return "unchanged_wrong";
}

std::optional<AnswerClass> parse_gold(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "yes") return AnswerClass::Yes;
  if (lower == "no") return AnswerClass::No;
  return std::nullopt;
}

AnswerClass classify_token(TokenId token, const AnswerTokenMap& answers) {
  answers.validate();
  if (std::find(answers.yes.begin(), answers.yes.end(), token) != answers.yes.end()) return AnswerClass::Yes;
  if (std::find(answers.no.begin(), answers.no.end(), token) != answers.no.end()) return AnswerClass::No;
  return AnswerClass::Other;
}

AnswerClass classify_answer(const Distribution& d, const AnswerTokenMap& answers) {
  return classify_token(d.argmax(), answers);
}

RevisionClass classify_revision(AnswerClass original, AnswerClass calibrated, AnswerClass gold) {
  if (gold == AnswerClass::Other) throw Error(ErrorCode::InvalidGold, "gold answer must be yes or no");
  const bool correct = calibrated == gold;
  if (original == calibrated) return correct ? RevisionClass::UnchangedCorrect : RevisionClass::UnchangedWrong;
  return correct ? RevisionClass::ReviseCorrect : RevisionClass::ReviseWrong;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& x : a) common += b.count(x);
  const std::size_t unite = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(unite);
}

Histogram::Histogram(double lo, double hi, std::size_t bins) : lo_(lo), hi_(hi), counts_(bins, 0) {
  if (bins == 0 || !(hi > lo)) throw Error(ErrorCode::InvalidArgument, "histogram needs bins > 0 and hi > lo");
}

void Histogram::add(double value) {
  const auto n = counts_.size();
  const double pos = (value - lo_) / (hi_ - lo_) * static_cast<double>(n);
  std::size_t bin = 0;
  if (pos >= static_cast<double>(n)) {
    bin = n - 1;
  } else if (pos > 0.0) {
    bin = static_cast<std::size_t>(pos);
  }
  ++counts_[bin];
}

void Histogram::merge(const Histogram& other) {
  if (other.counts_.size() != counts_.size() || other.lo_ != lo_ || other.hi_ != hi_) {
    throw Error(ErrorCode::ShapeMismatch, "cannot merge histograms with different binning");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

std::uint64_t Histogram::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

}  // namespace cdengine
