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

// Hand-rolled generators for property tests. Everything is driven by one
// seeded engine so a failing case is reproducible from the printed seed.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "cdengine/logits.hpp"

namespace cdengine::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& engine() { return rng_; }

  std::size_t size(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  // Mixed-scale scores: mostly moderate, sometimes large, occasionally -inf,
  // with deliberate duplicates so ties get exercised.
  std::vector<double> scores(std::size_t vocab, double neg_inf_rate = 0.0) {
    std::vector<double> out(vocab);
    const double scale = chance(0.2) ? 40.0 : 4.0;
    for (auto& x : out) x = real(-scale, scale);
    if (vocab > 2 && chance(0.3)) out[size(0, vocab - 1)] = out[0];
    bool any_finite = false;
    for (auto& x : out) {
      if (chance(neg_inf_rate)) x = kNegInf;
      any_finite = any_finite || x != kNegInf;
    }
    if (!any_finite) out[0] = 0.0;
    return out;
  }

  LogitVector logits(std::size_t vocab, double neg_inf_rate = 0.0) { return LogitVector::dense(scores(vocab, neg_inf_rate)); }

  LogitVector sparse_logits(std::size_t vocab) {
    std::vector<TokenId> ids(vocab);
    for (std::size_t i = 0; i < vocab; ++i) ids[i] = static_cast<TokenId>(i);
    std::shuffle(ids.begin(), ids.end(), rng_);
    ids.resize(size(1, vocab - 1));
    std::vector<double> values(ids.size());
    for (auto& v : values) v = real(-5.0, 5.0);
    const double floor = chance(0.2) ? kNegInf : real(-12.0, -6.0);
    return LogitVector::sparse(vocab, std::move(ids), std::move(values), floor);
  }

  std::vector<double> probs(std::size_t vocab) {
    std::vector<double> out(vocab);
    double total = 0.0;
    for (auto& x : out) {
      x = chance(0.15) ? 0.0 : real(0.0, 1.0);
      total += x;
    }
    if (total == 0.0) {
      out[0] = 1.0;
      return out;
    }
    for (auto& x : out) x /= total;
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace cdengine::testing
