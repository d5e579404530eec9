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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cdengine/record_io.hpp"
#include "cdengine/variant.hpp"

namespace cdengine {

/// Source of first-token logits for (sample, variant) pairs. Implementations
/// are deterministic and safe for concurrent calls.
class LogitProvider {
 public:
  virtual ~LogitProvider() = default;

  virtual LogitVector logits(const std::string& sample_id, const VariantKind& variant) const = 0;
  virtual AnswerTokenMap answer_tokens(const std::string& sample_id) const = 0;
};

/// Serves logits from a record file.
///
/// A query matches a record with identical kind and parameters; failing that,
/// the sole record of the same kind for the sample. Several same-kind records
/// with none matching exactly is AmbiguousVariant; none at all is
/// MissingVariant.
class ReplayProvider : public LogitProvider {
 public:
  explicit ReplayProvider(RecordFile file);
  static ReplayProvider from_file(const std::filesystem::path& path);

  LogitVector logits(const std::string& sample_id, const VariantKind& variant) const override;
  /// Per-record override on the sample's records, else the file header.
  AnswerTokenMap answer_tokens(const std::string& sample_id) const override;

  const RecordFile& file() const noexcept { return file_; }
  /// Sample ids in order of first appearance.
  const std::vector<std::string>& sample_ids() const noexcept { return order_; }

 private:
  RecordFile file_;
  std::map<std::string, std::vector<std::size_t>> by_sample_;
  std::vector<std::string> order_;
};

/// Behaviour of one variant kind in the mock.
struct MockVariantKnobs {
  /// Logits are divided by this; values above 1 raise entropy.
  double temperature = 1.0;
  /// Std-dev of extra per-variant Gaussian noise.
  double jitter = 0.0;
  std::optional<TokenId> prior_token;
  double prior_bias = 0.0;

  bool operator==(const MockVariantKnobs&) const = default;
};

/// Configuration of the synthetic logit generator. For token t of sample s
/// under variant v:
///
///   base_t = level_t + base_scale * z(s, "base", t)
///   l_t    = (base_t + offset[s][v][t] + jitter_v * z(s, v, t)) / temperature_v
///            + (t == prior_token_v ? prior_bias_v : 0)
///
/// where level_t is answer_level for yes/no tokens and background_level for
/// the rest, and z are seeded standard normals.
struct MockScenario {
  std::size_t vocab_size = 32;
  AnswerTokenMap answers{{0}, {1}};
  double answer_level = 2.0;
  double background_level = -2.0;
  double base_scale = 1.0;
  std::map<VariantTag, MockVariantKnobs> knobs;
  /// Scripted additive offsets: sample id -> variant kind -> token -> offset.
  std::map<std::string, std::map<VariantTag, std::map<TokenId, double>>> offsets;

  /// Knobs that loosely mimic real variants: noisy images raise entropy, the
  /// no-image variant leans towards "yes".
  static MockScenario defaults();
  static MockScenario from_json(const nlohmann::json& j);
  static MockScenario load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  bool operator==(const MockScenario&) const = default;
};

/// Standard normal derived from (seed, key, index) alone, independent of call
/// order.
double keyed_normal(std::uint64_t seed, std::string_view key, std::uint64_t index);

LogitVector mock_logits(const std::string& sample_id, const VariantKind& variant, std::uint64_t seed,
                        const MockScenario& scenario);

class MockProvider : public LogitProvider {
 public:
  MockProvider(MockScenario scenario, std::uint64_t seed);

  LogitVector logits(const std::string& sample_id, const VariantKind& variant) const override;
  AnswerTokenMap answer_tokens(const std::string& sample_id) const override;

  const MockScenario& scenario() const noexcept { return scenario_; }

 private:
  MockScenario scenario_;
  std::uint64_t seed_;
};

}  // namespace cdengine
