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

#include "cdengine/provider.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "cdengine/error.hpp"

namespace cdengine {

ReplayProvider::ReplayProvider(RecordFile file) : file_(std::move(file)) {
  for (std::size_t i = 0; i < file_.records.size(); ++i) {
    const auto& id = file_.records[i].sample_id;
    auto [it, inserted] = by_sample_.try_emplace(id);
    if (inserted) order_.push_back(id);
    it->second.push_back(i);
  }
}

ReplayProvider ReplayProvider::from_file(const std::filesystem::path& path) {
  return ReplayProvider(read_records(path));
}

LogitVector ReplayProvider::logits(const std::string& sample_id, const VariantKind& variant) const {
  const VariantTag tag = tag_of(variant);
  const auto it = by_sample_.find(sample_id);
  if (it == by_sample_.end()) throw MissingVariantError(sample_id, std::string(display_name(tag)));

  const std::string key = variant_key(variant);
  const VariantRecord* same_kind = nullptr;
  std::size_t same_kind_count = 0;
  for (std::size_t index : it->second) {
    const auto& record = file_.records[index];
    if (tag_of(record.variant) != tag) continue;
    if (variant_key(record.variant) == key) return record.logits;
    same_kind = &record;
    ++same_kind_count;
  }
  if (same_kind_count == 1) return same_kind->logits;
  if (same_kind_count == 0) throw MissingVariantError(sample_id, std::string(display_name(tag)));
  throw Error(ErrorCode::AmbiguousVariant, "sample " + sample_id + " has " + std::to_string(same_kind_count) +
                                               " " + std::string(display_name(tag)) +
                                               " records and none matches " + key);
}

AnswerTokenMap ReplayProvider::answer_tokens(const std::string& sample_id) const {
  const auto it = by_sample_.find(sample_id);
  if (it != by_sample_.end()) {
    const VariantRecord* fallback = nullptr;
    for (std::size_t index : it->second) {
      const auto& record = file_.records[index];
      if (!record.answer_tokens) continue;
      if (tag_of(record.variant) == VariantTag::Original) return *record.answer_tokens;
      if (fallback == nullptr) fallback = &record;
    }
    if (fallback != nullptr) return *fallback->answer_tokens;
  }
  if (file_.header && file_.header->answer_tokens) return *file_.header->answer_tokens;
  throw Error(ErrorCode::MissingAnswerMap, "no yes/no token map for sample " + sample_id);
}

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Open interval (0, 1) from the top 53 bits.
double unit(std::uint64_t x) { return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53; }

VariantTag tag_from_json_key(const std::string& name) {
  const auto tag = parse_kind_name(name);
  if (!tag) throw Error(ErrorCode::InvalidArgument, "unknown variant kind '" + name + "' in mock scenario");
  return *tag;
}

}  // namespace

double keyed_normal(std::uint64_t seed, std::string_view key, std::uint64_t index) {
  const std::uint64_t stream = mix64(seed) ^ fnv1a(key);
  const double u1 = unit(mix64(stream + 2 * index));
  const double u2 = unit(mix64(stream + 2 * index + 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

MockScenario MockScenario::defaults() {
  MockScenario s;
  s.knobs[VariantTag::DiffusionNoise] = {2.0, 0.5, std::nullopt, 0.0};
  s.knobs[VariantTag::Downsample] = {1.2, 0.4, std::nullopt, 0.0};
  s.knobs[VariantTag::NoImage] = {1.5, 0.8, TokenId{0}, 1.0};
  s.knobs[VariantTag::Edited] = {1.0, 0.6, std::nullopt, 0.0};
  return s;
}

MockScenario MockScenario::from_json(const nlohmann::json& j) {
  MockScenario s;
  try {
    s.vocab_size = j.value("vocab_size", s.vocab_size);
    if (s.vocab_size < 2) throw Error(ErrorCode::InvalidVocab, "mock vocab_size must be at least 2");
    if (j.contains("answers")) s.answers = answer_map_from_json(j["answers"]);
    s.answer_level = j.value("answer_level", s.answer_level);
    s.background_level = j.value("background_level", s.background_level);
    s.base_scale = j.value("base_scale", s.base_scale);
    if (j.contains("knobs")) {
      for (const auto& [name, k] : j["knobs"].items()) {
        MockVariantKnobs knobs;
        knobs.temperature = k.value("temperature", 1.0);
        knobs.jitter = k.value("jitter", 0.0);
        if (k.contains("prior_token")) knobs.prior_token = k["prior_token"].get<TokenId>();
        knobs.prior_bias = k.value("prior_bias", 0.0);
        if (!(knobs.temperature > 0.0)) throw Error(ErrorCode::InvalidArgument, "mock temperature must be > 0");
        s.knobs[tag_from_json_key(name)] = knobs;
      }
    }
    if (j.contains("offsets")) {
      for (const auto& [sample, per_kind] : j["offsets"].items()) {
        for (const auto& [kind, per_token] : per_kind.items()) {
          auto& target = s.offsets[sample][tag_from_json_key(kind)];
          for (const auto& [token, offset] : per_token.items()) {
            target[static_cast<TokenId>(std::stoul(token))] = offset.get<double>();
          }
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed mock scenario: ") + e.what());
  }
  for (const auto& [tag, k] : s.knobs) {
    if (k.prior_token && *k.prior_token >= s.vocab_size) {
      throw Error(ErrorCode::InvalidArgument, "mock prior_token outside vocabulary");
    }
  }
  return s;
}

MockScenario MockScenario::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open mock scenario " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, path.string() + ": " + e.what());
  }
}

nlohmann::json MockScenario::to_json() const {
  nlohmann::json j;
  j["vocab_size"] = vocab_size;
  j["answers"] = answer_map_to_json(answers);
  j["answer_level"] = answer_level;
  j["background_level"] = background_level;
  j["base_scale"] = base_scale;
  j["knobs"] = nlohmann::json::object();
  for (const auto& [tag, k] : knobs) {
    nlohmann::json kj{{"temperature", k.temperature}, {"jitter", k.jitter}, {"prior_bias", k.prior_bias}};
    if (k.prior_token) kj["prior_token"] = *k.prior_token;
    j["knobs"][std::string(kind_name(tag))] = std::move(kj);
  }
  j["offsets"] = nlohmann::json::object();
  for (const auto& [sample, per_kind] : offsets) {
    for (const auto& [tag, per_token] : per_kind) {
      for (const auto& [token, offset] : per_token) {
        j["offsets"][sample][std::string(kind_name(tag))][std::to_string(token)] = offset;
      }
    }
  }
  return j;
}

LogitVector mock_logits(const std::string& sample_id, const VariantKind& variant, std::uint64_t seed,
                        const MockScenario& scenario) {
  const VariantTag tag = tag_of(variant);
  const auto knob_it = scenario.knobs.find(tag);
  const MockVariantKnobs knobs = knob_it != scenario.knobs.end() ? knob_it->second : MockVariantKnobs{};

  const std::map<TokenId, double>* offsets = nullptr;
  if (const auto s = scenario.offsets.find(sample_id); s != scenario.offsets.end()) {
    if (const auto k = s->second.find(tag); k != s->second.end()) offsets = &k->second;
  }

  const std::string base_key = sample_id + "\x1f" + "base";
  const std::string variant_stream = sample_id + "\x1f" + variant_key(variant);
  std::vector<double> out(scenario.vocab_size);
  for (std::size_t t = 0; t < out.size(); ++t) {
    const auto token = static_cast<TokenId>(t);
    const bool is_answer = std::find(scenario.answers.yes.begin(), scenario.answers.yes.end(), token) !=
                               scenario.answers.yes.end() ||
                           std::find(scenario.answers.no.begin(), scenario.answers.no.end(), token) !=
                               scenario.answers.no.end();
    double v = (is_answer ? scenario.answer_level : scenario.background_level) +
               scenario.base_scale * keyed_normal(seed, base_key, t);
    if (offsets != nullptr) {
      if (const auto o = offsets->find(token); o != offsets->end()) v += o->second;
    }
    if (knobs.jitter != 0.0) v += knobs.jitter * keyed_normal(seed, variant_stream, t);
    v /= knobs.temperature;
    if (knobs.prior_token && *knobs.prior_token == token) v += knobs.prior_bias;
    out[t] = v;
  }
  return LogitVector::dense(std::move(out));
}

MockProvider::MockProvider(MockScenario scenario, std::uint64_t seed) : scenario_(std::move(scenario)), seed_(seed) {
  scenario_.answers.validate();
}

LogitVector MockProvider::logits(const std::string& sample_id, const VariantKind& variant) const {
  return mock_logits(sample_id, variant, seed_, scenario_);
}

AnswerTokenMap MockProvider::answer_tokens(const std::string& /*sample_id*/) const { return scenario_.answers; }

}  // namespace cdengine
