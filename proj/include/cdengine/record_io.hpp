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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cdengine/variant.hpp"

namespace cdengine {

inline constexpr int kRecordSchemaVersion = 1;

/// Optional first line of a record file. Carries file-wide facts; any keys
/// beyond the known ones are preserved verbatim in `extra`.
struct RecordHeader {
  std::optional<std::size_t> vocab_size;
  std::optional<AnswerTokenMap> answer_tokens;
  nlohmann::json extra = nlohmann::json::object();

  bool operator==(const RecordHeader&) const = default;
};

struct RecordFile {
  std::optional<RecordHeader> header;
  std::vector<VariantRecord> records;
};

nlohmann::json variant_to_json(const VariantKind& variant);
/// Rejects unknown kinds, missing required parameters, and stray parameters.
VariantKind variant_from_json(const nlohmann::json& j);

nlohmann::json answer_map_to_json(const AnswerTokenMap& map);
AnswerTokenMap answer_map_from_json(const nlohmann::json& j);

nlohmann::json logits_to_json(const LogitVector& logits);

std::string to_json_line(const VariantRecord& record);

/// Parses and validates a JSON-lines record file: schema version, unique
/// (sample_id, variant) pairs, and one vocab size per sample.
RecordFile parse_records(std::istream& in);
RecordFile read_records(const std::filesystem::path& path);

void write_records(std::ostream& out, const RecordFile& file);
void write_records(const std::filesystem::path& path, const RecordFile& file);

}  // namespace cdengine
