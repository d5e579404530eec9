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

#include "cdengine/record_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>

#include "cdengine/error.hpp"

namespace cdengine {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorCode::RecordFormatError, message); }

json score_to_json(double v) {
  if (v == kNegInf) return "-inf";
  return v;
}

double score_from_json(const json& j) {
  if (j.is_null()) return kNegInf;
  if (j.is_string() && j.get<std::string>() == "-inf") return kNegInf;
  if (!j.is_number()) fail("score must be a number, null, or \"-inf\"");
  return j.get<double>();
}

void require_only_keys(const json& obj, std::initializer_list<std::string_view> allowed, const char* what) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) fail(std::string("unknown field '") + key + "' in " + what);
  }
}

int positive_int(const json& params, const char* name) {
  if (!params.contains(name) || !params[name].is_number_integer()) {
    fail(std::string("parameter '") + name + "' must be an integer");
  }
  const auto value = params[name].get<long long>();
  if (value < 1 || value > std::numeric_limits<int>::max()) {
    fail(std::string("parameter '") + name + "' must be positive");
  }
  return static_cast<int>(value);
}

LogitVector logits_from_json(const json& j, std::optional<std::size_t> vocab_size) {
  if (!j.is_object() || j.size() != 1) fail("logits must be {\"dense\":...} or {\"sparse\":...}");
  if (j.contains("dense")) {
    const auto& arr = j["dense"];
    if (!arr.is_array()) fail("dense logits must be an array");
    std::vector<double> values;
    values.reserve(arr.size());
    for (const auto& v : arr) values.push_back(score_from_json(v));
    if (vocab_size && *vocab_size != values.size()) {
      fail("dense logits have " + std::to_string(values.size()) + " entries, vocab_size is " +
           std::to_string(*vocab_size));
    }
    return LogitVector::dense(std::move(values));
  }
  if (j.contains("sparse")) {
    const auto& sp = j["sparse"];
    if (!sp.is_object()) fail("sparse logits must be an object");
    require_only_keys(sp, {"ids", "values", "floor"}, "sparse logits");
    if (!vocab_size) fail("sparse logits need a vocab_size on the record or in the header");
    if (!sp.contains("ids") || !sp["ids"].is_array() || !sp.contains("values") || !sp["values"].is_array()) {
      fail("sparse logits need 'ids' and 'values' arrays");
    }
    std::vector<TokenId> ids;
    for (const auto& id : sp["ids"]) {
      if (!id.is_number_unsigned()) fail("sparse ids must be non-negative integers");
      ids.push_back(id.get<TokenId>());
    }
    std::vector<double> values;
    for (const auto& v : sp["values"]) values.push_back(score_from_json(v));
    const double floor = sp.contains("floor") ? score_from_json(sp["floor"]) : kNegInf;
    return LogitVector::sparse(*vocab_size, std::move(ids), std::move(values), floor);
  }
  fail("logits must be {\"dense\":...} or {\"sparse\":...}");
}

void check_version(const json& j) {
  if (!j.contains("v") || !j["v"].is_number_integer() || j["v"].get<int>() != kRecordSchemaVersion) {
    fail("missing or unsupported schema version (expected \"v\":1)");
  }
}

RecordHeader header_from_json(const json& j) {
  RecordHeader header;
  for (const auto& [key, value] : j.items()) {
    if (key == "v") continue;
    if (key == "vocab_size") {
      if (!value.is_number_unsigned()) fail("header vocab_size must be a positive integer");
      header.vocab_size = value.get<std::size_t>();
      if (*header.vocab_size < 2) throw Error(ErrorCode::InvalidVocab, "header vocab_size must be at least 2");
    } else if (key == "answer_tokens") {
      header.answer_tokens = answer_map_from_json(value);
    } else {
      header.extra[key] = value;
    }
  }
  return header;
}

json header_to_json(const RecordHeader& header) {
  json j = header.extra;
  j["v"] = kRecordSchemaVersion;
  if (header.vocab_size) j["vocab_size"] = *header.vocab_size;
  if (header.answer_tokens) j["answer_tokens"] = answer_map_to_json(*header.answer_tokens);
  return j;
}

}  // namespace

json variant_to_json(const VariantKind& variant) {
  json j;
  j["kind"] = kind_name(tag_of(variant));
  json params = json::object();
  if (const auto* noise = std::get_if<DiffusionNoiseVariant>(&variant)) {
    params["steps"] = noise->steps;
    params["schedule"] = noise->schedule;
  } else if (const auto* down = std::get_if<DownsampleVariant>(&variant)) {
    params["ratio"] = down->ratio;
  } else if (const auto* edited = std::get_if<EditedVariant>(&variant)) {
    params["cfg_text"] = edited->cfg_text;
    params["instruction"] = edited->instruction;
  }
  if (!params.empty()) j["params"] = std::move(params);
  return j;
}

VariantKind variant_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) fail("variant needs a string 'kind'");
  require_only_keys(j, {"kind", "params"}, "variant");
  const auto name = j["kind"].get<std::string>();
  const auto tag = parse_kind_name(name);
  if (!tag) fail("unknown variant kind '" + name + "'");
  const json params = j.contains("params") ? j["params"] : json::object();
  if (!params.is_object()) fail("variant params must be an object");

  switch (*tag) {
    case VariantTag::Original:
    case VariantTag::NoImage:
      if (!params.empty()) fail("variant kind '" + name + "' takes no parameters");
      return default_variant(*tag);
    case VariantTag::DiffusionNoise: {
      require_only_keys(params, {"steps", "schedule"}, "diffusion_noise params");
      DiffusionNoiseVariant v;
      v.steps = positive_int(params, "steps");
      if (params.contains("schedule")) {
        if (!params["schedule"].is_string()) fail("parameter 'schedule' must be a string");
        v.schedule = params["schedule"].get<std::string>();
      }
      return v;
    }
    case VariantTag::Downsample: {
      require_only_keys(params, {"ratio"}, "downsample params");
      return DownsampleVariant{positive_int(params, "ratio")};
    }
    case VariantTag::Edited: {
      require_only_keys(params, {"cfg_text", "instruction"}, "edited params");
      if (!params.contains("cfg_text") || !params["cfg_text"].is_number()) {
        fail("parameter 'cfg_text' must be a number");
      }
      EditedVariant v;
      v.cfg_text = params["cfg_text"].get<double>();
      if (params.contains("instruction")) {
        if (!params["instruction"].is_string()) fail("parameter 'instruction' must be a string");
        v.instruction = params["instruction"].get<std::string>();
      }
      return v;
    }
  }
  fail("unknown variant kind '" + name + "'");
}

json answer_map_to_json(const AnswerTokenMap& map) { return json{{"yes", map.yes}, {"no", map.no}}; }

AnswerTokenMap answer_map_from_json(const json& j) {
  if (!j.is_object() || !j.contains("yes") || !j.contains("no") || !j["yes"].is_array() || !j["no"].is_array()) {
    fail("answer_tokens must be {\"yes\":[...],\"no\":[...]}");
  }
  AnswerTokenMap map;
  for (const auto& id : j["yes"]) {
    if (!id.is_number_unsigned()) fail("answer token ids must be non-negative integers");
    map.yes.push_back(id.get<TokenId>());
  }
  for (const auto& id : j["no"]) {
    if (!id.is_number_unsigned()) fail("answer token ids must be non-negative integers");
    map.no.push_back(id.get<TokenId>());
  }
  map.validate();
  return map;
}

json logits_to_json(const LogitVector& logits) {
  if (logits.is_dense()) {
    json arr = json::array();
    for (double v : logits.values()) arr.push_back(score_to_json(v));
    return json{{"dense", std::move(arr)}};
  }
  const auto& sp = logits.sparse_entries();
  json values = json::array();
  for (double v : sp.values) values.push_back(score_to_json(v));
  return json{{"sparse", {{"ids", sp.ids}, {"values", std::move(values)}, {"floor", score_to_json(sp.floor)}}}};
}

std::string to_json_line(const VariantRecord& record) {
  json j;
  j["v"] = kRecordSchemaVersion;
  j["sample_id"] = record.sample_id;
  j["variant"] = variant_to_json(record.variant);
  j["logits"] = logits_to_json(record.logits);
  if (!record.logits.is_dense()) j["vocab_size"] = record.logits.vocab_size();
  if (record.answer_tokens) j["answer_tokens"] = answer_map_to_json(*record.answer_tokens);
  return j.dump();
}

RecordFile parse_records(std::istream& in) {
  RecordFile file;
  std::set<std::pair<std::string, std::string>> seen;
  std::map<std::string, std::size_t> vocab_by_sample;
  std::string line;
  std::size_t line_no = 0;
  bool any_content = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    try {
      const json j = json::parse(line);
      if (!j.is_object()) fail("expected a JSON object");
      check_version(j);

      if (!j.contains("sample_id")) {
        if (any_content) fail("header line must come first");
        file.header = header_from_json(j);
        any_content = true;
        continue;
      }
      any_content = true;

      require_only_keys(j, {"v", "sample_id", "variant", "logits", "vocab_size", "answer_tokens"}, "record");
      if (!j["sample_id"].is_string() || j["sample_id"].get<std::string>().empty()) {
        fail("sample_id must be a non-empty string");
      }
      if (!j.contains("variant")) fail("record needs a 'variant'");
      if (!j.contains("logits")) fail("record needs 'logits'");

      std::optional<std::size_t> vocab;
      if (file.header && file.header->vocab_size) vocab = file.header->vocab_size;
      if (j.contains("vocab_size")) {
        if (!j["vocab_size"].is_number_unsigned()) fail("vocab_size must be a positive integer");
        const auto record_vocab = j["vocab_size"].get<std::size_t>();
        if (vocab && *vocab != record_vocab) fail("record vocab_size disagrees with header");
        vocab = record_vocab;
      }

      VariantRecord record{j["sample_id"].get<std::string>(), variant_from_json(j["variant"]),
                           logits_from_json(j["logits"], vocab), std::nullopt};
      if (j.contains("answer_tokens")) record.answer_tokens = answer_map_from_json(j["answer_tokens"]);

      if (!seen.emplace(record.sample_id, variant_key(record.variant)).second) {
        fail("duplicate record for (" + record.sample_id + ", " + variant_key(record.variant) + ")");
      }
      const auto [it, inserted] = vocab_by_sample.emplace(record.sample_id, record.logits.vocab_size());
      if (!inserted && it->second != record.logits.vocab_size()) {
        throw Error(ErrorCode::ShapeMismatch, "sample " + record.sample_id + " mixes vocab sizes " +
                                                  std::to_string(it->second) + " and " +
                                                  std::to_string(record.logits.vocab_size()));
      }
      file.records.push_back(std::move(record));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::RecordFormatError, where + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), where + e.detail());
    }
  }
  return file;
}

RecordFile read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open record file " + path.string());
  return parse_records(in);
}

void write_records(std::ostream& out, const RecordFile& file) {
  if (file.header) out << header_to_json(*file.header).dump() << '\n';
  for (const auto& record : file.records) out << to_json_line(record) << '\n';
}

void write_records(const std::filesystem::path& path, const RecordFile& file) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write record file " + path.string());
  write_records(out, file);
}

}  // namespace cdengine
