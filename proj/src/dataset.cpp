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

#include "cdengine/dataset.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <regex>
#include <set>

#include "cdengine/error.hpp"

namespace cdengine {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorCode::DatasetFormatError, message); }

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

bool starts_with_vowel_sound(std::string_view word) {
  return !word.empty() && std::string_view("aeiouAEIOU").find(word.front()) != std::string_view::npos;
}

// "a elephant" -> "an elephant", "an car" -> "a car".
std::string fix_article(const std::string& phrase) {
  static const std::regex kArticle(R"(^(a|an) (\S+)(.*)$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(phrase, m, kArticle)) return phrase;
  const std::string article = starts_with_vowel_sound(m[2].str()) ? "an" : "a";
  return article + " " + m[2].str() + m[3].str();
}

std::string third_person(const std::string& verb) {
  static const std::array<std::string_view, 5> kSibilant{"s", "sh", "ch", "x", "z"};
  for (auto suffix : kSibilant) {
    if (verb.size() >= suffix.size() && verb.compare(verb.size() - suffix.size(), suffix.size(), suffix) == 0) {
      return verb + "es";
    }
  }
  return verb + "s";
}

bool is_cognition_task(std::string_view task_tag) {
  static const std::set<std::string, std::less<>> kCognition{
      "mme-commonsense_reasoning", "mme-numerical_calculation", "mme-text_translation", "mme-code_reasoning"};
  return kCognition.contains(task_tag);
}

}  // namespace

std::vector<QAItem> parse_dataset(std::istream& in) {
  std::vector<QAItem> items;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      fail(where + e.what());
    }
    if (!j.is_object()) fail(where + "expected a JSON object");
    auto text_field = [&](const char* name, bool required) -> std::optional<std::string> {
      if (!j.contains(name) || j[name].is_null()) {
        if (required) fail(where + "missing field '" + name + "'");
        return std::nullopt;
      }
      if (!j[name].is_string()) fail(where + "field '" + name + "' must be a string");
      return j[name].get<std::string>();
    };

    QAItem item;
    item.sample_id = *text_field("sample_id", true);
    item.question = *text_field("question", true);
    const auto gold = parse_gold(*text_field("gold", true));
    if (!gold) fail(where + "gold must be \"yes\" or \"no\"");
    item.gold = *gold;
    item.task_tag = *text_field("task_tag", true);
    item.image_path = text_field("image_path", false);
    item.edit_instruction = text_field("edit_instruction", false);

    if (item.sample_id.empty()) fail(where + "sample_id must be non-empty");
    if (item.task_tag.empty()) fail(where + "task_tag must be non-empty");
    if (!ids.insert(item.sample_id).second) fail(where + "duplicate sample_id '" + item.sample_id + "'");
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<QAItem> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open dataset " + path.string());
  return parse_dataset(in);
}

void write_dataset(std::ostream& out, const std::vector<QAItem>& items) {
  for (const auto& item : items) {
    json j{{"sample_id", item.sample_id},
           {"question", item.question},
           {"gold", to_string(item.gold)},
           {"task_tag", item.task_tag}};
    if (item.image_path) j["image_path"] = *item.image_path;
    if (item.edit_instruction) j["edit_instruction"] = *item.edit_instruction;
    out << j.dump() << '\n';
  }
}

std::string derive_edit_instruction(std::string_view question, std::string_view task_tag) {
  std::string q = trim(question);
  if (is_cognition_task(task_tag)) return q;

  static const std::regex kAnswerHint(R"(\s*Please answer (yes|no|yes or no)\.?\s*$)", std::regex::icase);
  q = trim(std::regex_replace(q, kAnswerHint, ""));

  struct Rule {
    std::regex pattern;
    std::string (*rewrite)(const std::smatch&);
  };
  static const std::vector<Rule> kRules = [] {
    const auto icase = std::regex::icase;
    std::vector<Rule> rules;
    rules.push_back({std::regex(R"(^Is there (.+?) in (?:the|this) (?:image|picture|photo)\?$)", icase),
                     [](const std::smatch& m) { return fix_article(m[1].str()); }});
    rules.push_back({std::regex(R"(^Are there (.+?) in (?:the|this) (?:image|picture|photo)\?$)", icase),
                     [](const std::smatch& m) { return m[1].str(); }});
    rules.push_back({std::regex(R"(^Does this (?:image|picture|photo) describe a place of (.+)\?$)", icase),
                     [](const std::smatch& m) { return fix_article("a " + m[1].str()); }});
    rules.push_back({std::regex(R"(^Is this (?:a|an) (?:photo|picture|image) of (.+)\?$)", icase),
                     [](const std::smatch& m) { return m[1].str(); }});
    rules.push_back({std::regex(R"(^Is this (\w+) (titled|called|named) (.+)\?$)", icase),
                     [](const std::smatch& m) { return "This " + m[1].str() + " is " + m[2].str() + " " + m[3].str(); }});
    rules.push_back({std::regex(R"(^Does this (\w+) (\w+) (.+)\?$)", icase), [](const std::smatch& m) {
                       return "This " + m[1].str() + " " + third_person(m[2].str()) + " " + m[3].str();
                     }});
    rules.push_back({std::regex(R"(^Is (the .+?) (called|named|titled) (.+)\?$)", icase),
                     [](const std::smatch& m) { return m[1].str() + " is " + m[2].str() + " " + m[3].str(); }});
    rules.push_back({std::regex(R"(^Is (the .+)\?$)", icase), [](const std::smatch& m) { return m[1].str(); }});
    rules.push_back({std::regex(R"(^(?:Is|Are) there (.+)\?$)", icase),
                     [](const std::smatch& m) { return fix_article(m[1].str()); }});
    return rules;
  }();

  std::smatch m;
  for (const auto& rule : kRules) {
    if (std::regex_match(q, m, rule.pattern)) return rule.rewrite(m);
  }
  return q;
}

std::vector<QAItem> import_pope(std::istream& in, std::string_view split) {
  const std::string tag = "pope-" + std::string(split);
  std::vector<QAItem> items;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      fail(where + e.what());
    }
    if (!j.is_object() || !j.contains("question_id") || !j.contains("text") || !j.contains("label")) {
      fail(where + "POPE lines need question_id, text and label");
    }
    const std::string qid = j["question_id"].is_string() ? j["question_id"].get<std::string>()
                                                         : j["question_id"].dump();
    const auto gold = j["label"].is_string() ? parse_gold(j["label"].get<std::string>()) : std::nullopt;
    if (!gold) fail(where + "label must be yes or no");
    QAItem item;
    item.sample_id = tag + "-" + qid;
    item.question = j["text"].get<std::string>();
    item.gold = *gold;
    item.task_tag = tag;
    if (j.contains("image") && j["image"].is_string()) item.image_path = j["image"].get<std::string>();
    item.edit_instruction = derive_edit_instruction(item.question, tag);
    if (!ids.insert(item.sample_id).second) fail(where + "duplicate question_id " + qid);
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<QAItem> import_mme(std::istream& in, std::string_view subtask) {
  const std::string tag = "mme-" + std::string(subtask);
  std::vector<QAItem> items;
  std::string line;
  std::size_t line_no = 0;
  std::size_t index = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (std::size_t pos; (pos = line.find('\t', start)) != std::string::npos; start = pos + 1) {
      cols.push_back(line.substr(start, pos - start));
    }
    cols.push_back(line.substr(start));
    if (cols.size() < 3) fail("line " + std::to_string(line_no) + ": expected image<TAB>question<TAB>answer");
    const auto gold = parse_gold(trim(cols[2]));
    if (!gold) fail("line " + std::to_string(line_no) + ": answer must be yes or no");
    QAItem item;
    item.sample_id = tag + "-" + std::to_string(++index);
    item.question = trim(cols[1]);
    item.gold = *gold;
    item.task_tag = tag;
    item.image_path = trim(cols[0]);
    item.edit_instruction = derive_edit_instruction(item.question, tag);
    items.push_back(std::move(item));
  }
  return items;
}

std::string table_column(std::string_view task_tag) {
  if (task_tag == "pope-random") return "P-R";
  if (task_tag == "pope-popular") return "P-P";
  if (task_tag == "pope-adversarial") return "P-A";
  if (task_tag.starts_with("mme")) return "MME";
  return std::string(task_tag);
}

}  // namespace cdengine
