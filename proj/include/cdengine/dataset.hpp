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
#include <string_view>
#include <vector>

#include "cdengine/metrics.hpp"

namespace cdengine {

/// One Yes/No question. `task_tag` names the benchmark split, e.g.
/// pope-random, pope-popular, pope-adversarial, mme-existence.
struct QAItem {
  std::string sample_id;
  std::string question;
  AnswerClass gold = AnswerClass::Yes;
  std::string task_tag;
  std::optional<std::string> image_path;
  std::optional<std::string> edit_instruction;

  bool operator==(const QAItem&) const = default;
};

/// Parses dataset JSON-lines. Rejects missing fields, gold values other than
/// yes/no, and duplicate sample ids with DatasetFormatError.
std::vector<QAItem> parse_dataset(std::istream& in);
std::vector<QAItem> load_dataset(const std::filesystem::path& path);
void write_dataset(std::ostream& out, const std::vector<QAItem>& items);

/// Turns a Yes/No question into the text instruction for an image editor:
/// the queried object or an affirmative restatement, e.g.
/// "Is there a car in the image?" -> "a car". Cognition-style MME tasks use
/// the question verbatim.
std::string derive_edit_instruction(std::string_view question, std::string_view task_tag = {});

/// Converts a published POPE split (JSON-lines with question_id, image, text,
/// label) into dataset items tagged pope-<split>.
std::vector<QAItem> import_pope(std::istream& in, std::string_view split);

/// Converts an MME subtask answer sheet (tab-separated image, question,
/// answer per line) into dataset items tagged mme-<subtask>.
std::vector<QAItem> import_mme(std::istream& in, std::string_view subtask);

/// Report column for a task tag: P-R, P-P, P-A, MME, or the tag itself.
std::string table_column(std::string_view task_tag);

}  // namespace cdengine
