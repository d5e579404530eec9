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

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cdengine/dataset.hpp"
#include "cdengine/error.hpp"

namespace cdengine {
namespace {

std::vector<QAItem> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_dataset(in);
}

TEST(Dataset, ParsesAndRoundTrips) {
  const auto items = parse(
      R"({"sample_id":"a","question":"Is there a dog?","gold":"Yes","task_tag":"pope-random","image_path":"x.jpg"})"
      "\n"
      R"({"sample_id":"b","question":"Is it red?","gold":"no","task_tag":"mme-color"})"
      "\n");
  ASSERT_EQ(items.size(), 2u);
  EXPECT_EQ(items[0].gold, AnswerClass::Yes);
  EXPECT_EQ(items[0].image_path, "x.jpg");
  EXPECT_EQ(items[1].gold, AnswerClass::No);
  EXPECT_FALSE(items[1].image_path);
  std::ostringstream out;
  write_dataset(out, items);
  EXPECT_EQ(parse(out.str()), items);
}

TEST(Dataset, RejectsBadRows) {
  EXPECT_THROW(parse(R"({"sample_id":"a","question":"q","gold":"maybe","task_tag":"t"})"), Error);
  EXPECT_THROW(parse(R"({"sample_id":"a","question":"q","task_tag":"t"})"), Error);
  EXPECT_THROW(parse(R"({"sample_id":"a","question":"q","gold":"yes","task_tag":"t"})"
                     "\n"
                     R"({"sample_id":"a","question":"q","gold":"no","task_tag":"t"})"),
               Error);
  try {
    parse("{");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DatasetFormatError);
  }
}

TEST(EditInstruction, DerivedFromQuestion) {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"Is there a car in the image?", "a car"},
      {"Is there a elephant in this image?", "an elephant"},
      {"Are there a total of two trains in the picture?", "a total of two trains"},
      {"Is there a blue court in the image?", "a blue court"},
      {"Is the vase on the left of the toothbrush?", "the vase on the left of the toothbrush"},
      {"Is this movie titled a beautiful mind (2001)?", "This movie is titled a beautiful mind (2001)"},
      {"Is the person inside the red bounding box called Sally Field?",
       "the person inside the red bounding box is called Sally Field"},
      {"Does this image describe a place of windmill?", "a windmill"},
      {"Is this a photo of Clearwater Beach, Florida?", "Clearwater Beach, Florida"},
      {"Does this artwork exist in the form of painting?", "This artwork exists in the form of painting"},
      {"Is the word in the logo \"cold drinks\"?", "the word in the logo \"cold drinks\""},
      {"Is there a tv in this image? Please answer yes or no.", "a tv"},
      {"Is there a dining table in the image?", "a dining table"},
  };
  for (const auto& [q, expect] : cases) EXPECT_EQ(derive_edit_instruction(q), expect) << q;
}

TEST(EditInstruction, CognitionTasksKeepQuestion) {
  const std::string q = "Is the answer to the arithmetic question in the image 65? Please answer yes or no.";
  EXPECT_EQ(derive_edit_instruction(q, "mme-numerical_calculation"), q);
}

TEST(Import, Pope) {
  std::istringstream in(
      R"({"question_id": 7, "image": "a.jpg", "text": "Is there a elephant in the image?", "label": "no"})"
      "\n");
  const auto items = import_pope(in, "popular");
  ASSERT_EQ(items.size(), 1u);
  EXPECT_EQ(items[0].sample_id, "pope-popular-7");
  EXPECT_EQ(items[0].task_tag, "pope-popular");
  EXPECT_EQ(items[0].gold, AnswerClass::No);
  EXPECT_EQ(items[0].edit_instruction, "an elephant");
  std::istringstream bad(R"({"question_id": 7, "image": "a.jpg", "text": "Is it?", "label": "perhaps"})");
  EXPECT_THROW(import_pope(bad, "random"), Error);
}

TEST(Import, Mme) {
  std::istringstream in("1.jpg\tIs there a bird in this image? Please answer yes or no.\tNo\n2.jpg\tIs this red?\tYes\n");
  const auto items = import_mme(in, "existence");
  ASSERT_EQ(items.size(), 2u);
  EXPECT_EQ(items[0].sample_id, "mme-existence-1");
  EXPECT_EQ(items[1].gold, AnswerClass::Yes);
  EXPECT_EQ(items[0].image_path, "1.jpg");
  std::istringstream bad("only two\tcolumns\n");
  EXPECT_THROW(import_mme(bad, "existence"), Error);
}

TEST(Columns, Mapping) {
  EXPECT_EQ(table_column("pope-random"), "P-R");
  EXPECT_EQ(table_column("pope-popular"), "P-P");
  EXPECT_EQ(table_column("pope-adversarial"), "P-A");
  EXPECT_EQ(table_column("mme-existence"), "MME");
  EXPECT_EQ(table_column("mme-count"), "MME");
  EXPECT_EQ(table_column("custom"), "custom");
}

}  // namespace
}  // namespace cdengine
