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

#include <filesystem>
#include <sstream>

#include "cdengine/error.hpp"
#include "cdengine/record_io.hpp"
#include "generators.hpp"

namespace cdengine {
namespace {

RecordFile parse(const std::string& text) {
  std::istringstream in(text);
  return parse_records(in);
}

ErrorCode parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "parsed without error: " << text;
  return ErrorCode::InvalidArgument;
}

std::string dump(const RecordFile& file) {
  std::ostringstream out;
  write_records(out, file);
  return out.str();
}

VariantKind random_variant(testing::Gen& g) {
  switch (g.size(0, 4)) {
    case 0: return OriginalVariant{};
    case 1: return DiffusionNoiseVariant{static_cast<int>(g.size(1, 999)), "linear"};
    case 2: return DownsampleVariant{static_cast<int>(g.size(1, 64))};
    case 3: return NoImageVariant{};
    default: return EditedVariant{g.real(1.0, 30.0), g.chance(0.5) ? "a \"red\" car" : ""};
  }
}

TEST(Records, ParsesDenseAndSparseWithHeader) {
  const auto file = parse(
      R"({"v":1,"vocab_size":4,"answer_tokens":{"yes":[0],"no":[1]},"model":"m"})"
      "\n"
      R"({"v":1,"sample_id":"a","variant":{"kind":"original"},"logits":{"dense":[1,2,3,4]}})"
      "\n\n"
      R"({"v":1,"sample_id":"a","variant":{"kind":"downsample","params":{"ratio":16}},"logits":{"sparse":{"ids":[2],"values":[0.5],"floor":"-inf"}}})"
      "\n");
  ASSERT_TRUE(file.header);
  EXPECT_EQ(file.header->vocab_size, 4u);
  EXPECT_EQ(file.header->extra["model"], "m");
  ASSERT_EQ(file.records.size(), 2u);
  EXPECT_EQ(std::get<DownsampleVariant>(file.records[1].variant).ratio, 16);
  EXPECT_EQ(file.records[1].logits.at(0), kNegInf);
  EXPECT_EQ(file.records[1].logits.at(2), 0.5);
}

TEST(Records, NullMeansNegInf) {
  const auto file =
      parse(R"({"v":1,"sample_id":"a","variant":{"kind":"no_image"},"logits":{"dense":[null,0]}})");
  EXPECT_EQ(file.records[0].logits.at(0), kNegInf);
}

TEST(Records, RejectsMalformedInput) {
  EXPECT_EQ(parse_error(R"({"v":1,"sample_id":"a","variant":{"kind":"blurred"},"logits":{"dense":[0,1]}})"),
            ErrorCode::RecordFormatError);
  EXPECT_EQ(parse_error(R"({"sample_id":"a","variant":{"kind":"original"},"logits":{"dense":[0,1]}})"),
            ErrorCode::RecordFormatError);
  EXPECT_EQ(parse_error(R"({"v":2,"sample_id":"a","variant":{"kind":"original"},"logits":{"dense":[0,1]}})"),
            ErrorCode::RecordFormatError);
  EXPECT_EQ(parse_error(R"({"v":1,"sample_id":"a","variant":{"kind":"original"},"logits":{"dense":[0,1]},"x":1})"),
            ErrorCode::RecordFormatError);
  EXPECT_EQ(parse_error(R"({"v":1,"sample_id":"a","variant":{"kind":"downsample"},"logits":{"dense":[0,1]}})"),
            ErrorCode::RecordFormatError);
  EXPECT_EQ(parse_error(R"({"v":1,"sample_id":"a","variant":{"kind":"original","params":{"ratio":2}},"logits":{"dense":[0,1]}})"),
            ErrorCode::RecordFormatError);
  EXPECT_EQ(parse_error(R"({"v":1,"sample_id":"a","variant":{"kind":"original"},"logits":{"sparse":{"ids":[0],"values":[1],"floor":0}}})"),
            ErrorCode::RecordFormatError);
  EXPECT_EQ(parse_error("not json"), ErrorCode::RecordFormatError);
}

TEST(Records, RejectsDuplicatesAndVocabMismatch) {
  const std::string a = R"({"v":1,"sample_id":"a","variant":{"kind":"original"},"logits":{"dense":[0,1]}})";
  EXPECT_EQ(parse_error(a + "\n" + a), ErrorCode::RecordFormatError);
  EXPECT_EQ(parse_error(a + "\n" +
                        R"({"v":1,"sample_id":"a","variant":{"kind":"no_image"},"logits":{"dense":[0,1,2]}})"),
            ErrorCode::ShapeMismatch);
}

TEST(Records, HeaderOnlyFirst) {
  const std::string a = R"({"v":1,"sample_id":"a","variant":{"kind":"original"},"logits":{"dense":[0,1]}})";
  EXPECT_EQ(parse_error(a + "\n" + R"({"v":1,"vocab_size":2})"), ErrorCode::RecordFormatError);
}

TEST(Records, ErrorsNameTheLine) {
  try {
    parse("\n" + std::string(R"({"v":1,"sample_id":"a","variant":{"kind":"x"},"logits":{"dense":[0,1]}})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

// Round-trip property: write -> read is lossless and write -> read -> write is byte-stable.
TEST(RecordsProperty, RoundTripIsLosslessAndByteStable) {
  testing::Gen g(21);
  for (int trial = 0; trial < 200; ++trial) {
    RecordFile file;
    const std::size_t vocab = g.size(2, 20);
    if (g.chance(0.5)) file.header = RecordHeader{vocab, AnswerTokenMap{{0}, {1}}, {{"model", "x"}}};
    const std::size_t samples = g.size(1, 5);
    for (std::size_t s = 0; s < samples; ++s) {
      std::set<std::string> keys;
      for (int r = 0; r < 4; ++r) {
        VariantKind v = random_variant(g);
        if (!keys.insert(variant_key(v)).second) continue;
        LogitVector l = g.chance(0.5) ? g.logits(vocab, 0.1) : g.sparse_logits(vocab);
        std::optional<AnswerTokenMap> answers;
        if (g.chance(0.2)) answers = AnswerTokenMap{{2}, {3}};
        file.records.push_back({"s" + std::to_string(s), std::move(v), std::move(l), answers});
      }
    }
    const std::string first = dump(file);
    const auto back = parse(first);
    ASSERT_EQ(back.records.size(), file.records.size());
    for (std::size_t i = 0; i < file.records.size(); ++i) EXPECT_EQ(back.records[i], file.records[i]) << first;
    EXPECT_EQ(back.header, file.header);
    EXPECT_EQ(dump(back), first);
  }
}

TEST(Records, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "cdengine_records_roundtrip.jsonl";
  RecordFile file;
  file.records.push_back({"x", DiffusionNoiseVariant{}, LogitVector::dense({0.1, -0.2, kNegInf}), std::nullopt});
  write_records(path, file);
  EXPECT_EQ(read_records(path).records, file.records);
  std::filesystem::remove(path);
  EXPECT_THROW(read_records(path), Error);
}

TEST(Variant, KeysAreInjective) {
  EXPECT_NE(variant_key(DownsampleVariant{16}), variant_key(DownsampleVariant{32}));
  EXPECT_NE(variant_key(OriginalVariant{}), variant_key(NoImageVariant{}));
  EXPECT_EQ(variant_key(EditedVariant{}), variant_key(EditedVariant{}));
  EXPECT_EQ(display_name(VariantTag::NoImage), "NoImage");
  EXPECT_EQ(parse_kind_name("diffusion_noise"), VariantTag::DiffusionNoise);
  EXPECT_FALSE(parse_kind_name("DiffusionNoise"));
}

TEST(Variant, AnswerMapsMustBeDisjoint) {
  EXPECT_THROW((AnswerTokenMap{{1, 2}, {2}}.validate()), Error);
  EXPECT_NO_THROW((AnswerTokenMap{{1}, {2}}.validate()));
}

}  // namespace
}  // namespace cdengine
