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
#include <fstream>
#include <limits>

#include "cdengine/error.hpp"
#include "cdengine/image.hpp"
#include "cdengine/image_io.hpp"
#include "generators.hpp"

namespace cdengine {
namespace {

namespace fs = std::filesystem;

fs::path temp(const std::string& name) { return fs::temp_directory_path() / ("cdengine_" + name); }

ImageTensor random_image(testing::Gen& g, std::size_t h, std::size_t w, std::size_t c) {
  std::vector<double> px(h * w * c);
  for (auto& p : px) p = g.real(0.0, 1.0);
  return ImageTensor(h, w, c, std::move(px));
}

TEST(ImageTensor, ValidatesShape) {
  EXPECT_THROW(ImageTensor(2, 2, 2, std::vector<double>(8, 0.0)), Error);
  EXPECT_THROW(ImageTensor(2, 2, 1, std::vector<double>(3, 0.0)), Error);
  EXPECT_THROW(ImageTensor(0, 2, 1, {}), Error);
  EXPECT_THROW(ImageTensor(1, 2, 1, {0.0, std::numeric_limits<double>::quiet_NaN()}), Error);
}

TEST(ImageTensor, ClampsOnConstruction) {
  const ImageTensor img(1, 3, 1, {-0.5, 0.25, 7.0});
  EXPECT_EQ(img.at(0, 0, 0), 0.0);
  EXPECT_EQ(img.at(0, 1, 0), 0.25);
  EXPECT_EQ(img.at(0, 2, 0), 1.0);
}

TEST(ImageTensor, ChannelMeans) {
  const ImageTensor img(1, 2, 3, {0.0, 0.5, 1.0, 1.0, 0.5, 0.0});
  EXPECT_DOUBLE_EQ(img.channel_mean(0), 0.5);
  EXPECT_DOUBLE_EQ(img.channel_mean(1), 0.5);
  EXPECT_DOUBLE_EQ(img.channel_mean(2), 0.5);
}

TEST(ImageIo, RawRoundTripIsExactForFloatValues) {
  testing::Gen g(3);
  std::vector<double> px(5 * 7 * 3);
  for (auto& p : px) p = static_cast<float>(g.real(0.0, 1.0));
  const ImageTensor img(5, 7, 3, px);
  save_image(temp("img.raw"), img);
  EXPECT_EQ(load_image(temp("img.raw")), img);
  fs::remove(temp("img.raw"));
}

TEST(ImageIo, RawRejectsTruncatedFile) {
  std::ofstream(temp("bad.raw"), std::ios::binary) << "abc";
  EXPECT_THROW(load_raw(temp("bad.raw")), Error);
  fs::remove(temp("bad.raw"));
}

TEST(ImageIo, PngRoundTripQuantizesTo8Bit) {
  testing::Gen g(4);
  for (std::size_t c : {1u, 3u}) {
    const auto img = random_image(g, 6, 9, c);
    save_image(temp("img.png"), img);
    const auto back = load_image(temp("img.png"));
    ASSERT_EQ(back.height(), 6u);
    ASSERT_EQ(back.width(), 9u);
    ASSERT_EQ(back.channels(), c);
    for (std::size_t i = 0; i < img.pixels().size(); ++i) {
      EXPECT_NEAR(back.pixels()[i], img.pixels()[i], 0.5 / 255.0 + 1e-12);
    }
    // A quantized image survives a second trip exactly.
    save_image(temp("img2.png"), back);
    EXPECT_EQ(load_image(temp("img2.png")), back);
  }
  fs::remove(temp("img.png"));
  fs::remove(temp("img2.png"));
}

TEST(ImageIo, MissingFileIsIoError) {
  try {
    load_image(temp("does-not-exist.png"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::IoError || e.code() == ErrorCode::ImageFormatError);
  }
}

}  // namespace
}  // namespace cdengine
