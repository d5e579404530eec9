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

#include "cdengine/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

#include "cdengine/error.hpp"

namespace cdengine {
namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> bytes{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                                  static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes.data(), bytes.size());
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) {
    throw Error(ErrorCode::ImageFormatError, "truncated raw image");
  }
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

ImageTensor load_png(const std::filesystem::path& path) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_file(&img, path.string().c_str()) == 0) {
    throw Error(ErrorCode::ImageFormatError, path.string() + ": " + img.message);
  }
  const bool color = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(img));
  if (png_image_finish_read(&img, nullptr, buffer.data(), 0, nullptr) == 0) {
    png_image_free(&img);
    throw Error(ErrorCode::ImageFormatError, path.string() + ": " + img.message);
  }
  std::vector<double> pixels(buffer.size());
  std::transform(buffer.begin(), buffer.end(), pixels.begin(), [](png_byte b) { return b / 255.0; });
  return ImageTensor(img.height, img.width, color ? 3 : 1, std::move(pixels));
}

void save_png(const std::filesystem::path& path, const ImageTensor& image) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = image.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<png_byte> buffer(image.pixels().size());
  std::transform(image.pixels().begin(), image.pixels().end(), buffer.begin(),
                 [](double v) { return static_cast<png_byte>(std::lround(v * 255.0)); });
  if (png_image_write_to_file(&img, path.string().c_str(), 0, buffer.data(), 0, nullptr) == 0) {
    throw Error(ErrorCode::IoError, path.string() + ": " + img.message);
  }
}

ImageTensor load_raw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  const std::uint32_t h = get_u32(in);
  const std::uint32_t w = get_u32(in);
  const std::uint32_t c = get_u32(in);
  const std::size_t n = static_cast<std::size_t>(h) * w * c;
  if (n == 0 || n > (std::size_t{1} << 32)) throw Error(ErrorCode::ImageFormatError, "bad raw image header");
  std::vector<double> pixels(n);
  for (auto& p : pixels) {
    const std::uint32_t bits = get_u32(in);
    p = static_cast<double>(std::bit_cast<float>(bits));
  }
  return ImageTensor(h, w, c, std::move(pixels));
}

void save_raw(const std::filesystem::path& path, const ImageTensor& image) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  put_u32(out, static_cast<std::uint32_t>(image.height()));
  put_u32(out, static_cast<std::uint32_t>(image.width()));
  put_u32(out, static_cast<std::uint32_t>(image.channels()));
  for (double p : image.pixels()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(p)));
}

ImageTensor load_image(const std::filesystem::path& path) {
  return path.extension() == ".png" ? load_png(path) : load_raw(path);
}

void save_image(const std::filesystem::path& path, const ImageTensor& image) {
  if (path.extension() == ".png") {
    save_png(path, image);
  } else {
    save_raw(path, image);
  }
}

}  // namespace cdengine
