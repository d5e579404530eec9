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

#include <cstddef>
#include <span>
#include <vector>

namespace cdengine {

/// Row-major H x W x C pixel array with values in [0, 1]; C is 1 or 3.
/// Pixels are clamped into range on construction.
class ImageTensor {
 public:
  ImageTensor(std::size_t height, std::size_t width, std::size_t channels, std::vector<double> pixels);

  static ImageTensor filled(std::size_t height, std::size_t width, std::size_t channels, double value);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t channels() const noexcept { return channels_; }
  std::span<const double> pixels() const noexcept { return pixels_; }

  double at(std::size_t y, std::size_t x, std::size_t c) const {
    return pixels_[(y * width_ + x) * channels_ + c];
  }

  /// Mean over all pixels of channel `c`.
  double channel_mean(std::size_t c) const;

  bool operator==(const ImageTensor&) const = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::size_t channels_;
  std::vector<double> pixels_;
};

}  // namespace cdengine
