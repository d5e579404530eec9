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

#include "cdengine/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cdengine/error.hpp"

namespace cdengine {

ImageTensor::ImageTensor(std::size_t height, std::size_t width, std::size_t channels, std::vector<double> pixels)
    : height_(height), width_(width), channels_(channels), pixels_(std::move(pixels)) {
  if (height_ == 0 || width_ == 0) throw Error(ErrorCode::InvalidImage, "image dimensions must be positive");
  if (channels_ != 1 && channels_ != 3) {
    throw Error(ErrorCode::InvalidImage, "channels must be 1 or 3, got " + std::to_string(channels_));
  }
  if (pixels_.size() != height_ * width_ * channels_) {
    throw Error(ErrorCode::InvalidImage, "pixel buffer has " + std::to_string(pixels_.size()) +
                                             " values, expected " + std::to_string(height_ * width_ * channels_));
  }
  for (double& p : pixels_) {
    if (!std::isfinite(p)) throw Error(ErrorCode::InvalidImage, "non-finite pixel value");
    p = std::clamp(p, 0.0, 1.0);
  }
}

ImageTensor ImageTensor::filled(std::size_t height, std::size_t width, std::size_t channels, double value) {
  return ImageTensor(height, width, channels, std::vector<double>(height * width * channels, value));
}

double ImageTensor::channel_mean(std::size_t c) const {
  double total = 0.0;
  for (std::size_t i = c; i < pixels_.size(); i += channels_) total += pixels_[i];
  return total / static_cast<double>(height_ * width_);
}

}  // namespace cdengine
