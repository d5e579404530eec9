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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cdengine/image.hpp"
#include "cdengine/variant.hpp"

namespace cdengine {

/// Per-step noise amounts gamma_1..gamma_T of a forward diffusion process,
/// with the cumulative signal retention alpha_bar_n = prod_{j<=n} (1 - gamma_j).
class NoiseSchedule {
 public:
  static constexpr std::size_t kDefaultSteps = 999;

  /// Linearly spaced gammas over `total_steps` (DDPM defaults 1e-4 .. 0.02).
  static NoiseSchedule linear(std::size_t total_steps = kDefaultSteps, double gamma_start = 1e-4,
                              double gamma_end = 0.02);
  /// Gammas must lie in (0,1) and be non-decreasing.
  static NoiseSchedule from_gammas(std::vector<double> gammas, std::string id = "custom");
  /// Built-in schedule by id; only "linear" is built in.
  static NoiseSchedule by_name(std::string_view id, std::size_t total_steps = kDefaultSteps);

  std::size_t total_steps() const noexcept { return gammas_.size(); }
  const std::vector<double>& gammas() const noexcept { return gammas_; }
  const std::string& id() const noexcept { return id_; }

  /// alpha_bar after `steps` steps; alpha_bar(0) == 1.
  double alpha_bar(std::size_t steps) const;

 private:
  NoiseSchedule(std::vector<double> gammas, std::string id);

  std::vector<double> gammas_;
  std::vector<double> alpha_bar_;
  std::string id_;
};

/// Forward-diffuses `image` by `steps` steps in closed form:
///   v_N = sqrt(alpha_bar_N) * v_0 + sqrt(1 - alpha_bar_N) * eps,  eps ~ N(0, I)
/// then clamps to [0,1]. Noise is drawn from std::mt19937_64(seed), one
/// standard normal per pixel value in row-major order. steps == 0 returns
/// the input unchanged.
ImageTensor diffuse(const ImageTensor& image, std::size_t steps, const NoiseSchedule& schedule,
                    std::uint64_t seed);

enum class ResizeKernel { Bilinear, Nearest };

/// Resamples to height x width. Bilinear uses a triangle filter whose support
/// widens with the reduction factor when shrinking (area-aware, as in common
/// imaging libraries) and plain half-pixel bilinear interpolation when growing.
ImageTensor resize(const ImageTensor& image, std::size_t height, std::size_t width,
                   ResizeKernel kernel = ResizeKernel::Bilinear);

/// Shrinks each side by 1/ratio (floor) and resizes back to the input size.
ImageTensor downsample(const ImageTensor& image, int ratio, ResizeKernel kernel = ResizeKernel::Bilinear);

/// The absent-image marker. Pixels are ignored; no-image logits must come
/// from a provider or a record of kind NoImage.
NoImageVariant blank(const ImageTensor& image);

}  // namespace cdengine
