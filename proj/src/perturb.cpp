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

#include "cdengine/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cdengine/error.hpp"

namespace cdengine {

NoiseSchedule::NoiseSchedule(std::vector<double> gammas, std::string id)
    : gammas_(std::move(gammas)), id_(std::move(id)) {
  if (gammas_.empty()) throw Error(ErrorCode::InvalidArgument, "noise schedule needs at least one step");
  alpha_bar_.reserve(gammas_.size() + 1);
  alpha_bar_.push_back(1.0);
  double prev = 0.0;
  for (double g : gammas_) {
    if (!(g > 0.0 && g < 1.0)) throw Error(ErrorCode::InvalidArgument, "noise gammas must lie in (0,1)");
    if (g < prev) throw Error(ErrorCode::InvalidArgument, "noise gammas must be non-decreasing");
    prev = g;
    alpha_bar_.push_back(alpha_bar_.back() * (1.0 - g));
  }
}

NoiseSchedule NoiseSchedule::linear(std::size_t total_steps, double gamma_start, double gamma_end) {
  if (total_steps == 0) throw Error(ErrorCode::InvalidArgument, "noise schedule needs at least one step");
  std::vector<double> gammas(total_steps);
  for (std::size_t i = 0; i < total_steps; ++i) {
    const double t = total_steps == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(total_steps - 1);
    gammas[i] = gamma_start + t * (gamma_end - gamma_start);
  }
  return NoiseSchedule(std::move(gammas), "linear");
}

NoiseSchedule NoiseSchedule::from_gammas(std::vector<double> gammas, std::string id) {
  return NoiseSchedule(std::move(gammas), std::move(id));
}

NoiseSchedule NoiseSchedule::by_name(std::string_view id, std::size_t total_steps) {
  if (id == "linear") return linear(total_steps);
  throw Error(ErrorCode::InvalidArgument, "unknown noise schedule '" + std::string(id) + "'");
}

double NoiseSchedule::alpha_bar(std::size_t steps) const {
  if (steps > total_steps()) {
    throw Error(ErrorCode::StepOutOfRange, "step " + std::to_string(steps) + " exceeds schedule length " +
                                               std::to_string(total_steps()));
  }
  return alpha_bar_[steps];
}

ImageTensor diffuse(const ImageTensor& image, std::size_t steps, const NoiseSchedule& schedule,
                    std::uint64_t seed) {
  const double ab = schedule.alpha_bar(steps);
  if (steps == 0) return image;

  const double signal = std::sqrt(ab);
  const double noise = std::sqrt(1.0 - ab);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<double> out(image.pixels().begin(), image.pixels().end());
  for (double& v : out) {
    v = std::clamp(signal * v + noise * normal(rng), 0.0, 1.0);
  }
  return ImageTensor(image.height(), image.width(), image.channels(), std::move(out));
}

namespace {

// One output sample's contributing input range and normalized weights.
struct Taps {
  std::size_t first = 0;
  std::vector<double> weights;
};

std::vector<Taps> bilinear_taps(std::size_t in_size, std::size_t out_size) {
  const double scale = static_cast<double>(in_size) / static_cast<double>(out_size);
  const double filter_scale = std::max(scale, 1.0);
  const double support = filter_scale;  // triangle filter has unit support
  std::vector<Taps> taps(out_size);
  for (std::size_t i = 0; i < out_size; ++i) {
    const double center = (static_cast<double>(i) + 0.5) * scale;
    const auto lo = static_cast<std::ptrdiff_t>(std::floor(center - support + 0.5));
    const auto hi = static_cast<std::ptrdiff_t>(std::floor(center + support + 0.5));
    const std::size_t first = static_cast<std::size_t>(std::max<std::ptrdiff_t>(lo, 0));
    const std::size_t last = static_cast<std::size_t>(std::min<std::ptrdiff_t>(hi, static_cast<std::ptrdiff_t>(in_size)));
    Taps t;
    t.first = first;
    double total = 0.0;
    for (std::size_t x = first; x < last; ++x) {
      const double d = std::abs((static_cast<double>(x) + 0.5 - center) / filter_scale);
      const double w = d < 1.0 ? 1.0 - d : 0.0;
      t.weights.push_back(w);
      total += w;
    }
    for (double& w : t.weights) w /= total;
    taps[i] = std::move(t);
  }
  return taps;
}

std::vector<Taps> nearest_taps(std::size_t in_size, std::size_t out_size) {
  const double scale = static_cast<double>(in_size) / static_cast<double>(out_size);
  std::vector<Taps> taps(out_size);
  for (std::size_t i = 0; i < out_size; ++i) {
    const auto src = static_cast<std::size_t>(std::floor((static_cast<double>(i) + 0.5) * scale));
    taps[i] = Taps{std::min(src, in_size - 1), {1.0}};
  }
  return taps;
}

std::vector<Taps> make_taps(std::size_t in_size, std::size_t out_size, ResizeKernel kernel) {
  return kernel == ResizeKernel::Bilinear ? bilinear_taps(in_size, out_size) : nearest_taps(in_size, out_size);
}

}  // namespace

ImageTensor resize(const ImageTensor& image, std::size_t height, std::size_t width, ResizeKernel kernel) {
  if (height == 0 || width == 0) throw Error(ErrorCode::InvalidImage, "resize target must be non-empty");
  const std::size_t c = image.channels();
  const std::size_t in_h = image.height();
  const std::size_t in_w = image.width();
  const auto src = image.pixels();

  // Horizontal pass: in_h x width.
  std::vector<double> horiz(in_h * width * c);
  if (width == in_w) {
    std::copy(src.begin(), src.end(), horiz.begin());
  } else {
    const auto taps = make_taps(in_w, width, kernel);
    for (std::size_t y = 0; y < in_h; ++y) {
      for (std::size_t x = 0; x < width; ++x) {
        const auto& t = taps[x];
        for (std::size_t ch = 0; ch < c; ++ch) {
          double acc = 0.0;
          for (std::size_t k = 0; k < t.weights.size(); ++k) {
            acc += t.weights[k] * src[(y * in_w + t.first + k) * c + ch];
          }
          horiz[(y * width + x) * c + ch] = acc;
        }
      }
    }
  }

  if (height == in_h) return ImageTensor(height, width, c, std::move(horiz));

  std::vector<double> out(height * width * c);
  const auto taps = make_taps(in_h, height, kernel);
  for (std::size_t y = 0; y < height; ++y) {
    const auto& t = taps[y];
    for (std::size_t x = 0; x < width; ++x) {
      for (std::size_t ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        for (std::size_t k = 0; k < t.weights.size(); ++k) {
          acc += t.weights[k] * horiz[((t.first + k) * width + x) * c + ch];
        }
        out[(y * width + x) * c + ch] = acc;
      }
    }
  }
  return ImageTensor(height, width, c, std::move(out));
}

ImageTensor downsample(const ImageTensor& image, int ratio, ResizeKernel kernel) {
  if (ratio < 1) throw Error(ErrorCode::InvalidArgument, "downsample ratio must be at least 1");
  const auto r = static_cast<std::size_t>(ratio);
  if (r > image.height() || r > image.width()) {
    throw Error(ErrorCode::RatioTooLarge, "ratio " + std::to_string(ratio) + " exceeds image side (" +
                                              std::to_string(image.height()) + "x" +
                                              std::to_string(image.width()) + ")");
  }
  if (r == 1) return image;
  const ImageTensor small = resize(image, image.height() / r, image.width() / r, kernel);
  return resize(small, image.height(), image.width(), kernel);
}

NoImageVariant blank(const ImageTensor& /*image*/) { return NoImageVariant{}; }

}  // namespace cdengine
