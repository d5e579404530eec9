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

#include <cmath>
#include <numbers>
#include <random>

#include "cdengine/error.hpp"
#include "cdengine/perturb.hpp"
#include "generators.hpp"

namespace cdengine {
namespace {

ImageTensor random_image(testing::Gen& g, std::size_t h, std::size_t w, std::size_t c) {
  std::vector<double> px(h * w * c);
  for (auto& p : px) p = g.real(0.0, 1.0);
  return ImageTensor(h, w, c, std::move(px));
}

ImageTensor checkerboard(std::size_t n) {
  std::vector<double> px(n * n);
  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t x = 0; x < n; ++x) px[y * n + x] = static_cast<double>((x + y) % 2);
  }
  return ImageTensor(n, n, 1, px);
}

double max_abs_diff(const ImageTensor& a, const ImageTensor& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.pixels().size(); ++i) m = std::max(m, std::abs(a.pixels()[i] - b.pixels()[i]));
  return m;
}

double l2_diff(const ImageTensor& a, const ImageTensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.pixels().size(); ++i) s += std::pow(a.pixels()[i] - b.pixels()[i], 2);
  return std::sqrt(s);
}

TEST(NoiseSchedule, LinearDefaults) {
  const auto s = NoiseSchedule::linear();
  ASSERT_EQ(s.total_steps(), 999u);
  EXPECT_DOUBLE_EQ(s.gammas().front(), 1e-4);
  EXPECT_DOUBLE_EQ(s.gammas().back(), 0.02);
  EXPECT_EQ(s.alpha_bar(0), 1.0);
  for (std::size_t n = 1; n <= s.total_steps(); ++n) {
    EXPECT_LT(s.alpha_bar(n), s.alpha_bar(n - 1));
    EXPECT_GT(s.alpha_bar(n), 0.0);
  }
  EXPECT_THROW(s.alpha_bar(1000), Error);
}

TEST(NoiseSchedule, AlphaBarIsCumulativeProduct) {
  const auto s = NoiseSchedule::from_gammas({0.1, 0.2, 0.5});
  EXPECT_DOUBLE_EQ(s.alpha_bar(1), 0.9);
  EXPECT_DOUBLE_EQ(s.alpha_bar(2), 0.9 * 0.8);
  EXPECT_DOUBLE_EQ(s.alpha_bar(3), 0.9 * 0.8 * 0.5);
}

TEST(NoiseSchedule, RejectsBadGammas) {
  EXPECT_THROW(NoiseSchedule::from_gammas({}), Error);
  EXPECT_THROW(NoiseSchedule::from_gammas({0.0}), Error);
  EXPECT_THROW(NoiseSchedule::from_gammas({1.0}), Error);
  EXPECT_THROW(NoiseSchedule::from_gammas({0.2, 0.1}), Error);
  EXPECT_THROW(NoiseSchedule::by_name("cosine"), Error);
  EXPECT_EQ(NoiseSchedule::by_name("linear").id(), "linear");
}

TEST(Diffuse, ZeroStepsIsIdentity) {
  testing::Gen g(1);
  const auto img = random_image(g, 9, 5, 3);
  EXPECT_EQ(diffuse(img, 0, NoiseSchedule::linear(), 42), img);
}

TEST(Diffuse, StepsBeyondScheduleThrow) {
  const auto img = ImageTensor::filled(2, 2, 1, 0.5);
  try {
    diffuse(img, 1000, NoiseSchedule::linear(), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StepOutOfRange);
  }
}

TEST(Diffuse, DeterministicPerSeed) {
  testing::Gen g(2);
  const auto img = random_image(g, 8, 8, 3);
  const auto s = NoiseSchedule::linear();
  EXPECT_EQ(diffuse(img, 500, s, 7), diffuse(img, 500, s, 7));
  EXPECT_NE(diffuse(img, 500, s, 7), diffuse(img, 500, s, 8));
}

TEST(Diffuse, ClosedFormFromSeededDraws) {
  // 2x2 constant 0.5 with alpha_bar = 0.25: pixel = 0.25 + sqrt(0.75) * eps_i, clamped.
  const auto schedule = NoiseSchedule::from_gammas({0.75});
  ASSERT_DOUBLE_EQ(schedule.alpha_bar(1), 0.25);
  const auto out = diffuse(ImageTensor::filled(2, 2, 1, 0.5), 1, schedule, 99);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal;
  for (std::size_t i = 0; i < 4; ++i) {
    const double expect = std::clamp(0.5 * 0.5 + std::sqrt(0.75) * normal(rng), 0.0, 1.0);
    EXPECT_DOUBLE_EQ(out.pixels()[i], expect);
  }
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// E[clamp(mu + sigma * Z, 0, 1)] for standard normal Z.
double clamped_mean(double mu, double sigma) {
  const double a = (0.0 - mu) / sigma;
  const double b = (1.0 - mu) / sigma;
  return mu * (normal_cdf(b) - normal_cdf(a)) + sigma * (normal_pdf(a) - normal_pdf(b)) + (1.0 - normal_cdf(b));
}

// With heavy noise the clamp shifts the mean; compare against the exact
// clamped-normal expectation instead of sqrt(alpha_bar) * mean.
TEST(Diffuse, ClampedMeanMatchesExpectationAtDefaultSteps) {
  testing::Gen g(5);
  const auto img = random_image(g, 6, 6, 1);
  const auto schedule = NoiseSchedule::linear();
  const std::size_t steps = 500;
  const double signal = std::sqrt(schedule.alpha_bar(steps));
  const double sigma = std::sqrt(1.0 - schedule.alpha_bar(steps));
  double expected = 0.0;
  for (double p : img.pixels()) expected += clamped_mean(signal * p, sigma);
  expected /= static_cast<double>(img.pixels().size());

  const int seeds = 1000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const double m = diffuse(img, steps, schedule, static_cast<std::uint64_t>(s)).channel_mean(0);
    sum += m;
    sum_sq += m * m;
  }
  const double mean = sum / seeds;
  const double se = std::sqrt((sum_sq / seeds - mean * mean) / (seeds - 1));
  EXPECT_LT(std::abs(mean - expected), 3.0 * se) << "mean " << mean << " expected " << expected;
  // The unclamped target is far away here, which is why the clamp-aware form is used.
  EXPECT_GT(std::abs(expected - signal * img.channel_mean(0)), 3.0 * se);
}

TEST(Downsample, RatioOneIsIdentity) {
  testing::Gen g(6);
  const auto img = random_image(g, 7, 11, 3);
  EXPECT_EQ(downsample(img, 1), img);
  EXPECT_EQ(downsample(img, 1, ResizeKernel::Nearest), img);
}

TEST(Downsample, RejectsBadRatios) {
  const auto img = ImageTensor::filled(8, 4, 1, 0.2);
  EXPECT_THROW(downsample(img, 0), Error);
  try {
    downsample(img, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RatioTooLarge);
  }
  EXPECT_NO_THROW(downsample(img, 4));
}

TEST(Downsample, CheckerboardBecomesItsMean) {
  const auto out = downsample(checkerboard(4), 4);
  for (double p : out.pixels()) EXPECT_NEAR(p, 0.5, 1e-6);
}

TEST(Downsample, ConstantImagesAreFixedPoints) {
  for (auto kernel : {ResizeKernel::Bilinear, ResizeKernel::Nearest}) {
    const auto img = ImageTensor::filled(32, 48, 3, 0.3);
    EXPECT_LT(max_abs_diff(downsample(img, 8, kernel), img), 1e-12);
  }
}

TEST(Downsample, PreservesShape) {
  testing::Gen g(7);
  const auto img = random_image(g, 37, 50, 3);
  const auto out = downsample(img, 6);
  EXPECT_EQ(out.height(), 37u);
  EXPECT_EQ(out.width(), 50u);
  EXPECT_EQ(out.channels(), 3u);
}

TEST(DownsampleProperty, NearestIsExactlyIdempotent) {
  testing::Gen g(8);
  for (int trial = 0; trial < 30; ++trial) {
    const int r = static_cast<int>(g.size(1, 8));
    const auto img = random_image(g, static_cast<std::size_t>(r) * g.size(1, 8), static_cast<std::size_t>(r) * g.size(1, 8), 3);
    const auto once = downsample(img, r, ResizeKernel::Nearest);
    EXPECT_EQ(downsample(once, r, ResizeKernel::Nearest), once);
  }
}

// Bilinear down-up is a smoothing projection only approximately; a second
// pass moves the image strictly less than the first did.
TEST(DownsampleProperty, BilinearSecondPassMovesLess) {
  testing::Gen g(9);
  for (int trial = 0; trial < 30; ++trial) {
    const int r = static_cast<int>(g.size(2, 8));
    const auto img = random_image(g, static_cast<std::size_t>(r) * g.size(2, 6), static_cast<std::size_t>(r) * g.size(2, 6), 3);
    const auto once = downsample(img, r);
    const auto twice = downsample(once, r);
    EXPECT_LT(l2_diff(twice, once), l2_diff(once, img));
  }
}

TEST(DownsampleProperty, ChannelMeansPreservedWhenRatioDivides) {
  testing::Gen g(10);
  for (int r : {2, 4, 8, 16, 32}) {
    const auto img = random_image(g, 256, 256, 3);
    const auto out = downsample(img, r);
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(out.channel_mean(c), img.channel_mean(c), 1e-3) << "r=" << r;
  }
}

TEST(Blank, ReturnsMarker) {
  EXPECT_EQ(blank(ImageTensor::filled(2, 2, 1, 0.0)), NoImageVariant{});
}

}  // namespace
}  // namespace cdengine
