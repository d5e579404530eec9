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

#include "cdengine/methods.hpp"

#include "cdengine/error.hpp"

namespace cdengine {

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> kNames{
      "original",       "single-noise",    "single-downsample", "single-noimage",      "single-edited",
      "naive-fusion",   "entropy-fusion",  "confidence-fusion", "unconfidence-fusion", "pdd-fusion"};
  return kNames;
}

const std::vector<std::string>& table_methods() {
  static const std::vector<std::string> kRows{"original",      "single-noise", "single-noimage",
                                              "single-downsample", "single-edited", "naive-fusion",
                                              "entropy-fusion", "pdd-fusion"};
  return kRows;
}

std::optional<Method> method_preset(std::string_view name, const MethodOptions& options) {
  CalibrationConfig base;
  base.alpha = options.alpha;
  base.beta = options.beta;
  base.normalize_naive = options.normalize_naive;
  base.weight_scale = options.weight_scale;

  // Fusion order follows the table: noise, no image, downsample, edited.
  const std::vector<VariantKind> all{options.noise, NoImageVariant{}, options.downsample, options.edited};

  auto single = [&](std::string label, VariantKind v) {
    return Method{std::string(name), std::move(label), base, {std::move(v)}, false};
  };
  auto weighted = [&](std::string label, WeightMetric metric) {
    CalibrationConfig cfg = base;
    cfg.fusion = FusionMode::Weighted;
    cfg.metric = metric;
    return Method{std::string(name), std::move(label), cfg, all, false};
  };

  if (name == "original") return Method{"original", "Original", base, {}, true};
  if (name == "single-noise") return single("diffusion noise", options.noise);
  if (name == "single-noimage") return single("no image", NoImageVariant{});
  if (name == "single-downsample") return single("downsample", options.downsample);
  if (name == "single-edited") return single("image editing", options.edited);
  if (name == "naive-fusion") {
    CalibrationConfig cfg = base;
    cfg.fusion = FusionMode::Naive;
    return Method{"naive-fusion", "naive fusion", cfg, all, false};
  }
  if (name == "entropy-fusion") return weighted("entropy-weighted fusion", WeightMetric::Entropy);
  if (name == "confidence-fusion") return weighted("conf-weighted fusion", WeightMetric::Confidence);
  if (name == "unconfidence-fusion") return weighted("unconf-weighted fusion", WeightMetric::Unconfidence);
  if (name == "pdd-fusion") return weighted("PDD-weighted fusion", WeightMetric::PDD);
  return std::nullopt;
}

std::vector<Method> parse_methods(std::string_view list, const MethodOptions& options) {
  std::vector<Method> methods;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const auto end = comma == std::string_view::npos ? list.size() : comma;
    std::string_view name = list.substr(start, end - start);
    while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
    while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
    if (!name.empty()) {
      auto method = method_preset(name, options);
      if (!method) throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(name) + "'");
      for (const auto& m : methods) {
        if (m.name == method->name) throw Error(ErrorCode::InvalidArgument, "method listed twice: " + m.name);
      }
      methods.push_back(std::move(*method));
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (methods.empty()) throw Error(ErrorCode::InvalidArgument, "no methods given");
  return methods;
}

}  // namespace cdengine
