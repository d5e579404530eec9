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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdengine/calibration_config.hpp"
#include "cdengine/variant.hpp"

namespace cdengine {

/// A named evaluation row: which variants to fetch and how to calibrate.
/// The baseline method fetches no variants and takes the original argmax.
struct Method {
  std::string name;
  std::string label;
  CalibrationConfig config;
  std::vector<VariantKind> variants;
  bool baseline = false;
};

/// Shared knobs applied to every preset.
struct MethodOptions {
  double alpha = 1.0;
  double beta = 0.2;
  bool normalize_naive = false;
  double weight_scale = 1.0;
  DiffusionNoiseVariant noise{};
  DownsampleVariant downsample{};
  EditedVariant edited{};
};

/// Preset names: original, single-noise, single-downsample, single-noimage,
/// single-edited, naive-fusion, entropy-fusion, confidence-fusion,
/// unconfidence-fusion, pdd-fusion.
const std::vector<std::string>& preset_names();

/// The rows of the standard results table, in table order.
const std::vector<std::string>& table_methods();

std::optional<Method> method_preset(std::string_view name, const MethodOptions& options = {});

/// Parses a comma-separated preset list. Unknown names raise InvalidArgument.
std::vector<Method> parse_methods(std::string_view list, const MethodOptions& options = {});

}  // namespace cdengine
