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

#include "cdengine/variant.hpp"

#include <algorithm>
#include <array>
#include <nlohmann/json.hpp>

#include "cdengine/error.hpp"

namespace cdengine {
namespace {

struct KindNames {
  VariantTag tag;
  std::string_view wire;
  std::string_view display;
};

constexpr std::array<KindNames, 5> kKindNames{{
    {VariantTag::Original, "original", "Original"},
    {VariantTag::DiffusionNoise, "diffusion_noise", "DiffusionNoise"},
    {VariantTag::Downsample, "downsample", "Downsample"},
    {VariantTag::NoImage, "no_image", "NoImage"},
    {VariantTag::Edited, "edited", "Edited"},
}};

}  // namespace

VariantTag tag_of(const VariantKind& variant) { return static_cast<VariantTag>(variant.index()); }

std::string_view kind_name(VariantTag tag) { return kKindNames[static_cast<std::size_t>(tag)].wire; }

std::string_view display_name(VariantTag tag) { return kKindNames[static_cast<std::size_t>(tag)].display; }

std::optional<VariantTag> parse_kind_name(std::string_view name) {
  for (const auto& entry : kKindNames) {
    if (entry.wire == name) return entry.tag;
  }
  return std::nullopt;
}

VariantKind default_variant(VariantTag tag) {
  switch (tag) {
    case VariantTag::Original: return OriginalVariant{};
    case VariantTag::DiffusionNoise: return DiffusionNoiseVariant{};
    case VariantTag::Downsample: return DownsampleVariant{};
    case VariantTag::NoImage: return NoImageVariant{};
    case VariantTag::Edited: return EditedVariant{};
  }
  return OriginalVariant{};
}

std::string variant_key(const VariantKind& variant) {
  nlohmann::json params = nlohmann::json::object();
  if (const auto* noise = std::get_if<DiffusionNoiseVariant>(&variant)) {
    params["steps"] = noise->steps;
    params["schedule"] = noise->schedule;
  } else if (const auto* down = std::get_if<DownsampleVariant>(&variant)) {
    params["ratio"] = down->ratio;
  } else if (const auto* edited = std::get_if<EditedVariant>(&variant)) {
    params["cfg_text"] = edited->cfg_text;
    params["instruction"] = edited->instruction;
  }
  return std::string(kind_name(tag_of(variant))) + params.dump();
}

void AnswerTokenMap::validate() const {
  for (TokenId id : yes) {
    if (std::find(no.begin(), no.end(), id) != no.end()) {
      throw Error(ErrorCode::InvalidAnswerMap,
                  "token " + std::to_string(id) + " is in both the yes and no sets");
    }
  }
}

}  // namespace cdengine
