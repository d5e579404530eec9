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
#include <variant>
#include <vector>

#include "cdengine/logits.hpp"

namespace cdengine {

struct OriginalVariant {
  bool operator==(const OriginalVariant&) const = default;
};

/// Forward diffusion noising for `steps` steps of a named noise schedule.
struct DiffusionNoiseVariant {
  int steps = 500;
  std::string schedule = "linear";
  bool operator==(const DiffusionNoiseVariant&) const = default;
};

/// Downscale each side by 1/ratio, then upscale back.
struct DownsampleVariant {
  int ratio = 32;
  bool operator==(const DownsampleVariant&) const = default;
};

/// Image absent; logits come from the language model alone.
struct NoImageVariant {
  bool operator==(const NoImageVariant&) const = default;
};

/// Image edited by an external text-driven editing model.
struct EditedVariant {
  double cfg_text = 20.0;
  std::string instruction;
  bool operator==(const EditedVariant&) const = default;
};

using VariantKind =
    std::variant<OriginalVariant, DiffusionNoiseVariant, DownsampleVariant, NoImageVariant, EditedVariant>;

enum class VariantTag { Original, DiffusionNoise, Downsample, NoImage, Edited };

VariantTag tag_of(const VariantKind& variant);

/// Wire name used in record files: "original", "diffusion_noise", ...
std::string_view kind_name(VariantTag tag);
/// Human-facing name used in messages: "Original", "DiffusionNoise", ...
std::string_view display_name(VariantTag tag);
std::optional<VariantTag> parse_kind_name(std::string_view name);

/// Variant with default parameters for `tag`.
VariantKind default_variant(VariantTag tag);

/// Canonical string identifying kind and parameters; equal keys iff equal variants.
std::string variant_key(const VariantKind& variant);

/// Token ids whose argmax means "yes" / "no". The two sets must be disjoint.
struct AnswerTokenMap {
  std::vector<TokenId> yes;
  std::vector<TokenId> no;

  void validate() const;
  bool operator==(const AnswerTokenMap&) const = default;
};

struct VariantRecord {
  std::string sample_id;
  VariantKind variant;
  LogitVector logits;
  std::optional<AnswerTokenMap> answer_tokens;

  bool operator==(const VariantRecord&) const = default;
};

}  // namespace cdengine
