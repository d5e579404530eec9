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

#include <filesystem>

#include "cdengine/image.hpp"

namespace cdengine {

/// 8-bit PNG. Colour images load as 3 channels, grayscale as 1; alpha is
/// dropped.
ImageTensor load_png(const std::filesystem::path& path);
void save_png(const std::filesystem::path& path, const ImageTensor& image);

/// Raw little-endian float image: int32 height, width, channels followed by
/// height*width*channels float32 pixels in row-major order.
ImageTensor load_raw(const std::filesystem::path& path);
void save_raw(const std::filesystem::path& path, const ImageTensor& image);

/// Dispatches on extension: ".png" or anything else as raw.
ImageTensor load_image(const std::filesystem::path& path);
void save_image(const std::filesystem::path& path, const ImageTensor& image);

}  // namespace cdengine
