// Copyright 2026 The stereogen authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "stereogen/core.hpp"

namespace stereogen {

/// Deterministic hole filler: each hole takes the nearest non-hole pixel to
/// its right (the background side under a left-to-right warp), falling back
/// to the nearest non-hole pixel on the left, then to the image mean for
/// fully-hole rows (with a warning). Non-hole pixels are never touched.
RasterImage inpaint_builtin(const RasterImage& image, const BitMask& holes,
                            std::vector<std::string>* warnings = nullptr);

struct ExternalInpaintOptions {
    /// Shell command with {image}, {mask} and {output} placeholders. {output}
    /// is mandatory; placeholders are substituted verbatim with file paths.
    std::string command_template;
    /// Working directory for the exchange files and the command itself.
    std::filesystem::path workdir;
    std::chrono::milliseconds timeout{60000};
};

/// Delegates hole filling to an external program through a file protocol:
/// image and mask are written as 8-bit PNGs (mask: 255 = hole), the command
/// runs with workdir as its current directory, and the output PNG is read
/// back. Pixels outside the holes are re-composited from the input, so the
/// backend can never alter known content.
RasterImage inpaint_external(const RasterImage& image, const BitMask& holes, const ExternalInpaintOptions& opts);

} // namespace stereogen
