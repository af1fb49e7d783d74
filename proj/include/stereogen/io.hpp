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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stereogen/core.hpp"

namespace stereogen {

// --- Disparity formats ------------------------------------------------------

/// Single-channel PFM ("Pf" header, rows bottom-up, scale sign = endianness).
/// Non-finite payload values load as invalid pixels; invalid pixels are
/// written back as +inf, so write->read round-trips bit-exactly.
DisparityField read_pfm(const std::filesystem::path& path);
void write_pfm(const DisparityField& field, const std::filesystem::path& path);

/// KITTI encoding: 16-bit single-channel PNG, disparity = stored / 256,
/// stored 0 marks a missing pixel. Valid disparities must round into
/// [1, 65535] to be encodable.
DisparityField read_kitti_png(const std::filesystem::path& path);
void write_kitti_png(const DisparityField& field, const std::filesystem::path& path);

/// Relative depth as exported by mono-depth models: either a PFM or a 16-bit
/// PNG normalized by 65535. Dispatches on the file extension.
DisparityField read_rel_depth(const std::filesystem::path& path);

/// Disparity-by-extension helper for CLI inputs: .pfm -> PFM, .png -> KITTI.
DisparityField read_disparity(const std::filesystem::path& path);

// --- Images and masks -------------------------------------------------------

/// 8-bit PNG or JPEG (read). Grayscale is replicated to three channels;
/// anything else (16-bit, alpha) is a format error.
RasterImage read_image(const std::filesystem::path& path);
/// 8-bit PNG (write), round-half-away-from-zero quantization.
void write_image(const RasterImage& image, const std::filesystem::path& path);

/// Single-channel 8-bit PNG, 255 = set, 0 = clear.
BitMask read_mask_png(const std::filesystem::path& path);
void write_mask_png(const BitMask& mask, const std::filesystem::path& path);

// --- Dataset manifest -------------------------------------------------------

struct ManifestEntry {
    std::string id;
    std::string left_path;
    std::optional<std::string> right_path;
    std::optional<std::string> rel_depth_path;
    std::optional<std::string> gt_disp_path;
    std::string dataset_id;
    // Provenance, present on generated manifests.
    std::optional<double> alpha;
    std::optional<std::uint64_t> seed;
};

/// Line-delimited JSON: a header object {"version":..., "config":...}
/// followed by one sample object per line. Paths are stored relative to the
/// manifest file unless absolute.
struct Manifest {
    int version = 1;
    nlohmann::json config = nlohmann::json::object();
    std::vector<ManifestEntry> samples;
    std::filesystem::path base_dir; // directory of the manifest file

    std::filesystem::path resolve(const std::string& path) const;
};

/// Loads and validates a manifest. Duplicate ids are an error; referenced
/// input files that do not exist are reported through `warnings`.
Manifest read_manifest(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);

} // namespace stereogen
