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
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "stereogen/core.hpp"
#include "stereogen/inpaint.hpp"
#include "stereogen/warp.hpp"

namespace stereogen {

struct InpaintBackendConfig {
    enum class Kind { Builtin, External };
    Kind kind = Kind::Builtin;
    std::string command_template;                  // external only
    std::chrono::milliseconds timeout{60000};      // external only
};

/// All tunables of the generation pipeline.
struct GenerationConfig {
    double d_min = 32.0;     // alpha range (pixels)
    double d_max = 96.0;
    double tau = 3.0;        // edge threshold (pixels)
    int strip_width = 3;     // carried background strip
    double q = 0.8;          // residual quantile kept as inliers
    double beta = 1.0;       // combined-loss weight
    std::uint64_t seed = 0;  // global seed
    InpaintBackendConfig backend;
    WarpOptions warp;

    void validate() const;
};

/// One synthesized training pair. disparity_gt is the dense scaled field the
/// right view was rendered from; hole_mask_pre_inpaint marks the pixels the
/// inpainting backend was asked to fill.
struct StereoSample {
    RasterImage left;
    RasterImage right;
    DisparityField disparity_gt;
    BitMask hole_mask_pre_inpaint;
    double alpha_used = 0.0;
    std::string source_id;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;
};

/// Scale -> warp with edge carry -> inpaint. Deterministic given the inputs
/// and seed when the backend is deterministic. `workdir` is only used by the
/// external backend.
StereoSample generate_sample(const RasterImage& image, const DisparityField& rel_depth, const GenerationConfig& cfg,
                             std::uint64_t sample_seed, const std::string& source_id = "",
                             const std::filesystem::path& workdir = {});

// --- Dataset mixing -----------------------------------------------------------

struct MixSource {
    std::string dataset_id;
    double weight = 0.0;
};

struct MixSpec {
    std::vector<MixSource> sources;
    void validate() const;
};

/// Infinite stream of i.i.d. categorical draws with probabilities
/// proportional to the weights; deterministic per seed.
class MixStream {
public:
    MixStream(MixSpec spec, std::uint64_t seed);

    std::size_t next_index();
    const std::string& next();

private:
    MixSpec spec_;
    std::vector<double> cumulative_;
    std::uint64_t rng_state_;
};

// --- Manifest-driven batch generation ------------------------------------------

struct BatchOptions {
    std::filesystem::path out_dir;
    int jobs = 1;
    /// Called once per finished sample (any thread, serialized internally).
    std::function<void(const struct SampleOutcome&)> on_sample;
};

struct SampleOutcome {
    std::string id;
    bool ok = false;
    std::string error;                  // set when !ok
    double alpha = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;
};

struct BatchReport {
    std::vector<SampleOutcome> outcomes; // in manifest order
    std::vector<std::string> manifest_warnings;
    std::size_t failures = 0;
};

/// Generates every sample of the manifest into out_dir
/// (<id>_left.png / <id>_right.png / <id>_disp.pfm / <id>_holes.png plus an
/// output manifest.jsonl). Samples are independent; jobs > 1 runs a bounded
/// worker pool with output identical to a serial run.
BatchReport generate_batch(const std::filesystem::path& manifest_path, const GenerationConfig& cfg,
                           const BatchOptions& batch);

} // namespace stereogen
