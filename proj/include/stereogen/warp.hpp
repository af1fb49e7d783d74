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

#include <cstdint>

#include "stereogen/core.hpp"

namespace stereogen {

/// How a fractional target column is snapped to a pixel.
enum class TargetRounding {
    NearestHalfAwayFromZero, // default: single-displacement splat, no blur
    Floor,
};

/// Which source wins when two pixels of equal disparity land on one target.
enum class CollisionTie {
    PreferLargerColumn, // default: deterministic, right-most source
    PreferSmallerColumn,
};

struct WarpOptions {
    TargetRounding rounding = TargetRounding::NearestHalfAwayFromZero;
    CollisionTie tie = CollisionTie::PreferLargerColumn;
};

/// Output of a forward warp. hole_mask is 1 exactly where no source pixel
/// landed; source_disparity records the winning source's disparity per target
/// and is valid exactly where hole_mask is 0.
struct WarpResult {
    RasterImage right_image;
    BitMask hole_mask;
    DisparityField source_disparity;
};

/// Converts a relative disparity field (values in [0,1]) to pixel units by
/// multiplying with alpha. The validity mask is unchanged.
DisparityField scale_disparity(const DisparityField& rel, double alpha);

/// Draws alpha ~ U(d_min, d_max), deterministic for a given seed.
double sample_alpha(std::uint64_t seed, double d_min, double d_max);

/// Splats every left-view pixel at column x to target column x - D(x) in the
/// same row (right-view coordinate). Out-of-image targets are dropped.
/// Collisions keep the source with the larger disparity (nearer surface);
/// ties follow opts.tie. The disparity field must be dense and non-negative.
WarpResult forward_warp(const RasterImage& left, const DisparityField& disp, const WarpOptions& opts = {});

} // namespace stereogen
