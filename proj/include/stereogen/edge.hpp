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

#include <vector>

#include "stereogen/core.hpp"
#include "stereogen/warp.hpp"

namespace stereogen {

/// One background pixel carried across the warp at the disparity of the
/// foreground edge pixel that spawned it.
struct CarryEntry {
    int row = 0;
    int col = 0;
    double carried_disparity = 0.0;
};

/// Background context pixels to splat at foreground disparity, strictly below
/// real warped content (they only ever fill holes).
struct EdgeCarryPlan {
    std::vector<CarryEntry> entries;
    int strip_width = 0;
};

/// Flags horizontal drop edges: mask(r,c) = 1 iff D(r,c) - D(r,c+1) > tau
/// (signed forward difference; the last column is always 0).
BitMask edge_mask(const DisparityField& disp, double tau);

/// For each edge pixel (r,c), schedules the background pixels
/// (r,c+1) ... (r,c+strip_width), clipped to bounds, with
/// carried_disparity = D(r,c).
EdgeCarryPlan build_carry_plan(const DisparityField& disp, const BitMask& edge, int strip_width);

/// forward_warp plus the carry plan: carried pixels fill targets that would
/// otherwise be holes; every pixel the plain warp filled is left bit-identical.
WarpResult warp_with_carry(const RasterImage& left, const DisparityField& disp, const EdgeCarryPlan& plan,
                           const WarpOptions& opts = {});

} // namespace stereogen
