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

#include "stereogen/edge.hpp"

#include <algorithm>
#include <cmath>

namespace stereogen {

BitMask edge_mask(const DisparityField& disp, double tau) {
    if (!std::isfinite(tau) || tau <= 0.0)
        throw ParameterError("edge threshold tau must be finite and > 0");
    if (!disp.dense_valid())
        throw ParameterError("edge_mask requires a dense disparity field");

    BitMask mask(disp.width, disp.height, false);
    for (int r = 0; r < disp.height; ++r)
        for (int c = 0; c + 1 < disp.width; ++c)
            if (disp.at(r, c) - disp.at(r, c + 1) > tau)
                mask.set(r, c, true);
    return mask;
}

EdgeCarryPlan build_carry_plan(const DisparityField& disp, const BitMask& edge, int strip_width) {
    if (disp.width != edge.width || disp.height != edge.height)
        throw DimensionError("build_carry_plan edge mask shape does not match disparity shape");
    if (strip_width < 1)
        throw ParameterError("strip_width must be >= 1");

    EdgeCarryPlan plan;
    plan.strip_width = strip_width;
    for (int r = 0; r < disp.height; ++r) {
        for (int c = 0; c < disp.width; ++c) {
            if (!edge.at(r, c))
                continue;
            const double fg_disp = disp.at(r, c);
            const int last = std::min(c + strip_width, disp.width - 1);
            for (int s = c + 1; s <= last; ++s)
                plan.entries.push_back({r, s, fg_disp});
        }
    }
    return plan;
}

WarpResult warp_with_carry(const RasterImage& left, const DisparityField& disp, const EdgeCarryPlan& plan,
                           const WarpOptions& opts) {
    WarpResult out = forward_warp(left, disp, opts);

    const int w = left.width;
    const int h = left.height;
    for (const CarryEntry& e : plan.entries)
        if (e.row < 0 || e.row >= h || e.col < 0 || e.col >= w)
            throw ParameterError("carry plan entry outside image bounds");

    // Carried pixels write only into holes of the plain warp. Collisions
    // between carried entries use the same (disparity, column) order as the
    // real warp so the result does not depend on entry order.
    std::vector<int> winner(static_cast<std::size_t>(w) * h, -1);
    const auto target_of = [&](const CarryEntry& e) {
        return opts.rounding == TargetRounding::Floor
                   ? static_cast<long>(std::floor(static_cast<double>(e.col) - e.carried_disparity))
                   : std::lround(static_cast<double>(e.col) - e.carried_disparity);
    };
    for (std::size_t i = 0; i < plan.entries.size(); ++i) {
        const CarryEntry& e = plan.entries[i];
        const long t = target_of(e);
        if (t < 0 || t >= w)
            continue;
        if (!out.hole_mask.at(e.row, static_cast<int>(t)))
            continue;
        const std::size_t idx = static_cast<std::size_t>(e.row) * w + static_cast<std::size_t>(t);
        if (winner[idx] >= 0) {
            const CarryEntry& cur = plan.entries[static_cast<std::size_t>(winner[idx])];
            const bool better = e.carried_disparity != cur.carried_disparity
                                    ? e.carried_disparity > cur.carried_disparity
                                    : (opts.tie == CollisionTie::PreferLargerColumn ? e.col > cur.col : e.col < cur.col);
            if (!better)
                continue;
        }
        winner[idx] = static_cast<int>(i);
    }

    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const int wi = winner[static_cast<std::size_t>(r) * w + c];
            if (wi < 0)
                continue;
            const CarryEntry& e = plan.entries[static_cast<std::size_t>(wi)];
            out.hole_mask.set(r, c, false);
            out.source_disparity.valid.set(r, c, true);
            out.source_disparity.at(r, c) = e.carried_disparity;
            for (int ch = 0; ch < RasterImage::channels; ++ch)
                out.right_image.at(r, c, ch) = left.at(e.row, e.col, ch);
        }
    }
    return out;
}

} // namespace stereogen
