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

#include "stereogen/warp.hpp"

#include <cmath>
#include <string>

#include "stereogen/rng.hpp"

namespace stereogen {

DisparityField scale_disparity(const DisparityField& rel, double alpha) {
    if (!std::isfinite(alpha) || alpha <= 0.0)
        throw ParameterError("scale factor alpha must be finite and > 0");
    if (!is_relative(rel))
        throw ParameterError("scale_disparity input must be a relative field with values in [0,1]");
    DisparityField out = rel;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        if (out.valid.bits[i])
            out.values[i] *= alpha;
    return out;
}

double sample_alpha(std::uint64_t seed, double d_min, double d_max) {
    if (!std::isfinite(d_min) || !std::isfinite(d_max) || d_min <= 0.0)
        throw ParameterError("alpha range must be finite with d_min > 0");
    if (d_min > d_max)
        throw ParameterError("alpha range requires d_min <= d_max");
    Rng rng(seed);
    return rng.next_uniform(d_min, d_max);
}

namespace {

long snap_target(double x, TargetRounding rounding) {
    switch (rounding) {
    case TargetRounding::Floor:
        return static_cast<long>(std::floor(x));
    case TargetRounding::NearestHalfAwayFromZero:
    default:
        return std::lround(x);
    }
}

bool beats(double cand_disp, int cand_col, double cur_disp, int cur_col, CollisionTie tie) {
    if (cand_disp != cur_disp)
        return cand_disp > cur_disp;
    return tie == CollisionTie::PreferLargerColumn ? cand_col > cur_col : cand_col < cur_col;
}

} // namespace

WarpResult forward_warp(const RasterImage& left, const DisparityField& disp, const WarpOptions& opts) {
    if (left.width != disp.width || left.height != disp.height)
        throw DimensionError("forward_warp image and disparity shapes differ");
    if (!disp.dense_valid())
        throw ParameterError("forward_warp requires a dense disparity field");
    for (double v : disp.values)
        if (v < 0.0)
            throw ParameterError("forward_warp requires non-negative disparities");

    const int w = left.width;
    const int h = left.height;
    WarpResult out{RasterImage(w, h, 0.0f), BitMask(w, h, true),
                   DisparityField(w, h, std::vector<double>(static_cast<std::size_t>(w) * h, 0.0), BitMask(w, h, false))};

    // Rows are independent; each target keeps the z-buffer winner and the
    // winning source column for tie breaking.
    std::vector<int> win_col(static_cast<std::size_t>(w));
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c)
            win_col[c] = -1;
        for (int x = 0; x < w; ++x) {
            const double d = disp.at(r, x);
            const long t = snap_target(static_cast<double>(x) - d, opts.rounding);
            if (t < 0 || t >= w)
                continue;
            const int tc = static_cast<int>(t);
            if (win_col[tc] >= 0 && !beats(d, x, out.source_disparity.at(r, tc), win_col[tc], opts.tie))
                continue;
            win_col[tc] = x;
            out.source_disparity.at(r, tc) = d;
            for (int ch = 0; ch < RasterImage::channels; ++ch)
                out.right_image.at(r, tc, ch) = left.at(r, x, ch);
        }
        for (int c = 0; c < w; ++c) {
            if (win_col[c] >= 0) {
                out.hole_mask.set(r, c, false);
                out.source_disparity.valid.set(r, c, true);
            } else {
                out.source_disparity.at(r, c) = 0.0;
            }
        }
    }
    return out;
}

} // namespace stereogen
