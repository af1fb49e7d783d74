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

#include <cstddef>
#include <utility>

#include "stereogen/core.hpp"

namespace stereogen {

/// Scale/shift pair mapping a prediction into the pseudo-depth domain.
struct AffineAlignment {
    double scale = 1.0;
    double shift = 0.0;
};

/// Full result of the scale- and shift-invariant loss evaluation.
struct DssiReport {
    double loss = 0.0;
    AffineAlignment alignment_initial;  // fit over the whole mask
    AffineAlignment alignment_refined;  // fit over the inlier mask
    BitMask inlier_mask;
    double threshold = 0.0;             // squared-residual cutoff
    std::size_t inlier_count = 0;
    bool inlier_fallback = false;       // true when trimming emptied the mask
};

struct LossBreakdown {
    double sparse = 0.0;
    double dssi = 0.0;
    double beta = 0.0;
    double total = 0.0;
};

/// Mean absolute error |gt - pred| over the valid pixels.
double sparse_loss(const DisparityField& pred, const DisparityField& gt, const BitMask& valid);

/// Closed-form least squares for (a, b) minimizing sum over mask of
/// (a*pred + b - mono)^2. Requires at least two masked pixels and a
/// non-constant prediction on the mask.
AffineAlignment lstsq_align(const DisparityField& pred, const DisparityField& mono, const BitMask& mask);

/// Squared residuals r = (a*pred + b - mono)^2 over the mask are trimmed at
/// the nearest-rank q-quantile (the ceil(q*M)-th smallest). Pixels strictly
/// below the threshold are inliers. Returns (inlier mask, threshold).
std::pair<BitMask, double> outlier_mask(const DisparityField& pred, const DisparityField& mono,
                                        const AffineAlignment& align, const BitMask& mask, double q);

/// Align, trim outliers, re-align on the inliers, then MSE over the inliers.
/// When trimming leaves fewer than two pixels (e.g. a perfect fit where every
/// squared residual ties at the threshold), the refit falls back to the full
/// mask and the report flags it. trim_rounds > 1 repeats fit+trim before the
/// final refit.
DssiReport dssi_loss(const DisparityField& pred, const DisparityField& mono, const BitMask& mask, double q,
                     int trim_rounds = 1);

/// Gradient of the dssi_loss objective with the refined alignment and the
/// inlier mask treated as constants:
///   g_i = (2/|M|) * a' * (a'*pred_i + b' - mono_i)   for inliers, else 0.
DisparityField dssi_loss_grad(const DisparityField& pred, const DisparityField& mono, const BitMask& mask, double q,
                              int trim_rounds = 1);

/// total = sparse + beta * dssi, all components reported.
LossBreakdown combined_loss(const DisparityField& pred, const DisparityField& gt, const BitMask& valid,
                            const DisparityField& mono, const BitMask& mono_mask, double q, double beta);

} // namespace stereogen
