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

#include "stereogen/dssi.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace stereogen {

namespace {

void check_pair(const DisparityField& a, const DisparityField& b, const BitMask& mask, const char* op) {
    if (!a.same_shape(b) || a.width != mask.width || a.height != mask.height)
        throw DimensionError(std::string(op) + ": operand shapes differ");
    for (std::size_t i = 0; i < mask.bits.size(); ++i)
        if (mask.bits[i] && (!a.valid.bits[i] || !b.valid.bits[i]))
            throw ParameterError(std::string(op) + ": mask selects an invalid pixel");
}

/// Smallest k in [1, m] with k >= q*m, robust to double rounding at integers.
std::size_t nearest_rank(double q, std::size_t m) {
    const long double t = static_cast<long double>(q) * static_cast<long double>(m);
    long long k = static_cast<long long>(std::ceil(t));
    if (k >= 1 && static_cast<long double>(k - 1) >= t)
        --k;
    if (k < 1)
        k = 1;
    if (k > static_cast<long long>(m))
        k = static_cast<long long>(m);
    return static_cast<std::size_t>(k);
}

} // namespace

double sparse_loss(const DisparityField& pred, const DisparityField& gt, const BitMask& valid) {
    check_pair(pred, gt, valid, "sparse_loss");
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < valid.bits.size(); ++i) {
        if (!valid.bits[i])
            continue;
        sum += std::abs(gt.values[i] - pred.values[i]);
        ++n;
    }
    if (n == 0)
        throw EmptySelectionError("sparse_loss over an empty mask");
    return sum / static_cast<double>(n);
}

AffineAlignment lstsq_align(const DisparityField& pred, const DisparityField& mono, const BitMask& mask) {
    check_pair(pred, mono, mask, "lstsq_align");
    std::size_t n = 0;
    double sum_p = 0.0, sum_m = 0.0;
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
        if (!mask.bits[i])
            continue;
        sum_p += pred.values[i];
        sum_m += mono.values[i];
        ++n;
    }
    if (n < 2)
        throw EmptySelectionError("lstsq_align needs at least two masked pixels");
    const double mean_p = sum_p / static_cast<double>(n);
    const double mean_m = sum_m / static_cast<double>(n);
    double var_p = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
        if (!mask.bits[i])
            continue;
        const double dp = pred.values[i] - mean_p;
        var_p += dp * dp;
        cov += dp * (mono.values[i] - mean_m);
    }
    if (var_p == 0.0)
        throw DegenerateFitError("lstsq_align: prediction is constant over the mask");
    const double a = cov / var_p;
    return AffineAlignment{a, mean_m - a * mean_p};
}

std::pair<BitMask, double> outlier_mask(const DisparityField& pred, const DisparityField& mono,
                                        const AffineAlignment& align, const BitMask& mask, double q) {
    check_pair(pred, mono, mask, "outlier_mask");
    if (!(q > 0.0 && q < 1.0))
        throw ParameterError("quantile q must lie strictly in (0,1)");

    std::vector<double> residuals;
    residuals.reserve(mask.popcount());
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
        if (!mask.bits[i])
            continue;
        const double r = align.scale * pred.values[i] + align.shift - mono.values[i];
        residuals.push_back(r * r);
    }
    if (residuals.empty())
        throw EmptySelectionError("outlier_mask over an empty mask");

    const std::size_t k = nearest_rank(q, residuals.size());
    std::nth_element(residuals.begin(), residuals.begin() + static_cast<std::ptrdiff_t>(k - 1), residuals.end());
    const double threshold = residuals[k - 1];

    BitMask inliers(mask.width, mask.height, false);
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
        if (!mask.bits[i])
            continue;
        const double r = align.scale * pred.values[i] + align.shift - mono.values[i];
        if (r * r < threshold)
            inliers.bits[i] = 1;
    }
    return {std::move(inliers), threshold};
}

DssiReport dssi_loss(const DisparityField& pred, const DisparityField& mono, const BitMask& mask, double q,
                     int trim_rounds) {
    if (trim_rounds < 1)
        throw ParameterError("trim_rounds must be >= 1");

    DssiReport report;
    report.alignment_initial = lstsq_align(pred, mono, mask);

    AffineAlignment align = report.alignment_initial;
    BitMask inliers = mask;
    double threshold = 0.0;
    for (int round = 0; round < trim_rounds; ++round) {
        auto [trimmed, thr] = outlier_mask(pred, mono, align, inliers, q);
        threshold = thr;
        if (trimmed.popcount() < 2) {
            // An all-equal residual set (e.g. a perfect fit) empties the mask
            // under the strict cutoff; that is a perfect selection, not an
            // all-outlier one. Keep the previous mask.
            report.inlier_fallback = true;
            break;
        }
        inliers = std::move(trimmed);
        if (round + 1 < trim_rounds)
            align = lstsq_align(pred, mono, inliers);
    }

    report.inlier_mask = std::move(inliers);
    report.threshold = threshold;
    report.inlier_count = report.inlier_mask.popcount();
    report.alignment_refined = lstsq_align(pred, mono, report.inlier_mask);

    double sum = 0.0;
    for (std::size_t i = 0; i < report.inlier_mask.bits.size(); ++i) {
        if (!report.inlier_mask.bits[i])
            continue;
        const double r =
            report.alignment_refined.scale * pred.values[i] + report.alignment_refined.shift - mono.values[i];
        sum += r * r;
    }
    report.loss = sum / static_cast<double>(report.inlier_count);
    return report;
}

DisparityField dssi_loss_grad(const DisparityField& pred, const DisparityField& mono, const BitMask& mask, double q,
                              int trim_rounds) {
    const DssiReport report = dssi_loss(pred, mono, mask, q, trim_rounds);
    const double a = report.alignment_refined.scale;
    const double b = report.alignment_refined.shift;
    const double inv_n = 1.0 / static_cast<double>(report.inlier_count);

    DisparityField grad(pred.width, pred.height, 0.0);
    for (std::size_t i = 0; i < report.inlier_mask.bits.size(); ++i) {
        if (!report.inlier_mask.bits[i])
            continue;
        grad.values[i] = 2.0 * inv_n * a * (a * pred.values[i] + b - mono.values[i]);
    }
    return grad;
}

LossBreakdown combined_loss(const DisparityField& pred, const DisparityField& gt, const BitMask& valid,
                            const DisparityField& mono, const BitMask& mono_mask, double q, double beta) {
    if (!std::isfinite(beta))
        throw ParameterError("beta must be finite");
    LossBreakdown out;
    out.sparse = sparse_loss(pred, gt, valid);
    out.dssi = dssi_loss(pred, mono, mono_mask, q).loss;
    out.beta = beta;
    out.total = out.sparse + beta * out.dssi;
    return out;
}

} // namespace stereogen
