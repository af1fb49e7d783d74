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
#include <cstdint>
#include <vector>

#include "stereogen/errors.hpp"

namespace stereogen {

/// Per-pixel boolean field. Stored one byte per pixel, row-major.
struct BitMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    BitMask() = default;
    BitMask(int width, int height, bool fill = false);
    BitMask(int width, int height, std::vector<std::uint8_t> bits);

    std::size_t size() const { return bits.size(); }
    bool at(int row, int col) const { return bits[static_cast<std::size_t>(row) * width + col] != 0; }
    void set(int row, int col, bool v) { bits[static_cast<std::size_t>(row) * width + col] = v ? 1 : 0; }
    std::size_t popcount() const;
    bool same_shape(const BitMask& other) const { return width == other.width && height == other.height; }
    bool all() const { return popcount() == bits.size(); }
    bool none() const { return popcount() == 0; }

    friend bool operator==(const BitMask&, const BitMask&) = default;
};

/// H x W x 3 color buffer, values normalized to [0,1], row-major RGB interleaved.
struct RasterImage {
    static constexpr int channels = 3;

    int width = 0;
    int height = 0;
    std::vector<float> data;

    RasterImage() = default;
    RasterImage(int width, int height, float fill = 0.0f);
    RasterImage(int width, int height, std::vector<float> data);

    float at(int row, int col, int ch) const {
        return data[(static_cast<std::size_t>(row) * width + col) * channels + ch];
    }
    float& at(int row, int col, int ch) {
        return data[(static_cast<std::size_t>(row) * width + col) * channels + ch];
    }
    bool same_shape(const RasterImage& other) const { return width == other.width && height == other.height; }

    friend bool operator==(const RasterImage&, const RasterImage&) = default;
};

/// H x W scalar field of horizontal displacements in pixel units, with a
/// companion validity mask. Invalid pixels hold the sentinel value 0 and are
/// never read by any loss or metric.
struct DisparityField {
    int width = 0;
    int height = 0;
    std::vector<double> values;
    BitMask valid;

    DisparityField() = default;
    /// Dense field (all pixels valid), constant fill.
    DisparityField(int width, int height, double fill = 0.0);
    DisparityField(int width, int height, std::vector<double> values, BitMask valid);
    /// Dense field from raw values.
    static DisparityField dense(int width, int height, std::vector<double> values);

    double at(int row, int col) const { return values[static_cast<std::size_t>(row) * width + col]; }
    double& at(int row, int col) { return values[static_cast<std::size_t>(row) * width + col]; }
    bool is_valid(int row, int col) const { return valid.at(row, col); }
    bool same_shape(const DisparityField& other) const { return width == other.width && height == other.height; }
    bool dense_valid() const { return valid.all(); }

    friend bool operator==(const DisparityField&, const DisparityField&) = default;
};

/// True when every valid pixel lies in [0,1] (the mono-model convention).
bool is_relative(const DisparityField& field);

/// Pointwise logical AND. Shapes must match.
BitMask mask_and(const BitMask& a, const BitMask& b);

struct MaskedStats {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0; // population variance
};

/// Statistics over exactly the masked pixels. The mask must be a subset of
/// the field's validity mask; an empty selection is an error.
MaskedStats masked_stats(const DisparityField& field, const BitMask& mask);

} // namespace stereogen
