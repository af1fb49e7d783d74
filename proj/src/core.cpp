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

#include "stereogen/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace stereogen {

namespace {

void check_dims(int width, int height) {
    if (width <= 0 || height <= 0)
        throw DimensionError("raster dimensions must be positive, got " + std::to_string(width) + "x" +
                             std::to_string(height));
}

} // namespace

BitMask::BitMask(int width_, int height_, bool fill) : width(width_), height(height_) {
    check_dims(width, height);
    bits.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

BitMask::BitMask(int width_, int height_, std::vector<std::uint8_t> bits_)
    : width(width_), height(height_), bits(std::move(bits_)) {
    check_dims(width, height);
    if (bits.size() != static_cast<std::size_t>(width) * height)
        throw DimensionError("bit buffer length does not match mask shape");
    for (auto& b : bits)
        b = b ? 1 : 0;
}

std::size_t BitMask::popcount() const {
    return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; }));
}

RasterImage::RasterImage(int width_, int height_, float fill) : width(width_), height(height_) {
    check_dims(width, height);
    if (!(fill >= 0.0f && fill <= 1.0f))
        throw ParameterError("image fill value must lie in [0,1]");
    data.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

RasterImage::RasterImage(int width_, int height_, std::vector<float> data_)
    : width(width_), height(height_), data(std::move(data_)) {
    check_dims(width, height);
    if (data.size() != static_cast<std::size_t>(width) * height * channels)
        throw DimensionError("pixel buffer length does not match image shape");
    for (float v : data)
        if (!std::isfinite(v) || v < 0.0f || v > 1.0f)
            throw ParameterError("image values must be finite and in [0,1]");
}

DisparityField::DisparityField(int width_, int height_, double fill) : width(width_), height(height_) {
    check_dims(width, height);
    if (!std::isfinite(fill))
        throw ParameterError("disparity fill value must be finite");
    values.assign(static_cast<std::size_t>(width) * height, fill);
    valid = BitMask(width, height, true);
}

DisparityField::DisparityField(int width_, int height_, std::vector<double> values_, BitMask valid_)
    : width(width_), height(height_), values(std::move(values_)), valid(std::move(valid_)) {
    check_dims(width, height);
    if (values.size() != static_cast<std::size_t>(width) * height)
        throw DimensionError("value buffer length does not match field shape");
    if (valid.width != width || valid.height != height)
        throw DimensionError("validity mask shape does not match field shape");
    // Normalize: invalid pixels carry the 0 sentinel, valid pixels must be finite.
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (valid.bits[i]) {
            if (!std::isfinite(values[i]))
                throw ParameterError("valid disparity values must be finite");
        } else {
            values[i] = 0.0;
        }
    }
}

DisparityField DisparityField::dense(int width, int height, std::vector<double> values) {
    return DisparityField(width, height, std::move(values), BitMask(width, height, true));
}

bool is_relative(const DisparityField& field) {
    for (std::size_t i = 0; i < field.values.size(); ++i)
        if (field.valid.bits[i] && (field.values[i] < 0.0 || field.values[i] > 1.0))
            return false;
    return true;
}

BitMask mask_and(const BitMask& a, const BitMask& b) {
    if (!a.same_shape(b))
        throw DimensionError("mask_and operands have different shapes");
    BitMask out(a.width, a.height, false);
    for (std::size_t i = 0; i < a.bits.size(); ++i)
        out.bits[i] = (a.bits[i] && b.bits[i]) ? 1 : 0;
    return out;
}

MaskedStats masked_stats(const DisparityField& field, const BitMask& mask) {
    if (field.width != mask.width || field.height != mask.height)
        throw DimensionError("masked_stats mask shape does not match field shape");
    for (std::size_t i = 0; i < mask.bits.size(); ++i)
        if (mask.bits[i] && !field.valid.bits[i])
            throw ParameterError("masked_stats mask selects an invalid pixel");

    MaskedStats s;
    double sum = 0.0;
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
        if (!mask.bits[i])
            continue;
        ++s.count;
        sum += field.values[i];
    }
    if (s.count == 0)
        throw EmptySelectionError("masked_stats over an empty mask");
    s.mean = sum / static_cast<double>(s.count);
    double ss = 0.0;
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
        if (!mask.bits[i])
            continue;
        const double d = field.values[i] - s.mean;
        ss += d * d;
    }
    s.variance = ss / static_cast<double>(s.count);
    return s;
}

} // namespace stereogen
