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

#include "stereogen/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace stereogen {

namespace {

std::string quoted(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

std::uint8_t float_to_byte(float v) {
    const float clamped = std::clamp(v, 0.0f, 1.0f);
    return static_cast<std::uint8_t>(std::lround(clamped * 255.0f));
}

std::uint32_t byteswap32(std::uint32_t v) {
    return (v >> 24) | ((v >> 8) & 0x0000FF00u) | ((v << 8) & 0x00FF0000u) | (v << 24);
}

float load_float_le(const unsigned char* p, bool file_is_little_endian) {
    std::uint32_t bits;
    std::memcpy(&bits, p, 4);
    if constexpr (std::endian::native == std::endian::big)
        bits = byteswap32(bits);
    if (!file_is_little_endian)
        bits = byteswap32(bits);
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
}

cv::Mat imread_or_throw(const std::filesystem::path& path) {
    cv::Mat m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    if (m.empty())
        throw FormatError("cannot decode image file " + quoted(path));
    return m;
}

void imwrite_or_throw(const std::filesystem::path& path, const cv::Mat& m) {
    if (path.extension() != ".png")
        throw FormatError("only .png output is supported, got " + quoted(path));
    if (!cv::imwrite(path.string(), m))
        throw FormatError("cannot write image file " + quoted(path));
}

} // namespace

// --- PFM ---------------------------------------------------------------------

DisparityField read_pfm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open " + quoted(path));

    std::string magic;
    long width = 0, height = 0;
    double scale = 0.0;
    in >> magic >> width >> height >> scale;
    if (!in)
        throw FormatError("malformed PFM header in " + quoted(path));
    if (magic == "PF")
        throw FormatError("3-channel PFM not supported for disparities: " + quoted(path));
    if (magic != "Pf")
        throw FormatError("not a PFM file: " + quoted(path));
    if (width <= 0 || height <= 0 || width > 1 << 20 || height > 1 << 20)
        throw FormatError("implausible PFM dimensions in " + quoted(path));
    if (scale == 0.0)
        throw FormatError("PFM scale must be nonzero in " + quoted(path));
    // Exactly one whitespace byte separates the header from the payload.
    in.get();
    if (!in)
        throw FormatError("truncated PFM header in " + quoted(path));

    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<unsigned char> payload(count * 4);
    in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (static_cast<std::size_t>(in.gcount()) != payload.size())
        throw FormatError("truncated PFM payload in " + quoted(path));

    const bool little = scale < 0.0;
    const int w = static_cast<int>(width);
    const int h = static_cast<int>(height);
    std::vector<double> values(count, 0.0);
    BitMask valid(w, h, false);
    // Rows are stored bottom-up.
    for (int r = 0; r < h; ++r) {
        const int src_row = h - 1 - r;
        for (int c = 0; c < w; ++c) {
            const float f = load_float_le(payload.data() + (static_cast<std::size_t>(src_row) * w + c) * 4, little);
            const std::size_t i = static_cast<std::size_t>(r) * w + c;
            if (std::isfinite(f)) {
                values[i] = static_cast<double>(f);
                valid.bits[i] = 1;
            }
        }
    }
    return DisparityField(w, h, std::move(values), std::move(valid));
}

void write_pfm(const DisparityField& field, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw FormatError("cannot open " + quoted(path) + " for writing");
    out << "Pf\n" << field.width << " " << field.height << "\n-1.0\n";

    std::vector<unsigned char> payload(static_cast<std::size_t>(field.width) * field.height * 4);
    for (int r = 0; r < field.height; ++r) {
        const int dst_row = field.height - 1 - r;
        for (int c = 0; c < field.width; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * field.width + c;
            const float f =
                field.valid.bits[i] ? static_cast<float>(field.values[i]) : std::numeric_limits<float>::infinity();
            std::uint32_t bits;
            std::memcpy(&bits, &f, 4);
            if constexpr (std::endian::native == std::endian::big)
                bits = byteswap32(bits); // header advertises little-endian
            std::memcpy(payload.data() + (static_cast<std::size_t>(dst_row) * field.width + c) * 4, &bits, 4);
        }
    }
    out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (!out)
        throw FormatError("short write to " + quoted(path));
}

// --- KITTI PNG ----------------------------------------------------------------

DisparityField read_kitti_png(const std::filesystem::path& path) {
    cv::Mat m = imread_or_throw(path);
    if (m.type() != CV_16UC1)
        throw FormatError("KITTI disparity must be a 16-bit single-channel PNG: " + quoted(path));

    const int w = m.cols, h = m.rows;
    std::vector<double> values(static_cast<std::size_t>(w) * h, 0.0);
    BitMask valid(w, h, false);
    for (int r = 0; r < h; ++r) {
        const std::uint16_t* row = m.ptr<std::uint16_t>(r);
        for (int c = 0; c < w; ++c) {
            const std::uint16_t stored = row[c];
            if (stored == 0)
                continue; // missing-pixel sentinel
            const std::size_t i = static_cast<std::size_t>(r) * w + c;
            values[i] = static_cast<double>(stored) / 256.0;
            valid.bits[i] = 1;
        }
    }
    return DisparityField(w, h, std::move(values), std::move(valid));
}

void write_kitti_png(const DisparityField& field, const std::filesystem::path& path) {
    cv::Mat m(field.height, field.width, CV_16UC1, cv::Scalar(0));
    for (int r = 0; r < field.height; ++r) {
        std::uint16_t* row = m.ptr<std::uint16_t>(r);
        for (int c = 0; c < field.width; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * field.width + c;
            if (!field.valid.bits[i])
                continue;
            const long stored = std::lround(field.values[i] * 256.0);
            if (stored < 1 || stored > 65535)
                throw FormatError("disparity " + std::to_string(field.values[i]) +
                                  " is not encodable as KITTI 16-bit PNG");
            row[c] = static_cast<std::uint16_t>(stored);
        }
    }
    imwrite_or_throw(path, m);
}

DisparityField read_rel_depth(const std::filesystem::path& path) {
    const auto ext = path.extension();
    if (ext == ".pfm")
        return read_pfm(path);
    if (ext == ".png") {
        cv::Mat m = imread_or_throw(path);
        if (m.type() != CV_16UC1)
            throw FormatError("relative depth PNG must be 16-bit single-channel: " + quoted(path));
        const int w = m.cols, h = m.rows;
        std::vector<double> values(static_cast<std::size_t>(w) * h, 0.0);
        for (int r = 0; r < h; ++r) {
            const std::uint16_t* row = m.ptr<std::uint16_t>(r);
            for (int c = 0; c < w; ++c)
                values[static_cast<std::size_t>(r) * w + c] = static_cast<double>(row[c]) / 65535.0;
        }
        return DisparityField::dense(w, h, std::move(values));
    }
    throw FormatError("unsupported relative depth extension: " + quoted(path));
}

DisparityField read_disparity(const std::filesystem::path& path) {
    const auto ext = path.extension();
    if (ext == ".pfm")
        return read_pfm(path);
    if (ext == ".png")
        return read_kitti_png(path);
    throw FormatError("unsupported disparity extension: " + quoted(path));
}

// --- Images -------------------------------------------------------------------

RasterImage read_image(const std::filesystem::path& path) {
    cv::Mat m = imread_or_throw(path);
    if (m.depth() != CV_8U)
        throw FormatError("unsupported bit depth (expected 8-bit) in " + quoted(path));
    if (m.channels() != 1 && m.channels() != 3)
        throw FormatError("unsupported channel count " + std::to_string(m.channels()) + " in " + quoted(path));

    const int w = m.cols, h = m.rows;
    std::vector<float> data(static_cast<std::size_t>(w) * h * RasterImage::channels);
    for (int r = 0; r < h; ++r) {
        const std::uint8_t* row = m.ptr<std::uint8_t>(r);
        for (int c = 0; c < w; ++c) {
            const std::size_t o = (static_cast<std::size_t>(r) * w + c) * 3;
            if (m.channels() == 1) {
                const float v = static_cast<float>(row[c]) / 255.0f;
                data[o] = data[o + 1] = data[o + 2] = v;
            } else {
                // OpenCV decodes as BGR.
                data[o] = static_cast<float>(row[c * 3 + 2]) / 255.0f;
                data[o + 1] = static_cast<float>(row[c * 3 + 1]) / 255.0f;
                data[o + 2] = static_cast<float>(row[c * 3 + 0]) / 255.0f;
            }
        }
    }
    return RasterImage(w, h, std::move(data));
}

void write_image(const RasterImage& image, const std::filesystem::path& path) {
    cv::Mat m(image.height, image.width, CV_8UC3);
    for (int r = 0; r < image.height; ++r) {
        std::uint8_t* row = m.ptr<std::uint8_t>(r);
        for (int c = 0; c < image.width; ++c) {
            row[c * 3 + 0] = float_to_byte(image.at(r, c, 2));
            row[c * 3 + 1] = float_to_byte(image.at(r, c, 1));
            row[c * 3 + 2] = float_to_byte(image.at(r, c, 0));
        }
    }
    imwrite_or_throw(path, m);
}

BitMask read_mask_png(const std::filesystem::path& path) {
    cv::Mat m = imread_or_throw(path);
    if (m.type() != CV_8UC1)
        throw FormatError("mask must be an 8-bit single-channel PNG: " + quoted(path));
    BitMask mask(m.cols, m.rows, false);
    for (int r = 0; r < m.rows; ++r) {
        const std::uint8_t* row = m.ptr<std::uint8_t>(r);
        for (int c = 0; c < m.cols; ++c)
            mask.bits[static_cast<std::size_t>(r) * m.cols + c] = row[c] >= 128 ? 1 : 0;
    }
    return mask;
}

void write_mask_png(const BitMask& mask, const std::filesystem::path& path) {
    cv::Mat m(mask.height, mask.width, CV_8UC1);
    for (int r = 0; r < mask.height; ++r) {
        std::uint8_t* row = m.ptr<std::uint8_t>(r);
        for (int c = 0; c < mask.width; ++c)
            row[c] = mask.at(r, c) ? 255 : 0;
    }
    imwrite_or_throw(path, m);
}

// --- Manifest -----------------------------------------------------------------

std::filesystem::path Manifest::resolve(const std::string& path) const {
    std::filesystem::path p(path);
    return p.is_absolute() ? p : base_dir / p;
}

namespace {

std::optional<std::string> opt_string(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null())
        return std::nullopt;
    if (!j[key].is_string())
        throw FormatError(std::string("manifest field '") + key + "' must be a string");
    return j[key].get<std::string>();
}

} // namespace

Manifest read_manifest(const std::filesystem::path& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open manifest " + quoted(path));

    Manifest manifest;
    manifest.base_dir = std::filesystem::absolute(path).parent_path();

    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    std::set<std::string> ids;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("manifest " + quoted(path) + " line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!j.is_object())
            throw FormatError("manifest " + quoted(path) + " line " + std::to_string(lineno) + ": expected an object");

        if (!header_seen) {
            if (!j.contains("version") || !j["version"].is_number_integer())
                throw FormatError("manifest " + quoted(path) + ": first record must carry an integer 'version'");
            manifest.version = j["version"].get<int>();
            if (j.contains("config"))
                manifest.config = j["config"];
            header_seen = true;
            continue;
        }

        ManifestEntry e;
        if (!j.contains("id") || !j["id"].is_string())
            throw FormatError("manifest " + quoted(path) + " line " + std::to_string(lineno) + ": missing string 'id'");
        e.id = j["id"].get<std::string>();
        if (!ids.insert(e.id).second)
            throw FormatError("manifest " + quoted(path) + ": duplicate sample id '" + e.id + "'");
        const auto left = opt_string(j, "left_path");
        if (!left)
            throw FormatError("manifest " + quoted(path) + " line " + std::to_string(lineno) + ": missing 'left_path'");
        e.left_path = *left;
        e.right_path = opt_string(j, "right_path");
        e.rel_depth_path = opt_string(j, "rel_depth_path");
        e.gt_disp_path = opt_string(j, "gt_disp_path");
        e.dataset_id = opt_string(j, "dataset_id").value_or("default");
        if (j.contains("alpha") && j["alpha"].is_number())
            e.alpha = j["alpha"].get<double>();
        if (j.contains("seed") && j["seed"].is_number_unsigned())
            e.seed = j["seed"].get<std::uint64_t>();
        manifest.samples.push_back(std::move(e));
    }
    if (!header_seen)
        throw FormatError("manifest " + quoted(path) + " has no header record");

    if (warnings) {
        for (const ManifestEntry& e : manifest.samples) {
            const auto report_missing = [&](const std::string& p) {
                if (!std::filesystem::exists(manifest.resolve(p)))
                    warnings->push_back("sample '" + e.id + "': missing file " + quoted(manifest.resolve(p)));
            };
            report_missing(e.left_path);
            if (e.right_path)
                report_missing(*e.right_path);
            if (e.rel_depth_path)
                report_missing(*e.rel_depth_path);
            if (e.gt_disp_path)
                report_missing(*e.gt_disp_path);
        }
    }
    return manifest;
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw FormatError("cannot open " + quoted(path) + " for writing");

    nlohmann::json header;
    header["version"] = manifest.version;
    if (!manifest.config.is_null() && !manifest.config.empty())
        header["config"] = manifest.config;
    out << header.dump() << "\n";

    for (const ManifestEntry& e : manifest.samples) {
        nlohmann::json j;
        j["id"] = e.id;
        j["left_path"] = e.left_path;
        if (e.right_path)
            j["right_path"] = *e.right_path;
        if (e.rel_depth_path)
            j["rel_depth_path"] = *e.rel_depth_path;
        if (e.gt_disp_path)
            j["gt_disp_path"] = *e.gt_disp_path;
        j["dataset_id"] = e.dataset_id;
        if (e.alpha)
            j["alpha"] = *e.alpha;
        if (e.seed)
            j["seed"] = *e.seed;
        out << j.dump() << "\n";
    }
    if (!out)
        throw FormatError("short write to " + quoted(path));
}

} // namespace stereogen
