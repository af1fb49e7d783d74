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

#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "oracles.hpp"
#include "stereogen/inpaint.hpp"

using namespace stereogen;
using testutil::TestRng;

namespace {

constexpr const char* kStub = INPAINT_STUB_PATH;

RasterImage row_image(std::vector<float> gray) {
    const int w = static_cast<int>(gray.size());
    std::vector<float> data(static_cast<std::size_t>(w) * 3);
    for (int c = 0; c < w; ++c)
        for (int ch = 0; ch < 3; ++ch)
            data[static_cast<std::size_t>(c) * 3 + ch] = gray[static_cast<std::size_t>(c)];
    return RasterImage(w, 1, std::move(data));
}

BitMask row_mask(std::vector<std::uint8_t> bits) {
    const int w = static_cast<int>(bits.size());
    return BitMask(w, 1, std::move(bits));
}

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("inpaint_builtin with no holes is the identity") {
    TestRng rng(41);
    const RasterImage img = testutil::random_image(7, 3, rng);
    CHECK(inpaint_builtin(img, BitMask(7, 3, false)) == img);
}

TEST_CASE("inpaint_builtin propagates from the right first") {
    const RasterImage img = row_image({0.1f, 0.1f, 0.9f, 0.9f, 0.6f});
    const BitMask holes = row_mask({0, 0, 1, 1, 0});
    const RasterImage out = inpaint_builtin(img, holes);
    CHECK(out.at(0, 0, 0) == 0.1f);
    CHECK(out.at(0, 1, 0) == 0.1f);
    CHECK(out.at(0, 2, 0) == 0.6f);
    CHECK(out.at(0, 3, 0) == 0.6f);
    CHECK(out.at(0, 4, 0) == 0.6f);
}

TEST_CASE("inpaint_builtin fills a leading hole run from the right") {
    const RasterImage img = row_image({0.9f, 0.8f, 0.3f});
    const BitMask holes = row_mask({1, 1, 0});
    const RasterImage out = inpaint_builtin(img, holes);
    for (int c = 0; c < 3; ++c)
        CHECK(out.at(0, c, 0) == 0.3f);
}

TEST_CASE("inpaint_builtin falls back to the left neighbor") {
    const RasterImage img = row_image({0.4f, 0.9f, 0.9f});
    const BitMask holes = row_mask({0, 1, 1});
    const RasterImage out = inpaint_builtin(img, holes);
    CHECK(out.at(0, 1, 0) == 0.4f);
    CHECK(out.at(0, 2, 0) == 0.4f);
}

TEST_CASE("inpaint_builtin fills a fully-hole row with the image mean and warns") {
    // Two rows: the first entirely holes, the second known with value 0.25.
    std::vector<float> data(2 * 2 * 3, 0.25f);
    const RasterImage img(2, 2, std::move(data));
    BitMask holes(2, 2, false);
    holes.set(0, 0, true);
    holes.set(0, 1, true);
    std::vector<std::string> warnings;
    const RasterImage out = inpaint_builtin(img, holes, &warnings);
    CHECK(out.at(0, 0, 0) == doctest::Approx(0.25f));
    CHECK(out.at(0, 1, 0) == doctest::Approx(0.25f));
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("row 0") != std::string::npos);
}

TEST_CASE("inpaint_builtin rejects an all-hole image") {
    const RasterImage img(3, 2, 0.5f);
    CHECK_THROWS_AS(inpaint_builtin(img, BitMask(3, 2, true)), EmptySelectionError);
}

TEST_CASE("inpaint_builtin never touches known pixels and stays in range") {
    TestRng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const RasterImage img = testutil::random_image(12, 4, rng);
        BitMask holes = testutil::random_mask(12, 4, 0.4, rng);
        if (holes.popcount() == holes.bits.size())
            holes.set(0, 0, false);
        const RasterImage out = inpaint_builtin(img, holes);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 12; ++c)
                for (int ch = 0; ch < 3; ++ch) {
                    if (!holes.at(r, c))
                        CHECK(out.at(r, c, ch) == img.at(r, c, ch));
                    CHECK(out.at(r, c, ch) >= 0.0f);
                    CHECK(out.at(r, c, ch) <= 1.0f);
                    CHECK(std::isfinite(out.at(r, c, ch)));
                }
        // Idempotent: a hole-free image inpaints to itself.
        CHECK(inpaint_builtin(out, BitMask(12, 4, false)) == out);
    }
}

TEST_CASE("inpaint_external identity backend returns the input") {
    TestRng rng(43);
    const RasterImage img = testutil::random_image(6, 4, rng);
    ExternalInpaintOptions opts;
    opts.command_template = std::string(kStub) + " copy {image} {output}";
    opts.workdir = fresh_dir("stereogen-test-ext-copy");
    const RasterImage out = inpaint_external(img, BitMask(6, 4, false), opts);
    // No holes: every pixel re-composited from the in-memory input.
    CHECK(out == img);
}

TEST_CASE("inpaint_external re-composites known pixels over a corrupting backend") {
    TestRng rng(44);
    const RasterImage img = testutil::random_image(8, 3, rng);
    BitMask holes(8, 3, false);
    holes.set(1, 2, true);
    holes.set(2, 7, true);
    ExternalInpaintOptions opts;
    opts.command_template = std::string(kStub) + " corrupt {image} {mask} {output}";
    opts.workdir = fresh_dir("stereogen-test-ext-corrupt");
    const RasterImage out = inpaint_external(img, holes, opts);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 8; ++c)
            for (int ch = 0; ch < 3; ++ch) {
                if (holes.at(r, c)) {
                    // Hole content comes from the backend file, which differs
                    // from the (quantized) input by construction.
                    continue;
                }
                CHECK(out.at(r, c, ch) == img.at(r, c, ch));
            }
    // Holes were actually filled by the backend (inverted quantized input).
    const float orig = img.at(1, 2, 0);
    const float inverted = out.at(1, 2, 0);
    CHECK(std::abs((1.0f - inverted) - orig) < 0.02f);
}

TEST_CASE("inpaint_external error taxonomy") {
    TestRng rng(45);
    const RasterImage img = testutil::random_image(4, 2, rng);
    const BitMask holes(4, 2, false);

    ExternalInpaintOptions opts;
    opts.workdir = fresh_dir("stereogen-test-ext-errors");

    opts.command_template = std::string(kStub) + " wrongsize {output}";
    CHECK_THROWS_AS(inpaint_external(img, holes, opts), ProtocolError);

    opts.command_template = std::string(kStub) + " fail # {output}";
    CHECK_THROWS_AS(inpaint_external(img, holes, opts), BackendError);

    opts.command_template = std::string(kStub) + " noout # {output}";
    CHECK_THROWS_AS(inpaint_external(img, holes, opts), ProtocolError);

    opts.command_template = std::string(kStub) + " hang 10000 # {output}";
    opts.timeout = std::chrono::milliseconds(200);
    CHECK_THROWS_AS(inpaint_external(img, holes, opts), TimeoutError);

    opts.command_template = "true"; // no {output} placeholder
    CHECK_THROWS_AS(inpaint_external(img, holes, opts), ParameterError);
}

TEST_CASE("inpaint_external captures backend diagnostics") {
    TestRng rng(46);
    const RasterImage img = testutil::random_image(4, 2, rng);
    ExternalInpaintOptions opts;
    opts.workdir = fresh_dir("stereogen-test-ext-diag");
    opts.command_template = std::string(kStub) + " fail # {output}";
    try {
        inpaint_external(img, BitMask(4, 2, false), opts);
        FAIL("expected BackendError");
    } catch (const BackendError& e) {
        CHECK(std::string(e.what()).find("simulated backend failure") != std::string::npos);
        CHECK(std::string(e.what()).find("status 3") != std::string::npos);
    }
}
