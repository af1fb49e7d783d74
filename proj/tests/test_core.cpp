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

#include "oracles.hpp"
#include "stereogen/core.hpp"

using namespace stereogen;
using testutil::TestRng;

namespace {

BitMask mask_of(int w, int h, std::vector<std::uint8_t> bits) { return BitMask(w, h, std::move(bits)); }

} // namespace

TEST_CASE("mask_and truth table") {
    const BitMask a = mask_of(4, 1, {1, 1, 0, 0});
    const BitMask b = mask_of(4, 1, {1, 0, 1, 0});
    CHECK(mask_and(a, b) == mask_of(4, 1, {1, 0, 0, 0}));
}

TEST_CASE("mask_and identity and annihilator") {
    const BitMask m = mask_of(3, 2, {1, 0, 1, 1, 0, 0});
    CHECK(mask_and(m, BitMask(3, 2, true)) == m);
    CHECK(mask_and(m, BitMask(3, 2, false)) == BitMask(3, 2, false));
}

TEST_CASE("mask_and shape mismatch") {
    CHECK_THROWS_AS(mask_and(BitMask(2, 2, true), BitMask(3, 2, true)), DimensionError);
}

TEST_CASE("mask_and is commutative, associative, idempotent") {
    TestRng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const BitMask a = testutil::random_mask(8, 8, 0.5, rng);
        const BitMask b = testutil::random_mask(8, 8, 0.5, rng);
        const BitMask c = testutil::random_mask(8, 8, 0.5, rng);
        CHECK(mask_and(a, b) == mask_and(b, a));
        CHECK(mask_and(mask_and(a, b), c) == mask_and(a, mask_and(b, c)));
        CHECK(mask_and(a, a) == a);
    }
}

TEST_CASE("popcount is consistent with the stored bits") {
    TestRng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const BitMask m = testutil::random_mask(8, 8, 0.3, rng);
        std::size_t n = 0;
        for (auto b : m.bits)
            n += b ? 1 : 0;
        CHECK(m.popcount() == n);
    }
}

TEST_CASE("masked_stats hand examples") {
    const DisparityField f = DisparityField::dense(3, 1, {1.0, 2.0, 3.0});
    const MaskedStats s = masked_stats(f, BitMask(3, 1, true));
    CHECK(s.count == 3);
    CHECK(s.mean == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.variance == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    const DisparityField single = DisparityField::dense(1, 1, {5.0});
    const MaskedStats s1 = masked_stats(single, BitMask(1, 1, true));
    CHECK(s1.count == 1);
    CHECK(s1.mean == 5.0);
    CHECK(s1.variance == 0.0);

    const DisparityField pair = DisparityField::dense(2, 1, {1.0, 100.0});
    const MaskedStats s2 = masked_stats(pair, mask_of(2, 1, {1, 0}));
    CHECK(s2.count == 1);
    CHECK(s2.mean == 1.0);
    CHECK(s2.variance == 0.0);
}

TEST_CASE("masked_stats errors") {
    const DisparityField f = DisparityField::dense(2, 1, {1.0, 2.0});
    CHECK_THROWS_AS(masked_stats(f, BitMask(2, 1, false)), EmptySelectionError);
    CHECK_THROWS_AS(masked_stats(f, BitMask(3, 1, true)), DimensionError);

    const DisparityField partial(2, 1, {1.0, 2.0}, mask_of(2, 1, {1, 0}));
    CHECK_THROWS_AS(masked_stats(partial, BitMask(2, 1, true)), ParameterError);
}

TEST_CASE("masked_stats equals a brute-force loop on random instances") {
    TestRng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const DisparityField f = testutil::random_dense_field(8, 8, -50.0, 50.0, rng);
        BitMask m = testutil::random_mask(8, 8, 0.4, rng);
        if (m.none())
            m.set(0, 0, true);
        const MaskedStats got = masked_stats(f, m);
        const testutil::LoopStats want = testutil::loop_stats(f, m);
        CHECK(got.count == want.count);
        CHECK(got.mean == doctest::Approx(want.mean).epsilon(1e-12));
        CHECK(got.variance == doctest::Approx(want.variance).epsilon(1e-12));
    }
}

TEST_CASE("RasterImage validates its buffer") {
    CHECK_THROWS_AS(RasterImage(2, 1, std::vector<float>{0.0f, 0.0f}), DimensionError);
    CHECK_THROWS_AS(RasterImage(1, 1, std::vector<float>{0.0f, 1.5f, 0.0f}), ParameterError);
    CHECK_THROWS_AS(RasterImage(1, 1, std::vector<float>{0.0f, -0.5f, 0.0f}), ParameterError);
}

TEST_CASE("DisparityField normalizes invalid pixels to the 0 sentinel") {
    const DisparityField f(2, 1, {7.0, 9.0}, mask_of(2, 1, {1, 0}));
    CHECK(f.at(0, 0) == 7.0);
    CHECK(f.at(0, 1) == 0.0);
    CHECK_THROWS_AS(DisparityField(2, 1, {7.0}, BitMask(2, 1, true)), DimensionError);
}

TEST_CASE("is_relative checks valid pixels only") {
    CHECK(is_relative(DisparityField::dense(2, 1, {0.0, 1.0})));
    CHECK_FALSE(is_relative(DisparityField::dense(2, 1, {0.0, 1.5})));
    CHECK(is_relative(DisparityField(2, 1, {0.5, 80.0}, mask_of(2, 1, {1, 0})))); // invalid pixel zeroed
}
