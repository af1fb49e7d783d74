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

#include <filesystem>
#include <fstream>
#include <map>

#include "oracles.hpp"
#include "stereogen/edge.hpp"
#include "stereogen/io.hpp"
#include "stereogen/pipeline.hpp"
#include "stereogen/rng.hpp"

using namespace stereogen;
using testutil::TestRng;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// 16-wide card scene: foreground at relative depth 1.0 on columns 4..10,
/// background at 0.25. With alpha = 8 the disparities are 8 and 2 and the
/// drop at column 10 opens a 6-wide dis-occlusion run.
DisparityField card_scene_rel(int h = 4) {
    const int w = 16;
    std::vector<double> rel(static_cast<std::size_t>(w) * h, 0.25);
    for (int r = 0; r < h; ++r)
        for (int c = 4; c <= 10; ++c)
            rel[static_cast<std::size_t>(r) * w + c] = 1.0;
    return DisparityField::dense(w, h, std::move(rel));
}

} // namespace

TEST_CASE("generate_sample identity scene") {
    TestRng rng(81);
    const RasterImage img = testutil::random_image(10, 4, rng);
    const DisparityField rel = DisparityField(10, 4, 0.0);
    GenerationConfig cfg;
    cfg.d_min = cfg.d_max = 8.0;
    const StereoSample s = generate_sample(img, rel, cfg, 7);
    CHECK(s.right == img);
    CHECK(s.hole_mask_pre_inpaint.none());
    for (double v : s.disparity_gt.values)
        CHECK(v == 0.0);
    CHECK(s.alpha_used == 8.0);
}

TEST_CASE("generate_sample two-layer card scene geometry") {
    TestRng rng(82);
    const int w = 16, h = 4;
    const RasterImage img = testutil::random_image(w, h, rng);
    const DisparityField rel = card_scene_rel(h);

    GenerationConfig cfg;
    cfg.d_min = cfg.d_max = 8.0;
    cfg.tau = 7.0; // above the drop of 6: no carry, pure warp geometry
    const StereoSample s = generate_sample(img, rel, cfg, 3);

    CHECK(s.alpha_used == 8.0);
    for (double v : s.disparity_gt.values)
        CHECK((v == 8.0 || v == 2.0));
    CHECK(s.disparity_gt.at(0, 4) == 8.0);
    CHECK(s.disparity_gt.at(0, 3) == 2.0);

    // Hole run of width 6 behind the drop edge at column 10: targets 3..8.
    for (int r = 0; r < h; ++r) {
        for (int c = 3; c <= 8; ++c)
            CHECK(s.hole_mask_pre_inpaint.at(r, c));
        CHECK_FALSE(s.hole_mask_pre_inpaint.at(r, 2));
        CHECK_FALSE(s.hole_mask_pre_inpaint.at(r, 9));
        // Right-edge crop band of width 2 (background disparity).
        CHECK(s.hole_mask_pre_inpaint.at(r, 14));
        CHECK(s.hole_mask_pre_inpaint.at(r, 15));
    }
    // Inpainting left no holes behind.
    for (float v : s.right.data)
        CHECK((v >= 0.0f && v <= 1.0f));
}

TEST_CASE("generate_sample edge carry shrinks the dis-occlusion holes") {
    TestRng rng(83);
    const int w = 16, h = 2;
    const RasterImage img = testutil::random_image(w, h, rng);
    const DisparityField rel = card_scene_rel(h);

    GenerationConfig cfg;
    cfg.d_min = cfg.d_max = 8.0;
    cfg.tau = 3.0;
    cfg.strip_width = 3;
    const StereoSample s = generate_sample(img, rel, cfg, 3);

    // The carried strip covers the first three targets of the 6-wide run.
    for (int r = 0; r < h; ++r) {
        CHECK_FALSE(s.hole_mask_pre_inpaint.at(r, 3));
        CHECK_FALSE(s.hole_mask_pre_inpaint.at(r, 4));
        CHECK_FALSE(s.hole_mask_pre_inpaint.at(r, 5));
        CHECK(s.hole_mask_pre_inpaint.at(r, 6));
        CHECK(s.hole_mask_pre_inpaint.at(r, 7));
        CHECK(s.hole_mask_pre_inpaint.at(r, 8));
    }
}

TEST_CASE("generate_sample is deterministic and non-holes match the raw warp") {
    TestRng rng(84);
    const int w = 20, h = 6;
    const RasterImage img = testutil::random_image(w, h, rng);
    DisparityField rel = testutil::random_dense_field(w, h, 0.0, 1.0, rng);

    GenerationConfig cfg;
    cfg.d_min = 2.0;
    cfg.d_max = 9.0;
    const StereoSample a = generate_sample(img, rel, cfg, 12345);
    const StereoSample b = generate_sample(img, rel, cfg, 12345);
    CHECK(a.right == b.right);
    CHECK(a.disparity_gt == b.disparity_gt);
    CHECK(a.hole_mask_pre_inpaint == b.hole_mask_pre_inpaint);
    CHECK(a.alpha_used == b.alpha_used);

    const StereoSample c = generate_sample(img, rel, cfg, 54321);
    CHECK(c.alpha_used != a.alpha_used);

    // Scaled field is exactly alpha * rel.
    for (std::size_t i = 0; i < rel.values.size(); ++i)
        CHECK(a.disparity_gt.values[i] == rel.values[i] * a.alpha_used);

    // Inpainting never rewrote warped geometry.
    const BitMask edges = edge_mask(a.disparity_gt, cfg.tau);
    const EdgeCarryPlan plan = build_carry_plan(a.disparity_gt, edges, cfg.strip_width);
    const WarpResult raw = warp_with_carry(img, a.disparity_gt, plan, cfg.warp);
    for (int r = 0; r < h; ++r)
        for (int col = 0; col < w; ++col)
            if (!raw.hole_mask.at(r, col))
                for (int ch = 0; ch < 3; ++ch)
                    CHECK(a.right.at(r, col, ch) == raw.right_image.at(r, col, ch));
}

TEST_CASE("generate_sample validates its inputs") {
    TestRng rng(85);
    const RasterImage img = testutil::random_image(8, 4, rng);
    GenerationConfig cfg;
    CHECK_THROWS_AS(generate_sample(img, DisparityField(9, 4, 0.5), cfg, 1), DimensionError);
    CHECK_THROWS_AS(generate_sample(img, DisparityField(8, 4, 1.5), cfg, 1), ParameterError);

    GenerationConfig bad = cfg;
    bad.d_min = 0.0;
    CHECK_THROWS_AS(generate_sample(img, DisparityField(8, 4, 0.5), bad, 1), ParameterError);
    bad = cfg;
    bad.q = 1.0;
    CHECK_THROWS_AS(generate_sample(img, DisparityField(8, 4, 0.5), bad, 1), ParameterError);
    bad = cfg;
    bad.backend.kind = InpaintBackendConfig::Kind::External;
    bad.backend.command_template = "";
    CHECK_THROWS_AS(generate_sample(img, DisparityField(8, 4, 0.5), bad, 1), ParameterError);
}

TEST_CASE("mix stream degenerate and deterministic cases") {
    MixSpec single;
    single.sources = {{"only", 3.0}};
    MixStream s(single, 9);
    for (int i = 0; i < 10; ++i)
        CHECK(s.next() == "only");

    MixSpec pair;
    pair.sources = {{"a", 1.0}, {"b", 1.0}};
    MixStream s1(pair, 42), s2(pair, 42);
    for (int i = 0; i < 100; ++i)
        CHECK(s1.next_index() == s2.next_index());
}

TEST_CASE("mix stream rejects bad specs") {
    MixSpec empty;
    CHECK_THROWS_AS(MixStream(empty, 1), ParameterError);
    MixSpec neg;
    neg.sources = {{"a", -1.0}};
    CHECK_THROWS_AS(MixStream(neg, 1), ParameterError);
    MixSpec zero;
    zero.sources = {{"a", 0.0}};
    CHECK_THROWS_AS(MixStream(zero, 1), ParameterError);
}

TEST_CASE("mix stream tracks the weight ratios") {
    MixSpec spec;
    spec.sources = {{"synthetic", 5.0}, {"generated", 6.0}, {"real", 1.0}};
    MixStream stream(spec, 7);
    std::map<std::size_t, std::size_t> counts;
    const int n = 24000;
    for (int i = 0; i < n; ++i)
        ++counts[stream.next_index()];
    CHECK(std::abs(static_cast<double>(counts[0]) / n - 5.0 / 12.0) < 0.02);
    CHECK(std::abs(static_cast<double>(counts[1]) / n - 6.0 / 12.0) < 0.02);
    CHECK(std::abs(static_cast<double>(counts[2]) / n - 1.0 / 12.0) < 0.02);
}

TEST_CASE("per-sample seeds are stable and spread") {
    CHECK(per_sample_seed(1, 0) == per_sample_seed(1, 0));
    CHECK(per_sample_seed(1, 0) != per_sample_seed(1, 1));
    CHECK(per_sample_seed(1, 0) != per_sample_seed(2, 0));
}

TEST_CASE("generate_batch writes a consumable output tree") {
    TestRng rng(86);
    const auto dir = fresh_dir("stereogen-test-batch");
    const auto data_dir = dir / "data";
    std::filesystem::create_directories(data_dir);

    Manifest manifest;
    manifest.version = 1;
    manifest.base_dir = data_dir;
    for (int i = 0; i < 3; ++i) {
        const std::string id = "s" + std::to_string(i);
        write_image(testutil::random_image(12, 8, rng), data_dir / (id + "_left.png"));
        write_pfm(testutil::random_dense_field(12, 8, 0.0, 1.0, rng), data_dir / (id + "_depth.pfm"));
        ManifestEntry e;
        e.id = id;
        e.left_path = id + "_left.png";
        e.rel_depth_path = id + "_depth.pfm";
        e.dataset_id = "generated";
        manifest.samples.push_back(e);
    }
    write_manifest(manifest, data_dir / "manifest.jsonl");

    GenerationConfig cfg;
    cfg.d_min = 2.0;
    cfg.d_max = 5.0;
    cfg.seed = 11;
    BatchOptions batch;
    batch.out_dir = dir / "out";
    const BatchReport report = generate_batch(data_dir / "manifest.jsonl", cfg, batch);
    CHECK(report.failures == 0);
    REQUIRE(report.outcomes.size() == 3);

    const Manifest out = read_manifest(dir / "out" / "manifest.jsonl");
    REQUIRE(out.samples.size() == 3);
    for (const ManifestEntry& e : out.samples) {
        CHECK(std::filesystem::exists(out.resolve(e.left_path)));
        CHECK(std::filesystem::exists(out.resolve(*e.right_path)));
        CHECK(std::filesystem::exists(out.resolve(*e.gt_disp_path)));
        CHECK(e.alpha.has_value());
        const DisparityField disp = read_pfm(out.resolve(*e.gt_disp_path));
        CHECK(disp.width == 12);
    }
    CHECK(out.config["seed"] == 11);
}

TEST_CASE("generate_batch records per-sample failures and continues") {
    TestRng rng(87);
    const auto dir = fresh_dir("stereogen-test-batch-fail");
    write_image(testutil::random_image(6, 4, rng), dir / "ok_left.png");
    write_pfm(testutil::random_dense_field(6, 4, 0.0, 1.0, rng), dir / "ok_depth.pfm");
    {
        std::ofstream out(dir / "manifest.jsonl");
        out << R"({"version":1})" << "\n";
        out << R"({"id":"broken","left_path":"missing.png","rel_depth_path":"missing.pfm"})" << "\n";
        out << R"({"id":"nodepth","left_path":"ok_left.png"})" << "\n";
        out << R"({"id":"ok","left_path":"ok_left.png","rel_depth_path":"ok_depth.pfm"})" << "\n";
    }
    GenerationConfig cfg;
    BatchOptions batch;
    batch.out_dir = dir / "out";
    const BatchReport report = generate_batch(dir / "manifest.jsonl", cfg, batch);
    CHECK(report.failures == 2);
    CHECK_FALSE(report.outcomes[0].ok);
    CHECK_FALSE(report.outcomes[1].ok);
    CHECK(report.outcomes[1].error.find("rel_depth") != std::string::npos);
    CHECK(report.outcomes[2].ok);
    CHECK(report.manifest_warnings.size() == 2);

    const Manifest out = read_manifest(dir / "out" / "manifest.jsonl");
    CHECK(out.samples.size() == 1);
    CHECK(out.samples[0].id == "ok");
}

TEST_CASE("generate_batch rejects unsafe sample ids") {
    TestRng rng(88);
    const auto dir = fresh_dir("stereogen-test-batch-ids");
    write_image(testutil::random_image(4, 4, rng), dir / "left.png");
    write_pfm(DisparityField(4, 4, 0.5), dir / "depth.pfm");
    {
        std::ofstream out(dir / "manifest.jsonl");
        out << R"({"version":1})" << "\n";
        out << R"({"id":"../evil","left_path":"left.png","rel_depth_path":"depth.pfm"})" << "\n";
    }
    GenerationConfig cfg;
    BatchOptions batch;
    batch.out_dir = dir / "out";
    const BatchReport report = generate_batch(dir / "manifest.jsonl", cfg, batch);
    CHECK(report.failures == 1);
    CHECK(report.outcomes[0].error.find("filename-safe") != std::string::npos);
}
