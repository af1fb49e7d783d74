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

#include "stereogen/pipeline.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <mutex>
#include <thread>

#include "stereogen/edge.hpp"
#include "stereogen/io.hpp"
#include "stereogen/rng.hpp"

namespace stereogen {

void GenerationConfig::validate() const {
    if (!(std::isfinite(d_min) && std::isfinite(d_max)) || d_min <= 0.0 || d_min > d_max)
        throw ParameterError("generation config requires 0 < d_min <= d_max");
    if (!std::isfinite(tau) || tau <= 0.0)
        throw ParameterError("generation config requires tau > 0");
    if (strip_width < 1)
        throw ParameterError("generation config requires strip_width >= 1");
    if (!(q > 0.0 && q < 1.0))
        throw ParameterError("generation config requires 0 < q < 1");
    if (!std::isfinite(beta))
        throw ParameterError("generation config requires finite beta");
    if (backend.kind == InpaintBackendConfig::Kind::External && backend.command_template.empty())
        throw ParameterError("external inpaint backend requires a command template");
}

StereoSample generate_sample(const RasterImage& image, const DisparityField& rel_depth, const GenerationConfig& cfg,
                             std::uint64_t sample_seed, const std::string& source_id,
                             const std::filesystem::path& workdir) {
    cfg.validate();
    if (image.width != rel_depth.width || image.height != rel_depth.height)
        throw DimensionError("generate_sample image and depth shapes differ");
    if (!rel_depth.dense_valid())
        throw ParameterError("generate_sample requires a dense relative depth field");

    StereoSample sample;
    sample.source_id = source_id;
    sample.seed = sample_seed;
    sample.alpha_used = sample_alpha(sample_seed, cfg.d_min, cfg.d_max);
    sample.disparity_gt = scale_disparity(rel_depth, sample.alpha_used);

    const BitMask edges = edge_mask(sample.disparity_gt, cfg.tau);
    const EdgeCarryPlan plan = build_carry_plan(sample.disparity_gt, edges, cfg.strip_width);
    WarpResult warped = warp_with_carry(image, sample.disparity_gt, plan, cfg.warp);

    sample.hole_mask_pre_inpaint = warped.hole_mask;
    if (cfg.backend.kind == InpaintBackendConfig::Kind::Builtin) {
        sample.right = inpaint_builtin(warped.right_image, warped.hole_mask, &sample.warnings);
    } else {
        ExternalInpaintOptions opts;
        opts.command_template = cfg.backend.command_template;
        opts.timeout = cfg.backend.timeout;
        opts.workdir = workdir;
        sample.right = inpaint_external(warped.right_image, warped.hole_mask, opts);
    }
    sample.left = image;
    return sample;
}

void MixSpec::validate() const {
    if (sources.empty())
        throw ParameterError("mix spec needs at least one source");
    for (const MixSource& s : sources)
        if (!std::isfinite(s.weight) || s.weight <= 0.0)
            throw ParameterError("mix weights must be positive, got " + std::to_string(s.weight) + " for '" +
                                 s.dataset_id + "'");
}

MixStream::MixStream(MixSpec spec, std::uint64_t seed) : spec_(std::move(spec)), rng_state_(seed) {
    spec_.validate();
    double total = 0.0;
    for (const MixSource& s : spec_.sources) {
        total += s.weight;
        cumulative_.push_back(total);
    }
    for (double& c : cumulative_)
        c /= total;
    cumulative_.back() = 1.0;
}

std::size_t MixStream::next_index() {
    const double u = static_cast<double>(splitmix64(rng_state_) >> 11) * 0x1.0p-53;
    for (std::size_t i = 0; i < cumulative_.size(); ++i)
        if (u < cumulative_[i])
            return i;
    return cumulative_.size() - 1;
}

const std::string& MixStream::next() { return spec_.sources[next_index()].dataset_id; }

namespace {

bool id_is_safe(const std::string& id) {
    if (id.empty())
        return false;
    for (char c : id)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.'))
            return false;
    return id.front() != '.';
}

} // namespace

BatchReport generate_batch(const std::filesystem::path& manifest_path, const GenerationConfig& cfg,
                           const BatchOptions& batch) {
    cfg.validate();
    if (batch.jobs < 1)
        throw ParameterError("jobs must be >= 1");

    BatchReport report;
    const Manifest manifest = read_manifest(manifest_path, &report.manifest_warnings);
    std::filesystem::create_directories(batch.out_dir);
    report.outcomes.resize(manifest.samples.size());

    std::atomic<std::size_t> cursor{0};
    std::mutex progress_mutex;
    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= manifest.samples.size())
                return;
            const ManifestEntry& entry = manifest.samples[i];
            SampleOutcome& outcome = report.outcomes[i];
            outcome.id = entry.id;
            outcome.seed = per_sample_seed(cfg.seed, static_cast<std::uint64_t>(i));
            try {
                if (!id_is_safe(entry.id))
                    throw ParameterError("sample id '" + entry.id + "' is not filename-safe");
                if (!entry.rel_depth_path)
                    throw ParameterError("sample '" + entry.id + "' has no rel_depth_path");
                const RasterImage left = read_image(manifest.resolve(entry.left_path));
                const DisparityField rel = read_rel_depth(manifest.resolve(*entry.rel_depth_path));

                std::filesystem::path workdir;
                if (cfg.backend.kind == InpaintBackendConfig::Kind::External) {
                    workdir = batch.out_dir / ".work" / entry.id;
                    std::filesystem::create_directories(workdir);
                }
                StereoSample sample = generate_sample(left, rel, cfg, outcome.seed, entry.id, workdir);
                if (!workdir.empty()) {
                    std::error_code ec;
                    std::filesystem::remove_all(workdir, ec);
                }

                write_image(sample.left, batch.out_dir / (entry.id + "_left.png"));
                write_image(sample.right, batch.out_dir / (entry.id + "_right.png"));
                write_pfm(sample.disparity_gt, batch.out_dir / (entry.id + "_disp.pfm"));
                write_mask_png(sample.hole_mask_pre_inpaint, batch.out_dir / (entry.id + "_holes.png"));

                outcome.ok = true;
                outcome.alpha = sample.alpha_used;
                outcome.warnings = std::move(sample.warnings);
            } catch (const std::exception& e) {
                outcome.ok = false;
                outcome.error = e.what();
            }
            if (batch.on_sample) {
                const std::lock_guard<std::mutex> lock(progress_mutex);
                batch.on_sample(outcome);
            }
        }
    };

    if (batch.jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(batch.jobs));
        for (int j = 0; j < batch.jobs; ++j)
            pool.emplace_back(worker);
        for (std::thread& t : pool)
            t.join();
    }

    // Output manifest, written serially in manifest order so the tree does
    // not depend on scheduling.
    Manifest out_manifest;
    out_manifest.version = 1;
    out_manifest.config = {
        {"d_min", cfg.d_min},     {"d_max", cfg.d_max},
        {"tau", cfg.tau},         {"strip_width", cfg.strip_width},
        {"q", cfg.q},             {"beta", cfg.beta},
        {"seed", cfg.seed},
        {"backend", cfg.backend.kind == InpaintBackendConfig::Kind::Builtin ? "builtin" : "external"},
    };
    out_manifest.base_dir = batch.out_dir;
    for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
        const SampleOutcome& outcome = report.outcomes[i];
        if (!outcome.ok) {
            ++report.failures;
            continue;
        }
        ManifestEntry e;
        e.id = outcome.id;
        e.left_path = outcome.id + "_left.png";
        e.right_path = outcome.id + "_right.png";
        e.gt_disp_path = outcome.id + "_disp.pfm";
        e.dataset_id = manifest.samples[i].dataset_id;
        e.alpha = outcome.alpha;
        e.seed = outcome.seed;
        out_manifest.samples.push_back(std::move(e));
    }
    write_manifest(out_manifest, batch.out_dir / "manifest.jsonl");

    // Clean up the shared external-backend scratch directory if empty.
    std::error_code ec;
    std::filesystem::remove(batch.out_dir / ".work", ec);
    return report;
}

} // namespace stereogen
