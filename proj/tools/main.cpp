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

// Command-line front end. Subcommands: generate, edge-mask, inpaint, align,
// loss, eval, mix. Reports are key-value lines ("key = value"), optionally
// mirrored to a JSON file via --json-out. Exit codes: 0 success,
// 1 operational error, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stereogen/dssi.hpp"
#include "stereogen/edge.hpp"
#include "stereogen/inpaint.hpp"
#include "stereogen/io.hpp"
#include "stereogen/metrics.hpp"
#include "stereogen/pipeline.hpp"
#include "stereogen/rng.hpp"
#include "stereogen/warp.hpp"

namespace {

using namespace stereogen;

constexpr const char* kBackendEnvVar = "STEREOGEN_INPAINT_CMD";

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

/// One key per line, stable order, machine-parseable.
class Report {
public:
    void add(const std::string& key, double value) {
        lines_.push_back(key + " = " + fmt_double(value));
        json_[key] = value;
    }
    void add(const std::string& key, std::size_t value) {
        lines_.push_back(key + " = " + std::to_string(value));
        json_[key] = value;
    }
    void print() const {
        for (const std::string& line : lines_)
            std::printf("%s\n", line.c_str());
    }
    void write_json(const std::filesystem::path& path) const {
        std::FILE* f = std::fopen(path.string().c_str(), "wb");
        if (!f)
            throw FormatError("cannot open '" + path.string() + "' for writing");
        const std::string text = json_.dump(2) + "\n";
        std::fwrite(text.data(), 1, text.size(), f);
        std::fclose(f);
    }

private:
    std::vector<std::string> lines_;
    nlohmann::json json_ = nlohmann::json::object();
};

BitMask joint_valid(const DisparityField& a, const DisparityField& b) { return mask_and(a.valid, b.valid); }

struct CommonLossFlags {
    double q = 0.8;
    double beta = 1.0;
};

int run_generate(const std::string& manifest, const std::string& out_dir, GenerationConfig cfg, int jobs,
                 const std::optional<std::string>& json_out) {
    BatchOptions batch;
    batch.out_dir = out_dir;
    batch.jobs = jobs;
    std::size_t done = 0;
    batch.on_sample = [&](const SampleOutcome& o) {
        ++done;
        if (o.ok)
            std::fprintf(stderr, "[%zu] %s ok (alpha=%.6g)\n", done, o.id.c_str(), o.alpha);
        else
            std::fprintf(stderr, "[%zu] %s FAILED: %s\n", done, o.id.c_str(), o.error.c_str());
        for (const std::string& w : o.warnings)
            std::fprintf(stderr, "[%zu] %s warning: %s\n", done, o.id.c_str(), w.c_str());
    };

    const BatchReport report = generate_batch(manifest, cfg, batch);
    for (const std::string& w : report.manifest_warnings)
        std::fprintf(stderr, "manifest warning: %s\n", w.c_str());

    if (json_out) {
        nlohmann::json j;
        j["samples"] = nlohmann::json::array();
        for (const SampleOutcome& o : report.outcomes) {
            nlohmann::json s{{"id", o.id}, {"ok", o.ok}, {"seed", o.seed}};
            if (o.ok)
                s["alpha"] = o.alpha;
            else
                s["error"] = o.error;
            j["samples"].push_back(std::move(s));
        }
        j["failures"] = report.failures;
        std::FILE* f = std::fopen(json_out->c_str(), "wb");
        if (!f)
            throw FormatError("cannot open '" + *json_out + "' for writing");
        const std::string text = j.dump(2) + "\n";
        std::fwrite(text.data(), 1, text.size(), f);
        std::fclose(f);
    }

    std::fprintf(stderr, "%zu/%zu samples generated\n", report.outcomes.size() - report.failures,
                 report.outcomes.size());
    return report.failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stereo training-pair synthesis and supervision toolkit"};
    app.require_subcommand(1);

    GenerationConfig defaults;

    // --- generate ---
    auto* gen = app.add_subcommand("generate", "synthesize stereo pairs from a manifest of single-view images");
    std::string gen_manifest, gen_out;
    std::string gen_backend = "builtin";
    std::string gen_backend_cmd;
    if (const char* env = std::getenv(kBackendEnvVar))
        gen_backend_cmd = env;
    std::uint64_t gen_seed = defaults.seed;
    double gen_dmin = defaults.d_min, gen_dmax = defaults.d_max, gen_tau = defaults.tau;
    int gen_strip = defaults.strip_width, gen_jobs = 1;
    long gen_timeout_ms = 60000;
    std::optional<std::string> gen_json;
    gen->add_option("--manifest", gen_manifest, "input manifest (JSON lines)")->required()->check(CLI::ExistingFile);
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->add_option("--seed", gen_seed, "global RNG seed");
    gen->add_option("--d-min", gen_dmin, "minimum disparity scale (pixels)");
    gen->add_option("--d-max", gen_dmax, "maximum disparity scale (pixels)");
    gen->add_option("--tau", gen_tau, "edge detection threshold (pixels)");
    gen->add_option("--strip-width", gen_strip, "carried background strip width (pixels)");
    gen->add_option("--backend", gen_backend, "hole filling backend")->check(CLI::IsMember({"builtin", "external"}));
    gen->add_option("--backend-command", gen_backend_cmd,
                    std::string("external command template with {image} {mask} {output} (default: $") + kBackendEnvVar +
                        ")");
    gen->add_option("--timeout-ms", gen_timeout_ms, "external backend timeout in milliseconds");
    gen->add_option("--jobs", gen_jobs, "worker threads")->check(CLI::PositiveNumber);
    gen->add_option("--json-out", gen_json, "write a JSON generation summary to this path");

    // --- edge-mask ---
    auto* edge = app.add_subcommand("edge-mask", "detect horizontal drop edges in a disparity map");
    std::string edge_disp, edge_out;
    double edge_tau = defaults.tau;
    edge->add_option("--disparity", edge_disp, "disparity file (.pfm or KITTI .png)")
        ->required()
        ->check(CLI::ExistingFile);
    edge->add_option("--out", edge_out, "output mask PNG (255 = edge)")->required();
    edge->add_option("--tau", edge_tau, "edge detection threshold (pixels)");

    // --- inpaint ---
    auto* inp = app.add_subcommand("inpaint", "fill masked holes in an image");
    std::string inp_image, inp_mask, inp_out;
    std::string inp_backend = "builtin";
    std::string inp_backend_cmd;
    if (const char* env = std::getenv(kBackendEnvVar))
        inp_backend_cmd = env;
    std::string inp_workdir;
    long inp_timeout_ms = 60000;
    inp->add_option("--image", inp_image, "input image PNG")->required()->check(CLI::ExistingFile);
    inp->add_option("--mask", inp_mask, "hole mask PNG (255 = hole)")->required()->check(CLI::ExistingFile);
    inp->add_option("--out", inp_out, "output PNG")->required();
    inp->add_option("--backend", inp_backend, "hole filling backend")->check(CLI::IsMember({"builtin", "external"}));
    inp->add_option("--backend-command", inp_backend_cmd, "external command template");
    inp->add_option("--workdir", inp_workdir, "working directory for the external exchange files");
    inp->add_option("--timeout-ms", inp_timeout_ms, "external backend timeout in milliseconds");

    // --- align ---
    auto* align = app.add_subcommand("align", "least-squares scale/shift fit of a prediction to pseudo depth");
    std::string align_pred, align_mono;
    align->add_option("--pred", align_pred, "predicted disparity (.pfm or .png)")->required()->check(CLI::ExistingFile);
    align->add_option("--mono", align_mono, "mono pseudo disparity (.pfm or .png)")
        ->required()
        ->check(CLI::ExistingFile);

    // --- loss ---
    auto* loss = app.add_subcommand("loss", "sparse + scale/shift-invariant loss report");
    std::string loss_pred, loss_gt, loss_mono;
    CommonLossFlags loss_flags;
    std::optional<std::string> loss_json;
    loss->add_option("--pred", loss_pred, "predicted disparity")->required()->check(CLI::ExistingFile);
    loss->add_option("--gt", loss_gt, "sparse ground-truth disparity")->required()->check(CLI::ExistingFile);
    loss->add_option("--mono", loss_mono, "mono pseudo disparity")->required()->check(CLI::ExistingFile);
    loss->add_option("--q", loss_flags.q, "inlier quantile in (0,1)");
    loss->add_option("--beta", loss_flags.beta, "weight of the invariant term");
    loss->add_option("--json-out", loss_json, "write the report as JSON to this path");

    // --- eval ---
    auto* ev = app.add_subcommand("eval", "EPE / D1 / >2px metrics over valid ground truth");
    std::string eval_pred, eval_gt;
    std::optional<std::string> eval_json;
    ev->add_option("--pred", eval_pred, "predicted disparity")->required()->check(CLI::ExistingFile);
    ev->add_option("--gt", eval_gt, "ground-truth disparity")->required()->check(CLI::ExistingFile);
    ev->add_option("--json-out", eval_json, "write the report as JSON to this path");

    // --- mix ---
    auto* mix = app.add_subcommand("mix", "emit a seeded weighted stream of dataset ids");
    std::vector<double> mix_weights;
    std::vector<std::string> mix_ids;
    std::uint64_t mix_seed = 0;
    std::size_t mix_count = 12;
    mix->add_option("--weights", mix_weights, "positive sampling weights")->required()->delimiter(',');
    mix->add_option("--ids", mix_ids, "dataset ids, one per weight (default: their indices)")->delimiter(',');
    mix->add_option("--count", mix_count, "number of draws to emit");
    mix->add_option("--seed", mix_seed, "stream seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            app.exit(e);
            return 0;
        }
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) {
            GenerationConfig cfg;
            cfg.seed = gen_seed;
            cfg.d_min = gen_dmin;
            cfg.d_max = gen_dmax;
            cfg.tau = gen_tau;
            cfg.strip_width = gen_strip;
            cfg.backend.kind = gen_backend == "external" ? InpaintBackendConfig::Kind::External
                                                         : InpaintBackendConfig::Kind::Builtin;
            cfg.backend.command_template = gen_backend_cmd;
            cfg.backend.timeout = std::chrono::milliseconds(gen_timeout_ms);
            return run_generate(gen_manifest, gen_out, cfg, gen_jobs, gen_json);
        }

        if (edge->parsed()) {
            const DisparityField disp = read_disparity(edge_disp);
            write_mask_png(edge_mask(disp, edge_tau), edge_out);
            return 0;
        }

        if (inp->parsed()) {
            const RasterImage image = read_image(inp_image);
            const BitMask holes = read_mask_png(inp_mask);
            RasterImage out;
            std::vector<std::string> warnings;
            if (inp_backend == "builtin") {
                out = inpaint_builtin(image, holes, &warnings);
            } else {
                ExternalInpaintOptions opts;
                opts.command_template = inp_backend_cmd;
                opts.timeout = std::chrono::milliseconds(inp_timeout_ms);
                opts.workdir = inp_workdir.empty()
                                   ? std::filesystem::temp_directory_path() /
                                         ("stereogen-inpaint-" + std::to_string(::getpid()))
                                   : std::filesystem::path(inp_workdir);
                out = inpaint_external(image, holes, opts);
                if (inp_workdir.empty()) {
                    std::error_code ec;
                    std::filesystem::remove_all(opts.workdir, ec);
                }
            }
            for (const std::string& w : warnings)
                std::fprintf(stderr, "warning: %s\n", w.c_str());
            write_image(out, inp_out);
            return 0;
        }

        if (align->parsed()) {
            const DisparityField pred = read_disparity(align_pred);
            const DisparityField mono = read_disparity(align_mono);
            const BitMask mask = joint_valid(pred, mono);
            const AffineAlignment fit = lstsq_align(pred, mono, mask);
            Report rep;
            rep.add("a", fit.scale);
            rep.add("b", fit.shift);
            rep.add("pixels", mask.popcount());
            rep.print();
            return 0;
        }

        if (loss->parsed()) {
            const DisparityField pred = read_disparity(loss_pred);
            const DisparityField gt = read_disparity(loss_gt);
            const DisparityField mono = read_disparity(loss_mono);
            const BitMask gt_mask = joint_valid(pred, gt);
            const BitMask mono_mask = joint_valid(pred, mono);
            const DssiReport dssi = dssi_loss(pred, mono, mono_mask, loss_flags.q);
            const double sparse = sparse_loss(pred, gt, gt_mask);
            Report rep;
            rep.add("a", dssi.alignment_initial.scale);
            rep.add("b", dssi.alignment_initial.shift);
            rep.add("a_prime", dssi.alignment_refined.scale);
            rep.add("b_prime", dssi.alignment_refined.shift);
            rep.add("tau_l", dssi.threshold);
            rep.add("inliers", dssi.inlier_count);
            rep.add("sparse", sparse);
            rep.add("dssi", dssi.loss);
            rep.add("beta", loss_flags.beta);
            rep.add("total", sparse + loss_flags.beta * dssi.loss);
            rep.print();
            if (dssi.inlier_fallback)
                std::fprintf(stderr, "warning: outlier trim emptied the mask; kept the full mask\n");
            if (loss_json)
                rep.write_json(*loss_json);
            return 0;
        }

        if (ev->parsed()) {
            const DisparityField pred = read_disparity(eval_pred);
            const DisparityField gt = read_disparity(eval_gt);
            const EvalReport r = evaluate(pred, gt, joint_valid(pred, gt));
            Report rep;
            rep.add("epe", r.epe);
            rep.add("d1", r.d1);
            rep.add("bad2", r.bad2);
            rep.add("pixels", r.evaluated_pixels);
            rep.print();
            if (eval_json)
                rep.write_json(*eval_json);
            return 0;
        }

        if (mix->parsed()) {
            MixSpec spec;
            for (std::size_t i = 0; i < mix_weights.size(); ++i) {
                const std::string id = i < mix_ids.size() ? mix_ids[i] : std::to_string(i);
                spec.sources.push_back({id, mix_weights[i]});
            }
            if (!mix_ids.empty() && mix_ids.size() != mix_weights.size())
                throw ParameterError("--ids must match --weights in length");
            MixStream stream(spec, mix_seed);
            for (std::size_t i = 0; i < mix_count; ++i)
                std::printf("%s\n", stream.next().c_str());
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
