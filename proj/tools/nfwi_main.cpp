// SPDX-License-Identifier: Apache-2.0
//
// nfwi — near-field wideband imaging: channel simulation, illumination
// design and correlation-aware sparse Bayesian image recovery.
// Copyright (C) 2026 nfwi contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "nfwi/harness.hpp"
#include "nfwi/io.hpp"
#include "nfwi/metrics.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>

namespace {

void apply_overrides(nfwi::ExperimentConfig& config, const std::string& out,
                     const std::vector<std::uint64_t>& seeds,
                     const std::vector<std::string>& patterns,
                     const std::vector<double>& snrs, int jobs) {
    if (!out.empty()) config.output.dir = out;
    if (!seeds.empty()) config.seeds = seeds;
    if (!patterns.empty()) {
        config.illumination.modes.clear();
        for (const auto& p : patterns)
            config.illumination.modes.push_back(
                nfwi::illumination_mode_from_string(p));
    }
    if (!snrs.empty()) config.snr_db = snrs;
    if (jobs > 0) config.jobs = jobs;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"near-field wideband imaging simulator and solver"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> patterns;
    std::vector<double> snrs;
    int verbosity = 0;
    int jobs = 0;

    auto* run = app.add_subcommand("run", "run a full experiment");
    run->add_option("-c,--config", config_path, "scenario config (JSON)")
        ->required();
    run->add_option("-o,--out", out_dir, "output directory override");
    run->add_option("--seed", seeds, "seed override (repeatable)");
    run->add_option("--patterns", patterns,
                    "pattern filter: uniform, tcm, ipm");
    run->add_option("--snrs", snrs, "SNR filter in dB");
    run->add_option("-j,--jobs", jobs, "experiment cell worker count");
    run->add_flag("-v,--verbose", verbosity, "progress on stderr");

    auto* design = app.add_subcommand(
        "design", "design illumination plans and write them to files");
    design->add_option("-c,--config", config_path, "scenario config (JSON)")
        ->required();
    design->add_option("-o,--out", out_dir, "output directory")->required();
    design->add_option("--patterns", patterns,
                       "pattern filter: uniform, tcm, ipm");
    design->add_flag("-v,--verbose", verbosity, "progress on stderr");

    std::string truth_path, estimate_path;
    auto* metrics = app.add_subcommand(
        "metrics", "image quality metrics between two CSV sidecar images");
    metrics->add_option("--truth", truth_path, "ground-truth image CSV")
        ->required();
    metrics->add_option("--estimate", estimate_path, "estimate image CSV")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            auto config = nfwi::load_config_file(config_path);
            apply_overrides(config, out_dir, seeds, patterns, snrs, jobs);
            const auto art = nfwi::run_experiment(config, verbosity);
            std::printf("pattern,snr_db,n_seeds,immse,psnr_db,ssim,pcc\n");
            for (const auto& row : art.summary)
                std::printf("%s,%g,%d,%s,%s,%s,%s\n", row.pattern.c_str(),
                            row.snr_db, row.n_seeds,
                            nfwi::format_double(row.immse).c_str(),
                            nfwi::format_double(row.psnr_db).c_str(),
                            nfwi::format_double(row.ssim).c_str(),
                            nfwi::format_double(row.pcc).c_str());
            if (!art.all_ok) {
                std::fprintf(stderr, "nfwi: %zu cell(s) failed, see %s\n",
                             art.errors.size(),
                             (art.output_dir + "/errors.csv").c_str());
                return 1;
            }
            return 0;
        }
        if (design->parsed()) {
            auto config = nfwi::load_config_file(config_path);
            apply_overrides(config, "", {}, patterns, {}, 0);
            std::filesystem::create_directories(out_dir);
            const auto geometry = nfwi::build_geometry(config.geometry);
            const auto tables = nfwi::build_channel_tables(geometry);
            nfwi::PlanDesignOptions opts;
            opts.ipm = config.illumination.ipm;
            opts.ipm_focus = config.illumination.ipm_focus;
            for (auto mode : config.illumination.modes) {
                const auto plan = nfwi::design_plan(
                    mode, tables, geometry, config.illumination.total_power,
                    opts);
                const std::string path =
                    out_dir + "/plan_" + nfwi::to_string(mode) + ".txt";
                nfwi::write_plan(plan, path);
                if (verbosity > 0)
                    std::fprintf(stderr, "[nfwi] wrote %s\n", path.c_str());
            }
            return 0;
        }
        if (metrics->parsed()) {
            const auto truth = nfwi::read_matrix_csv(truth_path);
            const auto estimate = nfwi::read_matrix_csv(estimate_path);
            const auto [t, e] = nfwi::normalize_pair(truth, estimate);
            const auto r = nfwi::pcc(t, e);
            std::printf("immse,psnr_db,ssim,pcc\n");
            std::printf("%s,%s,%s,%s\n",
                        nfwi::format_double(nfwi::immse(t, e)).c_str(),
                        nfwi::format_double(nfwi::psnr(t, e)).c_str(),
                        nfwi::format_double(nfwi::ssim(t, e)).c_str(),
                        r ? nfwi::format_double(*r).c_str() : "nan");
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "nfwi: error: %s\n", e.what());
        return 2;
    }
    return 0;
}
