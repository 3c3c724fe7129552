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

#include "nfwi/forward.hpp"
#include "nfwi/io.hpp"
#include "nfwi/rng.hpp"
#include "nfwi/sbl.hpp"
#include "nfwi/scene.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace nfwi {

namespace fs = std::filesystem;

std::uint64_t noise_seed_for(std::uint64_t seed, std::size_t snr_index) {
    return mix64(seed ^ (0xa0b1c2d300000000ULL + snr_index));
}

void emit_image(const MatrixXd& image, const std::string& path) {
    write_pgm16(image, path + ".pgm");
    write_matrix_csv(image, path + ".csv");
}

namespace {

std::string pattern_tag(IlluminationMode mode) { return to_string(mode); }

std::string snr_tag(double snr_db) {
    std::ostringstream ss;
    ss << snr_db;
    std::string s = ss.str();
    for (auto& ch : s)
        if (ch == '.') ch = 'p';
    return s;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct CellResult {
    std::vector<MetricRow> rows;
    std::optional<CellError> error;
    std::vector<double> evidence;
    std::vector<double> psi_coeff;
    VectorXd gamma;
    bool have_diag = false;
};

void write_metrics_csv(const std::string& path,
                       const std::vector<MetricRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path);
    out << "pattern,snr_db,seed,subcarrier,immse,psnr_db,ssim,pcc\n";
    for (const auto& r : rows) {
        out << r.pattern << "," << format_double(r.snr_db) << "," << r.seed
            << ",";
        if (r.subcarrier == 0)
            out << "mean";
        else
            out << r.subcarrier;
        out << "," << format_double(r.sample.immse) << ","
            << format_double(r.sample.psnr_db) << ","
            << format_double(r.sample.ssim) << ",";
        if (r.sample.pcc)
            out << format_double(*r.sample.pcc);
        else
            out << "nan";
        out << "\n";
    }
}

void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path);
    out << "pattern,snr_db,n_seeds,immse,psnr_db,ssim,pcc\n";
    for (const auto& r : rows)
        out << r.pattern << "," << format_double(r.snr_db) << "," << r.n_seeds
            << "," << format_double(r.immse) << ","
            << format_double(r.psnr_db) << "," << format_double(r.ssim) << ","
            << format_double(r.pcc) << "\n";
}

void write_errors_csv(const std::string& path,
                      const std::vector<CellError>& errors) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path);
    out << "pattern,snr_db,seed,stage,message\n";
    for (const auto& e : errors) {
        std::string msg = e.message;
        for (auto& ch : msg)
            if (ch == ',' || ch == '\n') ch = ';';
        out << e.pattern << "," << format_double(e.snr_db) << "," << e.seed
            << "," << e.stage << "," << msg << "\n";
    }
}

} // namespace

ExperimentArtifacts run_experiment(const ExperimentConfig& config,
                                   int verbosity) {
    ExperimentArtifacts art;
    art.output_dir = config.output.dir;
    fs::create_directories(art.output_dir);

    // resolved-config echo
    {
        std::ofstream echo(art.output_dir + "/config_echo.json",
                           std::ios::binary);
        echo << config_to_json(config);
    }

    const SceneGeometry geometry = build_geometry(config.geometry);
    const ChannelTables tables = build_channel_tables(geometry);
    const RasterScene raster =
        render_bitmap(config.scene.raster, geometry.cells_per_side,
                      config.scene.magnitude_top, config.scene.magnitude_bottom);

    // --- illumination designs, cached per geometry -----------------------
    PlanDesignOptions design_opts;
    design_opts.ipm = config.illumination.ipm;
    design_opts.ipm_focus = config.illumination.ipm_focus;

    std::map<IlluminationMode, IlluminationPlan> plans;
    const std::string cache = config.illumination.plan_cache_dir;
    if (!cache.empty()) fs::create_directories(cache);

    // the uniform plan always exists: it anchors the noise calibration
    std::vector<IlluminationMode> needed = config.illumination.modes;
    if (std::find(needed.begin(), needed.end(), IlluminationMode::uniform) ==
        needed.end())
        needed.push_back(IlluminationMode::uniform);

    std::vector<IpmDiagnostics> ipm_diag;
    for (IlluminationMode mode : needed) {
        const std::string cache_path =
            cache.empty() ? "" : cache + "/plan_" + pattern_tag(mode) + ".txt";
        if (!cache_path.empty() && fs::exists(cache_path)) {
            plans[mode] = read_plan(cache_path);
            if (verbosity > 0)
                std::fprintf(stderr, "[nfwi] loaded cached plan %s\n",
                             cache_path.c_str());
            continue;
        }
        plans[mode] = design_plan(mode, tables, geometry,
                                  config.illumination.total_power, design_opts,
                                  mode == IlluminationMode::ipm ? &ipm_diag
                                                                : nullptr);
        if (!cache_path.empty()) write_plan(plans[mode], cache_path);
        if (verbosity > 0)
            std::fprintf(stderr, "[nfwi] designed %s plan\n",
                         pattern_tag(mode).c_str());
    }

    // design diagnostics: coherence per pattern, IPM traces
    if (config.output.diagnostics) {
        std::ofstream out(art.output_dir + "/design_diagnostics.csv",
                          std::ios::binary);
        out << "pattern,subcarrier,total_coherence,normalized_total_coherence,"
               "min_power_roi,chi_relaxation,rank_residual\n";
        std::vector<int> all_cells(geometry.cell_count());
        for (int i = 0; i < geometry.cell_count(); ++i) all_cells[i] = i;
        for (const auto& [mode, plan] : plans) {
            for (std::size_t n = 0; n < plan.vectors.size(); ++n) {
                const MatrixXcd phi = sensing_matrix(tables, plan.vectors[n]);
                out << pattern_tag(mode) << "," << (n + 1) << ","
                    << format_double(
                           total_coherence(phi, frobenius_alpha(phi)))
                    << ","
                    << format_double(normalized_total_coherence(phi)) << ","
                    << format_double(min_illumination_power(plan.vectors[n],
                                                            tables, all_cells));
                if (mode == IlluminationMode::ipm && n < ipm_diag.size())
                    out << "," << format_double(ipm_diag[n].chi_relaxation)
                        << "," << format_double(ipm_diag[n].rank_residual);
                else
                    out << ",,";
                out << "\n";
            }
        }
        for (std::size_t n = 0; n < ipm_diag.size(); ++n) {
            std::ofstream trace(art.output_dir + "/ipm_chi_trace_sc" +
                                    std::to_string(n + 1) + ".csv",
                                std::ios::binary);
            trace << "iteration,chi\n";
            for (std::size_t k = 0; k < ipm_diag[n].chi_trace.size(); ++k)
                trace << (k + 1) << ","
                      << format_double(ipm_diag[n].chi_trace[k]) << "\n";
        }
    }

    // --- experiment cells -------------------------------------------------
    struct CellSpec {
        IlluminationMode mode;
        std::size_t snr_index;
        std::size_t seed_index;
    };
    std::vector<CellSpec> cells;
    for (IlluminationMode mode : config.illumination.modes)
        for (std::size_t s = 0; s < config.snr_db.size(); ++s)
            for (std::size_t k = 0; k < config.seeds.size(); ++k)
                cells.push_back({mode, s, k});

    std::vector<CellResult> results(cells.size());

    SblOptions sbl_opts;
    sbl_opts.tol = config.solver.tol;
    sbl_opts.max_iter = config.solver.max_iter;
    sbl_opts.ar1_projection = config.solver.ar1_projection;
    sbl_opts.gamma_floor_rel = config.solver.gamma_floor_rel;

    const bool pool = config.jobs > 1;
#pragma omp parallel for schedule(dynamic, 1) num_threads(config.jobs) \
    if (pool)
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const CellSpec& spec = cells[ci];
        const double snr = config.snr_db[spec.snr_index];
        const std::uint64_t seed = config.seeds[spec.seed_index];
        CellResult& res = results[ci];
        std::string stage = "scene";
        try {
            const GroundTruthScene scene =
                generate_scene(raster.mask, raster.magnitudes,
                               config.scene.psi, seed,
                               geometry.n_subcarriers);
            const auto truth = scene_to_images(scene);

            stage = "calibration";
            const double n0 = calibrate_noise_power(
                tables, scene, plans.at(IlluminationMode::uniform), snr);

            stage = "synthesis";
            const SensingSet sensing =
                build_sensing_set(tables, plans.at(spec.mode));
            ObservationSet obs = synthesize_observations(
                sensing, coefficient_vectors(scene, tables), n0,
                noise_seed_for(seed, spec.snr_index));
            obs.snr_db = snr;

            stage = "solver";
            const SblRun run = run_sbl(obs, sensing, tables.delay_phases,
                                       geometry.cells_per_side, sbl_opts);

            stage = "metrics";
            const MetricReport rep =
                compare_images(truth, run.images, config.metrics);
            for (std::size_t n = 0; n < rep.per_subcarrier.size(); ++n) {
                MetricRow row;
                row.pattern = pattern_tag(spec.mode);
                row.snr_db = snr;
                row.seed = seed;
                row.subcarrier = static_cast<int>(n) + 1;
                row.sample = rep.per_subcarrier[n];
                res.rows.push_back(row);
            }
            MetricRow mean_row;
            mean_row.pattern = pattern_tag(spec.mode);
            mean_row.snr_db = snr;
            mean_row.seed = seed;
            mean_row.subcarrier = 0;
            mean_row.sample = rep.mean;
            res.rows.push_back(mean_row);

            res.evidence = run.state.evidence;
            res.psi_coeff = run.state.psi_coeff;
            res.gamma = run.state.gamma;
            res.have_diag = true;

            stage = "emission";
            if (config.output.images) {
                const std::string base =
                    art.output_dir + "/" + pattern_tag(spec.mode) + "_snr" +
                    snr_tag(snr) + "_seed" + std::to_string(seed);
                for (std::size_t n = 0; n < run.images.size(); ++n)
                    emit_image(run.images[n],
                               base + "_sc" + std::to_string(n + 1) + "_est");
                if (spec.mode == config.illumination.modes.front() &&
                    spec.snr_index == 0) {
                    const std::string tbase = art.output_dir + "/truth_seed" +
                                              std::to_string(seed);
                    for (std::size_t n = 0; n < truth.size(); ++n)
                        emit_image(truth[n],
                                   tbase + "_sc" + std::to_string(n + 1));
                }
            }
            if (verbosity > 0)
                std::fprintf(stderr,
                             "[nfwi] cell %s snr=%g seed=%llu done (%d iters)\n",
                             pattern_tag(spec.mode).c_str(), snr,
                             static_cast<unsigned long long>(seed),
                             run.state.iteration);
        } catch (const std::exception& e) {
            res.error = CellError{pattern_tag(spec.mode), snr, seed, stage,
                                  e.what()};
        }
    }

    // --- aggregation (deterministic order) --------------------------------
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const auto& res = results[ci];
        if (res.error) {
            art.errors.push_back(*res.error);
            art.all_ok = false;
            continue;
        }
        art.rows.insert(art.rows.end(), res.rows.begin(), res.rows.end());
    }

    for (IlluminationMode mode : config.illumination.modes) {
        for (std::size_t s = 0; s < config.snr_db.size(); ++s) {
            std::vector<double> vi, vp, vs, vc;
            for (std::size_t ci = 0; ci < cells.size(); ++ci) {
                if (cells[ci].mode != mode || cells[ci].snr_index != s)
                    continue;
                const auto& res = results[ci];
                if (res.error) continue;
                for (const auto& row : res.rows) {
                    if (row.subcarrier != 0) continue;
                    vi.push_back(row.sample.immse);
                    vp.push_back(row.sample.psnr_db);
                    vs.push_back(row.sample.ssim);
                    if (row.sample.pcc) vc.push_back(*row.sample.pcc);
                }
            }
            if (vi.empty()) continue;
            SummaryRow sr;
            sr.pattern = pattern_tag(mode);
            sr.snr_db = config.snr_db[s];
            sr.n_seeds = static_cast<int>(vi.size());
            sr.immse = median(vi);
            sr.psnr_db = median(vp);
            sr.ssim = median(vs);
            sr.pcc = median(vc);
            art.summary.push_back(sr);
        }
    }

    write_metrics_csv(art.output_dir + "/metrics.csv", art.rows);
    write_summary_csv(art.output_dir + "/summary.csv", art.summary);
    if (!art.errors.empty())
        write_errors_csv(art.output_dir + "/errors.csv", art.errors);

    if (config.output.diagnostics) {
        for (std::size_t ci = 0; ci < cells.size(); ++ci) {
            const auto& res = results[ci];
            if (!res.have_diag) continue;
            const CellSpec& spec = cells[ci];
            const std::string base =
                art.output_dir + "/" + pattern_tag(spec.mode) + "_snr" +
                snr_tag(config.snr_db[spec.snr_index]) + "_seed" +
                std::to_string(config.seeds[spec.seed_index]);
            std::ofstream out(base + "_trace.csv", std::ios::binary);
            out << "iteration,evidence,psi_coeff\n";
            for (std::size_t k = 0; k < res.evidence.size(); ++k) {
                out << (k + 1) << "," << format_double(res.evidence[k]) << ",";
                if (k < res.psi_coeff.size())
                    out << format_double(res.psi_coeff[k]);
                out << "\n";
            }
            std::ofstream gout(base + "_gamma.csv", std::ios::binary);
            gout << "cell,gamma\n";
            for (Eigen::Index i = 0; i < res.gamma.size(); ++i)
                gout << i << "," << format_double(res.gamma[i]) << "\n";
        }
    }
    return art;
}

} // namespace nfwi
