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

#ifndef NFWI_HARNESS_HPP
#define NFWI_HARNESS_HPP

#include "nfwi/config.hpp"
#include "nfwi/metrics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nfwi {

// One metrics row; subcarrier 0 encodes the across-subcarrier mean.
struct MetricRow {
    std::string pattern;
    double snr_db = 0.0;
    std::uint64_t seed = 0;
    int subcarrier = 0;
    MetricSample sample;
    bool degenerate = false;
};

// Median over seeds of the per-cell subcarrier means.
struct SummaryRow {
    std::string pattern;
    double snr_db = 0.0;
    int n_seeds = 0;
    double immse = 0.0;
    double psnr_db = 0.0;
    double ssim = 0.0;
    double pcc = 0.0;
};

struct CellError {
    std::string pattern;
    double snr_db = 0.0;
    std::uint64_t seed = 0;
    std::string stage;
    std::string message;
};

struct ExperimentArtifacts {
    std::vector<MetricRow> rows;
    std::vector<SummaryRow> summary;
    std::vector<CellError> errors;
    std::string output_dir;
    bool all_ok = true;
};

// Runs every (pattern, snr, seed) cell: designs or loads the plans,
// calibrates N0 against the uniform reference, synthesizes observations,
// runs the solver and writes metrics/images/diagnostics under output.dir.
ExperimentArtifacts run_experiment(const ExperimentConfig& config,
                                   int verbosity = 0);

// 16-bit grayscale image plus a lossless CSV sidecar next to it.
void emit_image(const MatrixXd& image, const std::string& path);

// Noise substream key for one (seed, snr index) pair; shared by all
// patterns so comparisons at a fixed cell are paired.
std::uint64_t noise_seed_for(std::uint64_t seed, std::size_t snr_index);

} // namespace nfwi

#endif
