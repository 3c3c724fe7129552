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

#ifndef NFWI_CONFIG_HPP
#define NFWI_CONFIG_HPP

#include "nfwi/geometry.hpp"
#include "nfwi/illum.hpp"
#include "nfwi/metrics.hpp"
#include "nfwi/sbl.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nfwi {

struct SceneConfig {
    std::string raster = "tub20"; // builtin id or path to a 0/1 grid file
    double psi = 0.99;
    double magnitude_top = 1.0;
    double magnitude_bottom = 0.3;
};

struct IlluminationConfig {
    std::vector<IlluminationMode> modes{IlluminationMode::uniform,
                                        IlluminationMode::tcm,
                                        IlluminationMode::ipm};
    double total_power = 4.0;
    std::vector<std::vector<int>> ipm_focus; // empty => ROI quadrants
    IpmOptions ipm;
    std::string plan_cache_dir; // empty => design in memory only
};

struct SolverConfig {
    double tol = 1e-4;
    int max_iter = 200;
    bool ar1_projection = true;
    double gamma_floor_rel = 1e-12;
};

struct OutputConfig {
    std::string dir = "out";
    bool images = true;
    bool diagnostics = true;
};

// One experiment: every (pattern, snr, seed) cell of the cross product.
struct ExperimentConfig {
    GeometryConfig geometry;
    SceneConfig scene;
    IlluminationConfig illumination;
    std::vector<double> snr_db{30.0, 5.0};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    SolverConfig solver;
    SsimParams metrics;
    OutputConfig output;
    int jobs = 1;
};

// Strict parse: every field validated, unknown keys rejected.
ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Resolved-config echo; re-parsing it yields an identical configuration.
std::string config_to_json(const ExperimentConfig& config);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

} // namespace nfwi

#endif
