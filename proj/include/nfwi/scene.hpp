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

#ifndef NFWI_SCENE_HPP
#define NFWI_SCENE_HPP

#include "nfwi/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nfwi {

// Sparse ground truth: Q x N complex reflection coefficients with a common
// support across subcarriers and an AR-1 correlation in frequency.
struct GroundTruthScene {
    MatrixXcd coeffs;          // Q x N, column n = rho_n on the grid
    std::vector<bool> support; // Q
    VectorXd rcs;              // Q, per-cell variance (zero off support)
    MatrixXcd psi;             // N x N frequency correlation
    std::uint64_t seed = 0;
    int cells_per_side = 0;
};

// Support mask plus the per-cell magnitude profile derived from a raster.
struct RasterScene {
    std::vector<bool> mask;
    VectorXd magnitudes;
};

// Toeplitz AR-1 correlation, entry (n, n') = psi_coeff^|n - n'|.
MatrixXd ar1_correlation(int n, double psi_coeff);

// Draws each supported row as CN(0, gamma_i * Psi) through the AR-1
// recursion rho_{n+1} = psi rho_n + sqrt(1 - psi^2) w_n, gamma_i =
// magnitudes_i^2. Unsupported rows are exactly zero.
GroundTruthScene generate_scene(const std::vector<bool>& mask,
                                const VectorXd& magnitudes, double psi_coeff,
                                std::uint64_t seed, int n_subcarriers);

// Rasterizes a glyph onto the grid: mask = nonzero pixels, magnitudes fall
// linearly from `top` (row 0) to `bottom` (last row) and are normalized so
// the maximum over the support is 1. `glyph` is a builtin id ("tub20") or a
// path to a plain-text 0/1 grid file.
RasterScene render_bitmap(const std::string& glyph, int cells_per_side,
                          double top = 1.0, double bottom = 0.3);

// Same, from an explicit raster already in memory (row-major, top-left
// first, any nonzero value is a set pixel).
RasterScene render_raster(const std::vector<int>& raster, int cells_per_side,
                          double top = 1.0, double bottom = 0.3);

// Per-subcarrier magnitude images, pixel i of image n = |coeffs(i, n)|.
std::vector<MatrixXd> scene_to_images(const GroundTruthScene& scene);

// The bundled default glyph as raster text (also shipped under assets/).
const std::string& builtin_glyph_tub20();

} // namespace nfwi

#endif
