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

#ifndef NFWI_GEOMETRY_HPP
#define NFWI_GEOMETRY_HPP

#include "nfwi/types.hpp"

#include <vector>

namespace nfwi {

// Scenario parameters for one bistatic ULA topology. All positions are 2D
// world coordinates in meters; both arrays share the same orientation axis.
struct GeometryConfig {
    Vector2d tx_center{0.0, 20.0};
    Vector2d rx_center{0.0, -20.0};
    int m_tx = 100;
    int m_rx = 100;
    double spacing_m = 0.0; // 0 => half carrier wavelength
    double carrier_hz = 50e9;
    double subcarrier_spacing_hz = 1e6;
    int n_subcarriers = 4;
    Vector2d roi_center{0.0, 0.0};
    double roi_side_m = 20.0;
    int cells_per_side = 20;
    Vector2d orientation{1.0, 0.0}; // ULA axis, normalized on build
};

// Fully resolved geometry: element positions and the ROI cell grid.
// Cell centers are stored row-major from the top-left of the ROI (row 0 is
// the largest y), which fixes the pixel ordering used everywhere downstream.
struct SceneGeometry {
    Vector2d tx_center, rx_center;
    int m_tx = 0, m_rx = 0;
    double spacing = 0.0;
    double carrier_hz = 0.0;
    double subcarrier_spacing_hz = 0.0;
    int n_subcarriers = 0;
    Vector2d roi_center;
    double roi_side = 0.0;
    int cells_per_side = 0;
    std::vector<Vector2d> tx_elements;
    std::vector<Vector2d> rx_elements;
    std::vector<Vector2d> cell_centers;

    double wavelength() const { return kSpeedOfLight / carrier_hz; }
    int cell_count() const { return cells_per_side * cells_per_side; }
    double cell_pitch() const { return roi_side / cells_per_side; }
};

// Deterministic per-cell channel ingredients shared by the forward model,
// the solver and the illumination designs.
//   a_matrix:     M_r x Q, column q = a(r_q)       (unit-modulus entries)
//   b_matrix:     Q x M_t, row q    = b(r_q)^H     (unit-modulus entries)
//   eta:          Q, effective two-hop pathloss
//   delay_phases: Q x N, column n = t_n evaluated on the grid (t_1 == 1)
struct ChannelTables {
    MatrixXcd a_matrix;
    MatrixXcd b_matrix;
    VectorXd eta;
    MatrixXcd delay_phases;

    // Column-normalized receive steering, [A^H A]_{q,q} = 1. The coherence
    // based illumination design consumes this variant.
    MatrixXcd a_normalized() const {
        return a_matrix / std::sqrt(static_cast<double>(a_matrix.rows()));
    }
};

SceneGeometry build_geometry(const GeometryConfig& config);

// Near-field steering vector: entry m = exp(-j 2*pi/lambda * ||e_m - cell||).
VectorXcd steering_vector(const std::vector<Vector2d>& elements,
                          const Vector2d& cell, double wavelength);

// Two-hop pathloss sqrt(lambda^2 / ((4 pi)^3 d_t^2 d_r^2)) with array-center
// distances shared by all elements.
double pathloss(const Vector2d& cell, const Vector2d& tx_center,
                const Vector2d& rx_center, double wavelength);

// Subcarrier delay phase exp(-j 2 pi (n-1) tau df), n is 1-based.
cxd delay_phase(const Vector2d& cell, int n, const SceneGeometry& geometry);

ChannelTables build_channel_tables(const SceneGeometry& geometry,
                                   Exec exec = Exec::parallel);

} // namespace nfwi

#endif
