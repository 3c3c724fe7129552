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

#include "nfwi/geometry.hpp"

#include <cmath>

namespace nfwi {

namespace {

std::vector<Vector2d> ula_positions(const Vector2d& center, int count,
                                    double spacing, const Vector2d& axis) {
    std::vector<Vector2d> pos(count);
    const double mid = 0.5 * (count - 1);
    for (int m = 0; m < count; ++m)
        pos[m] = center + (m - mid) * spacing * axis;
    return pos;
}

} // namespace

SceneGeometry build_geometry(const GeometryConfig& config) {
    if (config.m_tx < 1 || config.m_rx < 1)
        throw ConfigError("antenna counts must be >= 1");
    if (config.cells_per_side < 1)
        throw ConfigError("cells_per_side must be >= 1");
    if (config.carrier_hz <= 0.0 || config.subcarrier_spacing_hz <= 0.0)
        throw ConfigError("carrier and subcarrier spacing must be positive");
    if (config.n_subcarriers < 1)
        throw ConfigError("n_subcarriers must be >= 1");
    if (config.roi_side_m <= 0.0)
        throw ConfigError("roi_side_m must be positive");
    if (config.spacing_m < 0.0)
        throw ConfigError("spacing_m must be positive (or 0 for lambda/2)");
    if (config.orientation.norm() == 0.0)
        throw ConfigError("orientation must be a nonzero vector");

    SceneGeometry g;
    g.tx_center = config.tx_center;
    g.rx_center = config.rx_center;
    g.m_tx = config.m_tx;
    g.m_rx = config.m_rx;
    g.carrier_hz = config.carrier_hz;
    g.subcarrier_spacing_hz = config.subcarrier_spacing_hz;
    g.n_subcarriers = config.n_subcarriers;
    g.roi_center = config.roi_center;
    g.roi_side = config.roi_side_m;
    g.cells_per_side = config.cells_per_side;

    const double lambda = kSpeedOfLight / config.carrier_hz;
    g.spacing = config.spacing_m > 0.0 ? config.spacing_m : 0.5 * lambda;

    const Vector2d axis = config.orientation.normalized();
    g.tx_elements = ula_positions(g.tx_center, g.m_tx, g.spacing, axis);
    g.rx_elements = ula_positions(g.rx_center, g.m_rx, g.spacing, axis);

    // Row-major from the top-left: row 0 holds the largest y.
    const int cps = g.cells_per_side;
    const double pitch = g.roi_side / cps;
    g.cell_centers.resize(static_cast<std::size_t>(cps) * cps);
    const double mid = 0.5 * (cps - 1);
    for (int row = 0; row < cps; ++row) {
        for (int col = 0; col < cps; ++col) {
            const double x = g.roi_center.x() + (col - mid) * pitch;
            const double y = g.roi_center.y() + (mid - row) * pitch;
            g.cell_centers[static_cast<std::size_t>(row) * cps + col] =
                Vector2d(x, y);
        }
    }
    return g;
}

VectorXcd steering_vector(const std::vector<Vector2d>& elements,
                          const Vector2d& cell, double wavelength) {
    if (wavelength <= 0.0)
        throw ParameterError("wavelength must be positive");
    VectorXcd v(static_cast<Eigen::Index>(elements.size()));
    const double k = 2.0 * kPi / wavelength;
    for (std::size_t m = 0; m < elements.size(); ++m) {
        const double d = (elements[m] - cell).norm();
        if (d == 0.0)
            throw GeometryError("cell coincides with an antenna element");
        v[static_cast<Eigen::Index>(m)] = std::polar(1.0, -k * d);
    }
    return v;
}

double pathloss(const Vector2d& cell, const Vector2d& tx_center,
                const Vector2d& rx_center, double wavelength) {
    const double dt = (tx_center - cell).norm();
    const double dr = (rx_center - cell).norm();
    if (dt == 0.0 || dr == 0.0)
        throw GeometryError("cell coincides with an array center");
    const double four_pi = 4.0 * kPi;
    return std::sqrt(wavelength * wavelength /
                     (four_pi * four_pi * four_pi * dt * dt * dr * dr));
}

cxd delay_phase(const Vector2d& cell, int n, const SceneGeometry& geometry) {
    if (n < 1 || n > geometry.n_subcarriers)
        throw ParameterError("subcarrier index out of range");
    const double dt = (geometry.tx_center - cell).norm();
    const double dr = (geometry.rx_center - cell).norm();
    const double tau = (dt + dr) / kSpeedOfLight;
    return std::polar(1.0, -2.0 * kPi * (n - 1) * tau *
                               geometry.subcarrier_spacing_hz);
}

ChannelTables build_channel_tables(const SceneGeometry& geometry, Exec exec) {
    const int q = geometry.cell_count();
    const int n = geometry.n_subcarriers;
    const double lambda = geometry.wavelength();

    ChannelTables t;
    t.a_matrix.resize(geometry.m_rx, q);
    t.b_matrix.resize(q, geometry.m_tx);
    t.eta.resize(q);
    t.delay_phases.resize(q, n);

    // Exceptions must not escape the parallel region; collect and rethrow.
    std::exception_ptr err = nullptr;
    const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (par)
    for (int i = 0; i < q; ++i) {
        try {
            const Vector2d& cell = geometry.cell_centers[i];
            t.a_matrix.col(i) =
                steering_vector(geometry.rx_elements, cell, lambda);
            t.b_matrix.row(i) =
                steering_vector(geometry.tx_elements, cell, lambda).adjoint();
            t.eta[i] =
                pathloss(cell, geometry.tx_center, geometry.rx_center, lambda);
            for (int k = 1; k <= n; ++k)
                t.delay_phases(i, k - 1) = delay_phase(cell, k, geometry);
        } catch (...) {
#pragma omp critical(nfwi_tables_err)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return t;
}

} // namespace nfwi
