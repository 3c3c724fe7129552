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
//
// Serial reference vs OpenMP kernels on paper-scale shapes.

#include "nfwi/forward.hpp"
#include "nfwi/geometry.hpp"
#include "nfwi/kernels.hpp"
#include "nfwi/metrics.hpp"
#include "nfwi/rng.hpp"
#include "nfwi/sbl.hpp"
#include "nfwi/scene.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace nfwi;

SceneGeometry paper_geometry() {
    GeometryConfig cfg; // defaults are the paper-scale topology
    return build_geometry(cfg);
}

void bm_channel_tables(benchmark::State& state, Exec exec) {
    const SceneGeometry g = paper_geometry();
    for (auto _ : state) {
        auto tables = build_channel_tables(g, exec);
        benchmark::DoNotOptimize(tables.a_matrix.data());
    }
}

struct PosteriorFixture {
    SensingSet sensing;
    MatrixXcd y;
    MatrixXcd delay;
    VectorXd gamma;
    MatrixXcd psi;
    double n0 = 0.0;
};

PosteriorFixture make_posterior_fixture() {
    const SceneGeometry g = paper_geometry();
    const ChannelTables tables = build_channel_tables(g);
    const RasterScene raster = render_bitmap("tub20", g.cells_per_side);
    const GroundTruthScene scene =
        generate_scene(raster.mask, raster.magnitudes, 0.99, 7,
                       g.n_subcarriers);
    IlluminationPlan plan;
    plan.per_subcarrier_power = 1.0;
    plan.mode = IlluminationMode::uniform;
    plan.vectors.assign(static_cast<std::size_t>(g.n_subcarriers),
                        uniform_pattern(1.0, g.m_tx));

    PosteriorFixture f;
    f.sensing = build_sensing_set(tables, plan);
    f.n0 = calibrate_noise_power(tables, scene, plan, 30.0);
    const auto obs = synthesize_observations(
        f.sensing, coefficient_vectors(scene, tables), f.n0, 11);
    f.y = obs.y;
    f.delay = tables.delay_phases;
    f.gamma = VectorXd::Ones(g.cell_count());
    f.psi = MatrixXcd::Identity(g.n_subcarriers, g.n_subcarriers);
    return f;
}

void bm_posterior(benchmark::State& state, Exec exec) {
    static const PosteriorFixture f = make_posterior_fixture();
    for (auto _ : state) {
        auto post = posterior(f.sensing, f.y, f.n0, f.gamma, f.psi, f.delay,
                              exec);
        benchmark::DoNotOptimize(post.mean.data());
    }
}

void bm_lower_solve(benchmark::State& state, Exec exec) {
    const Eigen::Index m = 400, cols = 1600;
    auto gen = substream(3, 3);
    MatrixXcd a(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            a(i, j) = complex_normal(gen, 1.0);
    MatrixXcd s = a * a.adjoint() +
                  double(m) * MatrixXcd::Identity(m, m);
    const MatrixXcd l = Eigen::LLT<MatrixXcd>(s).matrixL();
    MatrixXcd rhs(m, cols);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            rhs(i, j) = complex_normal(gen, 1.0);
    for (auto _ : state) {
        MatrixXcd b = rhs;
        kernels::lower_solve_in_place(l, b, exec);
        benchmark::DoNotOptimize(b.data());
    }
}

void bm_ssim(benchmark::State& state, Exec exec) {
    auto gen = substream(5, 5);
    const int n = 256;
    MatrixXd a(n, n), b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            a(i, j) = std::abs(complex_normal(gen, 1.0));
            b(i, j) = std::abs(complex_normal(gen, 1.0));
        }
    a /= a.maxCoeff();
    b /= b.maxCoeff();
    for (auto _ : state) {
        benchmark::DoNotOptimize(ssim(a, b, {}, exec));
    }
}

} // namespace

BENCHMARK_CAPTURE(bm_channel_tables, serial, Exec::serial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_channel_tables, omp, Exec::parallel)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_posterior, serial, Exec::serial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_posterior, omp, Exec::parallel)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_lower_solve, serial, Exec::serial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_lower_solve, omp, Exec::parallel)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_ssim, serial, Exec::serial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_ssim, omp, Exec::parallel)
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
