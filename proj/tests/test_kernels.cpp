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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nfwi/kernels.hpp"
#include "test_support.hpp"

#include <Eigen/Cholesky>

using namespace nfwi;

TEST_CASE("parallel triangular solve equals the serial reference") {
    auto gen = substream(70, 0);
    const Eigen::Index m = 37, cols = 23;
    const MatrixXcd a = testing::random_complex(m, m, gen);
    const MatrixXcd s =
        a * a.adjoint() + double(m) * MatrixXcd::Identity(m, m);
    const MatrixXcd l = Eigen::LLT<MatrixXcd>(s).matrixL();
    const MatrixXcd rhs = testing::random_complex(m, cols, gen);

    MatrixXcd serial = rhs;
    kernels::lower_solve_in_place(l, serial, Exec::serial);
    MatrixXcd parallel = rhs;
    kernels::lower_solve_in_place(l, parallel, Exec::parallel);

    // identical per-column arithmetic: bitwise equality
    CHECK((serial - parallel).cwiseAbs().maxCoeff() == 0.0);

    // and it actually solves the system
    CHECK((l.triangularView<Eigen::Lower>() * serial - rhs).norm() <
          1e-10 * rhs.norm());

    MatrixXcd bad = testing::random_complex(m + 1, 2, gen);
    CHECK_THROWS_AS(kernels::lower_solve_in_place(l, bad, Exec::serial),
                    ParameterError);
}

TEST_CASE("parallel block sum matches the serial reference") {
    auto gen = substream(71, 0);
    const Eigen::Index n = 4, q = 131;
    std::vector<MatrixXcd> blocks;
    for (Eigen::Index i = 0; i < q; ++i)
        blocks.push_back(testing::random_hpd(n, gen));
    VectorXd scale(q);
    for (Eigen::Index i = 0; i < q; ++i)
        scale[i] = 0.1 + std::abs(complex_normal(gen, 1.0));

    const MatrixXcd serial =
        kernels::scaled_block_sum(blocks, scale, Exec::serial);
    const MatrixXcd parallel =
        kernels::scaled_block_sum(blocks, scale, Exec::parallel);
    // partials are combined in thread order: tiny reordering noise only
    CHECK((serial - parallel).norm() <= 1e-12 * serial.norm());

    CHECK_THROWS_AS(
        kernels::scaled_block_sum(blocks, VectorXd::Ones(q + 1),
                                  Exec::serial),
        ParameterError);
    CHECK_THROWS_AS(kernels::scaled_block_sum({}, VectorXd(), Exec::serial),
                    ParameterError);
}

TEST_CASE("parallel block sum is deterministic across repeated calls") {
    auto gen = substream(72, 0);
    const Eigen::Index n = 3, q = 57;
    std::vector<MatrixXcd> blocks;
    for (Eigen::Index i = 0; i < q; ++i)
        blocks.push_back(testing::random_hpd(n, gen));
    const VectorXd scale = VectorXd::Ones(q);
    const MatrixXcd first =
        kernels::scaled_block_sum(blocks, scale, Exec::parallel);
    for (int rep = 0; rep < 5; ++rep) {
        const MatrixXcd again =
            kernels::scaled_block_sum(blocks, scale, Exec::parallel);
        CHECK((first - again).cwiseAbs().maxCoeff() == 0.0);
    }
}
