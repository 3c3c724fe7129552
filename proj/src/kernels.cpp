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

#include "nfwi/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nfwi::kernels {

void lower_solve_in_place(const MatrixXcd& l, Eigen::Ref<MatrixXcd> b,
                          Exec exec) {
    if (l.rows() != b.rows())
        throw ParameterError("lower_solve_in_place: dimension mismatch");
    const auto view = l.triangularView<Eigen::Lower>();
    if (exec == Exec::serial) {
        view.solveInPlace(b);
        return;
    }
    const Eigen::Index cols = b.cols();
#pragma omp parallel
    {
#ifdef _OPENMP
        const int nt = omp_get_num_threads();
        const int tid = omp_get_thread_num();
#else
        const int nt = 1;
        const int tid = 0;
#endif
        const Eigen::Index chunk = (cols + nt - 1) / nt;
        const Eigen::Index begin = std::min<Eigen::Index>(tid * chunk, cols);
        const Eigen::Index len =
            std::min<Eigen::Index>(chunk, cols - begin);
        if (len > 0) {
            auto part = b.middleCols(begin, len);
            view.solveInPlace(part);
        }
    }
}

MatrixXcd scaled_block_sum(const std::vector<MatrixXcd>& blocks,
                           const VectorXd& scale, Exec exec) {
    if (blocks.empty())
        throw ParameterError("scaled_block_sum: no blocks");
    if (static_cast<Eigen::Index>(blocks.size()) != scale.size())
        throw ParameterError("scaled_block_sum: scale length mismatch");
    const Eigen::Index n = blocks.front().rows();
    const auto q = static_cast<Eigen::Index>(blocks.size());

    if (exec == Exec::serial) {
        MatrixXcd acc = MatrixXcd::Zero(n, n);
        for (Eigen::Index i = 0; i < q; ++i)
            acc.noalias() += scale[i] * blocks[static_cast<std::size_t>(i)];
        return acc;
    }

    // fixed-size chunks summed in chunk order: the result does not depend
    // on how many threads happen to run
    constexpr Eigen::Index chunk = 64;
    const Eigen::Index n_chunks = (q + chunk - 1) / chunk;
    std::vector<MatrixXcd> partial(static_cast<std::size_t>(n_chunks),
                                   MatrixXcd::Zero(n, n));
#pragma omp parallel for schedule(static)
    for (Eigen::Index ci = 0; ci < n_chunks; ++ci) {
        auto& acc = partial[static_cast<std::size_t>(ci)];
        const Eigen::Index end = std::min(q, (ci + 1) * chunk);
        for (Eigen::Index i = ci * chunk; i < end; ++i)
            acc.noalias() += scale[i] * blocks[static_cast<std::size_t>(i)];
    }
    MatrixXcd acc = MatrixXcd::Zero(n, n);
    for (const auto& part : partial) acc += part;
    return acc;
}

} // namespace nfwi::kernels
