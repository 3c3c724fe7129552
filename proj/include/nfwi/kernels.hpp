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

#ifndef NFWI_KERNELS_HPP
#define NFWI_KERNELS_HPP

#include "nfwi/types.hpp"

#include <vector>

namespace nfwi::kernels {

// In-place forward substitution L Z = B for a multi-column right-hand side.
// The serial form is a single in-place triangular solve; the parallel form
// splits the columns across threads (identical per-column arithmetic).
void lower_solve_in_place(const MatrixXcd& l, Eigen::Ref<MatrixXcd> b,
                          Exec exec);

// Sum of N x N Hermitian terms, one per cell: sum_i scale_i * R_i. The
// parallel form accumulates per-thread partials over static cell ranges and
// combines them in thread order.
MatrixXcd scaled_block_sum(const std::vector<MatrixXcd>& blocks,
                           const VectorXd& scale, Exec exec);

} // namespace nfwi::kernels

#endif
