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

#ifndef NFWI_SDP_HPP
#define NFWI_SDP_HPP

#include "nfwi/types.hpp"

#include <optional>
#include <vector>

namespace nfwi {

// Epigraph max-min SDP over real symmetric matrices:
//
//   maximize    chi
//   subject to  <C_k, X> >= chi          k = 1..K
//               <D_j, X> <= d_j          j = 1..J   (trace budget, rank cut)
//               chi <= big_m             (optional guard)
//               X  symmetric PSD.
//
// The complex Hermitian cone is handled by callers through the standard
// real symmetric embedding [[Re X, -Im X], [Im X, Re X]]; when
// `embedded_complex` is set the PSD projection may use the equivalent
// complex Hermitian eigendecomposition of the embedded matrix (identical
// result, about half the work — verified against the plain path in tests).
struct SdpProblem {
    std::vector<MatrixXd> chi_lower_bounds; // C_k
    std::vector<MatrixXd> upper_bound_mats; // D_j
    std::vector<double> upper_bound_vals;   // d_j
    std::optional<double> big_m;            // guard on chi
    bool embedded_complex = false;
};

// Fixed-step ADMM controls. Tolerances are relative to the internally
// rescaled problem data.
struct SdpOptions {
    double rho = 0.1;
    double over_relaxation = 1.6;
    double feas_tol = 1e-9;
    int max_iter = 20000;
    int check_every = 25;
};

enum class SdpStatus { optimal, max_iterations, unbounded, infeasible };

// Solver state carried across SCA iterations for warm starting.
struct SdpWarmStart {
    MatrixXd w_x;
    VectorXd w_s;
    double w_chi = 0.0;
    MatrixXd u_x;
    VectorXd u_s;
    double u_chi = 0.0;
};

struct SdpResult {
    MatrixXd x;
    double chi = 0.0;
    SdpStatus status = SdpStatus::max_iterations;
    double max_violation = 0.0; // absolute, on the returned (X, chi)
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    int iterations = 0;
    SdpWarmStart state;
};

SdpResult solve_sdp_subproblem(const SdpProblem& problem,
                               const SdpOptions& options = {},
                               const SdpWarmStart* warm = nullptr);

// Real symmetric embedding of a complex Hermitian matrix and its inverse.
MatrixXd embed_hermitian(const MatrixXcd& h);
MatrixXcd unembed_hermitian(const MatrixXd& m);

} // namespace nfwi

#endif
