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

#ifndef NFWI_SBL_HPP
#define NFWI_SBL_HPP

#include "nfwi/forward.hpp"
#include "nfwi/types.hpp"

#include <vector>

namespace nfwi {

// EM solver for the correlated multi-subcarrier recovery problem. The joint
// coefficient vector stacks the rows of U (one length-N block per cell);
// its Gaussian prior has the block-diagonal covariance blkdiag(gamma_i W_i)
// with W_i = diag(t_i) Psi diag(t_i)^H, and the E-step works on the
// N*M_r x N*M_r inner system (N0 I + Phi~ Gamma~ Phi~^H) instead of the
// N*Q x N*Q direct form.

struct SblOptions {
    double tol = 1e-4;           // max relative gamma change
    int max_iter = 200;
    bool ar1_projection = true;  // Toeplitz re-projection of Psi each step
    double gamma_floor_rel = 1e-12;
    double divergence_slack = 1e-8;
    Exec exec = Exec::parallel;
};

struct SblState {
    VectorXd gamma;                     // Q
    MatrixXcd psi;                      // N x N
    VectorXcd posterior_mean;           // N*Q, cell-major blocks
    std::vector<MatrixXcd> posterior_blocks; // Q blocks, N x N
    std::vector<double> evidence;       // per-iteration trace
    std::vector<double> psi_coeff;      // AR-1 coefficient per iteration
    int iteration = 0;
    bool converged = false;
    bool diverged = false;              // evidence rose beyond slack
};

struct PosteriorResult {
    VectorXcd mean;                     // N*Q, cell-major blocks
    std::vector<MatrixXcd> blocks;      // Q diagonal N x N blocks of Sigma
    double evidence = 0.0;              // log det S + y^H S^{-1} y
};

struct SblRun {
    std::vector<MatrixXd> images;       // N magnitude images
    SblState state;
};

// Prior blocks Z_i = gamma_i diag(t_i) Psi diag(t_i)^H.
std::vector<MatrixXcd> prior_blocks(const VectorXd& gamma,
                                    const MatrixXcd& psi,
                                    const MatrixXcd& delay_phases);

// E-step. Computes the posterior mean, the Q diagonal covariance blocks and
// the evidence from one Cholesky factorization of the inner system.
PosteriorResult posterior(const SensingSet& sensing, const MatrixXcd& y,
                          double noise_power, const VectorXd& gamma,
                          const MatrixXcd& psi, const MatrixXcd& delay_phases,
                          Exec exec = Exec::parallel);

// M-step updates. gamma_i = tr(R_i W_i^{-1}) / N with R_i = mu_i mu_i^H +
// Sigma_i; psi = (1/Q) sum_i gamma_i^{-1} diag(t_i)^{-1} R_i diag(t_i^*)^{-1}.
VectorXd update_gamma(const VectorXcd& mean,
                      const std::vector<MatrixXcd>& blocks,
                      const MatrixXcd& psi, const MatrixXcd& delay_phases,
                      Exec exec = Exec::parallel);

MatrixXcd update_psi(const VectorXcd& mean,
                     const std::vector<MatrixXcd>& blocks,
                     const VectorXd& gamma_new, const MatrixXcd& delay_phases,
                     Exec exec = Exec::parallel);

// Toeplitz re-projection: psi_hat = mean(first superdiagonal real parts) /
// mean(diagonal), clipped to (-1, 1); identity on degenerate input.
MatrixXcd ar1_project(const MatrixXcd& psi_hat);

// Evidence -log p(y) up to constants for given hyperparameters.
double evidence(const SensingSet& sensing, const MatrixXcd& y,
                double noise_power, const VectorXd& gamma,
                const MatrixXcd& psi, const MatrixXcd& delay_phases);

SblRun run_sbl(const ObservationSet& observations, const SensingSet& sensing,
               const MatrixXcd& delay_phases, int cells_per_side,
               const SblOptions& options = {});

} // namespace nfwi

#endif
