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

#ifndef NFWI_ILLUM_HPP
#define NFWI_ILLUM_HPP

#include "nfwi/geometry.hpp"
#include "nfwi/sdp.hpp"
#include "nfwi/types.hpp"

#include <string>
#include <vector>

namespace nfwi {

enum class IlluminationMode { uniform, tcm, ipm };

std::string to_string(IlluminationMode mode);
IlluminationMode illumination_mode_from_string(const std::string& name);

// N transmit beamforming vectors under a per-subcarrier power budget P,
// sum_n ||x_n||^2 <= P_tot with P = P_tot / N.
struct IlluminationPlan {
    std::vector<VectorXcd> vectors;
    double per_subcarrier_power = 0.0;
    IlluminationMode mode = IlluminationMode::uniform;
    std::vector<std::vector<int>> focus_cells; // per subcarrier, IPM only
};

// ---- uniform ---------------------------------------------------------

VectorXcd uniform_pattern(double p, int m_tx);

// ---- total coherence minimization -------------------------------------

struct TcmFrame {
    MatrixXcd frame; // Phi*(alpha = 1), M_r x Q with Phi* Phi*^H = I
    bool rank_deficient = false;
};

// Tight-frame target from the SVD of A_norm diag(eta).
TcmFrame tcm_target_frame(const MatrixXcd& a_norm, const VectorXd& eta);

// Per-cell fit beta*_q = conj([Phi^H A]_{q,q}) / eta_q (A column-normalized).
VectorXcd tcm_beta(const MatrixXcd& phi_star, const MatrixXcd& a_norm,
                   const VectorXd& eta);

// Closed-form coherence-minimizing beamformer, rescaled to ||x||^2 = p.
VectorXcd tcm_pattern(const ChannelTables& tables, double p);

// ||Phi^H Phi - alpha^2 I||_F^2
double total_coherence(const MatrixXcd& phi, double alpha);

// Frobenius-optimal scale for reporting: alpha^2 = tr(Phi^H Phi) / Q.
double frobenius_alpha(const MatrixXcd& phi);

// Total coherence of the column-normalized matrix at alpha = 1; invariant
// to the beamformer by construction.
double normalized_total_coherence(const MatrixXcd& phi);

// ---- illumination power maximization -----------------------------------

struct IpmOptions {
    double eps_rel = 1e-4;    // rank-cut tolerance, relative to tr(X^(0))
    int max_sca_iter = 30;
    double rel_change_tol = 1e-3;
    SdpOptions sdp;
};

// Complex-domain SCA iterate, tracked for diagnostics.
struct SdpIterate {
    MatrixXcd x_mat;
    double chi = 0.0;
    VectorXcd dominant_vec;
    double rank_residual = 0.0; // ||X||_* - ||X||_2
};

struct IpmDiagnostics {
    std::vector<double> chi_trace; // accepted iterates, cut subproblems
    double chi_relaxation = 0.0;   // rank-relaxed value
    double rank_residual = 0.0;
    double eps = 0.0;
    int sca_iterations = 0;
    bool converged = false;
};

// Max-min illuminated power beamformer over a cell subset via SCA on the
// rank-constrained SDP; returns sqrt(P) times the dominant eigenvector of
// the final iterate.
VectorXcd ipm_pattern(const ChannelTables& tables, double p,
                      const std::vector<int>& focus,
                      const IpmOptions& options = {},
                      IpmDiagnostics* diagnostics = nullptr);

// min over the subset of eta_i^2 |b_i^H x|^2
double min_illumination_power(const VectorXcd& x, const ChannelTables& tables,
                              const std::vector<int>& cells);

// ---- plan assembly ------------------------------------------------------

// Four ROI quadrants in subcarrier order: top-left, top-right, bottom-left,
// bottom-right (cycled when n_subcarriers != 4).
std::vector<std::vector<int>> quadrant_focus_sets(int cells_per_side,
                                                  int n_subcarriers);

struct PlanDesignOptions {
    IpmOptions ipm;
    std::vector<std::vector<int>> ipm_focus; // empty => ROI quadrants
};

IlluminationPlan design_plan(IlluminationMode mode,
                             const ChannelTables& tables,
                             const SceneGeometry& geometry,
                             double total_power,
                             const PlanDesignOptions& options = {},
                             std::vector<IpmDiagnostics>* ipm_diag = nullptr);

} // namespace nfwi

#endif
