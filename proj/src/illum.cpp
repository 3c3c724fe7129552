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

#include "nfwi/illum.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace nfwi {

std::string to_string(IlluminationMode mode) {
    switch (mode) {
    case IlluminationMode::uniform: return "uniform";
    case IlluminationMode::tcm: return "tcm";
    case IlluminationMode::ipm: return "ipm";
    }
    return "unknown";
}

IlluminationMode illumination_mode_from_string(const std::string& name) {
    if (name == "uniform") return IlluminationMode::uniform;
    if (name == "tcm") return IlluminationMode::tcm;
    if (name == "ipm") return IlluminationMode::ipm;
    throw ConfigError("unknown illumination mode: " + name);
}

VectorXcd uniform_pattern(double p, int m_tx) {
    if (p <= 0.0) throw ParameterError("power must be positive");
    if (m_tx < 1) throw ParameterError("m_tx must be >= 1");
    return VectorXcd::Constant(m_tx, cxd(std::sqrt(p / m_tx), 0.0));
}

TcmFrame tcm_target_frame(const MatrixXcd& a_norm, const VectorXd& eta) {
    const Eigen::Index m_r = a_norm.rows();
    const Eigen::Index q = a_norm.cols();
    if (m_r > q)
        throw ParameterError("tight-frame target requires M_r <= Q");
    if (eta.size() != q)
        throw ParameterError("eta length must equal the cell count");

    const MatrixXcd d = a_norm * eta.asDiagonal();
    Eigen::JacobiSVD<MatrixXcd> svd(d,
                                    Eigen::ComputeThinU | Eigen::ComputeThinV);

    TcmFrame out;
    const double tol =
        svd.singularValues()[0] * std::max(m_r, q) * 1e-15;
    out.rank_deficient = svd.singularValues().minCoeff() <= tol;

    // Phi*(1) = U [I 0] U_2^H; with U_2 = V completed by any orthonormal
    // null-space basis only the leading M_r right singular vectors matter.
    out.frame = svd.matrixU() * svd.matrixV().adjoint();
    return out;
}

VectorXcd tcm_beta(const MatrixXcd& phi_star, const MatrixXcd& a_norm,
                   const VectorXd& eta) {
    const Eigen::Index q = a_norm.cols();
    if (phi_star.cols() != q || eta.size() != q)
        throw ParameterError("tcm_beta: dimension mismatch");
    VectorXcd beta(q);
    for (Eigen::Index i = 0; i < q; ++i) {
        if (eta[i] <= 0.0)
            throw ParameterError("tcm_beta: pathloss must be positive");
        const cxd g = phi_star.col(i).dot(a_norm.col(i)); // [Phi^H A]_{q,q}
        beta[i] = std::conj(g) / eta[i];
    }
    return beta;
}

VectorXcd tcm_pattern(const ChannelTables& tables, double p) {
    if (p <= 0.0) throw ParameterError("power must be positive");
    const MatrixXcd a_norm = tables.a_normalized();
    const TcmFrame frame = tcm_target_frame(a_norm, tables.eta);
    const VectorXcd beta = tcm_beta(frame.frame, a_norm, tables.eta);

    const MatrixXcd& b = tables.b_matrix;
    MatrixXcd gram = b.adjoint() * b;

    // Near-field B can be ill-conditioned on dense grids.
    Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(gram);
    const double lmax = eig.eigenvalues().maxCoeff();
    const double lmin = eig.eigenvalues().minCoeff();
    if (lmin <= 0.0 || lmax / lmin > 1e12)
        gram += (1e-10 * gram.trace().real() / gram.rows()) *
                MatrixXcd::Identity(gram.rows(), gram.cols());

    Eigen::LLT<MatrixXcd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw DesignError("tcm_pattern: normal equations singular");
    VectorXcd x = llt.solve(b.adjoint() * beta);

    const double nrm = x.norm();
    if (!(nrm > 0.0))
        throw DesignError("tcm_pattern: zero-norm solution");
    return x * (std::sqrt(p) / nrm);
}

double total_coherence(const MatrixXcd& phi, double alpha) {
    const Eigen::Index q = phi.cols();
    MatrixXcd g = phi.adjoint() * phi;
    g -= (alpha * alpha) * MatrixXcd::Identity(q, q);
    return g.squaredNorm();
}

double frobenius_alpha(const MatrixXcd& phi) {
    return std::sqrt(phi.squaredNorm() / static_cast<double>(phi.cols()));
}

double normalized_total_coherence(const MatrixXcd& phi) {
    MatrixXcd norm = phi;
    for (Eigen::Index i = 0; i < norm.cols(); ++i) {
        const double n = norm.col(i).norm();
        if (n == 0.0)
            throw ParameterError("normalized coherence: zero column");
        norm.col(i) /= n;
    }
    return total_coherence(norm, 1.0);
}

double min_illumination_power(const VectorXcd& x, const ChannelTables& tables,
                              const std::vector<int>& cells) {
    if (cells.empty())
        throw ParameterError("min_illumination_power: empty cell subset");
    double best = std::numeric_limits<double>::infinity();
    for (int i : cells) {
        if (i < 0 || i >= tables.b_matrix.rows())
            throw ParameterError("min_illumination_power: cell out of range");
        const cxd g = tables.b_matrix.row(i) * x; // b_i^H x
        best = std::min(best, tables.eta[i] * tables.eta[i] * std::norm(g));
    }
    return best;
}

namespace {

struct ComplexIterate {
    MatrixXcd x;
    double chi = 0.0;
};

SdpIterate make_iterate(const MatrixXcd& x, double chi) {
    SdpIterate it;
    it.x_mat = 0.5 * (x + x.adjoint());
    it.chi = chi;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(it.x_mat);
    const Eigen::Index top = it.x_mat.rows() - 1; // ascending order
    it.dominant_vec = eig.eigenvectors().col(top);
    const double lmax = eig.eigenvalues()[top];
    it.rank_residual = it.x_mat.trace().real() - lmax;
    return it;
}

} // namespace

VectorXcd ipm_pattern(const ChannelTables& tables, double p,
                      const std::vector<int>& focus,
                      const IpmOptions& options,
                      IpmDiagnostics* diagnostics) {
    if (focus.empty())
        throw ParameterError("ipm_pattern: focus subset must be non-empty");
    if (p <= 0.0) throw ParameterError("power must be positive");

    const Eigen::Index m_t = tables.b_matrix.cols();

    // Embedded constraint data; the 1/2 factor keeps the embedded
    // functionals numerically equal to the complex ones.
    SdpProblem prob;
    prob.embedded_complex = true;
    prob.chi_lower_bounds.reserve(focus.size());
    for (int i : focus) {
        if (i < 0 || i >= tables.b_matrix.rows())
            throw ParameterError("ipm_pattern: focus cell out of range");
        const VectorXcd bi = tables.b_matrix.row(i).adjoint(); // b_i
        const MatrixXcd ci =
            (tables.eta[i] * tables.eta[i]) * (bi * bi.adjoint());
        prob.chi_lower_bounds.push_back(0.5 * embed_hermitian(ci));
    }
    prob.upper_bound_mats.push_back(
        0.5 * MatrixXd::Identity(2 * m_t, 2 * m_t));
    prob.upper_bound_vals.push_back(p);

    // Rank-relaxed initial point.
    SdpResult relaxed = solve_sdp_subproblem(prob, options.sdp);
    if (relaxed.status == SdpStatus::infeasible)
        throw DesignError("ipm_pattern: relaxed SDP reported infeasible");

    SdpIterate iterate = make_iterate(unembed_hermitian(relaxed.x),
                                      relaxed.chi);
    const double eps = options.eps_rel *
                       std::max(iterate.x_mat.trace().real(), 1e-300);

    IpmDiagnostics diag;
    diag.chi_relaxation = relaxed.chi;
    diag.eps = eps;

    // SCA: each subproblem adds the linearized rank cut
    //   tr(X) - [||X^k||_2 + <u^k (u^k)^H, X - X^k>]  <=  eps,
    // which with ||X^k||_2 = (u^k)^H X^k u^k collapses to
    //   <I - u^k (u^k)^H, X>  <=  eps.
    // Every iterate of a cut subproblem satisfies the true rank residual
    // bound, so the loop runs until chi stops improving.
    bool converged = false;
    for (int k = 0; k < options.max_sca_iter; ++k) {
        const MatrixXcd perp =
            MatrixXcd::Identity(m_t, m_t) -
            iterate.dominant_vec * iterate.dominant_vec.adjoint();
        SdpProblem cut = prob;
        cut.upper_bound_mats.push_back(0.5 * embed_hermitian(perp));
        cut.upper_bound_vals.push_back(eps);

        // start from the rank-1 restriction of the current iterate: it
        // satisfies the new cut exactly and keeps the power budget
        SdpWarmStart warm;
        const MatrixXcd x_start = iterate.x_mat.trace().real() *
                                  iterate.dominant_vec *
                                  iterate.dominant_vec.adjoint();
        warm.w_x = embed_hermitian(x_start);
        warm.u_x = MatrixXd::Zero(2 * m_t, 2 * m_t);
        double chi_start = std::numeric_limits<double>::infinity();
        for (int i : focus) {
            const cxd gain = tables.b_matrix.row(i) *
                             (std::sqrt(iterate.x_mat.trace().real()) *
                              iterate.dominant_vec);
            chi_start = std::min(chi_start, tables.eta[i] * tables.eta[i] *
                                                std::norm(gain));
        }
        warm.w_chi = chi_start;
        warm.u_chi = 0.0;

        const SdpResult step = solve_sdp_subproblem(cut, options.sdp, &warm);
        diag.sca_iterations = k + 1;
        if (step.status == SdpStatus::infeasible)
            throw DesignError("ipm_pattern: SDP subproblem infeasible at SCA "
                              "iteration " + std::to_string(k + 1));

        const SdpIterate next =
            make_iterate(unembed_hermitian(step.x), step.chi);
        const double prev_chi =
            diag.chi_trace.empty() ? -std::numeric_limits<double>::infinity()
                                   : diag.chi_trace.back();
        if (next.chi < prev_chi - 1e-9 * std::max(std::abs(prev_chi), eps)) {
            // solver noise; keep the previous accepted iterate
            converged = true;
            break;
        }
        iterate = next;
        diag.chi_trace.push_back(next.chi);
        const double denom = std::max(std::abs(prev_chi), 1e-300);
        if (std::isfinite(prev_chi) &&
            std::abs(next.chi - prev_chi) < options.rel_change_tol * denom &&
            next.rank_residual <= eps) {
            converged = true;
            break;
        }
    }

    diag.rank_residual = iterate.rank_residual;
    diag.converged = converged && iterate.rank_residual <= eps;
    if (diagnostics) *diagnostics = diag;

    return std::sqrt(p) * iterate.dominant_vec;
}

std::vector<std::vector<int>> quadrant_focus_sets(int cells_per_side,
                                                  int n_subcarriers) {
    if (cells_per_side < 1 || n_subcarriers < 1)
        throw ParameterError("quadrant_focus_sets: bad dimensions");
    const int half = (cells_per_side + 1) / 2;
    std::vector<std::vector<int>> quads(4);
    for (int row = 0; row < cells_per_side; ++row) {
        for (int col = 0; col < cells_per_side; ++col) {
            const int idx = row * cells_per_side + col;
            const int qr = row < half ? 0 : 1;
            const int qc = col < half ? 0 : 1;
            quads[qr * 2 + qc].push_back(idx);
        }
    }
    std::vector<std::vector<int>> out(n_subcarriers);
    for (int n = 0; n < n_subcarriers; ++n) out[n] = quads[n % 4];
    return out;
}

IlluminationPlan design_plan(IlluminationMode mode,
                             const ChannelTables& tables,
                             const SceneGeometry& geometry,
                             double total_power,
                             const PlanDesignOptions& options,
                             std::vector<IpmDiagnostics>* ipm_diag) {
    if (total_power <= 0.0)
        throw ParameterError("total power must be positive");
    const int n = geometry.n_subcarriers;
    const double p = total_power / n;

    IlluminationPlan plan;
    plan.per_subcarrier_power = p;
    plan.mode = mode;
    plan.vectors.resize(n);

    switch (mode) {
    case IlluminationMode::uniform: {
        const VectorXcd x = uniform_pattern(p, geometry.m_tx);
        for (int i = 0; i < n; ++i) plan.vectors[i] = x;
        break;
    }
    case IlluminationMode::tcm: {
        const VectorXcd x = tcm_pattern(tables, p);
        for (int i = 0; i < n; ++i) plan.vectors[i] = x;
        break;
    }
    case IlluminationMode::ipm: {
        auto focus = options.ipm_focus.empty()
                         ? quadrant_focus_sets(geometry.cells_per_side, n)
                         : options.ipm_focus;
        if (static_cast<int>(focus.size()) != n)
            throw ConfigError("ipm focus sets must cover every subcarrier");
        plan.focus_cells = focus;
        if (ipm_diag) ipm_diag->resize(n);
        std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic, 1)
        for (int i = 0; i < n; ++i) {
            try {
                IpmDiagnostics d;
                plan.vectors[i] =
                    ipm_pattern(tables, p, focus[i], options.ipm, &d);
                if (ipm_diag) (*ipm_diag)[i] = d;
            } catch (...) {
#pragma omp critical(nfwi_design_err)
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        break;
    }
    }
    return plan;
}

} // namespace nfwi
