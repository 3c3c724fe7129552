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
// Consensus ADMM for the epigraph max-min SDP family used by the
// illumination designs. The splitting keeps the affine rows
//
//     <C_k, X> - chi - s_k   = 0
//     <D_j, X>       + s_j'  = d_j
//     chi            + s_g   = big_m        (optional)
//
// in one block (an equality-constrained least-squares step whose small
// Gram matrix is factorized once) and the cone K = PSD x R x R_+^(rows)
// in the other (a eigenvalue clamp plus slack clamps). The step size is
// fixed; problem data is rescaled once so a unit rho works across the
// family.

#include "nfwi/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>

namespace nfwi {

MatrixXd embed_hermitian(const MatrixXcd& h) {
    const Eigen::Index n = h.rows();
    MatrixXd m(2 * n, 2 * n);
    m.topLeftCorner(n, n) = h.real();
    m.bottomRightCorner(n, n) = h.real();
    m.topRightCorner(n, n) = -h.imag();
    m.bottomLeftCorner(n, n) = h.imag();
    return m;
}

MatrixXcd unembed_hermitian(const MatrixXd& m) {
    const Eigen::Index n = m.rows() / 2;
    MatrixXcd h(n, n);
    h.real() = 0.5 * (m.topLeftCorner(n, n) + m.bottomRightCorner(n, n));
    h.imag() = 0.5 * (m.bottomLeftCorner(n, n) - m.topRightCorner(n, n));
    return h;
}

namespace {

double frob_dot(const MatrixXd& a, const MatrixXd& b) {
    return (a.array() * b.array()).sum();
}

// Projection onto the PSD cone. For matrices known to be embeddings of
// Hermitian matrices the projection commutes with the embedding, so it can
// run on the half-size complex form.
MatrixXd project_psd(const MatrixXd& x, bool embedded_complex) {
    if (embedded_complex && x.rows() % 2 == 0) {
        const MatrixXcd h = unembed_hermitian(x);
        Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(h);
        const VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
        const MatrixXcd proj = eig.eigenvectors() * lam.asDiagonal() *
                               eig.eigenvectors().adjoint();
        return embed_hermitian(proj);
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(x);
    const VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
    return eig.eigenvectors() * lam.asDiagonal() *
           eig.eigenvectors().transpose();
}

struct Scaled {
    std::vector<MatrixXd> c; // chi lower bounds, unit Frobenius scale
    std::vector<MatrixXd> d;
    VectorXd d_vals;
    double big_m = 0.0;
    bool has_guard = false;
    double c_scale = 1.0; // ||C|| factor divided out
    double x_scale = 1.0; // X = x_scale * X_tilde
};

} // namespace

SdpResult solve_sdp_subproblem(const SdpProblem& problem,
                               const SdpOptions& options,
                               const SdpWarmStart* warm) {
    const std::size_t num_c = problem.chi_lower_bounds.size();
    const std::size_t num_d = problem.upper_bound_mats.size();
    if (num_d != problem.upper_bound_vals.size())
        throw ParameterError("upper bound matrices/values length mismatch");
    if (num_c + num_d == 0 && !problem.big_m)
        throw ParameterError("empty SDP subproblem");

    Eigen::Index m = 0;
    if (num_c > 0)
        m = problem.chi_lower_bounds.front().rows();
    else if (num_d > 0)
        m = problem.upper_bound_mats.front().rows();

    SdpResult res;

    // Without any <C_k, X> >= chi row the objective is unbounded above
    // unless the guard is present.
    if (num_c == 0 && !problem.big_m) {
        res.status = SdpStatus::unbounded;
        res.chi = std::numeric_limits<double>::infinity();
        res.x = MatrixXd::Zero(m, m);
        return res;
    }

    // --- rescale the data once ----------------------------------------
    Scaled sc;
    sc.has_guard = problem.big_m.has_value();
    double cmax = 0.0;
    for (const auto& c : problem.chi_lower_bounds)
        cmax = std::max(cmax, c.norm());
    sc.c_scale = cmax > 0.0 ? cmax : 1.0;

    // Use the first trace-like budget as the natural size of X.
    double xs = 1.0;
    for (std::size_t j = 0; j < num_d; ++j) {
        const double nrm = problem.upper_bound_mats[j].norm();
        if (nrm > 0.0 && problem.upper_bound_vals[j] > 0.0) {
            xs = problem.upper_bound_vals[j] / nrm;
            break;
        }
    }
    sc.x_scale = xs;

    sc.c.reserve(num_c);
    for (const auto& c : problem.chi_lower_bounds)
        sc.c.push_back(c / sc.c_scale);
    sc.d.reserve(num_d);
    sc.d_vals.resize(static_cast<Eigen::Index>(num_d));
    for (std::size_t j = 0; j < num_d; ++j) {
        const double nrm = std::max(problem.upper_bound_mats[j].norm(), 1e-300);
        sc.d.push_back(problem.upper_bound_mats[j] / nrm);
        sc.d_vals[static_cast<Eigen::Index>(j)] =
            problem.upper_bound_vals[j] / (nrm * sc.x_scale);
    }
    const double chi_unit = sc.c_scale * sc.x_scale;
    if (sc.has_guard) sc.big_m = *problem.big_m / chi_unit;

    const auto rows =
        static_cast<Eigen::Index>(num_c + num_d + (sc.has_guard ? 1 : 0));
    const auto kc = static_cast<Eigen::Index>(num_c);
    const auto kd = static_cast<Eigen::Index>(num_d);

    // --- fixed Gram matrix of the affine rows --------------------------
    MatrixXd gram(rows, rows);
    for (Eigen::Index a = 0; a < kc; ++a)
        for (Eigen::Index b = 0; b <= a; ++b) {
            const double v = frob_dot(sc.c[a], sc.c[b]) + 1.0 + (a == b);
            gram(a, b) = v;
            gram(b, a) = v;
        }
    for (Eigen::Index j = 0; j < kd; ++j) {
        for (Eigen::Index a = 0; a < kc; ++a) {
            const double v = frob_dot(sc.c[a], sc.d[j]);
            gram(a, kc + j) = v;
            gram(kc + j, a) = v;
        }
        for (Eigen::Index j2 = 0; j2 <= j; ++j2) {
            const double v = frob_dot(sc.d[j], sc.d[j2]) + (j == j2);
            gram(kc + j, kc + j2) = v;
            gram(kc + j2, kc + j) = v;
        }
    }
    if (sc.has_guard) {
        const Eigen::Index gidx = rows - 1;
        for (Eigen::Index a = 0; a < kc; ++a) {
            gram(a, gidx) = -1.0;
            gram(gidx, a) = -1.0;
        }
        for (Eigen::Index j = 0; j < kd; ++j) {
            gram(kc + j, gidx) = 0.0;
            gram(gidx, kc + j) = 0.0;
        }
        gram(gidx, gidx) = 2.0;
    }
    Eigen::LDLT<MatrixXd> gram_fact(gram);
    if (gram_fact.info() != Eigen::Success)
        throw NumericalError("SDP subproblem: affine Gram factorization failed");

    VectorXd bvec = VectorXd::Zero(rows);
    bvec.segment(kc, kd) = sc.d_vals;
    if (sc.has_guard) bvec[rows - 1] = sc.big_m;

    // A applied to the objective gradient g = (0, -1, 0).
    VectorXd a_g = VectorXd::Zero(rows);
    a_g.head(kc).setConstant(1.0);
    if (sc.has_guard) a_g[rows - 1] = -1.0;

    // --- ADMM state -----------------------------------------------------
    MatrixXd w_x = MatrixXd::Zero(m, m);
    VectorXd w_s = VectorXd::Zero(rows);
    double w_chi = 0.0;
    MatrixXd u_x = MatrixXd::Zero(m, m);
    VectorXd u_s = VectorXd::Zero(rows);
    double u_chi = 0.0;
    if (warm && warm->w_x.rows() == m) {
        w_x = warm->w_x / sc.x_scale;
        w_chi = warm->w_chi / chi_unit;
        u_x = warm->u_x / sc.x_scale;
        u_chi = warm->u_chi / chi_unit;
        if (warm->w_s.size() == rows) {
            w_s = warm->w_s;
            u_s = warm->u_s;
        }
    }

    const double rho = options.rho;
    const double alpha = options.over_relaxation;

    auto apply_a = [&](const MatrixXd& x, double chi,
                       const VectorXd& s) -> VectorXd {
        VectorXd out(rows);
        for (Eigen::Index a = 0; a < kc; ++a)
            out[a] = frob_dot(sc.c[a], x) - chi - s[a];
        for (Eigen::Index j = 0; j < kd; ++j)
            out[kc + j] = frob_dot(sc.d[j], x) + s[kc + j];
        if (sc.has_guard) out[rows - 1] = chi + s[rows - 1];
        return out;
    };

    MatrixXd z_x(m, m), zh_x(m, m), w_prev_x(m, m);
    VectorXd z_s(rows), zh_s(rows), w_prev_s(rows);

    int it = 0;
    bool converged = false;
    double prim_res = 0.0, dual_res = 0.0, max_viol_scaled = 0.0;
    for (it = 1; it <= options.max_iter; ++it) {
        // z-step: equality-constrained proximal point.
        const MatrixXd v_x = w_x - u_x;
        const double v_chi = w_chi - u_chi;
        const VectorXd v_s = w_s - u_s;

        VectorXd rhs = rho * (apply_a(v_x, v_chi, v_s) - bvec) - a_g;
        const VectorXd lam = gram_fact.solve(rhs);

        z_x = v_x;
        double z_chi = v_chi + 1.0 / rho; // -(g_chi)/rho
        z_s = v_s;
        for (Eigen::Index a = 0; a < kc; ++a) {
            z_x.noalias() -= (lam[a] / rho) * sc.c[a];
            z_chi += lam[a] / rho;
            z_s[a] += lam[a] / rho;
        }
        for (Eigen::Index j = 0; j < kd; ++j) {
            z_x.noalias() -= (lam[kc + j] / rho) * sc.d[j];
            z_s[kc + j] -= lam[kc + j] / rho;
        }
        if (sc.has_guard) {
            z_chi -= lam[rows - 1] / rho;
            z_s[rows - 1] -= lam[rows - 1] / rho;
        }

        // over-relaxed cone step
        zh_x = alpha * z_x + (1.0 - alpha) * w_x;
        const double zh_chi = alpha * z_chi + (1.0 - alpha) * w_chi;
        zh_s = alpha * z_s + (1.0 - alpha) * w_s;

        w_prev_x = w_x;
        w_prev_s = w_s;

        w_x = project_psd(zh_x + u_x, problem.embedded_complex);
        w_chi = zh_chi + u_chi;
        w_s = (zh_s + u_s).cwiseMax(0.0);

        u_x += zh_x - w_x;
        u_chi += zh_chi - w_chi;
        u_s += zh_s - w_s;

        if (it % options.check_every == 0 || it == options.max_iter) {
            prim_res = std::sqrt((z_x - w_x).squaredNorm() +
                                 (z_s - w_s).squaredNorm());
            dual_res = rho * std::sqrt((w_x - w_prev_x).squaredNorm() +
                                       (w_s - w_prev_s).squaredNorm());
            const VectorXd aw = apply_a(w_x, w_chi, w_s) - bvec;
            max_viol_scaled = aw.cwiseAbs().maxCoeff();
            const double scale =
                std::max(1.0, std::max(w_x.norm(), std::abs(w_chi)));
            if (max_viol_scaled <= options.feas_tol * scale &&
                prim_res <= 10.0 * options.feas_tol * scale &&
                dual_res <= 10.0 * options.feas_tol * scale) {
                converged = true;
                break;
            }
            // crude divergence guard; contradictory rows blow up the duals
            if (!std::isfinite(max_viol_scaled) || u_s.norm() > 1e12) {
                res.status = SdpStatus::infeasible;
                break;
            }
        }
    }

    res.iterations = it;
    res.x = sc.x_scale * w_x;
    res.chi = chi_unit * w_chi;
    res.primal_residual = prim_res;
    res.dual_residual = dual_res;
    if (res.status != SdpStatus::infeasible) {
        if (converged) {
            res.status = SdpStatus::optimal;
        } else if (max_viol_scaled >
                   0.05 * std::max(1.0, std::max(w_x.norm(),
                                                 std::abs(w_chi)))) {
            // the affine rows never came close to holding: no feasible point
            res.status = SdpStatus::infeasible;
        } else {
            res.status = SdpStatus::max_iterations;
        }
    }

    // absolute violation on the returned iterate, in problem units
    double viol = 0.0;
    for (std::size_t k = 0; k < num_c; ++k)
        viol = std::max(viol, res.chi - frob_dot(problem.chi_lower_bounds[k],
                                                 res.x));
    for (std::size_t j = 0; j < num_d; ++j)
        viol = std::max(viol, frob_dot(problem.upper_bound_mats[j], res.x) -
                                  problem.upper_bound_vals[j]);
    if (problem.big_m) viol = std::max(viol, res.chi - *problem.big_m);
    res.max_violation = viol;

    res.state.w_x = res.x;
    res.state.w_s = w_s;
    res.state.w_chi = res.chi;
    res.state.u_x = sc.x_scale * u_x;
    res.state.u_s = u_s;
    res.state.u_chi = chi_unit * u_chi;
    return res;
}

} // namespace nfwi
