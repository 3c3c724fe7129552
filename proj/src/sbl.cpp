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
// The E-step never materializes the stacked N*M_r x N*Q operator. With
// G_n = Phi_n diag(t_n .* sqrt(gamma)) the inner covariance is
//
//   S = N0 I + [Psi_{n,n'} * G_n G_{n'}^H]_{n,n'}
//
// built from one GEMM of the stacked G, and every per-cell quantity comes
// from forward solves against its Cholesky factor: the columns of the
// block-diagonal RHS for subcarrier n are zero above row n*M_r, so the
// solve runs on the trailing subsystem only.

#include "nfwi/sbl.hpp"

#include "nfwi/kernels.hpp"
#include "nfwi/scene.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>

namespace nfwi {

namespace {

struct Dims {
    Eigen::Index n = 0, m_r = 0, q = 0;
};

Dims check_dims(const SensingSet& sensing, const MatrixXcd& y,
                const VectorXd& gamma, const MatrixXcd& psi,
                const MatrixXcd& delay_phases) {
    Dims d;
    d.n = static_cast<Eigen::Index>(sensing.phi.size());
    if (d.n == 0) throw ParameterError("sbl: empty sensing set");
    d.m_r = sensing.phi.front().rows();
    d.q = sensing.phi.front().cols();
    for (const auto& phi : sensing.phi)
        if (phi.rows() != d.m_r || phi.cols() != d.q)
            throw ParameterError("sbl: inconsistent sensing matrices");
    if (y.rows() != d.m_r || y.cols() != d.n)
        throw ParameterError("sbl: observation shape mismatch");
    if (gamma.size() != d.q)
        throw ParameterError("sbl: gamma length mismatch");
    if (psi.rows() != d.n || psi.cols() != d.n)
        throw ParameterError("sbl: psi shape mismatch");
    if (delay_phases.rows() != d.q || delay_phases.cols() != d.n)
        throw ParameterError("sbl: delay table shape mismatch");
    return d;
}

struct InnerFactor {
    MatrixXcd l;    // dense lower Cholesky factor of S
    double logdet = 0.0;
};

InnerFactor factor_inner(const SensingSet& sensing, const VectorXd& gamma,
                         const MatrixXcd& psi, const MatrixXcd& delay_phases,
                         double noise_power, const Dims& d) {
    const VectorXd root = gamma.cwiseMax(0.0).cwiseSqrt();

    MatrixXcd g_stack(d.n * d.m_r, d.q);
    for (Eigen::Index n = 0; n < d.n; ++n) {
        const VectorXcd w =
            delay_phases.col(n).cwiseProduct(root.cast<cxd>());
        g_stack.middleRows(n * d.m_r, d.m_r).noalias() =
            sensing.phi[static_cast<std::size_t>(n)] * w.asDiagonal();
    }

    MatrixXcd s(d.n * d.m_r, d.n * d.m_r);
    s.noalias() = g_stack * g_stack.adjoint();
    for (Eigen::Index n = 0; n < d.n; ++n)
        for (Eigen::Index n2 = 0; n2 < d.n; ++n2)
            s.block(n * d.m_r, n2 * d.m_r, d.m_r, d.m_r) *= psi(n, n2);
    s.diagonal().array() += noise_power;

    Eigen::LLT<MatrixXcd> llt(s);
    if (llt.info() != Eigen::Success)
        throw NumericalError("sbl: inner covariance not positive definite");

    InnerFactor f;
    f.l = llt.matrixL();
    double logdet = 0.0;
    for (Eigen::Index k = 0; k < f.l.rows(); ++k)
        logdet += std::log(f.l(k, k).real());
    f.logdet = 2.0 * logdet;
    return f;
}

} // namespace

std::vector<MatrixXcd> prior_blocks(const VectorXd& gamma,
                                    const MatrixXcd& psi,
                                    const MatrixXcd& delay_phases) {
    const Eigen::Index q = gamma.size();
    const Eigen::Index n = psi.rows();
    if (delay_phases.rows() != q || delay_phases.cols() != n)
        throw ParameterError("prior_blocks: delay table shape mismatch");
    Eigen::LLT<MatrixXcd> llt(psi);
    if (llt.info() != Eigen::Success)
        throw ParameterError("prior_blocks: psi must be positive definite");

    std::vector<MatrixXcd> z(static_cast<std::size_t>(q));
    for (Eigen::Index i = 0; i < q; ++i) {
        const VectorXcd t = delay_phases.row(i).transpose();
        MatrixXcd w = t.asDiagonal() * psi * t.conjugate().asDiagonal();
        z[static_cast<std::size_t>(i)] = gamma[i] * w;
    }
    return z;
}

PosteriorResult posterior(const SensingSet& sensing, const MatrixXcd& y,
                          double noise_power, const VectorXd& gamma,
                          const MatrixXcd& psi, const MatrixXcd& delay_phases,
                          Exec exec) {
    const Dims d = check_dims(sensing, y, gamma, psi, delay_phases);
    if (!(noise_power > 0.0))
        throw ParameterError("posterior: noise power must be positive");

    const InnerFactor f =
        factor_inner(sensing, gamma, psi, delay_phases, noise_power, d);
    const std::vector<MatrixXcd> z = prior_blocks(gamma, psi, delay_phases);

    // mean: v = S^{-1} vec(Y); w_n = Phi_n^H v_n; mu_i = Z_i w(i,:)^T
    const VectorXcd yvec =
        Eigen::Map<const VectorXcd>(y.data(), y.size());
    VectorXcd ly = yvec;
    f.l.triangularView<Eigen::Lower>().solveInPlace(ly);
    const double quad = ly.squaredNorm();
    VectorXcd v = ly;
    f.l.adjoint().triangularView<Eigen::Upper>().solveInPlace(v);

    MatrixXcd w(d.q, d.n);
    for (Eigen::Index n = 0; n < d.n; ++n)
        w.col(n).noalias() = sensing.phi[static_cast<std::size_t>(n)].adjoint() *
                             v.segment(n * d.m_r, d.m_r);

    PosteriorResult out;
    out.evidence = f.logdet + quad;
    out.mean.resize(d.n * d.q);
    out.blocks.assign(static_cast<std::size_t>(d.q), MatrixXcd());

    // half-solved block columns: t_n = L^{-1} [0; Phi_n; ...], nonzero from
    // row n*M_r on, so only the trailing subsystem participates.
    std::vector<MatrixXcd> half(static_cast<std::size_t>(d.n));
    for (Eigen::Index n = 0; n < d.n; ++n) {
        const Eigen::Index off = n * d.m_r;
        const Eigen::Index rows = d.n * d.m_r - off;
        auto& t = half[static_cast<std::size_t>(n)];
        t = MatrixXcd::Zero(rows, d.q);
        t.topRows(d.m_r) = sensing.phi[static_cast<std::size_t>(n)];
        const MatrixXcd l_sub = f.l.bottomRightCorner(rows, rows);
        kernels::lower_solve_in_place(l_sub, t, exec);
    }

    const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (par)
    for (Eigen::Index i = 0; i < d.q; ++i) {
        MatrixXcd m(d.n, d.n);
        for (Eigen::Index a = 0; a < d.n; ++a) {
            for (Eigen::Index b = a; b < d.n; ++b) {
                // overlap of the trailing supports of columns a and b
                const Eigen::Index off_a = a * d.m_r;
                const Eigen::Index off_b = b * d.m_r;
                const Eigen::Index rows = d.n * d.m_r - off_b;
                // Eigen dot conjugates the left factor: this is t_a^H t_b
                const cxd dot =
                    half[static_cast<std::size_t>(a)]
                        .col(i)
                        .segment(off_b - off_a, rows)
                        .dot(half[static_cast<std::size_t>(b)].col(i).head(
                            rows));
                m(a, b) = dot;
                m(b, a) = std::conj(dot);
            }
        }
        const auto& zi = z[static_cast<std::size_t>(i)];
        MatrixXcd sigma = zi - zi * m * zi;
        sigma = 0.5 * (sigma + sigma.adjoint()).eval();
        out.blocks[static_cast<std::size_t>(i)] = sigma;
        out.mean.segment(i * d.n, d.n).noalias() =
            zi * w.row(i).transpose();
    }
    return out;
}

VectorXd update_gamma(const VectorXcd& mean,
                      const std::vector<MatrixXcd>& blocks,
                      const MatrixXcd& psi, const MatrixXcd& delay_phases,
                      Exec exec) {
    const auto q = static_cast<Eigen::Index>(blocks.size());
    const Eigen::Index n = psi.rows();
    if (mean.size() != q * n)
        throw ParameterError("update_gamma: mean length mismatch");

    const MatrixXcd psi_inv = psi.inverse();
    VectorXd gamma(q);
    std::exception_ptr err = nullptr;

    const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (par)
    for (Eigen::Index i = 0; i < q; ++i) {
        try {
            const VectorXcd mu = mean.segment(i * n, n);
            MatrixXcd r = mu * mu.adjoint() + blocks[static_cast<std::size_t>(i)];
            const double asym = (r - r.adjoint()).cwiseAbs().maxCoeff();
            if (asym > 1e-8 * std::max(r.cwiseAbs().maxCoeff(), 1e-300))
                throw NumericalError(
                    "update_gamma: posterior second moment lost Hermitian "
                    "symmetry");
            const VectorXcd t = delay_phases.row(i).transpose();
            const MatrixXcd r_tilde =
                t.conjugate().asDiagonal() * r * t.asDiagonal();
            gamma[i] = (r_tilde * psi_inv).trace().real() /
                       static_cast<double>(n);
        } catch (...) {
#pragma omp critical(nfwi_gamma_err)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);

    // keep the prior covariance invertible without pruning any cell
    const double floor = 1e-12 * std::max(gamma.maxCoeff(), 0.0);
    const double lowest = std::max(floor, 1e-300);
    return gamma.cwiseMax(lowest);
}

MatrixXcd update_psi(const VectorXcd& mean,
                     const std::vector<MatrixXcd>& blocks,
                     const VectorXd& gamma_new, const MatrixXcd& delay_phases,
                     Exec exec) {
    const auto q = static_cast<Eigen::Index>(blocks.size());
    if (q == 0) throw ParameterError("update_psi: no blocks");
    const Eigen::Index n = blocks.front().rows();
    if (mean.size() != q * n || gamma_new.size() != q)
        throw ParameterError("update_psi: dimension mismatch");
    if ((gamma_new.array() <= 0.0).any())
        throw ParameterError("update_psi: gamma must be positive");

    std::vector<MatrixXcd> r_tilde(static_cast<std::size_t>(q));
    const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (par)
    for (Eigen::Index i = 0; i < q; ++i) {
        const VectorXcd mu = mean.segment(i * n, n);
        const MatrixXcd r =
            mu * mu.adjoint() + blocks[static_cast<std::size_t>(i)];
        const VectorXcd t = delay_phases.row(i).transpose();
        r_tilde[static_cast<std::size_t>(i)] =
            t.conjugate().asDiagonal() * r * t.asDiagonal();
    }

    const VectorXd scale = gamma_new.cwiseInverse() / static_cast<double>(q);
    MatrixXcd psi = kernels::scaled_block_sum(r_tilde, scale, exec);
    return 0.5 * (psi + psi.adjoint()).eval();
}

MatrixXcd ar1_project(const MatrixXcd& psi_hat) {
    const Eigen::Index n = psi_hat.rows();
    if (n < 2 || psi_hat.cols() != n)
        throw ParameterError("ar1_project: need a square matrix with N >= 2");

    double m0 = 0.0, m1 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) m0 += psi_hat(i, i).real();
    m0 /= static_cast<double>(n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) m1 += psi_hat(i, i + 1).real();
    m1 /= static_cast<double>(n - 1);

    if (!(m0 > 0.0)) return MatrixXcd::Identity(n, n); // degenerate posterior

    const double lim = 1.0 - 1e-6;
    const double coeff = std::clamp(m1 / m0, -lim, lim);
    return ar1_correlation(static_cast<int>(n), coeff).cast<cxd>();
}

double evidence(const SensingSet& sensing, const MatrixXcd& y,
                double noise_power, const VectorXd& gamma,
                const MatrixXcd& psi, const MatrixXcd& delay_phases) {
    const Dims d = check_dims(sensing, y, gamma, psi, delay_phases);
    if (!(noise_power > 0.0))
        throw ParameterError("evidence: noise power must be positive");
    const InnerFactor f =
        factor_inner(sensing, gamma, psi, delay_phases, noise_power, d);
    VectorXcd ly = Eigen::Map<const VectorXcd>(y.data(), y.size());
    f.l.triangularView<Eigen::Lower>().solveInPlace(ly);
    const double value = f.logdet + ly.squaredNorm();
    if (!std::isfinite(value))
        throw NumericalError("evidence: non-finite value");
    return value;
}

SblRun run_sbl(const ObservationSet& observations, const SensingSet& sensing,
               const MatrixXcd& delay_phases, int cells_per_side,
               const SblOptions& options) {
    const auto n = static_cast<Eigen::Index>(sensing.phi.size());
    if (n == 0) throw ParameterError("run_sbl: empty sensing set");
    const Eigen::Index q = sensing.phi.front().cols();
    if (static_cast<Eigen::Index>(cells_per_side) * cells_per_side != q)
        throw ParameterError("run_sbl: cells_per_side^2 != Q");

    SblState st;
    st.gamma = VectorXd::Ones(q);
    st.psi = MatrixXcd::Identity(n, n);

    PosteriorResult post;
    double best_evidence = std::numeric_limits<double>::infinity();
    VectorXcd best_mean;
    std::vector<MatrixXcd> best_blocks;

    for (int it = 0; it < options.max_iter; ++it) {
        post = posterior(sensing, observations.y, observations.noise_power,
                         st.gamma, st.psi, delay_phases, options.exec);
        if (!st.evidence.empty()) {
            const double prev = st.evidence.back();
            if (post.evidence >
                prev + options.divergence_slack * std::abs(prev) &&
                !options.ar1_projection)
                st.diverged = true;
        }
        st.evidence.push_back(post.evidence);
        if (post.evidence < best_evidence) {
            best_evidence = post.evidence;
            best_mean = post.mean;
            best_blocks = post.blocks;
        }

        const VectorXd gamma_new = update_gamma(post.mean, post.blocks,
                                                st.psi, delay_phases,
                                                options.exec);
        MatrixXcd psi_new = update_psi(post.mean, post.blocks, gamma_new,
                                       delay_phases, options.exec);
        if (options.ar1_projection && n >= 2) psi_new = ar1_project(psi_new);
        if (n >= 2)
            st.psi_coeff.push_back(psi_new(0, 1).real() /
                                   std::max(psi_new(0, 0).real(), 1e-300));

        const double floor =
            options.gamma_floor_rel * std::max(gamma_new.maxCoeff(), 0.0);
        double change = 0.0;
        for (Eigen::Index i = 0; i < q; ++i)
            change = std::max(change, std::abs(gamma_new[i] - st.gamma[i]) /
                                          (st.gamma[i] + floor));

        st.gamma = gamma_new;
        st.psi = psi_new;
        st.iteration = it + 1;
        if (change < options.tol) {
            st.converged = true;
            break;
        }
    }

    // a diverged run reports the best iterate seen instead of the last one
    const bool use_best = st.diverged && best_mean.size() == post.mean.size();
    st.posterior_mean = use_best ? best_mean : post.mean;
    st.posterior_blocks = use_best ? best_blocks : post.blocks;

    SblRun run;
    run.images.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        MatrixXd img(cells_per_side, cells_per_side);
        for (int row = 0; row < cells_per_side; ++row)
            for (int col = 0; col < cells_per_side; ++col) {
                const Eigen::Index cell =
                    static_cast<Eigen::Index>(row) * cells_per_side + col;
                img(row, col) = std::abs(st.posterior_mean[cell * n + k]);
            }
        run.images.push_back(std::move(img));
    }
    run.state = std::move(st);
    return run;
}

} // namespace nfwi
