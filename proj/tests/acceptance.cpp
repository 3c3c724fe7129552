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
// End-to-end acceptance runs. Each criterion prints one PASS/FAIL line;
// the binary exits nonzero if any criterion fails. Criterion 1 is the
// paper-scale experiment and dominates the runtime.

#include "nfwi/harness.hpp"
#include "nfwi/io.hpp"
#include "nfwi/kernels.hpp"
#include "nfwi/metrics.hpp"
#include "nfwi/sbl.hpp"
#include "nfwi/scene.hpp"
#include "nfwi/sdp.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <vector>

using namespace nfwi;

namespace {

struct Criterion {
    int number;
    const char* name;
    std::function<bool(std::string&)> run;
};

bool approx_zero(double v, double tol) { return std::abs(v) <= tol; }

// ---- criterion 1 ------------------------------------------------------

ExperimentConfig paper_scale_config() {
    ExperimentConfig c;
    c.geometry = GeometryConfig{}; // paper topology: Tx (0,20), Rx (0,-20),
                                   // 100 x 100 antennas, 20 x 20 cells
    c.scene.raster = "tub20";
    c.scene.psi = 0.99;
    c.snr_db = {30.0, 5.0};
    c.seeds = {1, 2, 3, 4, 5};
    c.illumination.modes = {IlluminationMode::uniform, IlluminationMode::tcm,
                            IlluminationMode::ipm};
    c.illumination.total_power = 4.0;
    c.illumination.ipm.sdp.max_iter = 2000;
    c.illumination.ipm.sdp.feas_tol = 1e-7;
    c.output.dir = "acceptance_out";
    c.output.images = false;
    c.output.diagnostics = false;
    return c;
}

const SummaryRow* find_row(const std::vector<SummaryRow>& rows,
                           const std::string& pattern, double snr) {
    for (const auto& r : rows)
        if (r.pattern == pattern && r.snr_db == snr) return &r;
    return nullptr;
}

bool criterion_table1(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentArtifacts art = run_experiment(paper_scale_config());
    const double minutes =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count() /
        60.0;
    if (!art.all_ok) {
        detail = "experiment cells failed";
        return false;
    }

    const auto* u30 = find_row(art.summary, "uniform", 30.0);
    const auto* t30 = find_row(art.summary, "tcm", 30.0);
    const auto* i30 = find_row(art.summary, "ipm", 30.0);
    const auto* u5 = find_row(art.summary, "uniform", 5.0);
    const auto* t5 = find_row(art.summary, "tcm", 5.0);
    const auto* i5 = find_row(art.summary, "ipm", 5.0);
    if (!u30 || !t30 || !i30 || !u5 || !t5 || !i5) {
        detail = "missing summary rows";
        return false;
    }

    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "uniform30(psnr %.2f ssim %.3f) tcm30(%.2f %.3f) "
                  "ipm30(%.2f %.3f) | uniform5(%.2f %.3f) tcm5(%.2f %.3f) "
                  "ipm5(%.2f %.3f) | %.1f min",
                  u30->psnr_db, u30->ssim, t30->psnr_db, t30->ssim,
                  i30->psnr_db, i30->ssim, u5->psnr_db, u5->ssim, t5->psnr_db,
                  t5->ssim, i5->psnr_db, i5->ssim, minutes);
    detail = buf;

    const auto beats = [](const SummaryRow& a, const SummaryRow& b) {
        return a.immse < b.immse && a.psnr_db > b.psnr_db &&
               a.ssim > b.ssim && a.pcc > b.pcc;
    };
    bool ok = true;
    // (a) both designs strictly beat uniform on all four metrics
    ok = ok && beats(*t30, *u30) && beats(*i30, *u30);
    ok = ok && beats(*t5, *u5) && beats(*i5, *u5);
    // (b) TCM >= IPM in PSNR and SSIM at high SNR
    ok = ok && t30->psnr_db >= i30->psnr_db && t30->ssim >= i30->ssim;
    // (c) IPM >= TCM everywhere at low SNR
    ok = ok && i5->psnr_db >= t5->psnr_db && i5->ssim >= t5->ssim &&
         i5->immse <= t5->immse && i5->pcc >= t5->pcc;
    // absolute gates
    ok = ok && t30->psnr_db >= 18.0 && u30->psnr_db <= 15.0 &&
         i5->psnr_db >= 16.0;
    return ok;
}

// ---- criterion 2 ------------------------------------------------------

bool criterion_woodbury(std::string& detail) {
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        auto gen = substream(9000, static_cast<std::uint64_t>(trial));
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(gen() % 3);
        const Eigen::Index max_q = 40 / n;
        const Eigen::Index q =
            2 + static_cast<Eigen::Index>(gen() % (max_q - 1));
        const Eigen::Index m_r = 2 + static_cast<Eigen::Index>(gen() % 5);

        SensingSet sensing;
        for (Eigen::Index k = 0; k < n; ++k)
            sensing.phi.push_back(testing::random_complex(m_r, q, gen));
        const MatrixXcd y = testing::random_complex(m_r, n, gen);
        MatrixXcd delay(q, n);
        for (Eigen::Index i = 0; i < q; ++i)
            delay.row(i) = testing::random_phases(n, gen).transpose();
        VectorXd gamma(q);
        for (Eigen::Index i = 0; i < q; ++i)
            gamma[i] = 0.1 + std::abs(complex_normal(gen, 1.0));
        const MatrixXcd psi = testing::random_hpd(n, gen);
        const double n0 = 0.2 + std::abs(complex_normal(gen, 0.2));

        const auto post = posterior(sensing, y, n0, gamma, psi, delay);
        const auto dense = testing::dense_posterior(
            testing::materialize_stacked(sensing.phi),
            testing::vec_transpose(y), prior_blocks(gamma, psi, delay), n0);

        worst = std::max(worst, (post.mean - dense.mean).norm() /
                                    std::max(1e-30, dense.mean.norm()));
        for (Eigen::Index i = 0; i < q; ++i) {
            const MatrixXcd block =
                dense.covariance.block(i * n, i * n, n, n);
            worst = std::max(worst,
                             (post.blocks[static_cast<std::size_t>(i)] - block)
                                     .norm() /
                                 block.norm());
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "worst relative error %.3e", worst);
    detail = buf;
    return worst < 1e-10;
}

// ---- criterion 3 ------------------------------------------------------

bool criterion_monotonic(std::string& detail) {
    int violations = 0;
    double worst_rise = 0.0;
    for (int scenario = 0; scenario < 20; ++scenario) {
        auto gen = substream(9100, static_cast<std::uint64_t>(scenario));
        const int cps = 3 + static_cast<int>(gen() % 2);
        const int q = cps * cps;
        const int n = 2 + static_cast<int>(gen() % 2);
        const int m = 4 + static_cast<int>(gen() % 3);
        const auto toy = testing::toy_scenario(cps, m, m, n, 5.0);

        std::vector<bool> mask(static_cast<std::size_t>(q), false);
        VectorXd mags = VectorXd::Zero(q);
        const int support = 2 + static_cast<int>(gen() % 3);
        for (int s = 0; s < support; ++s) {
            const int cell = static_cast<int>(gen() % q);
            mask[static_cast<std::size_t>(cell)] = true;
            mags[cell] = 0.4 + 0.2 * static_cast<double>(s);
        }
        const GroundTruthScene scene =
            generate_scene(mask, mags, 0.9, 9100 + scenario, n);

        IlluminationPlan plan;
        plan.per_subcarrier_power = 1.0;
        plan.mode = IlluminationMode::uniform;
        plan.vectors.assign(static_cast<std::size_t>(n),
                            uniform_pattern(1.0, m));
        const SensingSet sensing = build_sensing_set(toy.tables, plan);
        const double n0 =
            calibrate_noise_power(toy.tables, scene, plan, 15.0);
        const ObservationSet obs = synthesize_observations(
            sensing, coefficient_vectors(scene, toy.tables), n0,
            9100 + scenario);

        SblOptions opts;
        opts.ar1_projection = false;
        opts.max_iter = 50;
        opts.tol = 0.0; // run the full budget
        const SblRun run =
            run_sbl(obs, sensing, toy.tables.delay_phases, cps, opts);
        for (std::size_t k = 1; k < run.state.evidence.size(); ++k) {
            const double prev = run.state.evidence[k - 1];
            const double rise = run.state.evidence[k] - prev;
            if (rise > 1e-8 * std::abs(prev)) {
                ++violations;
                worst_rise = std::max(worst_rise, rise / std::abs(prev));
            }
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d violations, worst rise %.3e",
                  violations, worst_rise);
    detail = buf;
    return violations == 0;
}

// ---- criterion 4 ------------------------------------------------------

double surrogate_cost(const VectorXd& gamma, const MatrixXcd& psi,
                      const std::vector<MatrixXcd>& r,
                      const MatrixXcd& delay) {
    const auto q = static_cast<Eigen::Index>(r.size());
    const Eigen::Index n = psi.rows();
    double total = 0.0;
    for (Eigen::Index i = 0; i < q; ++i) {
        const VectorXcd t = delay.row(i).transpose();
        const MatrixXcd w = t.asDiagonal() * psi * t.conjugate().asDiagonal();
        const MatrixXcd z = gamma[i] * w;
        total += static_cast<double>(n) * std::log(gamma[i]) +
                 std::log(std::abs(w.determinant())) +
                 (r[static_cast<std::size_t>(i)] * z.inverse()).trace().real();
    }
    return total;
}

bool criterion_stationarity(std::string& detail) {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        auto gen = substream(9200, static_cast<std::uint64_t>(trial));
        const Eigen::Index n = 2, q = 3;
        MatrixXcd delay(q, n);
        for (Eigen::Index i = 0; i < q; ++i)
            delay.row(i) = testing::random_phases(n, gen).transpose();
        const MatrixXcd psi = testing::random_hpd(n, gen);
        std::vector<MatrixXcd> r;
        for (Eigen::Index i = 0; i < q; ++i)
            r.push_back(testing::random_hpd(n, gen));

        // gamma: golden-section minimizer per coordinate
        const VectorXd g =
            update_gamma(VectorXcd::Zero(q * n), r, psi, delay);
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        for (Eigen::Index i = 0; i < q; ++i) {
            VectorXd gamma = g;
            auto eval = [&](double v) {
                gamma[i] = v;
                return surrogate_cost(gamma, psi, r, delay);
            };
            double lo = g[i] / 8.0, hi = g[i] * 8.0;
            for (int it = 0; it < 160; ++it) {
                const double m1 = hi - gr * (hi - lo);
                const double m2 = lo + gr * (hi - lo);
                if (eval(m1) < eval(m2))
                    hi = m2;
                else
                    lo = m1;
            }
            worst = std::max(worst,
                             std::abs(0.5 * (lo + hi) - g[i]) / g[i]);
        }

        // psi: gradient descent over the Hermitian parameterization
        const MatrixXcd analytic =
            update_psi(VectorXcd::Zero(q * n), r, g, delay);
        auto build = [](const Eigen::Vector4d& p) {
            MatrixXcd m(2, 2);
            m(0, 0) = p[0];
            m(1, 1) = p[1];
            m(0, 1) = cxd(p[2], p[3]);
            m(1, 0) = std::conj(m(0, 1));
            return m;
        };
        auto cost = [&](const Eigen::Vector4d& p) {
            return surrogate_cost(g, build(p), r, delay);
        };
        Eigen::Vector4d p(analytic(0, 0).real() * 1.3,
                          analytic(1, 1).real() * 0.8,
                          analytic(0, 1).real() + 0.05,
                          analytic(0, 1).imag() - 0.05);
        double step = 0.05;
        for (int it = 0; it < 30000 && step > 1e-14; ++it) {
            Eigen::Vector4d grad;
            const double h = 1e-7;
            for (int k = 0; k < 4; ++k) {
                Eigen::Vector4d ph = p, pl = p;
                ph[k] += h;
                pl[k] -= h;
                grad[k] = (cost(ph) - cost(pl)) / (2.0 * h);
            }
            const Eigen::Vector4d cand = p - step * grad;
            if (cost(cand) < cost(p)) {
                p = cand;
                step *= 1.2;
            } else {
                step *= 0.5;
            }
        }
        worst = std::max(worst,
                         (build(p) - analytic).norm() / analytic.norm());
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "worst relative deviation %.3e", worst);
    detail = buf;
    return worst < 1e-4;
}

// ---- criterion 5 ------------------------------------------------------

bool criterion_tcm(std::string& detail) {
    double worst_frame = 0.0, worst_beta = 0.0;
    int coherence_fails = 0;

    for (int trial = 0; trial < 20; ++trial) {
        auto gen = substream(9300, static_cast<std::uint64_t>(trial));
        const int cps = 2 + static_cast<int>(gen() % 4); // Q in 4..25
        const int q = cps * cps;
        const int m_r = 2 + static_cast<int>(gen() % std::min(q - 1, 6));
        const int m_tx = 3 + static_cast<int>(gen() % 6);
        const double roi = 2.0 + static_cast<double>(gen() % 8);
        const auto toy = testing::toy_scenario(cps, m_tx, m_r, 2, roi);

        const MatrixXcd a_norm = toy.tables.a_normalized();
        const TcmFrame frame = tcm_target_frame(a_norm, toy.tables.eta);
        worst_frame = std::max(
            worst_frame,
            (frame.frame * frame.frame.adjoint() -
             MatrixXcd::Identity(m_r, m_r))
                .cwiseAbs()
                .maxCoeff());

        const VectorXcd x_tcm = tcm_pattern(toy.tables, 1.0);
        const VectorXcd x_uni = uniform_pattern(1.0, m_tx);
        const MatrixXcd phi_tcm = sensing_matrix(toy.tables, x_tcm);
        const MatrixXcd phi_uni = sensing_matrix(toy.tables, x_uni);
        const double c_tcm =
            total_coherence(phi_tcm, frobenius_alpha(phi_tcm));
        const double c_uni =
            total_coherence(phi_uni, frobenius_alpha(phi_uni));
        if (c_tcm > c_uni * (1.0 + 1e-12)) ++coherence_fails;
    }

    // beta vs 2-D grid search on a small instance
    auto gen = substream(9301, 0);
    const MatrixXcd a = testing::random_complex(2, 3, gen);
    MatrixXcd an = a;
    for (int i = 0; i < 3; ++i) an.col(i) /= an.col(i).norm();
    VectorXd eta(3);
    eta << 0.6, 1.1, 0.9;
    const TcmFrame f = tcm_target_frame(an, eta);
    const VectorXcd beta = tcm_beta(f.frame, an, eta);
    for (int qi = 0; qi < 3; ++qi) {
        const cxd gq = (f.frame.adjoint() * an)(qi, qi);
        const double radius = 2.0 * std::abs(gq) / eta[qi] + 0.1;
        double best = std::numeric_limits<double>::infinity();
        cxd best_b;
        const int steps = 500;
        for (int ir = 0; ir <= steps; ++ir)
            for (int ii = 0; ii <= steps; ++ii) {
                const cxd b(-radius + 2.0 * radius * ir / steps,
                            -radius + 2.0 * radius * ii / steps);
                const double val = eta[qi] * eta[qi] * std::norm(b) -
                                   2.0 * (eta[qi] * b * gq).real();
                if (val < best) {
                    best = val;
                    best_b = b;
                }
            }
        worst_beta =
            std::max(worst_beta, std::abs(beta[qi] - best_b) /
                                     std::max(1.0, std::abs(beta[qi])));
    }

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "frame err %.2e, beta err %.2e, coherence fails %d",
                  worst_frame, worst_beta, coherence_fails);
    detail = buf;
    return worst_frame < 1e-10 && worst_beta < 0.01 && coherence_fails == 0;
}

// ---- criterion 6 ------------------------------------------------------

bool criterion_remark1(std::string& detail) {
    const auto toy = testing::toy_scenario(4, 6, 5, 2, 6.0);
    auto gen = substream(9400, 0);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int k = 0; k < 10; ++k) {
        const VectorXcd x = testing::random_complex(6, 1, gen).col(0);
        const double v =
            normalized_total_coherence(sensing_matrix(toy.tables, x));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "spread %.3e over value %.6f", hi - lo, hi);
    detail = buf;
    return (hi - lo) <= 1e-10 * std::max(1.0, hi);
}

// ---- criterion 7 ------------------------------------------------------

bool criterion_ipm(std::string& detail) {
    IpmOptions opts;
    opts.sdp.max_iter = 80000;
    opts.sdp.feas_tol = 1e-10;

    // MRT limit
    const auto toy = testing::toy_scenario(3, 6, 4, 2);
    IpmDiagnostics diag;
    const VectorXcd x = ipm_pattern(toy.tables, 2.0, {4}, opts, &diag);
    const VectorXcd mrt = toy.tables.b_matrix.row(4).adjoint().normalized();
    const double align_err = 1.0 - std::abs(x.normalized().dot(mrt));
    bool ok = align_err < 1e-6 && diag.rank_residual <= diag.eps;

    // 2-antenna grid search
    const auto toy2 = testing::toy_scenario(3, 2, 3, 2);
    IpmDiagnostics diag2;
    const VectorXcd x2 = ipm_pattern(toy2.tables, 1.0, {0, 8}, opts, &diag2);
    const double got = min_illumination_power(x2, toy2.tables, {0, 8});
    double best = 0.0;
    const int steps = 600;
    for (int it = 0; it <= steps; ++it) {
        const double theta = 0.5 * kPi * it / steps;
        for (int ip = 0; ip < steps; ++ip) {
            const double phi = 2.0 * kPi * ip / steps;
            VectorXcd cand(2);
            cand << std::cos(theta),
                std::sin(theta) * std::polar(1.0, phi);
            best = std::max(best,
                            min_illumination_power(cand, toy2.tables, {0, 8}));
        }
    }
    ok = ok && got >= 0.99 * best && got <= 1.01 * best;

    // monotone accepted chi trace and rank certificate
    bool monotone = true;
    for (std::size_t k = 1; k < diag2.chi_trace.size(); ++k)
        monotone = monotone &&
                   diag2.chi_trace[k] >= diag2.chi_trace[k - 1] -
                                             1e-8 * std::abs(
                                                 diag2.chi_trace[k - 1]);
    ok = ok && monotone && diag2.rank_residual <= diag2.eps;
    ok = ok && got >= (1.0 - 1e-2) * diag2.chi_trace.back();

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "mrt err %.2e, grid ratio %.4f, monotone %d, rank res "
                  "%.2e <= %.2e",
                  align_err, got / best, (int)monotone, diag2.rank_residual,
                  diag2.eps);
    detail = buf;
    return ok;
}

// ---- criterion 8 ------------------------------------------------------

double ssim_window_oracle(const MatrixXd& a, const MatrixXd& b) {
    const SsimParams p;
    const int rows = static_cast<int>(a.rows());
    const int cols = static_cast<int>(a.cols());
    const double c1 = p.k1 * p.k1, c2 = p.k2 * p.k2;
    double total = 0.0;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            double w_sum = 0, ma = 0, mb = 0;
            for (int dr = -p.radius; dr <= p.radius; ++dr)
                for (int dc = -p.radius; dc <= p.radius; ++dc) {
                    const int rr = r + dr, cc = c + dc;
                    if (rr < 0 || rr >= rows || cc < 0 || cc >= cols)
                        continue;
                    const double w = std::exp(-0.5 * (dr * dr + dc * dc) /
                                              (p.sigma * p.sigma));
                    w_sum += w;
                    ma += w * a(rr, cc);
                    mb += w * b(rr, cc);
                }
            ma /= w_sum;
            mb /= w_sum;
            double va = 0, vb = 0, cab = 0;
            for (int dr = -p.radius; dr <= p.radius; ++dr)
                for (int dc = -p.radius; dc <= p.radius; ++dc) {
                    const int rr = r + dr, cc = c + dc;
                    if (rr < 0 || rr >= rows || cc < 0 || cc >= cols)
                        continue;
                    const double w = std::exp(-0.5 * (dr * dr + dc * dc) /
                                              (p.sigma * p.sigma));
                    va += w * (a(rr, cc) - ma) * (a(rr, cc) - ma);
                    vb += w * (b(rr, cc) - mb) * (b(rr, cc) - mb);
                    cab += w * (a(rr, cc) - ma) * (b(rr, cc) - mb);
                }
            va /= w_sum;
            vb /= w_sum;
            cab /= w_sum;
            total += ((2 * ma * mb + c1) * (2 * cab + c2)) /
                     ((ma * ma + mb * mb + c1) * (va + vb + c2));
        }
    return total / (static_cast<double>(rows) * cols);
}

bool criterion_metrics(std::string& detail) {
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        auto gen = substream(9500, static_cast<std::uint64_t>(trial));
        MatrixXd a = testing::random_real(8, 8, gen).cwiseAbs();
        MatrixXd b = testing::random_real(8, 8, gen).cwiseAbs();
        a /= a.maxCoeff();
        b /= b.maxCoeff();
        worst = std::max(worst, std::abs(ssim(a, b) - ssim_window_oracle(a, b)));
    }

    MatrixXd a(2, 2), b(2, 2);
    a << 0.0, 1.0, 1.0, 0.0;
    b << 0.0, 0.5, 1.0, 0.0;
    const bool hand = immse(a, b) == 0.0625 &&
                      approx_zero(psnr(a, b) - 10.0 * std::log10(16.0),
                                  1e-12) &&
                      pcc(a, (MatrixXd::Ones(2, 2) - a).eval()).value() + 1.0 <
                          1e-12 &&
                      psnr(a, a) == kPsnrCapDb;

    char buf[128];
    std::snprintf(buf, sizeof buf, "ssim worst err %.3e, hand cases %s", worst,
                  hand ? "exact" : "WRONG");
    detail = buf;
    return worst < 1e-9 && hand;
}

// ---- criterion 9 ------------------------------------------------------

bool criterion_noise(std::string& detail) {
    // noise: 1e5 draws of a 1x1 observation
    const auto toy = testing::toy_scenario(1, 2, 1, 1);
    std::vector<bool> mask{true};
    VectorXd mags(1);
    mags << 1.0;
    const GroundTruthScene scene = generate_scene(mask, mags, 0.0, 4, 1);
    IlluminationPlan plan;
    plan.per_subcarrier_power = 1.0;
    plan.mode = IlluminationMode::uniform;
    plan.vectors.assign(1, uniform_pattern(1.0, 2));
    const SensingSet sensing = build_sensing_set(toy.tables, plan);
    const auto u = coefficient_vectors(scene, toy.tables);
    const MatrixXcd y0 = noiseless_observations(sensing, u);

    const double n0 = 0.81;
    double acc = 0.0;
    const int draws = 100000;
    for (int k = 0; k < draws; ++k) {
        const ObservationSet obs =
            synthesize_observations(sensing, u, n0, 40000 + k);
        acc += std::norm(obs.y(0, 0) - y0(0, 0));
    }
    const double var = acc / draws;
    const double noise_rel = std::abs(var - n0) / n0;

    // AR-1 covariance: 1e5 scene draws
    const int n = 4;
    MatrixXcd cov = MatrixXcd::Zero(n, n);
    for (int k = 0; k < draws; ++k) {
        const GroundTruthScene s =
            generate_scene(mask, mags, 0.99, 500000 + k, n);
        const VectorXcd row = s.coeffs.row(0).transpose();
        cov += row * row.adjoint();
    }
    cov /= static_cast<double>(draws);
    const MatrixXcd target = ar1_correlation(n, 0.99).cast<cxd>();
    const double cov_rel = (cov - target).norm() / target.norm();

    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "noise var rel err %.4f, AR-1 cov rel err %.4f", noise_rel,
                  cov_rel);
    detail = buf;
    return noise_rel < 0.02 && cov_rel < 0.02;
}

// ---- criterion 10 -----------------------------------------------------

bool criterion_single_scatterer(std::string& detail) {
    // same paper-scale geometry as criterion 1
    const ExperimentConfig base = paper_scale_config();
    const SceneGeometry g = build_geometry(base.geometry);
    const ChannelTables tables = build_channel_tables(g);
    const int cps = g.cells_per_side;

    const int true_cell = 7 * cps + 13;
    std::vector<bool> mask(static_cast<std::size_t>(g.cell_count()), false);
    mask[true_cell] = true;
    VectorXd mags = VectorXd::Zero(g.cell_count());
    mags[true_cell] = 1.0;
    const GroundTruthScene scene =
        generate_scene(mask, mags, 0.99, 6, g.n_subcarriers);

    PlanDesignOptions design;
    design.ipm = base.illumination.ipm;
    bool ok = true;
    std::string marks;
    for (auto mode : {IlluminationMode::uniform, IlluminationMode::tcm,
                      IlluminationMode::ipm}) {
        const IlluminationPlan plan =
            design_plan(mode, tables, g, 4.0, design);
        const SensingSet sensing = build_sensing_set(tables, plan);
        const auto u = coefficient_vectors(scene, tables);
        ObservationSet obs = synthesize_observations(sensing, u, 0.0, 2);
        obs.noise_power = 1e-8 * obs.y.squaredNorm() / obs.y.size();

        SblOptions opts;
        opts.max_iter = 60;
        const SblRun run =
            run_sbl(obs, sensing, tables.delay_phases, cps, opts);
        bool pattern_ok = true;
        for (const auto& img : run.images) {
            Eigen::Index r = 0, c = 0;
            img.maxCoeff(&r, &c);
            pattern_ok =
                pattern_ok && static_cast<int>(r * cps + c) == true_cell;
        }
        ok = ok && pattern_ok;
        marks += to_string(mode) + (pattern_ok ? "+ " : "- ");
    }
    detail = "argmax hits: " + marks;
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<Criterion> criteria = {
        {1, "Table-1 ordering at paper scale", criterion_table1},
        {2, "Woodbury-direct posterior equivalence", criterion_woodbury},
        {3, "EM evidence monotonicity (projection off)", criterion_monotonic},
        {4, "M-step stationarity", criterion_stationarity},
        {5, "TCM frame/beta/coherence properties", criterion_tcm},
        {6, "normalized coherence beamformer invariance", criterion_remark1},
        {7, "IPM MRT/grid-search/SCA properties", criterion_ipm},
        {8, "SSIM oracle and closed-form metric cases", criterion_metrics},
        {9, "noise and AR-1 Monte-Carlo calibration", criterion_noise},
        {10, "noiseless single-scatterer recovery", criterion_single_scatterer},
    };

    // optional filter: run only the listed criterion numbers
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : criteria) {
        if (!only.empty() &&
            std::find(only.begin(), only.end(), c.number) == only.end())
            continue;
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL",
                    c.number, c.name, detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
