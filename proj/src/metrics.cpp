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

#include "nfwi/metrics.hpp"

#include <cmath>

namespace nfwi {

std::pair<MatrixXd, MatrixXd> normalize_pair(const MatrixXd& truth,
                                             const MatrixXd& estimate) {
    if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols())
        throw ParameterError("normalize_pair: size mismatch");
    const double peak = truth.maxCoeff();
    if (!(peak > 0.0))
        throw ParameterError("normalize_pair: all-zero truth image");
    MatrixXd t = truth / peak;
    MatrixXd e = (estimate / peak).cwiseMax(0.0).cwiseMin(1.0);
    return {std::move(t), std::move(e)};
}

double immse(const MatrixXd& a, const MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ParameterError("immse: size mismatch");
    return (a - b).squaredNorm() / static_cast<double>(a.size());
}

double psnr(const MatrixXd& a, const MatrixXd& b, double peak) {
    const double mse = immse(a, b);
    if (mse == 0.0) return kPsnrCapDb;
    return std::min(kPsnrCapDb, 10.0 * std::log10(peak * peak / mse));
}

std::optional<double> pcc(const MatrixXd& a, const MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ParameterError("pcc: size mismatch");
    const double ma = a.mean();
    const double mb = b.mean();
    const MatrixXd da = a.array() - ma;
    const MatrixXd db = b.array() - mb;
    const double va = da.squaredNorm();
    const double vb = db.squaredNorm();
    if (va == 0.0 || vb == 0.0) return std::nullopt; // constant image
    return (da.array() * db.array()).sum() / std::sqrt(va * vb);
}

namespace {

VectorXd gaussian_taps(const SsimParams& p) {
    VectorXd g(2 * p.radius + 1);
    for (int k = -p.radius; k <= p.radius; ++k)
        g[k + p.radius] = std::exp(-0.5 * k * k / (p.sigma * p.sigma));
    return g / g.sum();
}

} // namespace

double ssim(const MatrixXd& a, const MatrixXd& b, const SsimParams& params,
            Exec exec) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ParameterError("ssim: size mismatch");
    if (a.rows() < 1 || a.cols() < 1)
        throw ParameterError("ssim: empty image");
    if (params.radius < 0 || params.sigma <= 0.0)
        throw ParameterError("ssim: bad window parameters");

    const int rows = static_cast<int>(a.rows());
    const int cols = static_cast<int>(a.cols());
    const VectorXd taps = gaussian_taps(params);
    const double c1 = params.k1 * params.peak * params.k1 * params.peak;
    const double c2 = params.k2 * params.peak * params.k2 * params.peak;

    // Windows are truncated at the borders and renormalized; the weight
    // field is separable, so each moment is two 1-D passes plus a pixelwise
    // division by the filtered all-ones image.
    const auto filter = [&](const MatrixXd& img) {
        MatrixXd tmp = MatrixXd::Zero(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                double acc = 0.0;
                for (int k = -params.radius; k <= params.radius; ++k) {
                    const int rr = r + k;
                    if (rr < 0 || rr >= rows) continue;
                    acc += taps[k + params.radius] * img(rr, c);
                }
                tmp(r, c) = acc;
            }
        MatrixXd out = MatrixXd::Zero(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                double acc = 0.0;
                for (int k = -params.radius; k <= params.radius; ++k) {
                    const int cc = c + k;
                    if (cc < 0 || cc >= cols) continue;
                    acc += taps[k + params.radius] * tmp(r, cc);
                }
                out(r, c) = acc;
            }
        return out;
    };

    const MatrixXd weight = filter(MatrixXd::Ones(rows, cols));
    const MatrixXd mu_a = filter(a).cwiseQuotient(weight);
    const MatrixXd mu_b = filter(b).cwiseQuotient(weight);
    const MatrixXd raw_aa = filter(a.cwiseProduct(a)).cwiseQuotient(weight);
    const MatrixXd raw_bb = filter(b.cwiseProduct(b)).cwiseQuotient(weight);
    const MatrixXd raw_ab = filter(a.cwiseProduct(b)).cwiseQuotient(weight);

    // per-row partials summed in row order, independent of the thread count
    VectorXd row_sums = VectorXd::Zero(rows);
    const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (par)
    for (int r = 0; r < rows; ++r) {
        double row_sum = 0.0;
        for (int c = 0; c < cols; ++c) {
            const double ua = mu_a(r, c);
            const double ub = mu_b(r, c);
            const double va = raw_aa(r, c) - ua * ua;
            const double vb = raw_bb(r, c) - ub * ub;
            const double cab = raw_ab(r, c) - ua * ub;
            row_sum += ((2.0 * ua * ub + c1) * (2.0 * cab + c2)) /
                       ((ua * ua + ub * ub + c1) * (va + vb + c2));
        }
        row_sums[r] = row_sum;
    }
    return row_sums.sum() / (static_cast<double>(rows) * cols);
}

MetricReport compare_images(const std::vector<MatrixXd>& truth,
                            const std::vector<MatrixXd>& estimate,
                            const SsimParams& params, Exec exec) {
    if (truth.size() != estimate.size() || truth.empty())
        throw ParameterError("compare_images: subcarrier count mismatch");

    MetricReport rep;
    rep.per_subcarrier.reserve(truth.size());
    double sum_immse = 0.0, sum_psnr = 0.0, sum_ssim = 0.0, sum_pcc = 0.0;
    int pcc_count = 0;
    for (std::size_t n = 0; n < truth.size(); ++n) {
        const auto [t, e] = normalize_pair(truth[n], estimate[n]);
        MetricSample s;
        s.immse = immse(t, e);
        s.psnr_db = psnr(t, e, params.peak);
        s.ssim = ssim(t, e, params, exec);
        s.pcc = pcc(t, e);
        sum_immse += s.immse;
        sum_psnr += s.psnr_db;
        sum_ssim += s.ssim;
        if (s.pcc) {
            sum_pcc += *s.pcc;
            ++pcc_count;
        }
        rep.per_subcarrier.push_back(s);
    }
    const auto n = static_cast<double>(truth.size());
    rep.mean.immse = sum_immse / n;
    rep.mean.psnr_db = sum_psnr / n;
    rep.mean.ssim = sum_ssim / n;
    if (pcc_count > 0) rep.mean.pcc = sum_pcc / pcc_count;
    return rep;
}

} // namespace nfwi
