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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nfwi/metrics.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace nfwi;

namespace {

// direct per-window evaluation, no separable filtering
double ssim_oracle(const MatrixXd& a, const MatrixXd& b,
                   const SsimParams& p) {
    const int rows = static_cast<int>(a.rows());
    const int cols = static_cast<int>(a.cols());
    const double c1 = p.k1 * p.peak * p.k1 * p.peak;
    const double c2 = p.k2 * p.peak * p.k2 * p.peak;
    double total = 0.0;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            double w_sum = 0.0, ma = 0.0, mb = 0.0;
            for (int dr = -p.radius; dr <= p.radius; ++dr)
                for (int dc = -p.radius; dc <= p.radius; ++dc) {
                    const int rr = r + dr, cc = c + dc;
                    if (rr < 0 || rr >= rows || cc < 0 || cc >= cols)
                        continue;
                    const double w = std::exp(
                        -0.5 * (dr * dr + dc * dc) / (p.sigma * p.sigma));
                    w_sum += w;
                    ma += w * a(rr, cc);
                    mb += w * b(rr, cc);
                }
            ma /= w_sum;
            mb /= w_sum;
            double va = 0.0, vb = 0.0, cab = 0.0;
            for (int dr = -p.radius; dr <= p.radius; ++dr)
                for (int dc = -p.radius; dc <= p.radius; ++dc) {
                    const int rr = r + dr, cc = c + dc;
                    if (rr < 0 || rr >= rows || cc < 0 || cc >= cols)
                        continue;
                    const double w = std::exp(
                        -0.5 * (dr * dr + dc * dc) / (p.sigma * p.sigma));
                    va += w * (a(rr, cc) - ma) * (a(rr, cc) - ma);
                    vb += w * (b(rr, cc) - mb) * (b(rr, cc) - mb);
                    cab += w * (a(rr, cc) - ma) * (b(rr, cc) - mb);
                }
            va /= w_sum;
            vb /= w_sum;
            cab /= w_sum;
            total += ((2.0 * ma * mb + c1) * (2.0 * cab + c2)) /
                     ((ma * ma + mb * mb + c1) * (va + vb + c2));
        }
    }
    return total / (static_cast<double>(rows) * cols);
}

MatrixXd random_image(int n, std::mt19937_64& gen) {
    MatrixXd img = testing::random_real(n, n, gen).cwiseAbs();
    return img / img.maxCoeff();
}

} // namespace

TEST_CASE("normalize_pair") {
    MatrixXd truth(2, 2), est(2, 2);
    truth << 0.0, 2.0, 1.0, 0.5;
    est << 0.0, 3.0, 1.0, -0.2;
    const auto [t, e] = normalize_pair(truth, est);
    CHECK(t.maxCoeff() == 1.0);
    CHECK(t(0, 1) == 1.0);
    CHECK(e.maxCoeff() <= 1.0); // clipped
    CHECK(e.minCoeff() >= 0.0);
    CHECK(e(1, 0) == doctest::Approx(0.5));

    CHECK_THROWS_AS(normalize_pair(MatrixXd::Zero(2, 2), est),
                    ParameterError);
    CHECK_THROWS_AS(normalize_pair(truth, MatrixXd::Zero(3, 3)),
                    ParameterError);
}

TEST_CASE("identical images saturate every metric") {
    auto gen = substream(1, 1);
    const MatrixXd a = random_image(6, gen);
    CHECK(immse(a, a) == 0.0);
    CHECK(psnr(a, a) == kPsnrCapDb);
    CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(pcc(a, a).has_value());
    CHECK(*pcc(a, a) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("binary complement anti-correlates") {
    MatrixXd a(2, 2);
    a << 0.0, 1.0, 1.0, 0.0;
    const MatrixXd b = MatrixXd::Ones(2, 2) - a;
    REQUIRE(pcc(a, b).has_value());
    CHECK(*pcc(a, b) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("hand-computed IMMSE and PSNR") {
    MatrixXd a(2, 2), b(2, 2);
    a << 0.0, 1.0, 1.0, 0.0;
    b << 0.0, 0.5, 1.0, 0.0;
    CHECK(immse(a, b) == doctest::Approx(0.0625).epsilon(1e-15));
    CHECK(psnr(a, b) ==
          doctest::Approx(10.0 * std::log10(1.0 / 0.0625)).epsilon(1e-12));
}

TEST_CASE("constant image has no correlation coefficient") {
    const MatrixXd a = MatrixXd::Constant(3, 3, 0.5);
    auto gen = substream(2, 2);
    const MatrixXd b = random_image(3, gen);
    CHECK_FALSE(pcc(a, b).has_value());
}

TEST_CASE("SSIM of a nonzero image against zero stays strictly inside (0,1)") {
    auto gen = substream(3, 3);
    const MatrixXd a = random_image(8, gen);
    const double v = ssim(a, MatrixXd::Zero(8, 8));
    CHECK(v > 0.0);
    CHECK(v < 1.0);
}

TEST_CASE("SSIM matches a direct per-window oracle on random 8x8 pairs") {
    for (int trial = 0; trial < 20; ++trial) {
        auto gen = substream(100, static_cast<std::uint64_t>(trial));
        const MatrixXd a = random_image(8, gen);
        const MatrixXd b = random_image(8, gen);
        const double fast = ssim(a, b);
        const double slow = ssim_oracle(a, b, {});
        CHECK(std::abs(fast - slow) < 1e-9);
        // parallel and serial paths agree
        CHECK(std::abs(ssim(a, b, {}, Exec::serial) - fast) < 1e-12);
    }
}

TEST_CASE("metric symmetries and identities") {
    auto gen = substream(4, 4);
    const MatrixXd a = random_image(7, gen);
    const MatrixXd b = random_image(7, gen);
    CHECK(immse(a, b) == immse(b, a));
    CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-12));
    CHECK(*pcc(a, b) == doctest::Approx(*pcc(b, a)).epsilon(1e-12));
    // psnr = 10 log10(1 / immse) with unit peak
    CHECK(psnr(a, b) ==
          doctest::Approx(10.0 * std::log10(1.0 / immse(a, b)))
              .epsilon(1e-12));
    // positive affine transform leaves pcc unchanged
    const MatrixXd c = (2.5 * b.array() + 0.3).matrix();
    CHECK(*pcc(a, c) == doctest::Approx(*pcc(a, b)).epsilon(1e-12));
}

TEST_CASE("compare_images aggregates per subcarrier plus mean") {
    auto gen = substream(5, 5);
    std::vector<MatrixXd> truth{random_image(6, gen), random_image(6, gen)};
    std::vector<MatrixXd> est{truth[0], random_image(6, gen)};
    const MetricReport rep = compare_images(truth, est);
    REQUIRE(rep.per_subcarrier.size() == 2);
    CHECK(rep.per_subcarrier[0].immse == 0.0);
    CHECK(rep.per_subcarrier[0].psnr_db == kPsnrCapDb);
    CHECK(rep.mean.immse ==
          doctest::Approx(0.5 * rep.per_subcarrier[1].immse));
}
