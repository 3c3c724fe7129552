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

#ifndef NFWI_METRICS_HPP
#define NFWI_METRICS_HPP

#include "nfwi/types.hpp"

#include <optional>
#include <vector>

namespace nfwi {

inline constexpr double kPsnrCapDb = 100.0;

struct SsimParams {
    double sigma = 1.5;   // Gaussian window std dev
    int radius = 5;       // 11x11 support
    double k1 = 0.01;
    double k2 = 0.03;
    double peak = 1.0;
};

// One metric tuple; pcc is missing for constant images.
struct MetricSample {
    double immse = 0.0;
    double psnr_db = 0.0;
    double ssim = 0.0;
    std::optional<double> pcc;
};

struct MetricReport {
    std::vector<MetricSample> per_subcarrier;
    MetricSample mean; // pcc averaged over the subcarriers where it exists
};

// Scales both images by max(truth) and clips the estimate to [0, 1].
std::pair<MatrixXd, MatrixXd> normalize_pair(const MatrixXd& truth,
                                             const MatrixXd& estimate);

double immse(const MatrixXd& a, const MatrixXd& b);
double psnr(const MatrixXd& a, const MatrixXd& b, double peak = 1.0);
std::optional<double> pcc(const MatrixXd& a, const MatrixXd& b);

// Mean local SSIM with a Gaussian window truncated and renormalized at the
// borders.
double ssim(const MatrixXd& a, const MatrixXd& b, const SsimParams& params = {},
            Exec exec = Exec::parallel);

// Normalizes per subcarrier, evaluates the four metrics and their mean.
MetricReport compare_images(const std::vector<MatrixXd>& truth,
                            const std::vector<MatrixXd>& estimate,
                            const SsimParams& params = {},
                            Exec exec = Exec::parallel);

} // namespace nfwi

#endif
