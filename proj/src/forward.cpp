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

#include "nfwi/forward.hpp"

#include "nfwi/rng.hpp"

#include <cmath>

namespace nfwi {

namespace {
constexpr std::uint64_t kNoiseTag = 0x6e6f697365000000ULL; // "noise"
}

MatrixXcd sensing_matrix(const ChannelTables& tables, const VectorXcd& x) {
    if (x.size() != tables.b_matrix.cols())
        throw ParameterError("sensing_matrix: beamformer length != M_t");
    const VectorXcd gain = tables.b_matrix * x; // (B x)_q per cell
    // Phi = A diag(eta) diag(B x)
    return tables.a_matrix *
           (tables.eta.cast<cxd>().cwiseProduct(gain)).asDiagonal();
}

SensingSet build_sensing_set(const ChannelTables& tables,
                             const IlluminationPlan& plan) {
    SensingSet s;
    s.illumination = plan;
    s.phi.reserve(plan.vectors.size());
    for (const auto& x : plan.vectors)
        s.phi.push_back(sensing_matrix(tables, x));
    return s;
}

std::vector<VectorXcd> coefficient_vectors(const GroundTruthScene& scene,
                                           const ChannelTables& tables) {
    if (scene.coeffs.rows() != tables.delay_phases.rows() ||
        scene.coeffs.cols() != tables.delay_phases.cols())
        throw ParameterError("coefficient_vectors: scene/tables mismatch");
    std::vector<VectorXcd> u;
    u.reserve(static_cast<std::size_t>(scene.coeffs.cols()));
    for (Eigen::Index n = 0; n < scene.coeffs.cols(); ++n)
        u.push_back(
            scene.coeffs.col(n).cwiseProduct(tables.delay_phases.col(n)));
    return u;
}

MatrixXcd noiseless_observations(const SensingSet& sensing,
                                 const std::vector<VectorXcd>& coeffs) {
    const auto n = static_cast<Eigen::Index>(sensing.phi.size());
    if (static_cast<Eigen::Index>(coeffs.size()) != n)
        throw ParameterError("noiseless_observations: subcarrier mismatch");
    MatrixXcd y(sensing.phi.front().rows(), n);
    for (Eigen::Index k = 0; k < n; ++k)
        y.col(k) = sensing.phi[static_cast<std::size_t>(k)] *
                   coeffs[static_cast<std::size_t>(k)];
    return y;
}

double calibrate_noise_power(const ChannelTables& tables,
                             const GroundTruthScene& scene,
                             const IlluminationPlan& reference_plan,
                             double snr_db) {
    if (!std::isfinite(snr_db))
        throw ParameterError("snr_db must be finite");
    const SensingSet ref = build_sensing_set(tables, reference_plan);
    const MatrixXcd y0 = noiseless_observations(
        ref, coefficient_vectors(scene, tables));
    const double p_sig = y0.squaredNorm() / static_cast<double>(y0.size());
    if (p_sig <= 0.0)
        throw NumericalError("noise calibration: zero noiseless signal");
    return p_sig / std::pow(10.0, snr_db / 10.0);
}

ObservationSet synthesize_observations(const SensingSet& sensing,
                                       const std::vector<VectorXcd>& coeffs,
                                       double noise_power,
                                       std::uint64_t seed) {
    if (noise_power < 0.0)
        throw ParameterError("noise power must be nonnegative");
    ObservationSet obs;
    obs.y = noiseless_observations(sensing, coeffs);
    obs.noise_power = noise_power;
    obs.seed = seed;
    if (noise_power > 0.0) {
        // one independent stream per subcarrier
        for (Eigen::Index n = 0; n < obs.y.cols(); ++n) {
            auto gen = substream(seed, kNoiseTag + static_cast<std::uint64_t>(n));
            for (Eigen::Index m = 0; m < obs.y.rows(); ++m)
                obs.y(m, n) += complex_normal(gen, noise_power);
        }
    }
    return obs;
}

} // namespace nfwi
