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

#ifndef NFWI_FORWARD_HPP
#define NFWI_FORWARD_HPP

#include "nfwi/geometry.hpp"
#include "nfwi/illum.hpp"
#include "nfwi/scene.hpp"
#include "nfwi/types.hpp"

#include <cstdint>
#include <vector>

namespace nfwi {

// Per-subcarrier sensing matrices Phi_n = A diag(eta) diag(B x_n).
struct SensingSet {
    std::vector<MatrixXcd> phi; // N matrices, each M_r x Q
    IlluminationPlan illumination;
};

// Noisy multi-subcarrier observation Y = [Phi_1 u_1, ..., Phi_N u_N] + N.
struct ObservationSet {
    MatrixXcd y; // M_r x N
    double noise_power = 0.0;
    double snr_db = 0.0;
    std::uint64_t seed = 0;
};

MatrixXcd sensing_matrix(const ChannelTables& tables, const VectorXcd& x);

SensingSet build_sensing_set(const ChannelTables& tables,
                             const IlluminationPlan& plan);

// u_n = rho_n ⊙ t_n for every subcarrier; |u_n| = |rho_n| elementwise.
std::vector<VectorXcd> coefficient_vectors(const GroundTruthScene& scene,
                                           const ChannelTables& tables);

// Noiseless observation matrix for a given plan (column n = Phi_n u_n).
MatrixXcd noiseless_observations(const SensingSet& sensing,
                                 const std::vector<VectorXcd>& coeffs);

// N0 = P_sig / 10^(snr/10) with P_sig the mean per-entry power of the
// noiseless observation under the reference plan (the uniform pattern), so
// every illumination pattern in one experiment faces the same N0.
double calibrate_noise_power(const ChannelTables& tables,
                             const GroundTruthScene& scene,
                             const IlluminationPlan& reference_plan,
                             double snr_db);

ObservationSet synthesize_observations(const SensingSet& sensing,
                                       const std::vector<VectorXcd>& coeffs,
                                       double noise_power, std::uint64_t seed);

} // namespace nfwi

#endif
