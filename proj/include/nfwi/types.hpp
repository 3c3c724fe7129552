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

#ifndef NFWI_TYPES_HPP
#define NFWI_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace nfwi {

using cxd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Execution policy for kernels that exist in a serial reference form and an
// OpenMP form. The serial form is the ground truth used by the tests; the
// OpenMP form is the production path.
enum class Exec { serial, parallel };

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct GeometryError : std::domain_error {
    using std::domain_error::domain_error;
};
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DesignError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace nfwi

#endif
