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

#ifndef NFWI_IO_HPP
#define NFWI_IO_HPP

#include "nfwi/forward.hpp"
#include "nfwi/illum.hpp"
#include "nfwi/types.hpp"

#include <string>
#include <vector>

namespace nfwi {

// Shortest decimal form that round-trips a double exactly.
std::string format_double(double v);

// 16-bit grayscale PGM, linear over [0, max(image)], plus callers usually
// pair it with write_matrix_csv for a lossless numeric sidecar.
void write_pgm16(const MatrixXd& image, const std::string& path);

void write_matrix_csv(const MatrixXd& m, const std::string& path);
MatrixXd read_matrix_csv(const std::string& path);

// Illumination plan: header line, then one line per subcarrier holding
// M_t re/im pairs.
void write_plan(const IlluminationPlan& plan, const std::string& path);
IlluminationPlan read_plan(const std::string& path);

// Observation matrix with its noise metadata, re/im pairs per row.
void write_observations(const ObservationSet& obs, const std::string& path);
ObservationSet read_observations(const std::string& path);

} // namespace nfwi

#endif
