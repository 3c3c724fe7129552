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

#ifndef NFWI_RNG_HPP
#define NFWI_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace nfwi {

// splitmix64 finalizer; used to derive independent substream seeds so that
// e.g. each subcarrier's noise stream is decorrelated from the others while
// the whole draw stays a pure function of (seed, tag).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t tag) {
    return std::mt19937_64(mix64(mix64(seed) ^ tag));
}

// One draw from CN(0, var): real and imaginary parts i.i.d. N(0, var/2).
// A fresh distribution per call keeps the draw independent of any cached
// state, so interleaving call sites cannot change the stream.
inline std::complex<double> complex_normal(std::mt19937_64& gen, double var) {
    std::normal_distribution<double> d(0.0, std::sqrt(0.5 * var));
    const double re = d(gen);
    const double im = d(gen);
    return {re, im};
}

} // namespace nfwi

#endif
