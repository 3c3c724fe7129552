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

#include "nfwi/scene.hpp"

#include "nfwi/rng.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace nfwi {

namespace {
constexpr std::uint64_t kSceneRowTag = 0x7363656e65000000ULL; // "scene"
}

MatrixXd ar1_correlation(int n, double psi_coeff) {
    if (n < 1)
        throw ParameterError("correlation size must be >= 1");
    if (!(std::abs(psi_coeff) < 1.0))
        throw ParameterError("AR-1 coefficient must satisfy |psi| < 1");
    MatrixXd psi(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            psi(i, j) = std::pow(psi_coeff, std::abs(i - j));
    return psi;
}

GroundTruthScene generate_scene(const std::vector<bool>& mask,
                                const VectorXd& magnitudes, double psi_coeff,
                                std::uint64_t seed, int n_subcarriers) {
    const auto q = static_cast<Eigen::Index>(mask.size());
    if (magnitudes.size() != q)
        throw ParameterError("mask and magnitudes must have the same length");
    if (n_subcarriers < 1)
        throw ParameterError("n_subcarriers must be >= 1");
    for (Eigen::Index i = 0; i < q; ++i)
        if (!mask[static_cast<std::size_t>(i)] && magnitudes[i] != 0.0)
            throw ParameterError("magnitudes must be zero off the support");

    GroundTruthScene scene;
    scene.coeffs = MatrixXcd::Zero(q, n_subcarriers);
    scene.support = mask;
    scene.rcs = magnitudes.array().square();
    scene.psi = ar1_correlation(n_subcarriers, psi_coeff).cast<cxd>();
    scene.seed = seed;

    const int root = static_cast<int>(std::lround(std::sqrt(double(q))));
    scene.cells_per_side =
        (static_cast<Eigen::Index>(root) * root == q) ? root : 0;

    const double innovation = std::sqrt(1.0 - psi_coeff * psi_coeff);
    for (Eigen::Index i = 0; i < q; ++i) {
        if (!mask[static_cast<std::size_t>(i)]) continue;
        const double gamma = scene.rcs[i];
        auto gen = substream(seed, kSceneRowTag + static_cast<std::uint64_t>(i));
        cxd value = complex_normal(gen, gamma);
        scene.coeffs(i, 0) = value;
        for (int n = 1; n < n_subcarriers; ++n) {
            value = psi_coeff * value +
                    innovation * complex_normal(gen, gamma);
            scene.coeffs(i, n) = value;
        }
    }
    return scene;
}

RasterScene render_raster(const std::vector<int>& raster, int cells_per_side,
                          double top, double bottom) {
    const std::size_t q =
        static_cast<std::size_t>(cells_per_side) * cells_per_side;
    if (raster.size() != q)
        throw ParameterError("raster size does not match cells_per_side^2");

    RasterScene out;
    out.mask.assign(q, false);
    out.magnitudes = VectorXd::Zero(static_cast<Eigen::Index>(q));

    double max_mag = 0.0;
    for (int row = 0; row < cells_per_side; ++row) {
        const double frac =
            cells_per_side > 1 ? double(row) / (cells_per_side - 1) : 0.0;
        const double profile = top + (bottom - top) * frac;
        for (int col = 0; col < cells_per_side; ++col) {
            const std::size_t i =
                static_cast<std::size_t>(row) * cells_per_side + col;
            if (raster[i] != 0) {
                out.mask[i] = true;
                out.magnitudes[static_cast<Eigen::Index>(i)] = profile;
                max_mag = std::max(max_mag, profile);
            }
        }
    }
    if (max_mag > 0.0) out.magnitudes /= max_mag;
    return out;
}

namespace {

std::vector<int> parse_raster_text(const std::string& text,
                                   const std::string& origin) {
    std::vector<int> bits;
    for (char c : text) {
        if (c == '0')
            bits.push_back(0);
        else if (c == '1')
            bits.push_back(1);
        else if (c != ' ' && c != '\t' && c != '\r' && c != '\n')
            throw ParameterError("invalid raster character in " + origin);
    }
    return bits;
}

} // namespace

RasterScene render_bitmap(const std::string& glyph, int cells_per_side,
                          double top, double bottom) {
    std::string text;
    if (glyph == "tub20") {
        text = builtin_glyph_tub20();
    } else {
        std::ifstream in(glyph);
        if (!in)
            throw IoError("cannot open raster file: " + glyph);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    return render_raster(parse_raster_text(text, glyph), cells_per_side, top,
                         bottom);
}

std::vector<MatrixXd> scene_to_images(const GroundTruthScene& scene) {
    const int cps = scene.cells_per_side;
    if (cps < 1 ||
        static_cast<Eigen::Index>(cps) * cps != scene.coeffs.rows())
        throw ParameterError("scene grid is not square");
    std::vector<MatrixXd> images;
    images.reserve(static_cast<std::size_t>(scene.coeffs.cols()));
    for (Eigen::Index n = 0; n < scene.coeffs.cols(); ++n) {
        MatrixXd img(cps, cps);
        for (int row = 0; row < cps; ++row)
            for (int col = 0; col < cps; ++col)
                img(row, col) = std::abs(
                    scene.coeffs(static_cast<Eigen::Index>(row) * cps + col, n));
        images.push_back(std::move(img));
    }
    return images;
}

const std::string& builtin_glyph_tub20() {
    static const std::string glyph =
        "00000000000000000000\n"
        "00000000000000000000\n"
        "00000000000000000000\n"
        "00000000000000000000\n"
        "01111101000101111000\n"
        "00010001000101000100\n"
        "00010001000101000100\n"
        "00010001000101000100\n"
        "00010001000101000100\n"
        "00010001000101111000\n"
        "00010001000101000100\n"
        "00010001000101000100\n"
        "00010001000101000100\n"
        "00010001000101000100\n"
        "00010001000101000100\n"
        "00010000111001111000\n"
        "00000000000000000000\n"
        "00000000000000000000\n"
        "00000000000000000000\n"
        "00000000000000000000\n";
    return glyph;
}

} // namespace nfwi
