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

#include "nfwi/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace nfwi {

std::string format_double(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    return in;
}

} // namespace

void write_pgm16(const MatrixXd& image, const std::string& path) {
    if (!image.allFinite())
        throw ParameterError("write_pgm16: image has non-finite values");
    auto out = open_out(path);
    out << "P5\n" << image.cols() << " " << image.rows() << "\n65535\n";
    const double peak = image.maxCoeff();
    const double scale = peak > 0.0 ? 65535.0 / peak : 0.0;
    for (Eigen::Index r = 0; r < image.rows(); ++r)
        for (Eigen::Index c = 0; c < image.cols(); ++c) {
            const auto v = static_cast<unsigned>(
                std::lround(std::max(0.0, image(r, c)) * scale));
            const unsigned clamped = std::min(v, 65535u);
            out.put(static_cast<char>(clamped >> 8));
            out.put(static_cast<char>(clamped & 0xff));
        }
    if (!out) throw IoError("failed writing image: " + path);
}

void write_matrix_csv(const MatrixXd& m, const std::string& path) {
    auto out = open_out(path);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ",";
            out << format_double(m(r, c));
        }
        out << "\n";
    }
    if (!out) throw IoError("failed writing csv: " + path);
}

MatrixXd read_matrix_csv(const std::string& path) {
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            row.push_back(std::strtod(cell.c_str(), nullptr));
        if (!rows.empty() && row.size() != rows.front().size())
            throw IoError("ragged csv: " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("empty csv: " + path);
    MatrixXd m(static_cast<Eigen::Index>(rows.size()),
               static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            m(r, c) = rows[static_cast<std::size_t>(r)]
                          [static_cast<std::size_t>(c)];
    return m;
}

void write_plan(const IlluminationPlan& plan, const std::string& path) {
    auto out = open_out(path);
    out << "# nfwi-plan " << plan.vectors.size() << " "
        << (plan.vectors.empty() ? 0 : plan.vectors.front().size()) << " "
        << format_double(plan.per_subcarrier_power) << " "
        << to_string(plan.mode) << "\n";
    for (const auto& x : plan.vectors) {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (i) out << " ";
            out << format_double(x[i].real()) << " "
                << format_double(x[i].imag());
        }
        out << "\n";
    }
    if (!out) throw IoError("failed writing plan: " + path);
}

IlluminationPlan read_plan(const std::string& path) {
    auto in = open_in(path);
    std::string tag;
    std::size_t n = 0, m_t = 0;
    std::string mode;
    IlluminationPlan plan;
    in >> tag >> tag; // "#", "nfwi-plan"
    if (tag != "nfwi-plan") throw IoError("not a plan file: " + path);
    in >> n >> m_t >> plan.per_subcarrier_power >> mode;
    plan.mode = illumination_mode_from_string(mode);
    plan.vectors.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        plan.vectors[k].resize(static_cast<Eigen::Index>(m_t));
        for (std::size_t i = 0; i < m_t; ++i) {
            double re = 0.0, im = 0.0;
            if (!(in >> re >> im))
                throw IoError("truncated plan file: " + path);
            plan.vectors[k][static_cast<Eigen::Index>(i)] = cxd(re, im);
        }
    }
    return plan;
}

void write_observations(const ObservationSet& obs, const std::string& path) {
    auto out = open_out(path);
    out << "# nfwi-observations " << obs.y.rows() << " " << obs.y.cols()
        << " " << format_double(obs.noise_power) << " "
        << format_double(obs.snr_db) << " " << obs.seed << "\n";
    for (Eigen::Index r = 0; r < obs.y.rows(); ++r) {
        for (Eigen::Index c = 0; c < obs.y.cols(); ++c) {
            if (c) out << " ";
            out << format_double(obs.y(r, c).real()) << " "
                << format_double(obs.y(r, c).imag());
        }
        out << "\n";
    }
    if (!out) throw IoError("failed writing observations: " + path);
}

ObservationSet read_observations(const std::string& path) {
    auto in = open_in(path);
    std::string tag;
    Eigen::Index rows = 0, cols = 0;
    ObservationSet obs;
    in >> tag >> tag;
    if (tag != "nfwi-observations")
        throw IoError("not an observation file: " + path);
    in >> rows >> cols >> obs.noise_power >> obs.snr_db >> obs.seed;
    obs.y.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            double re = 0.0, im = 0.0;
            if (!(in >> re >> im))
                throw IoError("truncated observation file: " + path);
            obs.y(r, c) = cxd(re, im);
        }
    return obs;
}

} // namespace nfwi
