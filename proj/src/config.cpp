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

#include "nfwi/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace nfwi {

using nlohmann::json;

namespace {

void expect_keys(const json& obj, const std::string& where,
                 const std::set<std::string>& allowed) {
    if (!obj.is_object())
        throw ConfigError(where + ": expected an object");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw ConfigError(where + ": unknown key '" + item.key() + "'");
}

template <typename T>
void get_to(const json& obj, const std::string& key, T& out) {
    if (obj.contains(key)) obj.at(key).get_to(out);
}

void get_vec2(const json& obj, const std::string& key, Vector2d& out) {
    if (!obj.contains(key)) return;
    const auto& arr = obj.at(key);
    if (!arr.is_array() || arr.size() != 2)
        throw ConfigError(key + ": expected [x, y]");
    out.x() = arr.at(0).get<double>();
    out.y() = arr.at(1).get<double>();
}

void parse_geometry(const json& obj, GeometryConfig& g) {
    expect_keys(obj, "geometry",
                {"tx_center", "rx_center", "m_tx", "m_rx", "spacing_m",
                 "carrier_hz", "subcarrier_spacing_hz", "n_subcarriers",
                 "roi_center", "roi_side_m", "cells_per_side", "orientation"});
    get_vec2(obj, "tx_center", g.tx_center);
    get_vec2(obj, "rx_center", g.rx_center);
    get_to(obj, "m_tx", g.m_tx);
    get_to(obj, "m_rx", g.m_rx);
    get_to(obj, "spacing_m", g.spacing_m);
    get_to(obj, "carrier_hz", g.carrier_hz);
    get_to(obj, "subcarrier_spacing_hz", g.subcarrier_spacing_hz);
    get_to(obj, "n_subcarriers", g.n_subcarriers);
    get_vec2(obj, "roi_center", g.roi_center);
    get_to(obj, "roi_side_m", g.roi_side_m);
    get_to(obj, "cells_per_side", g.cells_per_side);
    get_vec2(obj, "orientation", g.orientation);
}

void parse_scene(const json& obj, SceneConfig& s) {
    expect_keys(obj, "scene",
                {"raster", "psi", "magnitude_top", "magnitude_bottom"});
    get_to(obj, "raster", s.raster);
    get_to(obj, "psi", s.psi);
    get_to(obj, "magnitude_top", s.magnitude_top);
    get_to(obj, "magnitude_bottom", s.magnitude_bottom);
    if (!(std::abs(s.psi) < 1.0))
        throw ConfigError("scene.psi must satisfy |psi| < 1");
}

void parse_illumination(const json& obj, IlluminationConfig& il) {
    expect_keys(obj, "illumination",
                {"modes", "total_power", "ipm_focus", "ipm", "plan_cache_dir"});
    if (obj.contains("modes")) {
        il.modes.clear();
        for (const auto& m : obj.at("modes"))
            il.modes.push_back(
                illumination_mode_from_string(m.get<std::string>()));
        if (il.modes.empty())
            throw ConfigError("illumination.modes must be non-empty");
    }
    get_to(obj, "total_power", il.total_power);
    if (il.total_power <= 0.0)
        throw ConfigError("illumination.total_power must be positive");
    if (obj.contains("ipm_focus")) {
        const auto& f = obj.at("ipm_focus");
        if (f.is_string()) {
            if (f.get<std::string>() != "quadrants")
                throw ConfigError("illumination.ipm_focus: unknown preset");
            il.ipm_focus.clear();
        } else {
            il.ipm_focus = f.get<std::vector<std::vector<int>>>();
        }
    }
    if (obj.contains("ipm")) {
        const auto& s = obj.at("ipm");
        expect_keys(s, "illumination.ipm",
                    {"eps_rel", "max_sca_iter", "rel_change_tol",
                     "sdp_max_iter", "sdp_feas_tol"});
        get_to(s, "eps_rel", il.ipm.eps_rel);
        get_to(s, "max_sca_iter", il.ipm.max_sca_iter);
        get_to(s, "rel_change_tol", il.ipm.rel_change_tol);
        get_to(s, "sdp_max_iter", il.ipm.sdp.max_iter);
        get_to(s, "sdp_feas_tol", il.ipm.sdp.feas_tol);
    }
    get_to(obj, "plan_cache_dir", il.plan_cache_dir);
}

void parse_solver(const json& obj, SolverConfig& s) {
    expect_keys(obj, "solver",
                {"tol", "max_iter", "ar1_projection", "gamma_floor_rel"});
    get_to(obj, "tol", s.tol);
    get_to(obj, "max_iter", s.max_iter);
    get_to(obj, "ar1_projection", s.ar1_projection);
    get_to(obj, "gamma_floor_rel", s.gamma_floor_rel);
    if (s.tol <= 0.0 || s.max_iter < 1)
        throw ConfigError("solver: tol must be > 0 and max_iter >= 1");
}

void parse_metrics(const json& obj, SsimParams& m) {
    expect_keys(obj, "metrics", {"ssim_sigma", "ssim_radius", "k1", "k2"});
    get_to(obj, "ssim_sigma", m.sigma);
    get_to(obj, "ssim_radius", m.radius);
    get_to(obj, "k1", m.k1);
    get_to(obj, "k2", m.k2);
}

void parse_output(const json& obj, OutputConfig& o) {
    expect_keys(obj, "output", {"dir", "images", "diagnostics"});
    get_to(obj, "dir", o.dir);
    get_to(obj, "images", o.images);
    get_to(obj, "diagnostics", o.diagnostics);
}

} // namespace

ExperimentConfig parse_config_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    expect_keys(root, "config",
                {"geometry", "scene", "illumination", "snr_db", "seeds",
                 "solver", "metrics", "output", "jobs"});

    ExperimentConfig c;
    if (root.contains("geometry")) parse_geometry(root.at("geometry"), c.geometry);
    if (root.contains("scene")) parse_scene(root.at("scene"), c.scene);
    if (root.contains("illumination"))
        parse_illumination(root.at("illumination"), c.illumination);
    if (root.contains("snr_db")) {
        c.snr_db = root.at("snr_db").get<std::vector<double>>();
        if (c.snr_db.empty()) throw ConfigError("snr_db must be non-empty");
    }
    if (root.contains("seeds")) {
        c.seeds = root.at("seeds").get<std::vector<std::uint64_t>>();
        if (c.seeds.empty()) throw ConfigError("seeds must be non-empty");
    }
    if (root.contains("solver")) parse_solver(root.at("solver"), c.solver);
    if (root.contains("metrics")) parse_metrics(root.at("metrics"), c.metrics);
    if (root.contains("output")) parse_output(root.at("output"), c.output);
    get_to(root, "jobs", c.jobs);
    if (c.jobs < 1) throw ConfigError("jobs must be >= 1");
    return c;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

std::string config_to_json(const ExperimentConfig& c) {
    json root;
    root["geometry"] = {
        {"tx_center", {c.geometry.tx_center.x(), c.geometry.tx_center.y()}},
        {"rx_center", {c.geometry.rx_center.x(), c.geometry.rx_center.y()}},
        {"m_tx", c.geometry.m_tx},
        {"m_rx", c.geometry.m_rx},
        {"spacing_m", c.geometry.spacing_m},
        {"carrier_hz", c.geometry.carrier_hz},
        {"subcarrier_spacing_hz", c.geometry.subcarrier_spacing_hz},
        {"n_subcarriers", c.geometry.n_subcarriers},
        {"roi_center", {c.geometry.roi_center.x(), c.geometry.roi_center.y()}},
        {"roi_side_m", c.geometry.roi_side_m},
        {"cells_per_side", c.geometry.cells_per_side},
        {"orientation",
         {c.geometry.orientation.x(), c.geometry.orientation.y()}}};
    root["scene"] = {{"raster", c.scene.raster},
                     {"psi", c.scene.psi},
                     {"magnitude_top", c.scene.magnitude_top},
                     {"magnitude_bottom", c.scene.magnitude_bottom}};
    json modes = json::array();
    for (auto m : c.illumination.modes) modes.push_back(to_string(m));
    root["illumination"] = {
        {"modes", modes},
        {"total_power", c.illumination.total_power},
        {"ipm",
         {{"eps_rel", c.illumination.ipm.eps_rel},
          {"max_sca_iter", c.illumination.ipm.max_sca_iter},
          {"rel_change_tol", c.illumination.ipm.rel_change_tol},
          {"sdp_max_iter", c.illumination.ipm.sdp.max_iter},
          {"sdp_feas_tol", c.illumination.ipm.sdp.feas_tol}}},
        {"plan_cache_dir", c.illumination.plan_cache_dir}};
    if (c.illumination.ipm_focus.empty())
        root["illumination"]["ipm_focus"] = "quadrants";
    else
        root["illumination"]["ipm_focus"] = c.illumination.ipm_focus;
    root["snr_db"] = c.snr_db;
    root["seeds"] = c.seeds;
    root["solver"] = {{"tol", c.solver.tol},
                      {"max_iter", c.solver.max_iter},
                      {"ar1_projection", c.solver.ar1_projection},
                      {"gamma_floor_rel", c.solver.gamma_floor_rel}};
    root["metrics"] = {{"ssim_sigma", c.metrics.sigma},
                       {"ssim_radius", c.metrics.radius},
                       {"k1", c.metrics.k1},
                       {"k2", c.metrics.k2}};
    root["output"] = {{"dir", c.output.dir},
                      {"images", c.output.images},
                      {"diagnostics", c.output.diagnostics}};
    root["jobs"] = c.jobs;
    return root.dump(2) + "\n";
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return config_to_json(a) == config_to_json(b);
}

} // namespace nfwi
