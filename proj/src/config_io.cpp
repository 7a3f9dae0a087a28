// SPDX-License-Identifier: Apache-2.0
//
// thzqkd — secret key rates for continuous-variable MDI QKD over THz MIMO links
// Copyright (C) 2026 thzqkd contributors
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

#include "config_io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace thzqkd {

namespace {

// Accessor pair for one schema entry.
struct FieldAccess {
    std::string_view name;
    bool integral;
    double (*get)(const SystemConfig&);
    void (*set)(SystemConfig&, double);
};

#define THZQKD_FIELD(key, expr)                                       \
    FieldAccess {                                                     \
        #key, false, [](const SystemConfig& c) -> double { return c.expr; }, \
            [](SystemConfig& c, double v) { c.expr = v; }             \
    }
#define THZQKD_FIELD_INT(key, expr)                                   \
    FieldAccess {                                                     \
        #key, true,                                                   \
            [](const SystemConfig& c) -> double {                     \
                return static_cast<double>(c.expr);                   \
            },                                                        \
            [](SystemConfig& c, double v) { c.expr = static_cast<int>(v); } \
    }

const FieldAccess kFields[] = {
    THZQKD_FIELD(frequency_hz, frequency_hz),
    THZQKD_FIELD(temperature_k, temperature_k),
    THZQKD_FIELD(distance_ac_m, distance_ac_m),
    THZQKD_FIELD(distance_bc_m, distance_bc_m),
    THZQKD_FIELD_INT(n_tx_a, n_tx_a),
    THZQKD_FIELD_INT(n_rx_a, n_rx_a),
    THZQKD_FIELD_INT(n_tx_b, n_tx_b),
    THZQKD_FIELD_INT(n_rx_b, n_rx_b),
    THZQKD_FIELD_INT(multipath_a, multipath_a),
    THZQKD_FIELD_INT(multipath_b, multipath_b),
    THZQKD_FIELD(atmo_loss_db_per_km, atmo_loss_db_per_km),
    THZQKD_FIELD(mod_variance, mod_variance),
    THZQKD_FIELD(ancilla_variance, ancilla_variance),
    THZQKD_FIELD(det_eff_a, det_eff_a),
    THZQKD_FIELD(det_eff_b, det_eff_b),
    THZQKD_FIELD(recon_eff, recon_eff),
    THZQKD_FIELD(antenna_element_gain, antenna_element_gain),
    THZQKD_FIELD(inter_antenna_spacing_wl, inter_antenna_spacing_wl),
    THZQKD_FIELD(block_total, finite.block_total),
    THZQKD_FIELD(block_key, finite.block_key),
    THZQKD_FIELD(eps_smooth, finite.eps_smooth),
    THZQKD_FIELD(eps_pa, finite.eps_pa),
    THZQKD_FIELD(z_pe, finite.z_pe),
    THZQKD_FIELD_INT(dim_hx, finite.dim_hx),
};

#undef THZQKD_FIELD
#undef THZQKD_FIELD_INT

const FieldAccess* find_field(std::string_view key) {
    for (const FieldAccess& f : kFields)
        if (f.name == key) return &f;
    return nullptr;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

}  // namespace

const std::vector<ConfigField>& config_fields() {
    static const std::vector<ConfigField> fields = [] {
        std::vector<ConfigField> v;
        for (const FieldAccess& f : kFields) v.push_back({f.name, f.integral});
        return v;
    }();
    return fields;
}

bool config_set_field(SystemConfig& cfg, std::string_view key, double value,
                      std::string* err) {
    const FieldAccess* f = find_field(key);
    if (!f) {
        if (err) *err = "unknown key: " + std::string(key);
        return false;
    }
    if (!std::isfinite(value)) {
        if (err) *err = std::string(key) + ": must be finite";
        return false;
    }
    if (f->integral &&
        (value != std::floor(value) || std::abs(value) > 2147483647.0)) {
        if (err) *err = std::string(key) + ": must be an integer";
        return false;
    }
    f->set(cfg, value);
    return true;
}

bool config_get_field(const SystemConfig& cfg, std::string_view key,
                      double* out) {
    const FieldAccess* f = find_field(key);
    if (!f) return false;
    if (out) *out = f->get(cfg);
    return true;
}

SystemConfig parse_config(std::istream& in) {
    SystemConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view s = trim(line);
        if (const auto hash = s.find('#'); hash != std::string_view::npos)
            s = trim(s.substr(0, hash));
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": expected key=value");
        const std::string_view key = trim(s.substr(0, eq));
        const std::string value_text(trim(s.substr(eq + 1)));
        if (key.empty() || value_text.empty())
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": expected key=value");
        char* end = nullptr;
        const double value = std::strtod(value_text.c_str(), &end);
        if (end == value_text.c_str() || *end != '\0')
            throw std::runtime_error("line " + std::to_string(line_no) + ": '" +
                                     value_text + "' is not a number");
        std::string err;
        if (!config_set_field(cfg, key, value, &err))
            throw std::runtime_error("line " + std::to_string(line_no) + ": " +
                                     err);
    }
    return cfg;
}

SystemConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    return parse_config(in);
}

}  // namespace thzqkd
