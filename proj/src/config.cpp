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

#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thzqkd {

SystemConfig SystemConfig::symmetric(int n_antennas, double frequency_hz,
                                     double distance_ab_m,
                                     double delta_db_per_km) {
    SystemConfig cfg;
    cfg.frequency_hz = frequency_hz;
    cfg.distance_ac_m = 0.5 * distance_ab_m;
    cfg.distance_bc_m = 0.5 * distance_ab_m;
    cfg.n_tx_a = cfg.n_rx_a = cfg.n_tx_b = cfg.n_rx_b = n_antennas;
    cfg.multipath_a = cfg.multipath_b = n_antennas;
    cfg.atmo_loss_db_per_km = delta_db_per_km;
    return cfg;
}

std::string validate_config(const SystemConfig& c) {
    if (!(c.frequency_hz > 0.0))
        return "frequency_hz: must be > 0";
    if (!(c.temperature_k > 0.0))
        return "temperature_k: must be > 0";
    if (!(c.distance_ac_m >= 0.0))
        return "distance_ac_m: must be >= 0";
    if (!(c.distance_bc_m >= 0.0))
        return "distance_bc_m: must be >= 0";
    if (c.n_tx_a < 1) return "n_tx_a: must be >= 1";
    if (c.n_rx_a < 1) return "n_rx_a: must be >= 1";
    if (c.n_tx_b < 1) return "n_tx_b: must be >= 1";
    if (c.n_rx_b < 1) return "n_rx_b: must be >= 1";
    if (c.multipath_a < 1) return "multipath_a: must be >= 1";
    if (c.multipath_a > std::min(c.n_tx_a, c.n_rx_a))
        return "multipath_a: exceeds min(n_tx_a, n_rx_a)";
    if (c.multipath_b < 1) return "multipath_b: must be >= 1";
    if (c.multipath_b > std::min(c.n_tx_b, c.n_rx_b))
        return "multipath_b: exceeds min(n_tx_b, n_rx_b)";
    if (!(c.atmo_loss_db_per_km >= 0.0))
        return "atmo_loss_db_per_km: must be >= 0";
    if (!(c.mod_variance > 0.0))
        return "mod_variance: must be > 0";
    if (!(c.ancilla_variance >= 1.0))
        return "ancilla_variance: must be >= 1 (shot-noise units)";
    if (!(c.det_eff_a > 0.0 && c.det_eff_a <= 1.0))
        return "det_eff_a: must be in (0, 1]";
    if (!(c.det_eff_b > 0.0 && c.det_eff_b <= 1.0))
        return "det_eff_b: must be in (0, 1]";
    if (!(c.recon_eff >= 0.0 && c.recon_eff <= 1.0))
        return "recon_eff: must be in [0, 1]";
    if (!(c.antenna_element_gain > 0.0))
        return "antenna_element_gain: must be > 0";
    if (!(c.inter_antenna_spacing_wl > 0.0))
        return "inter_antenna_spacing_wl: must be > 0";
    const FiniteSizeConfig& f = c.finite;
    if (!(f.block_total >= 2.0))
        return "block_total: must be >= 2";
    if (!(f.block_key >= 1.0 && f.block_key < f.block_total))
        return "block_key: must satisfy 1 <= N < M";
    if (!(f.eps_smooth > 0.0 && f.eps_smooth < 1.0))
        return "eps_smooth: must be in (0, 1)";
    if (!(f.eps_pa > 0.0 && f.eps_pa < 1.0))
        return "eps_pa: must be in (0, 1)";
    if (!(f.z_pe > 0.0))
        return "z_pe: must be > 0";
    if (f.dim_hx != 2)
        return "dim_hx: must be 2";
    return {};
}

void require_valid(const SystemConfig& cfg) {
    const std::string msg = validate_config(cfg);
    if (!msg.empty()) throw std::invalid_argument(msg);
}

double thermal_photon_number(double frequency_hz, double temperature_k) {
    if (!(frequency_hz > 0.0))
        throw std::domain_error("frequency_hz: must be > 0");
    if (!(temperature_k > 0.0))
        throw std::domain_error("temperature_k: must be > 0");
    const double x = PhysicalConstants::planck * frequency_hz /
                     (PhysicalConstants::boltzmann * temperature_k);
    return 1.0 / std::expm1(x);
}

SourceVariances source_variances(double mod_variance, double frequency_hz,
                                 double temperature_k) {
    if (!(mod_variance > 0.0))
        throw std::domain_error("mod_variance: must be > 0");
    const double nbar = thermal_photon_number(frequency_hz, temperature_k);
    SourceVariances v;
    v.v_mod = mod_variance;
    v.v_thermal = 2.0 * nbar + 1.0;
    v.v_total = v.v_mod + v.v_thermal;
    return v;
}

}  // namespace thzqkd
