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

#ifndef THZQKD_CONFIG_HPP
#define THZQKD_CONFIG_HPP

#include <string>

namespace thzqkd {

// Unit conventions used throughout: variances in shot-noise units (vacuum
// variance = 1), distances in meters, atmospheric loss in dB per kilometer,
// frequencies in Hz, temperatures in Kelvin.

struct PhysicalConstants {
    static constexpr double planck = 6.626e-34;     // J s
    static constexpr double boltzmann = 1.38e-23;   // J/K
    static constexpr double light_speed = 2.998e8;  // m/s
};

// Finite-size protocol parameters. block_est (the symbols spent on parameter
// estimation) is derived: l = M - N.
struct FiniteSizeConfig {
    double block_total = 2e6;  // M
    double block_key = 1e6;    // N
    double eps_smooth = 1e-10; // smoothing epsilon
    double eps_pa = 1e-10;     // privacy-amplification epsilon
    double z_pe = 6.5;         // confidence quantile z
    int dim_hx = 2;            // key Hilbert-space dimension

    double block_est() const { return block_total - block_key; }
};

// All physical and protocol parameters of one simulated link pair.
struct SystemConfig {
    double frequency_hz = 1e11;        // carrier f_c
    double temperature_k = 300.0;      // atmospheric temperature
    double distance_ac_m = 0.5;        // Alice-Charlie leg
    double distance_bc_m = 0.5;        // Bob-Charlie leg
    int n_tx_a = 1, n_rx_a = 1;        // Alice->Charlie array sizes
    int n_tx_b = 1, n_rx_b = 1;        // Bob->Charlie array sizes
    int multipath_a = 1, multipath_b = 1;  // path counts L_A, L_B
    double atmo_loss_db_per_km = 0.6;  // delta
    double mod_variance = 1e5;         // V_M (SNU)
    double ancilla_variance = 1.0;     // W (SNU)
    double det_eff_a = 1.0, det_eff_b = 1.0;  // homodyne efficiencies
    double recon_eff = 1.0;            // reconciliation efficiency beta
    double antenna_element_gain = 30.0;        // G_a
    double inter_antenna_spacing_wl = 0.5;     // ULA spacing in wavelengths
    FiniteSizeConfig finite;

    // The symmetric scenario used by every figure: n antennas on all four
    // arrays, full multipath L = n, and Charlie exactly halfway.
    static SystemConfig symmetric(int n_antennas, double frequency_hz,
                                  double distance_ab_m, double delta_db_per_km);

    double distance_ab() const { return distance_ac_m + distance_bc_m; }
};

// Empty string when every invariant holds; otherwise "<field>: <why>" for the
// first violated invariant, checked in declaration order.
std::string validate_config(const SystemConfig& cfg);

// Throwing wrapper used by internal entry points.
void require_valid(const SystemConfig& cfg);

// Mean thermal photon number nbar = 1/(exp(h f/(k_B T)) - 1).
// Throws std::domain_error unless f > 0 and T > 0.
double thermal_photon_number(double frequency_hz, double temperature_k);

// Source variance decomposition: V = V_M + V_O with V_O = 2 nbar + 1.
struct SourceVariances {
    double v_mod;      // modulation part V_M
    double v_thermal;  // thermal part V_O = 2 nbar + 1
    double v_total;    // V = V_M + V_O
};

SourceVariances source_variances(double mod_variance, double frequency_hz,
                                 double temperature_k);

}  // namespace thzqkd

#endif  // THZQKD_CONFIG_HPP
