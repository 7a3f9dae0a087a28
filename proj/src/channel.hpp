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

#ifndef THZQKD_CHANNEL_HPP
#define THZQKD_CHANNEL_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "config.hpp"

namespace thzqkd {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

enum class Link { alice = 0, bob = 1 };

// One multipath component: departure/arrival angles, propagation delay and
// the (shared) power gain.
struct PathDraw {
    double angle_tx;  // phi^T, radians in [-pi/2, pi/2]
    double angle_rx;  // phi^R, radians in [-pi/2, pi/2]
    double delay_s;   // tau in [0, 1/f_c)
    double gamma;     // power gain, identical across paths
};

struct ChannelRealization {
    ComplexMatrix h;              // N_R x N_T
    std::vector<PathDraw> paths;  // length L
};

// Unit-norm ULA response: k-th entry (1/sqrt n) exp(j 2 pi spacing k sin a).
ComplexVector array_response(int n_antennas, double angle_rad, double spacing_wl);

// Free-space + atmospheric power gain
//   gamma = G_a^2 N_R N_T (lambda/(4 pi d))^2 10^(-delta (d/1000)/10).
// Throws std::domain_error at d = 0 (the short-range clamp is applied by the
// parallel-channel constructors, not here).
double path_loss(double frequency_hz, double distance_m, double delta_db_per_km,
                 int n_rx, int n_tx, double antenna_element_gain);

// Multipath superposition H = sum_l sqrt(gamma) e^{j 2 pi f tau_l}
// psi_R(phi_l^R) psi_T(phi_l^T)^dagger, with angles uniform on [-pi/2, pi/2]
// and delays uniform on [0, 1/f). Deterministic per (config, link, seed);
// per path the draw order is angle_tx, angle_rx, delay.
ChannelRealization synthesize_channel(const SystemConfig& cfg, Link link,
                                      std::uint64_t seed);

struct SvdResult {
    Eigen::VectorXd singular_values;  // descending
    ComplexMatrix u;                  // N_R x p
    ComplexMatrix v;                  // N_T x p
    int numerical_rank;               // sigma_i > sigma_1 * 1e-12
};

// Thin SVD with non-finite input rejection (std::domain_error).
SvdResult decompose(const ComplexMatrix& h);

struct ChannelPair {
    double t_a = 0.0, t_b = 0.0;  // transmittances in [0, 1]
    double w_a = 1.0, w_b = 1.0;  // ancilla variances (SNU)
};

struct ParallelChannelSet {
    std::vector<ChannelPair> channels;  // size r
    int r = 0;
    int clamp_count = 0;  // transmittance entries clamped into [0, 1]
    bool realized = false;
};

// Figure-reproduction mode: every channel of link X carries
// T = min(gamma_X, 1); r = min over links of min(N_T, N_R, L).
ParallelChannelSet idealized_parallel_channels(const SystemConfig& cfg);

// Draw both links, decompose, and pair singular channels by index.
// r = min of the numerical ranks.
ParallelChannelSet realized_parallel_channels(const SystemConfig& cfg,
                                              std::uint64_t seed);

// Text export: "rows cols" header, then row-major lines of "re,im" pairs
// separated by single spaces.
void write_matrix(std::ostream& os, const ComplexMatrix& h);

}  // namespace thzqkd

#endif  // THZQKD_CHANNEL_HPP
