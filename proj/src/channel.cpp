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

#include "channel.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "rng.hpp"

namespace thzqkd {

namespace {

// Clamp a transmittance into [0, 1], counting when the clamp fires.
double clamp_t(double value, int& clamp_count) {
    if (value < 0.0) {
        ++clamp_count;
        return 0.0;
    }
    if (value > 1.0) {
        ++clamp_count;
        return 1.0;
    }
    return value;
}

}  // namespace

ComplexVector array_response(int n_antennas, double angle_rad,
                             double spacing_wl) {
    if (n_antennas < 1)
        throw std::domain_error("n_antennas: must be >= 1");
    if (!(spacing_wl > 0.0))
        throw std::domain_error("inter_antenna_spacing_wl: must be > 0");
    ComplexVector psi(n_antennas);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n_antennas));
    const double phase_step =
        2.0 * std::numbers::pi * spacing_wl * std::sin(angle_rad);
    for (int k = 0; k < n_antennas; ++k) {
        const double phase = phase_step * static_cast<double>(k);
        psi(k) = std::complex<double>(norm * std::cos(phase),
                                      norm * std::sin(phase));
    }
    return psi;
}

double path_loss(double frequency_hz, double distance_m,
                 double delta_db_per_km, int n_rx, int n_tx,
                 double antenna_element_gain) {
    if (!(frequency_hz > 0.0))
        throw std::domain_error("frequency_hz: must be > 0");
    if (!(distance_m > 0.0))
        throw std::domain_error("distance_m: must be > 0");
    if (n_rx < 1 || n_tx < 1)
        throw std::domain_error("antenna counts: must be >= 1");
    const double lambda = PhysicalConstants::light_speed / frequency_hz;
    const double fspl = lambda / (4.0 * std::numbers::pi * distance_m);
    const double absorption =
        std::pow(10.0, -delta_db_per_km * (distance_m / 1000.0) / 10.0);
    return antenna_element_gain * antenna_element_gain *
           static_cast<double>(n_rx) * static_cast<double>(n_tx) * fspl * fspl *
           absorption;
}

ChannelRealization synthesize_channel(const SystemConfig& cfg, Link link,
                                      std::uint64_t seed) {
    require_valid(cfg);
    const bool is_a = (link == Link::alice);
    const int n_tx = is_a ? cfg.n_tx_a : cfg.n_tx_b;
    const int n_rx = is_a ? cfg.n_rx_a : cfg.n_rx_b;
    const int n_paths = is_a ? cfg.multipath_a : cfg.multipath_b;
    const double dist = is_a ? cfg.distance_ac_m : cfg.distance_bc_m;
    const double gamma = path_loss(cfg.frequency_hz, dist,
                                   cfg.atmo_loss_db_per_km, n_rx, n_tx,
                                   cfg.antenna_element_gain);

    // One RNG stream per link so both links of a draw are independent.
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(link)));
    const double half_pi = 0.5 * std::numbers::pi;
    const double period = 1.0 / cfg.frequency_hz;
    const double amplitude = std::sqrt(gamma);

    ChannelRealization out;
    out.h = ComplexMatrix::Zero(n_rx, n_tx);
    out.paths.reserve(n_paths);
    for (int l = 0; l < n_paths; ++l) {
        PathDraw p;
        p.angle_tx = rng.uniform(-half_pi, half_pi);
        p.angle_rx = rng.uniform(-half_pi, half_pi);
        p.delay_s = rng.uniform(0.0, period);
        p.gamma = gamma;
        const double rot = 2.0 * std::numbers::pi * cfg.frequency_hz * p.delay_s;
        const std::complex<double> coeff(amplitude * std::cos(rot),
                                         amplitude * std::sin(rot));
        const ComplexVector psi_rx =
            array_response(n_rx, p.angle_rx, cfg.inter_antenna_spacing_wl);
        const ComplexVector psi_tx =
            array_response(n_tx, p.angle_tx, cfg.inter_antenna_spacing_wl);
        out.h += coeff * psi_rx * psi_tx.adjoint();
        out.paths.push_back(p);
    }
    return out;
}

SvdResult decompose(const ComplexMatrix& h) {
    if (!h.allFinite())
        throw std::domain_error("channel matrix: entries must be finite");
    Eigen::JacobiSVD<ComplexMatrix> svd(
        h, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SvdResult out;
    out.singular_values = svd.singularValues();  // Eigen sorts descending
    out.u = svd.matrixU();
    out.v = svd.matrixV();
    const double sigma1 = out.singular_values.size() > 0
                              ? out.singular_values(0)
                              : 0.0;
    const double threshold = sigma1 * 1e-12;
    int rank = 0;
    for (Eigen::Index i = 0; i < out.singular_values.size(); ++i)
        if (out.singular_values(i) > threshold) ++rank;
    out.numerical_rank = rank;
    return out;
}

ParallelChannelSet idealized_parallel_channels(const SystemConfig& cfg) {
    require_valid(cfg);
    const double gamma_a =
        path_loss(cfg.frequency_hz, cfg.distance_ac_m, cfg.atmo_loss_db_per_km,
                  cfg.n_rx_a, cfg.n_tx_a, cfg.antenna_element_gain);
    const double gamma_b =
        path_loss(cfg.frequency_hz, cfg.distance_bc_m, cfg.atmo_loss_db_per_km,
                  cfg.n_rx_b, cfg.n_tx_b, cfg.antenna_element_gain);
    const int r_a = std::min({cfg.n_tx_a, cfg.n_rx_a, cfg.multipath_a});
    const int r_b = std::min({cfg.n_tx_b, cfg.n_rx_b, cfg.multipath_b});

    ParallelChannelSet set;
    set.r = std::min(r_a, r_b);
    ChannelPair pair;
    pair.t_a = clamp_t(gamma_a, set.clamp_count);
    pair.t_b = clamp_t(gamma_b, set.clamp_count);
    pair.w_a = cfg.ancilla_variance;
    pair.w_b = cfg.ancilla_variance;
    // The clamp counter counts transmittance entries, one per channel and
    // link; the two counts above covered channel 1 only.
    const int per_channel_clamps = set.clamp_count;
    set.channels.assign(set.r, pair);
    set.clamp_count = per_channel_clamps * set.r;
    return set;
}

ParallelChannelSet realized_parallel_channels(const SystemConfig& cfg,
                                              std::uint64_t seed) {
    const ChannelRealization real_a = synthesize_channel(cfg, Link::alice, seed);
    const ChannelRealization real_b = synthesize_channel(cfg, Link::bob, seed);
    const SvdResult svd_a = decompose(real_a.h);
    const SvdResult svd_b = decompose(real_b.h);

    ParallelChannelSet set;
    set.realized = true;
    set.r = std::min(svd_a.numerical_rank, svd_b.numerical_rank);
    set.channels.reserve(set.r);
    for (int i = 0; i < set.r; ++i) {
        ChannelPair pair;
        const double sa = svd_a.singular_values(i);
        const double sb = svd_b.singular_values(i);
        pair.t_a = clamp_t(sa * sa, set.clamp_count);
        pair.t_b = clamp_t(sb * sb, set.clamp_count);
        pair.w_a = cfg.ancilla_variance;
        pair.w_b = cfg.ancilla_variance;
        set.channels.push_back(pair);
    }
    return set;
}

void write_matrix(std::ostream& os, const ComplexMatrix& h) {
    os << h.rows() << ' ' << h.cols() << '\n';
    char buf[80];
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
        for (Eigen::Index c = 0; c < h.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", h(r, c).real(),
                          h(r, c).imag());
            os << buf;
            if (c + 1 < h.cols()) os << ' ';
        }
        os << '\n';
    }
}

}  // namespace thzqkd
