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

#include "finite.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace thzqkd {

double pa_penalty(double block_key, double eps_smooth, double eps_pa,
                  int dim_hx) {
    if (!(block_key >= 1.0))
        throw std::domain_error("block_key: must be >= 1");
    if (!(eps_smooth > 0.0 && eps_smooth < 1.0))
        throw std::domain_error("eps_smooth: must be in (0, 1)");
    if (!(eps_pa > 0.0 && eps_pa < 1.0))
        throw std::domain_error("eps_pa: must be in (0, 1)");
    if (dim_hx < 1)
        throw std::domain_error("dim_hx: must be >= 1");
    const double first = (2.0 * dim_hx + 3.0) *
                         std::sqrt(std::log2(2.0 / eps_smooth) / block_key);
    const double second = (2.0 / block_key) * std::log2(1.0 / eps_pa);
    return first + second;
}

double worst_case_transmittance(double t, double eps, double l, double v_mod,
                                double z_pe, bool* clamped) {
    if (!(t > 0.0 && t <= 1.0))
        throw std::domain_error("transmittance: must be in (0, 1]");
    if (!(l >= 1.0))
        throw std::domain_error("block_est: must be >= 1");
    if (!(v_mod > 0.0))
        throw std::domain_error("mod_variance: must be > 0");
    if (!(z_pe >= 0.0))
        throw std::domain_error("z_pe: must be >= 0");
    const double root =
        std::sqrt(t) - z_pe * std::sqrt((1.0 + t * eps) / (l * v_mod));
    if (clamped) *clamped = root < 0.0;
    // A negative root would square into an inflated bound; floor at zero.
    if (root < 0.0) return 0.0;
    return root * root;
}

double worst_case_excess(double t, double eps, double l, double z_pe) {
    if (!(t > 0.0 && t <= 1.0))
        throw std::domain_error("transmittance: must be in (0, 1]");
    if (!(l >= 1.0))
        throw std::domain_error("block_est: must be >= 1");
    if (!(z_pe >= 0.0))
        throw std::domain_error("z_pe: must be >= 0");
    return eps + z_pe * (1.0 + t * eps) * std::sqrt(2.0) / (t * std::sqrt(l));
}

double worst_case_ancilla(double t_low, double eps_up) {
    if (!(t_low >= 0.0 && t_low < 1.0))
        throw std::domain_error("t_low: must be in [0, 1)");
    return t_low * eps_up / (1.0 - t_low) + 1.0;
}

WorstCaseBounds worst_case_bounds(double t, double eps, double l, double v_mod,
                                  double z_pe) {
    WorstCaseBounds b;
    b.t_low = worst_case_transmittance(t, eps, l, v_mod, z_pe, &b.clamped);
    b.eps_up = worst_case_excess(t, eps, l, z_pe);
    b.w_up = worst_case_ancilla(b.t_low, b.eps_up);
    return b;
}

FiniteKeyRateReport finite_mimo_key_rate(const ParallelChannelSet& channels,
                                         const SystemConfig& cfg,
                                         bool include_prefactor) {
    require_valid(cfg);
    const FiniteSizeConfig& fs = cfg.finite;
    const double l = fs.block_est();
    const double prefactor =
        include_prefactor ? fs.block_key / fs.block_total : 1.0;

    FiniteKeyRateReport report;
    report.r = channels.r;
    report.clamp_count = channels.clamp_count;
    report.prefactor = include_prefactor;
    report.delta_n =
        pa_penalty(fs.block_key, fs.eps_smooth, fs.eps_pa, fs.dim_hx);
    report.channels.reserve(channels.channels.size());

    for (const ChannelPair& pair : channels.channels) {
        FiniteChannelRecord rec;
        rec.true_pair = pair;
        const double eps_a = excess_noise_from_ancilla(pair.t_a, pair.w_a);
        const double eps_b = excess_noise_from_ancilla(pair.t_b, pair.w_b);
        rec.bounds_a =
            worst_case_bounds(pair.t_a, eps_a, l, cfg.mod_variance, fs.z_pe);
        rec.bounds_b =
            worst_case_bounds(pair.t_b, eps_b, l, cfg.mod_variance, fs.z_pe);

        if (rec.bounds_a.t_low <= 0.0 || rec.bounds_b.t_low <= 0.0) {
            // The one-way reduction diverges when a worst-case transmittance
            // floors at zero: no key is extractable from this channel at any
            // finite confidence.
            rec.bracket = -std::numeric_limits<double>::infinity();
            rec.contribution = rec.bracket;
            report.channels.push_back(rec);
            continue;
        }

        ChannelPair bounded;
        bounded.t_a = rec.bounds_a.t_low;
        bounded.t_b = rec.bounds_b.t_low;
        bounded.w_a = rec.bounds_a.w_up;
        bounded.w_b = rec.bounds_b.w_up;
        rec.bounded = channel_key_rate(bounded, cfg);
        rec.bracket = rec.bounded.rate - report.delta_n;
        rec.contribution = prefactor * rec.bracket;
        report.channels.push_back(rec);
    }

    if (report.channels.empty()) {
        report.total = 0.0;
        return report;
    }

    // Mirror the asymptotic summation: exact r * K_1 for identical tuples,
    // fixed-order Neumaier sum otherwise.
    bool identical = true;
    for (size_t i = 1; i < channels.channels.size(); ++i) {
        const ChannelPair& p = channels.channels[i];
        const ChannelPair& q = channels.channels[0];
        if (p.t_a != q.t_a || p.t_b != q.t_b || p.w_a != q.w_a ||
            p.w_b != q.w_b) {
            identical = false;
            break;
        }
    }
    if (identical) {
        report.total = static_cast<double>(report.channels.size()) *
                       report.channels[0].contribution;
        return report;
    }

    // A -inf contribution would poison the compensation terms with NaN.
    for (const FiniteChannelRecord& rec : report.channels) {
        if (std::isinf(rec.contribution)) {
            report.total = -std::numeric_limits<double>::infinity();
            return report;
        }
    }

    double sum = 0.0, compensation = 0.0;
    for (const FiniteChannelRecord& rec : report.channels) {
        const double t = sum + rec.contribution;
        if (std::abs(sum) >= std::abs(rec.contribution))
            compensation += (sum - t) + rec.contribution;
        else
            compensation += (rec.contribution - t) + sum;
        sum = t;
    }
    report.total = sum + compensation;
    return report;
}

}  // namespace thzqkd
