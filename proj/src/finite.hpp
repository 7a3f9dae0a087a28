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

#ifndef THZQKD_FINITE_HPP
#define THZQKD_FINITE_HPP

#include <vector>

#include "channel.hpp"
#include "config.hpp"
#include "rates.hpp"

namespace thzqkd {

// Privacy-amplification penalty
//   Delta(N) = (2 dim_hx + 3) sqrt(log2(2/eps_smooth)/N) + (2/N) log2(1/eps_pa).
double pa_penalty(double block_key, double eps_smooth, double eps_pa,
                  int dim_hx);

// Worst-case channel estimates at confidence quantile z.
struct WorstCaseBounds {
    double t_low;   // T_L = (sqrt(T) - z sqrt((1+T eps)/(l V)))^2, floored at 0
    double eps_up;  // eps_U = eps + z (1+T eps) sqrt(2)/(T sqrt(l))
    double w_up;    // W_U = T_L eps_U/(1-T_L) + 1
    bool clamped;   // the T_L parenthesis went negative
};

double worst_case_transmittance(double t, double eps, double l, double v_mod,
                                double z_pe, bool* clamped = nullptr);
double worst_case_excess(double t, double eps, double l, double z_pe);
double worst_case_ancilla(double t_low, double eps_up);

WorstCaseBounds worst_case_bounds(double t, double eps, double l, double v_mod,
                                  double z_pe);

struct FiniteChannelRecord {
    ChannelPair true_pair;        // unbounded channel parameters
    ChannelRateRecord bounded;    // asymptotic pipeline on bounded parameters
    WorstCaseBounds bounds_a, bounds_b;
    double bracket = 0.0;         // bounded.rate - Delta(N)
    double contribution = 0.0;    // (N/M) * bracket when the prefactor is on
};

struct FiniteKeyRateReport {
    std::vector<FiniteChannelRecord> channels;
    double total = 0.0;
    double delta_n = 0.0;
    int r = 0;
    int clamp_count = 0;
    bool prefactor = true;
};

// Finite-size MIMO rate: per channel, bound each link's (T, eps) at the
// estimation block l = M - N, map to W_U, re-run the asymptotic pipeline on
// the bounded parameters, subtract Delta(N) and (optionally) scale by N/M.
// Channels whose T_L floors at 0 contribute -infinity (the reduction
// diverges); the driver treats non-positive totals as infeasible.
FiniteKeyRateReport finite_mimo_key_rate(const ParallelChannelSet& channels,
                                         const SystemConfig& cfg,
                                         bool include_prefactor = true);

}  // namespace thzqkd

#endif  // THZQKD_FINITE_HPP
