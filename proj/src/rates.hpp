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

#ifndef THZQKD_RATES_HPP
#define THZQKD_RATES_HPP

#include <Eigen/Dense>
#include <vector>

#include "channel.hpp"
#include "config.hpp"

namespace thzqkd {

// Channel excess noise referred to the input: eps = (W(1-T) - 1)/T + 1.
// Domain: 0 < t <= 1, w >= 1.
double excess_noise_from_ancilla(double t, double w);

// Inverse map: W = (T(eps-1) + 1)/(1-T). Domain: 0 < t < 1.
double noise_variance_from_excess(double t, double eps);

// Relay gain minimizing the excess noise: g^2 = 2(V_B-1)/(T_B (V_B+1)).
// Domain: t_b > 0, v_b > 1.
double optimal_gain_sq(double t_b, double v_b);

// Reduction of the two-link relay protocol to one equivalent one-way channel.
struct OneWayEquivalent {
    double t_eq;      // T_i, truncated below 1 - 1e-12
    double eps_eq;    // eps_i (SNU)
    double w_hat;     // equivalent ancilla variance (SNU)
    double gain_sq;   // the g^2 used
    bool truncated;   // T_i hit the truncation ceiling
};

// Optimal-gain reduction: T_i = T_A (V_B-1)/(T_B (V_B+1));
// eps_i = eps_a + (2 + (eps_b - 2) T_B)/T_A + (1-eta_a)/eta_a + (1-eta_b)/eta_b.
OneWayEquivalent equivalent_one_way(double t_a, double t_b, double eps_a,
                                    double eps_b, double eta_a, double eta_b,
                                    double v_b);

// General-gain reduction: T_i = g^2 T_A / 2 and the excess-noise form with
// the (sqrt(2/(T_B g^2)) sqrt(V_B-1) - sqrt(V_B+1))^2 mismatch term. The
// mismatch vanishes at the optimal gain.
OneWayEquivalent equivalent_one_way_general(double t_a, double t_b,
                                            double eps_a, double eps_b,
                                            double eta_a, double eta_b,
                                            double v_b, double g_sq);

// Bosonic entropy f(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2).
// Domain: x >= 1 (inputs within 1e-9 below 1 are treated as 1).
double bosonic_entropy(double x);

// Channel-output mixing Lambda(X, Y) = T X + (1 - T) Y.
double lambda_mix(double t, double x, double y);

// Reconcilable mutual information
//   S = (1/2) log2(1 + T V_M / Lambda(V_O, W_hat)).
double mutual_information(double t_eq, double v_mod, double v_thermal,
                          double w_hat);

struct SymplecticSpectrum {
    double l1, l2, l3, l4;  // lambda_1..lambda_4
    double a, b;            // the quadratic invariants A, B of lambda_3,4
};

// Closed-form spectrum: l1 = W, l2 = Lambda(W, V_A) and l3,4 the roots
// sqrt((A +- sqrt(A^2 - 4B))/2). Evaluated through the exact factorization
// A = W(u+w), B = W^2 u w with u = V Lambda(W,V)/Lambda(V,W) and
// w = Lambda(WV,1)/Lambda(V,W), which makes A^2-4B = W^2 (u-w)^2 >= 0 free
// of cancellation at large V.
SymplecticSpectrum symplectic_eigenvalues_closed(double v_a, double w_hat,
                                                 double t_eq);

// Two-mode covariance in (x_A, p_A, x_B, p_B) ordering with blocks V_A I,
// sqrt(T(V_A^2-1)) Z, [T V_A + (1-T) W] I.
Eigen::Matrix4d covariance_ab(double v_a, double t_eq, double w_hat);

// Numeric symplectic spectrum |eig(i Omega gamma)| of a two-mode covariance,
// deduplicated to its two distinct values (descending). Test oracle.
std::pair<double, double> symplectic_eigenvalues_numeric(
    const Eigen::Matrix4d& cov);

// Holevo bound I_BE = f(l1) + f(l2) - f(l3) - f(l4); negatives within 1e-9
// of zero are clipped to 0.
double holevo_bound(const SymplecticSpectrum& s);

// Everything computed for one parallel channel.
struct ChannelRateRecord {
    double t_a = 0.0, t_b = 0.0;
    double t_eq = 0.0, eps_eq = 0.0, w_hat = 1.0;
    double s_ab = 0.0, i_be = 0.0;
    SymplecticSpectrum spectrum{};
    double rate = 0.0;  // beta * s_ab - i_be
    bool truncated = false;
};

// Full per-channel pipeline: link excess noises -> one-way reduction ->
// mutual information, spectrum, Holevo bound -> K = beta S - I.
ChannelRateRecord channel_key_rate(const ChannelPair& pair,
                                   const SystemConfig& cfg);

struct KeyRateReport {
    std::vector<ChannelRateRecord> channels;
    double total = 0.0;  // bits per channel use
    int r = 0;
    int clamp_count = 0;
};

// Sum of the per-channel rates. Identical channel tuples take the exact
// r * K_1 path; mixed sets use a fixed-order Neumaier compensated sum.
KeyRateReport mimo_key_rate(const ParallelChannelSet& channels,
                            const SystemConfig& cfg);

}  // namespace thzqkd

#endif  // THZQKD_RATES_HPP
