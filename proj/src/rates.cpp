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

#include "rates.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace thzqkd {

namespace {

constexpr double kTruncationCeiling = 1.0 - 1e-12;

// Merge a per-channel pair into the one-way reduction shared by the optimal
// and general gain paths.
OneWayEquivalent finish_reduction(double t_eq, double eps_eq, double g_sq) {
    OneWayEquivalent eq;
    eq.truncated = false;
    if (t_eq >= kTruncationCeiling) {
        // The pole of W(T) at T = 1 is an artifact of the reduction;
        // truncating keeps the pipeline continuous.
        t_eq = kTruncationCeiling;
        eq.truncated = true;
    }
    eq.t_eq = t_eq;
    eq.eps_eq = eps_eq;
    eq.w_hat = noise_variance_from_excess(t_eq, eps_eq);
    eq.gain_sq = g_sq;
    return eq;
}

}  // namespace

double excess_noise_from_ancilla(double t, double w) {
    if (!(t > 0.0 && t <= 1.0))
        throw std::domain_error("transmittance: must be in (0, 1]");
    if (!(w >= 1.0))
        throw std::domain_error("ancilla_variance: must be >= 1");
    return (w * (1.0 - t) - 1.0) / t + 1.0;
}

double noise_variance_from_excess(double t, double eps) {
    if (!(t > 0.0 && t < 1.0))
        throw std::domain_error("transmittance: must be in (0, 1)");
    return (t * (eps - 1.0) + 1.0) / (1.0 - t);
}

double optimal_gain_sq(double t_b, double v_b) {
    if (!(t_b > 0.0))
        throw std::domain_error("t_b: must be > 0");
    if (!(v_b > 1.0))
        throw std::domain_error("v_b: must be > 1");
    return 2.0 * (v_b - 1.0) / (t_b * (v_b + 1.0));
}

OneWayEquivalent equivalent_one_way(double t_a, double t_b, double eps_a,
                                    double eps_b, double eta_a, double eta_b,
                                    double v_b) {
    if (!(t_a > 0.0 && t_a <= 1.0))
        throw std::domain_error("t_a: must be in (0, 1]");
    if (!(t_b > 0.0 && t_b <= 1.0))
        throw std::domain_error("t_b: must be in (0, 1]");
    if (!(eta_a > 0.0 && eta_a <= 1.0))
        throw std::domain_error("det_eff_a: must be in (0, 1]");
    if (!(eta_b > 0.0 && eta_b <= 1.0))
        throw std::domain_error("det_eff_b: must be in (0, 1]");
    const double g_sq = optimal_gain_sq(t_b, v_b);
    const double t_eq = t_a * (v_b - 1.0) / (t_b * (v_b + 1.0));
    const double eps_eq = eps_a + (2.0 + (eps_b - 2.0) * t_b) / t_a +
                          (1.0 - eta_a) / eta_a + (1.0 - eta_b) / eta_b;
    return finish_reduction(t_eq, eps_eq, g_sq);
}

OneWayEquivalent equivalent_one_way_general(double t_a, double t_b,
                                            double eps_a, double eps_b,
                                            double eta_a, double eta_b,
                                            double v_b, double g_sq) {
    if (!(t_a > 0.0 && t_a <= 1.0))
        throw std::domain_error("t_a: must be in (0, 1]");
    if (!(t_b > 0.0 && t_b <= 1.0))
        throw std::domain_error("t_b: must be in (0, 1]");
    if (!(eta_a > 0.0 && eta_a <= 1.0))
        throw std::domain_error("det_eff_a: must be in (0, 1]");
    if (!(eta_b > 0.0 && eta_b <= 1.0))
        throw std::domain_error("det_eff_b: must be in (0, 1]");
    if (!(g_sq > 0.0))
        throw std::domain_error("g_sq: must be > 0");
    if (!(v_b > 1.0))
        throw std::domain_error("v_b: must be > 1");
    const double t_eq = 0.5 * g_sq * t_a;
    const double mismatch = std::sqrt(2.0 / (t_b * g_sq)) * std::sqrt(v_b - 1.0) -
                            std::sqrt(v_b + 1.0);
    const double eps_eq = (t_b / t_a) * mismatch * mismatch + eps_a +
                          (2.0 + (eps_b - 2.0) * t_b) / t_a +
                          (1.0 - eta_b) / eta_b + (1.0 - eta_a) / eta_a;
    return finish_reduction(t_eq, eps_eq, g_sq);
}

double bosonic_entropy(double x) {
    if (x < 1.0) {
        if (x > 1.0 - 1e-9)
            x = 1.0;  // float dust from bound maps like W_U -> 1
        else
            throw std::domain_error(
                "bosonic_entropy: argument must be >= 1 (unphysical "
                "symplectic eigenvalue)");
    }
    const double u = 0.5 * (x + 1.0);
    const double v = 0.5 * (x - 1.0);
    // v log2 v -> 0 as v -> 0; guard the indeterminate 0*log(0).
    const double low = (v > 0.0) ? v * std::log2(v) : 0.0;
    return u * std::log2(u) - low;
}

double lambda_mix(double t, double x, double y) {
    return t * x + (1.0 - t) * y;
}

double mutual_information(double t_eq, double v_mod, double v_thermal,
                          double w_hat) {
    if (!(t_eq > 0.0 && t_eq < 1.0))
        throw std::domain_error("t_eq: must be in (0, 1)");
    if (!(v_mod >= 0.0))
        throw std::domain_error("mod_variance: must be >= 0");
    const double noise = lambda_mix(t_eq, v_thermal, w_hat);
    return 0.5 * std::log2(1.0 + t_eq * v_mod / noise);
}

SymplecticSpectrum symplectic_eigenvalues_closed(double v_a, double w_hat,
                                                 double t_eq) {
    if (!(v_a > 1.0))
        throw std::domain_error("v_a: must be > 1");
    if (!(w_hat >= 1.0))
        throw std::domain_error("w_hat: must be >= 1");
    if (!(t_eq > 0.0 && t_eq < 1.0))
        throw std::domain_error("t_eq: must be in (0, 1)");

    SymplecticSpectrum s;
    s.l1 = w_hat;
    s.l2 = lambda_mix(t_eq, w_hat, v_a);

    // lambda_3,4 = sqrt((A +- sqrt(A^2 - 4B))/2) with
    //   A = W (u + w),  B = W^2 u w,
    //   u = V Lambda(W, V) / Lambda(V, W),  w = Lambda(W V, 1) / Lambda(V, W).
    // Then A^2 - 4B = W^2 (u - w)^2 exactly, and
    //   u - w = (1 - T)(V^2 - 1)/Lambda(V, W) >= 0,
    // so the roots are sqrt(W u) and sqrt(W w) with no cancellation.
    const double denom = lambda_mix(t_eq, v_a, w_hat);
    const double u = v_a * lambda_mix(t_eq, w_hat, v_a) / denom;
    const double w = lambda_mix(t_eq, w_hat * v_a, 1.0) / denom;
    s.a = w_hat * (u + w);
    s.b = w_hat * w_hat * u * w;
    const double hi = std::max(u, w);
    const double lo = std::min(u, w);
    s.l3 = std::sqrt(w_hat * hi);
    s.l4 = std::sqrt(w_hat * lo);
    return s;
}

Eigen::Matrix4d covariance_ab(double v_a, double t_eq, double w_hat) {
    if (!(v_a >= 1.0))
        throw std::domain_error("v_a: must be >= 1");
    if (!(t_eq >= 0.0 && t_eq <= 1.0))
        throw std::domain_error("t_eq: must be in [0, 1]");
    const double c = std::sqrt(t_eq * (v_a * v_a - 1.0));
    const double b = lambda_mix(t_eq, v_a, w_hat);
    Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
    g(0, 0) = g(1, 1) = v_a;
    g(2, 2) = g(3, 3) = b;
    g(0, 2) = g(2, 0) = c;
    g(1, 3) = g(3, 1) = -c;
    return g;
}

std::pair<double, double> symplectic_eigenvalues_numeric(
    const Eigen::Matrix4d& cov) {
    if (!cov.isApprox(cov.transpose(), 1e-12))
        throw std::domain_error("covariance: must be symmetric");
    // Omega is the symplectic form of two modes in (x1,p1,x2,p2) ordering.
    Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
    omega(0, 1) = 1.0;
    omega(1, 0) = -1.0;
    omega(2, 3) = 1.0;
    omega(3, 2) = -1.0;
    const Eigen::Matrix4cd m =
        std::complex<double>(0.0, 1.0) * (omega * cov).cast<std::complex<double>>();
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(m, false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("symplectic eigensolver failed");
    std::array<double, 4> mags;
    for (int i = 0; i < 4; ++i) mags[i] = std::abs(solver.eigenvalues()(i));
    std::sort(mags.begin(), mags.end(), std::greater<>());
    // The spectrum comes in +-nu pairs; the two distinct magnitudes are the
    // symplectic eigenvalues.
    return {0.5 * (mags[0] + mags[1]), 0.5 * (mags[2] + mags[3])};
}

double holevo_bound(const SymplecticSpectrum& s) {
    double i_be = bosonic_entropy(s.l1) + bosonic_entropy(s.l2) -
                  bosonic_entropy(s.l3) - bosonic_entropy(s.l4);
    if (i_be < 0.0 && i_be > -1e-9) i_be = 0.0;
    return i_be;
}

ChannelRateRecord channel_key_rate(const ChannelPair& pair,
                                   const SystemConfig& cfg) {
    const SourceVariances var = source_variances(
        cfg.mod_variance, cfg.frequency_hz, cfg.temperature_k);
    const double eps_a = excess_noise_from_ancilla(pair.t_a, pair.w_a);
    const double eps_b = excess_noise_from_ancilla(pair.t_b, pair.w_b);
    const OneWayEquivalent eq =
        equivalent_one_way(pair.t_a, pair.t_b, eps_a, eps_b, cfg.det_eff_a,
                           cfg.det_eff_b, var.v_total);

    ChannelRateRecord rec;
    rec.t_a = pair.t_a;
    rec.t_b = pair.t_b;
    rec.t_eq = eq.t_eq;
    rec.eps_eq = eq.eps_eq;
    rec.w_hat = eq.w_hat;
    rec.truncated = eq.truncated;
    rec.s_ab = mutual_information(eq.t_eq, var.v_mod, var.v_thermal, eq.w_hat);
    rec.spectrum = symplectic_eigenvalues_closed(var.v_total, eq.w_hat, eq.t_eq);
    rec.i_be = holevo_bound(rec.spectrum);
    rec.rate = cfg.recon_eff * rec.s_ab - rec.i_be;
    return rec;
}

KeyRateReport mimo_key_rate(const ParallelChannelSet& channels,
                            const SystemConfig& cfg) {
    KeyRateReport report;
    report.r = channels.r;
    report.clamp_count = channels.clamp_count;
    report.channels.reserve(channels.channels.size());
    for (const ChannelPair& pair : channels.channels)
        report.channels.push_back(channel_key_rate(pair, cfg));

    if (report.channels.empty()) {
        report.total = 0.0;
        return report;
    }

    // Idealized sets carry identical tuples; their sum is exactly r * K_1.
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
        report.total =
            static_cast<double>(report.channels.size()) * report.channels[0].rate;
        return report;
    }

    // Fixed-order Neumaier compensated sum keeps the total independent of
    // any parallel evaluation of the per-channel records.
    double sum = 0.0, compensation = 0.0;
    for (const ChannelRateRecord& rec : report.channels) {
        const double t = sum + rec.rate;
        if (std::abs(sum) >= std::abs(rec.rate))
            compensation += (sum - t) + rec.rate;
        else
            compensation += (rec.rate - t) + sum;
        sum = t;
    }
    report.total = sum + compensation;
    return report;
}

}  // namespace thzqkd
