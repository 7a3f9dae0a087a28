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

#include "estimators.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "rng.hpp"

namespace thzqkd {

SampleBatch simulate_samples(double t, double sigma2, double v_mod,
                             std::size_t k, std::uint64_t seed) {
    if (!(sigma2 >= 0.0))
        throw std::domain_error("sigma2: must be >= 0");
    if (!(v_mod > 0.0))
        throw std::domain_error("v_mod: must be > 0");
    if (k < 2)
        throw std::domain_error("k: must be >= 2");
    Rng rng(seed);
    const double sd_x = std::sqrt(v_mod);
    const double sd_z = std::sqrt(sigma2);
    SampleBatch batch;
    batch.v_mod = v_mod;
    batch.x.resize(k);
    batch.y.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double x = sd_x * rng.normal();
        const double z = (sd_z > 0.0) ? sd_z * rng.normal() : 0.0;
        batch.x[i] = x;
        batch.y[i] = t * x + z;
    }
    return batch;
}

MleResult mle_estimate(const SampleBatch& batch, double z_pe) {
    if (batch.x.size() != batch.y.size() || batch.x.size() < 2)
        throw std::domain_error("batch: x and y must share a length >= 2");
    if (!(batch.v_mod > 0.0))
        throw std::domain_error("batch: v_mod must be > 0");
    if (!(z_pe >= 0.0))
        throw std::domain_error("z_pe: must be >= 0");
    const std::size_t k = batch.x.size();
    double sum_xx = 0.0, sum_xy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sum_xx += batch.x[i] * batch.x[i];
        sum_xy += batch.x[i] * batch.y[i];
    }
    if (!(sum_xx > 0.0))
        throw std::domain_error("batch: sum of x^2 must be positive");

    MleResult res;
    res.k = k;
    res.v_mod = batch.v_mod;
    res.t_hat = sum_xy / sum_xx;
    double sum_r2 = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double r = batch.y[i] - res.t_hat * batch.x[i];
        sum_r2 += r * r;
    }
    res.sigma2_hat = sum_r2 / static_cast<double>(k);

    const double l = static_cast<double>(k);
    const double half_t = z_pe * std::sqrt(res.sigma2_hat / (l * batch.v_mod));
    const double half_s = z_pe * res.sigma2_hat * std::sqrt(2.0) / std::sqrt(l);
    res.t_ci_lo = res.t_hat - half_t;
    res.t_ci_hi = res.t_hat + half_t;
    res.sigma2_ci_lo = res.sigma2_hat - half_s;
    res.sigma2_ci_hi = res.sigma2_hat + half_s;
    return res;
}

EstimatorStats estimator_distribution_test(double t, double sigma2,
                                           double v_mod, std::size_t k,
                                           std::size_t trials,
                                           std::uint64_t seed) {
    if (trials < 2)
        throw std::domain_error("trials: must be >= 2");
    EstimatorStats stats;
    stats.trials = trials;
    stats.k = k;
    const double l = static_cast<double>(k);
    stats.theory_var_t_hat = sigma2 / (l * v_mod);
    stats.theory_mean_chi = l - 1.0;
    stats.theory_var_chi = 2.0 * (l - 1.0);

    // Welford accumulation keeps the moment estimates stable over many trials.
    double mean_t = 0.0, m2_t = 0.0, mean_c = 0.0, m2_c = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
        // Per-trial seed derivation keeps trials order-independent.
        const SampleBatch batch =
            simulate_samples(t, sigma2, v_mod, k, derive_seed(seed, i));
        const MleResult res = mle_estimate(batch);
        const double chi =
            (sigma2 > 0.0) ? l * res.sigma2_hat / sigma2 : 0.0;
        const double n = static_cast<double>(i + 1);
        const double dt = res.t_hat - mean_t;
        mean_t += dt / n;
        m2_t += dt * (res.t_hat - mean_t);
        const double dc = chi - mean_c;
        mean_c += dc / n;
        m2_c += dc * (chi - mean_c);
    }
    const double n = static_cast<double>(trials);
    stats.mean_t_hat = mean_t;
    stats.var_t_hat = m2_t / (n - 1.0);
    stats.mean_chi = mean_c;
    stats.var_chi = m2_c / (n - 1.0);
    stats.se_mean_chi = std::sqrt(stats.var_chi / n);

    const bool chi_ok =
        sigma2 <= 0.0 ||
        std::abs(stats.mean_chi - stats.theory_mean_chi) <=
            5.0 * stats.se_mean_chi;
    const bool var_ok =
        sigma2 <= 0.0 ||
        std::abs(stats.var_t_hat - stats.theory_var_t_hat) <=
            0.2 * stats.theory_var_t_hat;
    stats.pass = chi_ok && var_ok;
    return stats;
}

EstimatedBounds bounds_from_samples(const MleResult& mle, double z_pe) {
    if (mle.k < 2 || !(mle.v_mod > 0.0))
        throw std::domain_error("mle: must come from a valid batch");
    if (!(z_pe >= 0.0))
        throw std::domain_error("z_pe: must be >= 0");
    const double l = static_cast<double>(mle.k);
    double t_l = mle.t_hat - z_pe * std::sqrt(mle.sigma2_hat / (l * mle.v_mod));
    const double s2_u =
        mle.sigma2_hat + z_pe * mle.sigma2_hat * std::sqrt(2.0) / std::sqrt(l);

    EstimatedBounds b;
    if (t_l < 0.0) {
        t_l = 0.0;
        b.clamped = true;
    }
    b.t_low = t_l * t_l;
    // Map through sigma'^2 = 1 + T eps at the point estimate T = t_hat^2.
    const double t_point = mle.t_hat * mle.t_hat;
    b.eps_up = (t_point > 0.0) ? (s2_u - 1.0) / t_point : 0.0;
    b.w_up = (b.t_low < 1.0) ? b.t_low * b.eps_up / (1.0 - b.t_low) + 1.0 : 1.0;
    return b;
}

void dump_trials_csv(std::ostream& os, double t, double sigma2, double v_mod,
                     std::size_t k, std::size_t trials, std::uint64_t seed) {
    os << "trial,t_hat,sigma2_hat\n";
    char buf[96];
    for (std::size_t i = 0; i < trials; ++i) {
        const SampleBatch batch =
            simulate_samples(t, sigma2, v_mod, k, derive_seed(seed, i));
        const MleResult res = mle_estimate(batch);
        std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g\n", i, res.t_hat,
                      res.sigma2_hat);
        os << buf;
    }
}

}  // namespace thzqkd
