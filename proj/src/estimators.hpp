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

#ifndef THZQKD_ESTIMATORS_HPP
#define THZQKD_ESTIMATORS_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace thzqkd {

// One simulated estimation batch: x ~ N(0, v_mod), y = t x + z with
// z ~ N(0, sigma2). The modulation variance is kept because the interval
// half-widths use l*V rather than sum(x^2).
struct SampleBatch {
    std::vector<double> x;
    std::vector<double> y;
    double v_mod = 0.0;
};

SampleBatch simulate_samples(double t, double sigma2, double v_mod,
                             std::size_t k, std::uint64_t seed);

// Maximum-likelihood estimates with z-sigma confidence intervals:
//   t_hat = sum(x y)/sum(x^2),  sigma2_hat = (1/k) sum((y - t_hat x)^2),
//   half-widths z sqrt(sigma2_hat/(l V)) and z sigma2_hat sqrt(2)/sqrt(l),
// with l = k. (sum(x^2) ~ l V for large l; the intervals use l V as printed.)
struct MleResult {
    double t_hat = 0.0;
    double sigma2_hat = 0.0;
    double t_ci_lo = 0.0, t_ci_hi = 0.0;
    double sigma2_ci_lo = 0.0, sigma2_ci_hi = 0.0;
    std::size_t k = 0;
    double v_mod = 0.0;
};

MleResult mle_estimate(const SampleBatch& batch, double z_pe = 6.5);

// Monte Carlo check of the sampling laws t_hat ~ N(t, sigma2/sum x^2) and
// k sigma2_hat / sigma2 ~ chi^2(k-1).
struct EstimatorStats {
    double mean_t_hat = 0.0, var_t_hat = 0.0;
    double theory_var_t_hat = 0.0;  // sigma2/(k v_mod)
    double mean_chi = 0.0, var_chi = 0.0;
    double theory_mean_chi = 0.0;   // k - 1
    double theory_var_chi = 0.0;    // 2(k - 1)
    double se_mean_chi = 0.0;       // sqrt(var_chi / trials)
    bool pass = false;  // mean_chi within 5 SE and var_t_hat within 20%
    std::size_t trials = 0, k = 0;
};

EstimatorStats estimator_distribution_test(double t, double sigma2,
                                           double v_mod, std::size_t k,
                                           std::size_t trials,
                                           std::uint64_t seed);

// Worst-case channel parameters from one batch:
//   t_L = t_hat - z sqrt(sigma2_hat/(l V)),  sigma2_U = sigma2_hat(1 + z sqrt(2/l)),
// mapped through T = t'^2 and sigma'^2 = 1 + T eps.
struct EstimatedBounds {
    double t_low = 0.0;   // T_L
    double eps_up = 0.0;  // eps_U
    double w_up = 1.0;    // W_U
    bool clamped = false; // t_L went negative and was floored at 0
};

EstimatedBounds bounds_from_samples(const MleResult& mle, double z_pe);

// CSV dump of per-trial estimates (columns: trial,t_hat,sigma2_hat).
void dump_trials_csv(std::ostream& os, double t, double sigma2, double v_mod,
                     std::size_t k, std::size_t trials, std::uint64_t seed);

}  // namespace thzqkd

#endif  // THZQKD_ESTIMATORS_HPP
