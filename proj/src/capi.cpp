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

#include "thzqkd.h"

#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "channel.hpp"
#include "config.hpp"
#include "config_io.hpp"
#include "driver.hpp"
#include "estimators.hpp"
#include "finite.hpp"
#include "rates.hpp"

namespace {

thread_local std::string g_last_error;

thzqkd_status fail(thzqkd_status s, std::string msg) {
    g_last_error = std::move(msg);
    return s;
}

bool starts_with(const std::string& s, const char* prefix) {
    return s.rfind(prefix, 0) == 0;
}

// Translate an escaping exception into a status + thread-local message.
// runtime_error subtypes are classified by the message conventions of the
// core library (config parser prefixes "line N:", file errors "cannot ...").
template <typename Fn>
thzqkd_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::domain_error& e) {
        return fail(THZQKD_ERR_DOMAIN, e.what());
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        if (starts_with(msg, "unknown preset id"))
            return fail(THZQKD_ERR_UNKNOWN_KEY, msg);
        return fail(THZQKD_ERR_INVALID_CONFIG, msg);
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        if (starts_with(msg, "line "))
            return fail(THZQKD_ERR_PARSE, msg);
        if (starts_with(msg, "cannot open") || starts_with(msg, "cannot write"))
            return fail(THZQKD_ERR_IO, msg);
        if (starts_with(msg, "infeasible") ||
            starts_with(msg, "no rate boundary"))
            return fail(THZQKD_ERR_INFEASIBLE, msg);
        return fail(THZQKD_ERR_INTERNAL, msg);
    } catch (const std::exception& e) {
        return fail(THZQKD_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(THZQKD_ERR_INTERNAL, "unknown exception");
    }
}

thzqkd_status require(const void* p, const char* name) {
    if (p) return THZQKD_OK;
    return fail(THZQKD_ERR_NULL_ARGUMENT,
                std::string(name) + ": must not be NULL");
}

#define THZQKD_REQUIRE(p)                                  \
    do {                                                   \
        if (thzqkd_status s_ = require((p), #p)) return s_; \
    } while (0)

thzqkd_status parse_format(int format, thzqkd::OutputFormat* out) {
    if (format == 0)
        *out = thzqkd::OutputFormat::csv;
    else if (format == 1)
        *out = thzqkd::OutputFormat::json;
    else
        return fail(THZQKD_ERR_DOMAIN, "format: must be 0 (csv) or 1 (json)");
    return THZQKD_OK;
}

template <typename Fn>
thzqkd_status write_stream(const char* path, Fn&& fn) {
    if (!path) {
        fn(std::cout);
        std::cout.flush();
        return THZQKD_OK;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) return fail(THZQKD_ERR_IO, std::string("cannot write: ") + path);
    fn(os);
    os.flush();
    if (!os) return fail(THZQKD_ERR_IO, std::string("cannot write: ") + path);
    return THZQKD_OK;
}

}  // namespace

struct thzqkd_config {
    thzqkd::SystemConfig cfg;
};

struct thzqkd_channels {
    thzqkd::ParallelChannelSet set;
};

struct thzqkd_report {
    bool finite = false;
    thzqkd::KeyRateReport asym;
    thzqkd::FiniteKeyRateReport fin;
};

struct thzqkd_sweep {
    std::vector<thzqkd::SweepRow> rows;
};

extern "C" {

const char* thzqkd_version(void) { return "1.0.0"; }

const char* thzqkd_last_error(void) { return g_last_error.c_str(); }

const char* thzqkd_status_name(thzqkd_status s) {
    switch (s) {
        case THZQKD_OK: return "ok";
        case THZQKD_ERR_NULL_ARGUMENT: return "null-argument";
        case THZQKD_ERR_INVALID_CONFIG: return "invalid-config";
        case THZQKD_ERR_DOMAIN: return "domain";
        case THZQKD_ERR_UNKNOWN_KEY: return "unknown-key";
        case THZQKD_ERR_IO: return "io";
        case THZQKD_ERR_PARSE: return "parse";
        case THZQKD_ERR_INFEASIBLE: return "infeasible";
        case THZQKD_ERR_INDEX: return "index";
        case THZQKD_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

/* ------------------------------------------------------------------ */
/* Configuration                                                       */
/* ------------------------------------------------------------------ */

thzqkd_status thzqkd_config_create(thzqkd_config** out) {
    THZQKD_REQUIRE(out);
    return guarded([&] {
        *out = new thzqkd_config{};
        return THZQKD_OK;
    });
}

thzqkd_status thzqkd_config_create_symmetric(int n_antennas,
                                             double frequency_hz,
                                             double distance_ab_m,
                                             double delta_db_per_km,
                                             thzqkd_config** out) {
    THZQKD_REQUIRE(out);
    return guarded([&] {
        thzqkd::SystemConfig cfg = thzqkd::SystemConfig::symmetric(
            n_antennas, frequency_hz, distance_ab_m, delta_db_per_km);
        thzqkd::require_valid(cfg);
        *out = new thzqkd_config{cfg};
        return THZQKD_OK;
    });
}

thzqkd_status thzqkd_config_load(const char* path, thzqkd_config** out) {
    THZQKD_REQUIRE(path);
    THZQKD_REQUIRE(out);
    return guarded([&] {
        *out = new thzqkd_config{thzqkd::parse_config_file(path)};
        return THZQKD_OK;
    });
}

void thzqkd_config_free(thzqkd_config* cfg) { delete cfg; }

thzqkd_status thzqkd_config_set(thzqkd_config* cfg, const char* key,
                                double value) {
    THZQKD_REQUIRE(cfg);
    THZQKD_REQUIRE(key);
    return guarded([&] {
        std::string err;
        if (!thzqkd::config_set_field(cfg->cfg, key, value, &err)) {
            if (starts_with(err, "unknown key"))
                return fail(THZQKD_ERR_UNKNOWN_KEY, err);
            return fail(THZQKD_ERR_DOMAIN, err);
        }
        return THZQKD_OK;
    });
}

thzqkd_status thzqkd_config_get(const thzqkd_config* cfg, const char* key,
                                double* value) {
    THZQKD_REQUIRE(cfg);
    THZQKD_REQUIRE(key);
    THZQKD_REQUIRE(value);
    return guarded([&] {
        if (!thzqkd::config_get_field(cfg->cfg, key, value))
            return fail(THZQKD_ERR_UNKNOWN_KEY,
                        "unknown key: " + std::string(key));
        return THZQKD_OK;
    });
}

thzqkd_status thzqkd_config_validate(const thzqkd_config* cfg) {
    THZQKD_REQUIRE(cfg);
    return guarded([&] {
        const std::string err = thzqkd::validate_config(cfg->cfg);
        if (!err.empty()) return fail(THZQKD_ERR_INVALID_CONFIG, err);
        return THZQKD_OK;
    });
}

/* ------------------------------------------------------------------ */
/* Physics helpers                                                     */
/* ------------------------------------------------------------------ */

thzqkd_status thzqkd_thermal_occupation(double frequency_hz,
                                        double temperature_k, double* nbar) {
    THZQKD_REQUIRE(nbar);
    return guarded([&] {
        *nbar = thzqkd::thermal_photon_number(frequency_hz, temperature_k);
        return THZQKD_OK;
    });
}

thzqkd_status thzqkd_path_loss(double frequency_hz, double distance_m,
                               double delta_db_per_km, int n_rx, int n_tx,
                               double antenna_element_gain, double* gamma) {
    THZQKD_REQUIRE(gamma);
    return guarded([&] {
        *gamma = thzqkd::path_loss(frequency_hz, distance_m, delta_db_per_km,
                                   n_rx, n_tx, antenna_element_gain);
        return THZQKD_OK;
    });
}

/* ------------------------------------------------------------------ */
/* Parallel channels                                                   */
/* ------------------------------------------------------------------ */

thzqkd_status thzqkd_channels_idealized(const thzqkd_config* cfg,
                                        thzqkd_channels** out) {
    THZQKD_REQUIRE(cfg);
    THZQKD_REQUIRE(out);
    return guarded([&] {
        *out = new thzqkd_channels{thzqkd::idealized_parallel_channels(cfg->cfg)};
        return THZQKD_OK;
    });
}

thzqkd_status thzqkd_channels_realized(const thzqkd_config* cfg, uint64_t seed,
                                       thzqkd_channels** out) {
    THZQKD_REQUIRE(cfg);
    THZQKD_REQUIRE(out);
    return guarded([&] {
        *out = new thzqkd_channels{
            thzqkd::realized_parallel_channels(cfg->cfg, seed)};
        return THZQKD_OK;
    });
}

void thzqkd_channels_free(thzqkd_channels* ch) { delete ch; }

thzqkd_status thzqkd_channels_count(const thzqkd_channels* ch, int* r) {
    THZQKD_REQUIRE(ch);
    THZQKD_REQUIRE(r);
    *r = ch->set.r;
    return THZQKD_OK;
}

thzqkd_status thzqkd_channels_clamped(const thzqkd_channels* ch, int* count) {
    THZQKD_REQUIRE(ch);
    THZQKD_REQUIRE(count);
    *count = ch->set.clamp_count;
    return THZQKD_OK;
}

thzqkd_status thzqkd_channels_get(const thzqkd_channels* ch, int index,
                                  thzqkd_channel_pair* out) {
    THZQKD_REQUIRE(ch);
    THZQKD_REQUIRE(out);
    if (index < 0 || static_cast<size_t>(index) >= ch->set.channels.size())
        return fail(THZQKD_ERR_INDEX,
                    "index: must be in [0, " +
                        std::to_string(ch->set.channels.size()) + ")");
    const thzqkd::ChannelPair& p = ch->set.channels[index];
    out->t_a = p.t_a;
    out->t_b = p.t_b;
    out->w_a = p.w_a;
    out->w_b = p.w_b;
    return THZQKD_OK;
}

thzqkd_status thzqkd_channel_matrix_export(const thzqkd_config* cfg, int link,
                                           uint64_t seed, const char* path) {
    THZQKD_REQUIRE(cfg);
    THZQKD_REQUIRE(path);
    if (link != 0 && link != 1)
        return fail(THZQKD_ERR_DOMAIN, "link: must be 0 (Alice) or 1 (Bob)");
    return guarded([&] {
        const thzqkd::ChannelRealization real = thzqkd::synthesize_channel(
            cfg->cfg, link == 0 ? thzqkd::Link::alice : thzqkd::Link::bob,
            seed);
        return write_stream(
            path, [&](std::ostream& os) { thzqkd::write_matrix(os, real.h); });
    });
}

/* ------------------------------------------------------------------ */
/* Key-rate reports                                                    */
/* ------------------------------------------------------------------ */

thzqkd_status thzqkd_rate_asymptotic(const thzqkd_config* cfg,
                                     const thzqkd_channels* ch,
                                     thzqkd_report** out) {
    THZQKD_REQUIRE(cfg);
    THZQKD_REQUIRE(ch);
    THZQKD_REQUIRE(out);
    return guarded([&] {
        auto rep = new thzqkd_report{};
        rep->finite = false;
        rep->asym = thzqkd::mimo_key_rate(ch->set, cfg->cfg);
        *out = rep;
        return THZQKD_OK;
    });
}

thzqkd_status thzqkd_rate_finite(const thzqkd_config* cfg,
                                 const thzqkd_channels* ch,
                                 int include_prefactor, thzqkd_report** out) {
    THZQKD_REQUIRE(cfg);
    THZQKD_REQUIRE(ch);
    THZQKD_REQUIRE(out);
    return guarded([&] {
        auto rep = new thzqkd_report{};
        rep->finite = true;
        rep->fin = thzqkd::finite_mimo_key_rate(ch->set, cfg->cfg,
                                                include_prefactor != 0);
        *out = rep;
        return THZQKD_OK;
    });
}

void thzqkd_report_free(thzqkd_report* rep) { delete rep; }

thzqkd_status thzqkd_report_info_get(const thzqkd_report* rep,
                                     thzqkd_report_info* out) {
    THZQKD_REQUIRE(rep);
    THZQKD_REQUIRE(out);
    if (rep->finite) {
        out->total_rate = rep->fin.total;
        out->r = rep->fin.r;
        out->clamp_count = rep->fin.clamp_count;
        out->finite = 1;
        out->delta_n = rep->fin.delta_n;
        out->prefactor = rep->fin.prefactor ? 1 : 0;
    } else {
        out->total_rate = rep->asym.total;
        out->r = rep->asym.r;
        out->clamp_count = rep->asym.clamp_count;
        out->finite = 0;
        out->delta_n = 0.0;
        out->prefactor = 0;
    }
    return THZQKD_OK;
}

thzqkd_status thzqkd_report_channel(const thzqkd_report* rep, int index,
                                    thzqkd_channel_rate* out) {
    THZQKD_REQUIRE(rep);
    THZQKD_REQUIRE(out);
    const size_t n =
        rep->finite ? rep->fin.channels.size() : rep->asym.channels.size();
    if (index < 0 || static_cast<size_t>(index) >= n)
        return fail(THZQKD_ERR_INDEX,
                    "index: must be in [0, " + std::to_string(n) + ")");
    *out = thzqkd_channel_rate{};
    const thzqkd::ChannelRateRecord* rec;
    if (rep->finite) {
        const thzqkd::FiniteChannelRecord& f = rep->fin.channels[index];
        rec = &f.bounded;
        out->t_a = f.true_pair.t_a;
        out->t_b = f.true_pair.t_b;
        out->t_low_a = f.bounds_a.t_low;
        out->t_low_b = f.bounds_b.t_low;
        out->w_up_a = f.bounds_a.w_up;
        out->w_up_b = f.bounds_b.w_up;
        out->bracket = f.bracket;
        out->contribution = f.contribution;
        out->bounds_clamped = (f.bounds_a.clamped || f.bounds_b.clamped) ? 1 : 0;
    } else {
        rec = &rep->asym.channels[index];
        out->t_a = rec->t_a;
        out->t_b = rec->t_b;
    }
    out->t_eq = rec->t_eq;
    out->eps_eq = rec->eps_eq;
    out->w_hat = rec->w_hat;
    out->s_ab = rec->s_ab;
    out->i_be = rec->i_be;
    out->lambda1 = rec->spectrum.l1;
    out->lambda2 = rec->spectrum.l2;
    out->lambda3 = rec->spectrum.l3;
    out->lambda4 = rec->spectrum.l4;
    out->rate = rec->rate;
    out->truncated = rec->truncated ? 1 : 0;
    return THZQKD_OK;
}

thzqkd_status thzqkd_report_write(const thzqkd_report* rep, const char* path,
                                  int format) {
    THZQKD_REQUIRE(rep);
    thzqkd::OutputFormat fmt;
    if (thzqkd_status s = parse_format(format, &fmt)) return s;
    return guarded([&] {
        return write_stream(path, [&](std::ostream& os) {
            if (rep->finite)
                thzqkd::write_report(os, rep->fin, fmt);
            else
                thzqkd::write_report(os, rep->asym, fmt);
        });
    });
}

/* ------------------------------------------------------------------ */
/* Driver: max distance, sweeps, presets                               */
/* ------------------------------------------------------------------ */

thzqkd_status thzqkd_max_distance(const thzqkd_config* cfg, int mode,
                                  double tolerance_m, double* distance_m,
                                  double* rate_inside, double* rate_outside) {
    THZQKD_REQUIRE(cfg);
    THZQKD_REQUIRE(distance_m);
    if (mode != 0 && mode != 1)
        return fail(THZQKD_ERR_DOMAIN,
                    "mode: must be 0 (asymptotic) or 1 (finite)");
    return guarded([&] {
        const thzqkd::MaxDistanceResult res = thzqkd::max_distance(
            cfg->cfg,
            mode == 0 ? thzqkd::RateMode::asymptotic : thzqkd::RateMode::finite,
            tolerance_m);
        *distance_m = res.distance_m;
        if (rate_inside) *rate_inside = res.rate_inside;
        if (rate_outside) *rate_outside = res.rate_outside;
        return THZQKD_OK;
    });
}

thzqkd_status thzqkd_sweep_run(const thzqkd_config* cfg, thzqkd_sweep_axis axis,
                               const double* grid, size_t grid_len, int mode,
                               int realized, uint64_t seed,
                               thzqkd_sweep** out) {
    THZQKD_REQUIRE(cfg);
    THZQKD_REQUIRE(grid);
    THZQKD_REQUIRE(out);
    if (axis < THZQKD_AXIS_DISTANCE || axis > THZQKD_AXIS_ANTENNAS)
        return fail(THZQKD_ERR_DOMAIN, "axis: unknown sweep axis");
    if (mode != 0 && mode != 1)
        return fail(THZQKD_ERR_DOMAIN,
                    "mode: must be 0 (asymptotic) or 1 (finite)");
    return guarded([&] {
        thzqkd::SweepSpec spec;
        spec.axis = static_cast<thzqkd::SweepAxis>(axis);
        spec.grid.assign(grid, grid + grid_len);
        spec.mode = mode == 0 ? thzqkd::RateMode::asymptotic
                              : thzqkd::RateMode::finite;
        spec.channel_mode = realized ? thzqkd::ChannelMode::realized
                                     : thzqkd::ChannelMode::idealized;
        spec.seed = seed;
        *out = new thzqkd_sweep{thzqkd::run_sweep(cfg->cfg, spec)};
        return THZQKD_OK;
    });
}

void thzqkd_sweep_free(thzqkd_sweep* sw) { delete sw; }

thzqkd_status thzqkd_sweep_count(const thzqkd_sweep* sw, size_t* n) {
    THZQKD_REQUIRE(sw);
    THZQKD_REQUIRE(n);
    *n = sw->rows.size();
    return THZQKD_OK;
}

thzqkd_status thzqkd_sweep_point_get(const thzqkd_sweep* sw, size_t index,
                                     thzqkd_sweep_point* out) {
    THZQKD_REQUIRE(sw);
    THZQKD_REQUIRE(out);
    if (index >= sw->rows.size())
        return fail(THZQKD_ERR_INDEX,
                    "index: must be in [0, " +
                        std::to_string(sw->rows.size()) + ")");
    const thzqkd::SweepRow& row = sw->rows[index];
    out->axis_value = row.axis_value;
    out->total_rate = row.total_rate;
    out->channel1_rate = row.channel1_rate;
    out->r = row.r;
    out->clamp_count = row.clamp_count;
    out->feasible = row.feasible ? 1 : 0;
    switch (row.error_kind) {
        case 0: out->error = THZQKD_OK; break;
        case 1: out->error = THZQKD_ERR_DOMAIN; break;
        case 2: out->error = THZQKD_ERR_INVALID_CONFIG; break;
        default: out->error = THZQKD_ERR_INTERNAL; break;
    }
    return THZQKD_OK;
}

const char* thzqkd_sweep_point_error(const thzqkd_sweep* sw, size_t index) {
    if (!sw || index >= sw->rows.size()) return nullptr;
    return sw->rows[index].error.c_str();
}

thzqkd_status thzqkd_sweep_write(const thzqkd_sweep* sw, const char* path,
                                 int format) {
    THZQKD_REQUIRE(sw);
    thzqkd::OutputFormat fmt;
    if (thzqkd_status s = parse_format(format, &fmt)) return s;
    return guarded([&] {
        return write_stream(path, [&](std::ostream& os) {
            thzqkd::write_sweep(os, sw->rows, fmt);
        });
    });
}

const char* thzqkd_reproduce_ids(void) {
    static const std::string joined = [] {
        std::string s;
        for (const std::string& id : thzqkd::reproduce_ids()) {
            if (!s.empty()) s += ' ';
            s += id;
        }
        return s;
    }();
    return joined.c_str();
}

thzqkd_status thzqkd_reproduce(const char* id, const char* out_dir,
                               int format) {
    THZQKD_REQUIRE(id);
    THZQKD_REQUIRE(out_dir);
    thzqkd::OutputFormat fmt;
    if (thzqkd_status s = parse_format(format, &fmt)) return s;
    return guarded([&] {
        thzqkd::reproduce(id, out_dir, fmt);
        return THZQKD_OK;
    });
}

/* ------------------------------------------------------------------ */
/* Estimator Monte Carlo                                               */
/* ------------------------------------------------------------------ */

thzqkd_status thzqkd_estimator_mle(double t, double sigma2, double v_mod,
                                   size_t k, double z_pe, uint64_t seed,
                                   thzqkd_mle_result* out) {
    THZQKD_REQUIRE(out);
    return guarded([&] {
        const thzqkd::SampleBatch batch =
            thzqkd::simulate_samples(t, sigma2, v_mod, k, seed);
        const thzqkd::MleResult mle = thzqkd::mle_estimate(batch, z_pe);
        out->t_hat = mle.t_hat;
        out->sigma2_hat = mle.sigma2_hat;
        out->t_ci_lo = mle.t_ci_lo;
        out->t_ci_hi = mle.t_ci_hi;
        out->sigma2_ci_lo = mle.sigma2_ci_lo;
        out->sigma2_ci_hi = mle.sigma2_ci_hi;
        return THZQKD_OK;
    });
}

thzqkd_status thzqkd_estimator_distribution(double t, double sigma2,
                                            double v_mod, size_t k,
                                            size_t trials, uint64_t seed,
                                            thzqkd_estimator_stats* out) {
    THZQKD_REQUIRE(out);
    return guarded([&] {
        const thzqkd::EstimatorStats st = thzqkd::estimator_distribution_test(
            t, sigma2, v_mod, k, trials, seed);
        out->mean_t_hat = st.mean_t_hat;
        out->var_t_hat = st.var_t_hat;
        out->theory_var_t_hat = st.theory_var_t_hat;
        out->mean_chi = st.mean_chi;
        out->var_chi = st.var_chi;
        out->theory_mean_chi = st.theory_mean_chi;
        out->theory_var_chi = st.theory_var_chi;
        out->se_mean_chi = st.se_mean_chi;
        out->pass = st.pass ? 1 : 0;
        return THZQKD_OK;
    });
}

thzqkd_status thzqkd_estimator_dump(double t, double sigma2, double v_mod,
                                    size_t k, size_t trials, uint64_t seed,
                                    const char* path) {
    return guarded([&] {
        return write_stream(path, [&](std::ostream& os) {
            thzqkd::dump_trials_csv(os, t, sigma2, v_mod, k, trials, seed);
        });
    });
}

thzqkd_status thzqkd_estimator_bounds(double t, double sigma2, double v_mod,
                                      size_t k, double z_pe, uint64_t seed,
                                      thzqkd_bounds* out) {
    THZQKD_REQUIRE(out);
    return guarded([&] {
        const thzqkd::SampleBatch batch =
            thzqkd::simulate_samples(t, sigma2, v_mod, k, seed);
        const thzqkd::MleResult mle = thzqkd::mle_estimate(batch, z_pe);
        const thzqkd::EstimatedBounds b =
            thzqkd::bounds_from_samples(mle, z_pe);
        out->t_low = b.t_low;
        out->eps_up = b.eps_up;
        out->w_up = b.w_up;
        out->clamped = b.clamped ? 1 : 0;
        return THZQKD_OK;
    });
}

} /* extern "C" */
