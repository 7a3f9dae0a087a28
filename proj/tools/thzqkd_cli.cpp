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
//
// Command-line frontend. Talks to the simulation core exclusively through
// the public C API in thzqkd.h.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thzqkd.h"

namespace {

// Exit codes: 0 success, 1 runtime failure, 2 usage error.
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct ConfigDeleter {
    void operator()(thzqkd_config* c) const { thzqkd_config_free(c); }
};
struct ChannelsDeleter {
    void operator()(thzqkd_channels* c) const { thzqkd_channels_free(c); }
};
struct ReportDeleter {
    void operator()(thzqkd_report* r) const { thzqkd_report_free(r); }
};
struct SweepDeleter {
    void operator()(thzqkd_sweep* s) const { thzqkd_sweep_free(s); }
};

using ConfigPtr = std::unique_ptr<thzqkd_config, ConfigDeleter>;
using ChannelsPtr = std::unique_ptr<thzqkd_channels, ChannelsDeleter>;
using ReportPtr = std::unique_ptr<thzqkd_report, ReportDeleter>;
using SweepPtr = std::unique_ptr<thzqkd_sweep, SweepDeleter>;

// Machine-readable failure line on stderr: "error: <status>: <message>".
[[noreturn]] void die(thzqkd_status s) {
    std::cerr << "error: " << thzqkd_status_name(s) << ": "
              << thzqkd_last_error() << "\n";
    std::exit(kExitFailure);
}

void check(thzqkd_status s) {
    if (s != THZQKD_OK) die(s);
}

// Shared flags: --config/--set/--seed/--format/--out.
struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;  // key=value
    std::uint64_t seed = 0;
    std::string format = "csv";
    std::string out_path;
    std::string channels = "idealized";

    int format_code() const { return format == "json" ? 1 : 0; }
    const char* out_or_stdout() const {
        return out_path.empty() ? nullptr : out_path.c_str();
    }
};

void add_config_options(CLI::App* cmd, CommonOptions* opt) {
    cmd->add_option("--config", opt->config_path,
                    "key=value config file (defaults used when omitted)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--set", opt->overrides,
                    "config override key=value (repeatable, applied in order)");
}

void add_output_options(CLI::App* cmd, CommonOptions* opt) {
    cmd->add_option("--format", opt->format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", opt->out_path,
                    "output file (stdout when omitted)");
}

void add_channel_options(CLI::App* cmd, CommonOptions* opt) {
    cmd->add_option("--channels", opt->channels, "channel decomposition mode")
        ->check(CLI::IsMember({"idealized", "realized"}))
        ->capture_default_str();
    cmd->add_option("--seed", opt->seed,
                    "RNG seed (realized channels, estimators)");
}

ConfigPtr load_config(const CommonOptions& opt) {
    thzqkd_config* raw = nullptr;
    if (opt.config_path.empty())
        check(thzqkd_config_create(&raw));
    else
        check(thzqkd_config_load(opt.config_path.c_str(), &raw));
    ConfigPtr cfg(raw);
    for (const std::string& kv : opt.overrides) {
        const size_t eq = kv.find('=');
        if (eq == std::string::npos) {
            std::cerr << "error: domain: --set expects key=value, got '" << kv
                      << "'\n";
            std::exit(kExitUsage);
        }
        const std::string key = kv.substr(0, eq);
        double value = 0.0;
        try {
            size_t used = 0;
            value = std::stod(kv.substr(eq + 1), &used);
            if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
        } catch (const std::exception&) {
            std::cerr << "error: domain: --set " << key
                      << ": not a number: '" << kv.substr(eq + 1) << "'\n";
            std::exit(kExitUsage);
        }
        check(thzqkd_config_set(cfg.get(), key.c_str(), value));
    }
    return cfg;
}

ChannelsPtr make_channels(const thzqkd_config* cfg, const CommonOptions& opt) {
    thzqkd_channels* raw = nullptr;
    if (opt.channels == "realized")
        check(thzqkd_channels_realized(cfg, opt.seed, &raw));
    else
        check(thzqkd_channels_idealized(cfg, &raw));
    return ChannelsPtr(raw);
}

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

int run_keyrate(const CommonOptions& opt) {
    ConfigPtr cfg = load_config(opt);
    check(thzqkd_config_validate(cfg.get()));
    ChannelsPtr ch = make_channels(cfg.get(), opt);
    thzqkd_report* raw = nullptr;
    check(thzqkd_rate_asymptotic(cfg.get(), ch.get(), &raw));
    ReportPtr rep(raw);
    check(thzqkd_report_write(rep.get(), opt.out_or_stdout(),
                              opt.format_code()));
    return 0;
}

int run_finite(const CommonOptions& opt, bool no_prefactor) {
    ConfigPtr cfg = load_config(opt);
    check(thzqkd_config_validate(cfg.get()));
    ChannelsPtr ch = make_channels(cfg.get(), opt);
    thzqkd_report* raw = nullptr;
    check(thzqkd_rate_finite(cfg.get(), ch.get(), no_prefactor ? 0 : 1, &raw));
    ReportPtr rep(raw);
    check(thzqkd_report_write(rep.get(), opt.out_or_stdout(),
                              opt.format_code()));
    return 0;
}

struct SweepOptions {
    std::string axis = "distance";
    std::vector<double> grid;  // explicit grid
    double from = 0.0, to = 0.0;
    std::size_t points = 0;
    bool log_grid = false;
    std::string mode = "asymptotic";
};

int run_sweep_cmd(const CommonOptions& opt, const SweepOptions& sw) {
    std::vector<double> grid = sw.grid;
    if (grid.empty()) {
        if (sw.points < 2 || !(sw.to > sw.from)) {
            std::cerr << "error: domain: provide --grid or --from/--to/--points "
                         "with to > from and points >= 2\n";
            return kExitUsage;
        }
        if (sw.log_grid && !(sw.from > 0.0)) {
            std::cerr << "error: domain: --log needs --from > 0\n";
            return kExitUsage;
        }
        grid.resize(sw.points);
        for (std::size_t i = 0; i < sw.points; ++i) {
            const double f =
                static_cast<double>(i) / static_cast<double>(sw.points - 1);
            grid[i] = sw.log_grid ? sw.from * std::pow(sw.to / sw.from, f)
                                  : sw.from + (sw.to - sw.from) * f;
        }
    }

    static const std::vector<std::string> axis_names = {
        "distance", "frequency", "detector_efficiency", "block_size",
        "antennas"};
    int axis_code = -1;
    for (std::size_t i = 0; i < axis_names.size(); ++i)
        if (axis_names[i] == sw.axis) axis_code = static_cast<int>(i);
    if (axis_code < 0) {
        std::cerr << "error: domain: unknown axis '" << sw.axis << "'\n";
        return kExitUsage;
    }

    ConfigPtr cfg = load_config(opt);
    check(thzqkd_config_validate(cfg.get()));
    thzqkd_sweep* raw = nullptr;
    check(thzqkd_sweep_run(cfg.get(),
                           static_cast<thzqkd_sweep_axis>(axis_code),
                           grid.data(), grid.size(),
                           sw.mode == "finite" ? 1 : 0,
                           opt.channels == "realized" ? 1 : 0, opt.seed,
                           &raw));
    SweepPtr sweep(raw);
    check(thzqkd_sweep_write(sweep.get(), opt.out_or_stdout(),
                             opt.format_code()));
    return 0;
}

int run_maxdist(const CommonOptions& opt, const std::string& mode, double tol,
                const std::string& style) {
    ConfigPtr cfg = load_config(opt);
    check(thzqkd_config_validate(cfg.get()));
    double d = 0.0, inside = 0.0, outside = 0.0;
    check(thzqkd_max_distance(cfg.get(), mode == "finite" ? 1 : 0, tol, &d,
                              &inside, &outside));

    std::ostringstream os;
    if (style == "plain") {
        os << fmt9(d) << "\n";
    } else if (style == "json") {
        os << "{\n  \"max_distance_m\": " << fmt9(d)
           << ",\n  \"rate_inside\": " << fmt9(inside)
           << ",\n  \"rate_outside\": " << fmt9(outside) << "\n}\n";
    } else {
        os << "max_distance_m,rate_inside,rate_outside\n"
           << fmt9(d) << ',' << fmt9(inside) << ',' << fmt9(outside) << "\n";
    }
    if (opt.out_path.empty()) {
        std::cout << os.str();
    } else {
        std::FILE* f = std::fopen(opt.out_path.c_str(), "wb");
        if (!f) {
            std::cerr << "error: io: cannot write: " << opt.out_path << "\n";
            return kExitFailure;
        }
        std::fputs(os.str().c_str(), f);
        std::fclose(f);
    }
    return 0;
}

struct EstimatorOptions {
    double t = 0.5;
    double sigma2 = 1.0;
    double v_mod = -1.0;  // <0: take mod_variance from the config
    double z_pe = -1.0;   // <0: take z_pe from the config
    std::size_t k = 1000000;
    std::size_t trials = 0;  // >0 switches to distribution mode
    bool dump = false;
};

int run_estimators(const CommonOptions& opt, const EstimatorOptions& est) {
    ConfigPtr cfg = load_config(opt);
    double v_mod = est.v_mod, z_pe = est.z_pe;
    if (v_mod < 0.0) check(thzqkd_config_get(cfg.get(), "mod_variance", &v_mod));
    if (z_pe < 0.0) check(thzqkd_config_get(cfg.get(), "z_pe", &z_pe));

    if (est.dump) {
        const std::size_t trials = est.trials ? est.trials : 1000;
        check(thzqkd_estimator_dump(est.t, est.sigma2, v_mod, est.k, trials,
                                    opt.seed, opt.out_or_stdout()));
        return 0;
    }

    std::ostringstream os;
    if (est.trials > 0) {
        thzqkd_estimator_stats st{};
        check(thzqkd_estimator_distribution(est.t, est.sigma2, v_mod, est.k,
                                            est.trials, opt.seed, &st));
        if (opt.format == "json") {
            os << "{\n"
               << "  \"mean_t_hat\": " << fmt9(st.mean_t_hat) << ",\n"
               << "  \"var_t_hat\": " << fmt9(st.var_t_hat) << ",\n"
               << "  \"theory_var_t_hat\": " << fmt9(st.theory_var_t_hat)
               << ",\n"
               << "  \"mean_chi\": " << fmt9(st.mean_chi) << ",\n"
               << "  \"var_chi\": " << fmt9(st.var_chi) << ",\n"
               << "  \"theory_mean_chi\": " << fmt9(st.theory_mean_chi)
               << ",\n"
               << "  \"theory_var_chi\": " << fmt9(st.theory_var_chi) << ",\n"
               << "  \"se_mean_chi\": " << fmt9(st.se_mean_chi) << ",\n"
               << "  \"pass\": " << (st.pass ? "true" : "false") << "\n}\n";
        } else {
            os << "mean_t_hat,var_t_hat,theory_var_t_hat,mean_chi,var_chi,"
                  "theory_mean_chi,theory_var_chi,se_mean_chi,pass\n"
               << fmt9(st.mean_t_hat) << ',' << fmt9(st.var_t_hat) << ','
               << fmt9(st.theory_var_t_hat) << ',' << fmt9(st.mean_chi) << ','
               << fmt9(st.var_chi) << ',' << fmt9(st.theory_mean_chi) << ','
               << fmt9(st.theory_var_chi) << ',' << fmt9(st.se_mean_chi) << ','
               << (st.pass ? 1 : 0) << "\n";
        }
    } else {
        thzqkd_mle_result mle{};
        thzqkd_bounds bounds{};
        check(thzqkd_estimator_mle(est.t, est.sigma2, v_mod, est.k, z_pe,
                                   opt.seed, &mle));
        check(thzqkd_estimator_bounds(est.t, est.sigma2, v_mod, est.k, z_pe,
                                      opt.seed, &bounds));
        if (opt.format == "json") {
            os << "{\n"
               << "  \"t_hat\": " << fmt9(mle.t_hat) << ",\n"
               << "  \"sigma2_hat\": " << fmt9(mle.sigma2_hat) << ",\n"
               << "  \"t_ci_lo\": " << fmt9(mle.t_ci_lo) << ",\n"
               << "  \"t_ci_hi\": " << fmt9(mle.t_ci_hi) << ",\n"
               << "  \"sigma2_ci_lo\": " << fmt9(mle.sigma2_ci_lo) << ",\n"
               << "  \"sigma2_ci_hi\": " << fmt9(mle.sigma2_ci_hi) << ",\n"
               << "  \"t_low\": " << fmt9(bounds.t_low) << ",\n"
               << "  \"eps_up\": " << fmt9(bounds.eps_up) << ",\n"
               << "  \"w_up\": " << fmt9(bounds.w_up) << ",\n"
               << "  \"clamped\": " << (bounds.clamped ? "true" : "false")
               << "\n}\n";
        } else {
            os << "t_hat,sigma2_hat,t_ci_lo,t_ci_hi,sigma2_ci_lo,sigma2_ci_hi,"
                  "t_low,eps_up,w_up,clamped\n"
               << fmt9(mle.t_hat) << ',' << fmt9(mle.sigma2_hat) << ','
               << fmt9(mle.t_ci_lo) << ',' << fmt9(mle.t_ci_hi) << ','
               << fmt9(mle.sigma2_ci_lo) << ',' << fmt9(mle.sigma2_ci_hi)
               << ',' << fmt9(bounds.t_low) << ',' << fmt9(bounds.eps_up)
               << ',' << fmt9(bounds.w_up) << ',' << (bounds.clamped ? 1 : 0)
               << "\n";
        }
    }
    if (opt.out_path.empty()) {
        std::cout << os.str();
    } else {
        std::FILE* f = std::fopen(opt.out_path.c_str(), "wb");
        if (!f) {
            std::cerr << "error: io: cannot write: " << opt.out_path << "\n";
            return kExitFailure;
        }
        std::fputs(os.str().c_str(), f);
        std::fclose(f);
    }
    return 0;
}

int run_reproduce(const std::string& id, const std::string& out_dir,
                  const CommonOptions& opt) {
    check(thzqkd_reproduce(id.c_str(), out_dir.c_str(), opt.format_code()));
    const std::string ext = opt.format_code() == 1 ? ".json" : ".csv";
    std::vector<std::string> ids;
    if (id == "all") {
        std::istringstream is(thzqkd_reproduce_ids());
        std::string token;
        while (is >> token) ids.push_back(token);
    } else {
        ids.push_back(id);
    }
    for (const std::string& one : ids)
        std::cout << out_dir << "/" << one << ext << "\n";
    return 0;
}

int run_validate(const CommonOptions& opt) {
    ConfigPtr cfg = load_config(opt);
    const thzqkd_status s = thzqkd_config_validate(cfg.get());
    if (s != THZQKD_OK) die(s);
    std::cout << "ok\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("thzqkd ") + thzqkd_version() +
                 " — CV-MDI MIMO QKD key-rate simulator for THz links"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    CommonOptions opt;

    CLI::App* keyrate = app.add_subcommand(
        "keyrate", "Asymptotic key-rate report for one configuration");
    add_config_options(keyrate, &opt);
    add_channel_options(keyrate, &opt);
    add_output_options(keyrate, &opt);

    CLI::App* finite = app.add_subcommand(
        "finite", "Finite-size key-rate report for one configuration");
    bool no_prefactor = false;
    add_config_options(finite, &opt);
    add_channel_options(finite, &opt);
    add_output_options(finite, &opt);
    finite->add_flag("--no-prefactor", no_prefactor,
                     "report brackets without the N/M prefactor");

    CLI::App* sweep =
        app.add_subcommand("sweep", "Evaluate the rate over a parameter grid");
    SweepOptions sweep_opt;
    add_config_options(sweep, &opt);
    add_channel_options(sweep, &opt);
    add_output_options(sweep, &opt);
    sweep->add_option("--axis", sweep_opt.axis, "sweep axis")
        ->check(CLI::IsMember({"distance", "frequency", "detector_efficiency",
                               "block_size", "antennas"}))
        ->capture_default_str();
    sweep->add_option("--grid", sweep_opt.grid,
                      "explicit strictly increasing grid values")
        ->delimiter(',');
    sweep->add_option("--from", sweep_opt.from, "grid start");
    sweep->add_option("--to", sweep_opt.to, "grid end");
    sweep->add_option("--points", sweep_opt.points, "grid point count");
    sweep->add_flag("--log", sweep_opt.log_grid, "geometric grid spacing");
    sweep->add_option("--mode", sweep_opt.mode, "rate mode")
        ->check(CLI::IsMember({"asymptotic", "finite"}))
        ->capture_default_str();

    CLI::App* maxdist = app.add_subcommand(
        "maxdist", "Largest total distance with a positive rate");
    std::string maxdist_mode = "asymptotic";
    std::string maxdist_style = "plain";
    double tol = 1e-3;
    add_config_options(maxdist, &opt);
    maxdist->add_option("--mode", maxdist_mode, "rate mode")
        ->check(CLI::IsMember({"asymptotic", "finite"}))
        ->capture_default_str();
    maxdist->add_option("--tol", tol, "bisection tolerance in meters")
        ->capture_default_str();
    maxdist->add_option("--format", maxdist_style,
                        "plain = bare meters; csv/json add bracketing rates")
        ->check(CLI::IsMember({"plain", "csv", "json"}))
        ->capture_default_str();
    maxdist->add_option("--out", opt.out_path,
                        "output file (stdout when omitted)");

    CLI::App* estimators = app.add_subcommand(
        "estimators", "Channel-parameter MLE simulation and worst-case bounds");
    EstimatorOptions est_opt;
    add_config_options(estimators, &opt);
    add_output_options(estimators, &opt);
    estimators->add_option("--seed", opt.seed, "RNG seed");
    estimators->add_option("--t", est_opt.t, "true sqrt-transmittance t'")
        ->capture_default_str();
    estimators->add_option("--sigma2", est_opt.sigma2,
                           "true noise variance sigma'^2")
        ->capture_default_str();
    estimators->add_option("--vmod", est_opt.v_mod,
                           "modulation variance (default: config mod_variance)");
    estimators->add_option("--z", est_opt.z_pe,
                           "confidence quantile (default: config z_pe)");
    estimators->add_option("--k", est_opt.k, "samples per batch")
        ->capture_default_str();
    estimators->add_option("--trials", est_opt.trials,
                           "Monte Carlo batches (enables distribution mode)");
    estimators->add_flag("--dump-trials", est_opt.dump,
                         "emit per-trial t_hat/sigma2_hat CSV instead");

    CLI::App* reproduce = app.add_subcommand(
        "reproduce", "Emit a preset study's data series to files");
    std::string rep_id;
    std::string out_dir = ".";
    std::vector<std::string> valid_ids;
    {
        std::istringstream is(thzqkd_reproduce_ids());
        std::string token;
        while (is >> token) valid_ids.push_back(token);
        valid_ids.push_back("all");
    }
    reproduce->add_option("--id", rep_id, "study id")
        ->required()
        ->check(CLI::IsMember(valid_ids));
    reproduce->add_option("--out-dir", out_dir, "output directory")
        ->capture_default_str();
    reproduce->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    CLI::App* validate =
        app.add_subcommand("validate", "Check every config invariant");
    add_config_options(validate, &opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (keyrate->parsed()) return run_keyrate(opt);
    if (finite->parsed()) return run_finite(opt, no_prefactor);
    if (sweep->parsed()) return run_sweep_cmd(opt, sweep_opt);
    if (maxdist->parsed())
        return run_maxdist(opt, maxdist_mode, tol, maxdist_style);
    if (estimators->parsed()) return run_estimators(opt, est_opt);
    if (reproduce->parsed()) return run_reproduce(rep_id, out_dir, opt);
    if (validate->parsed()) return run_validate(opt);
    return kExitUsage;
}
