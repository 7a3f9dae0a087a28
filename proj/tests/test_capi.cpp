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
// Black-box coverage of the public C interface; everything here goes through
// the shared library only.

#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "thzqkd.h"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "thzqkd_capi_test") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

struct Config {
    thzqkd_config* ptr = nullptr;
    Config() { REQUIRE(thzqkd_config_create(&ptr) == THZQKD_OK); }
    explicit Config(thzqkd_config* p) : ptr(p) {}
    ~Config() { thzqkd_config_free(ptr); }
    Config(const Config&) = delete;
    Config& operator=(const Config&) = delete;
    double get(const char* key) const {
        double v = 0.0;
        REQUIRE(thzqkd_config_get(ptr, key, &v) == THZQKD_OK);
        return v;
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

}  // namespace

TEST_CASE("version and status names are stable", "[capi]") {
    CHECK(std::string(thzqkd_version()) == "1.0.0");
    CHECK(std::string(thzqkd_status_name(THZQKD_OK)) == "ok");
    CHECK(std::string(thzqkd_status_name(THZQKD_ERR_NULL_ARGUMENT)) ==
          "null-argument");
    CHECK(std::string(thzqkd_status_name(THZQKD_ERR_INVALID_CONFIG)) ==
          "invalid-config");
    CHECK(std::string(thzqkd_status_name(THZQKD_ERR_DOMAIN)) == "domain");
    CHECK(std::string(thzqkd_status_name(THZQKD_ERR_UNKNOWN_KEY)) ==
          "unknown-key");
    CHECK(std::string(thzqkd_status_name(THZQKD_ERR_IO)) == "io");
    CHECK(std::string(thzqkd_status_name(THZQKD_ERR_PARSE)) == "parse");
    CHECK(std::string(thzqkd_status_name(THZQKD_ERR_INFEASIBLE)) ==
          "infeasible");
    CHECK(std::string(thzqkd_status_name(THZQKD_ERR_INDEX)) == "index");
    CHECK(std::string(thzqkd_status_name(THZQKD_ERR_INTERNAL)) == "internal");
}

TEST_CASE("null handles are rejected uniformly", "[capi]") {
    CHECK(thzqkd_config_create(nullptr) == THZQKD_ERR_NULL_ARGUMENT);
    CHECK(thzqkd_config_set(nullptr, "frequency_hz", 1.0) ==
          THZQKD_ERR_NULL_ARGUMENT);
    CHECK(thzqkd_config_validate(nullptr) == THZQKD_ERR_NULL_ARGUMENT);
    CHECK(thzqkd_channels_idealized(nullptr, nullptr) ==
          THZQKD_ERR_NULL_ARGUMENT);
    CHECK(thzqkd_thermal_occupation(1e11, 300.0, nullptr) ==
          THZQKD_ERR_NULL_ARGUMENT);
    CHECK(thzqkd_report_info_get(nullptr, nullptr) ==
          THZQKD_ERR_NULL_ARGUMENT);
    CHECK(thzqkd_sweep_count(nullptr, nullptr) == THZQKD_ERR_NULL_ARGUMENT);
    CHECK(thzqkd_estimator_mle(0.5, 1.0, 1e5, 10, 6.5, 1, nullptr) ==
          THZQKD_ERR_NULL_ARGUMENT);
    CHECK(std::string(thzqkd_last_error()).find("must not be NULL") !=
          std::string::npos);

    Config cfg;
    CHECK(thzqkd_config_get(cfg.ptr, "frequency_hz", nullptr) ==
          THZQKD_ERR_NULL_ARGUMENT);
}

TEST_CASE("config surface: defaults, schema access, validation", "[capi]") {
    Config cfg;
    CHECK(cfg.get("frequency_hz") == 1e11);
    CHECK(cfg.get("temperature_k") == 300.0);
    CHECK(cfg.get("distance_ac_m") == 0.5);
    CHECK(cfg.get("mod_variance") == 1e5);
    CHECK(cfg.get("ancilla_variance") == 1.0);
    CHECK(cfg.get("det_eff_a") == 1.0);
    CHECK(cfg.get("recon_eff") == 1.0);
    CHECK(cfg.get("n_tx_a") == 1.0);
    CHECK(cfg.get("block_total") == 2e6);
    CHECK(cfg.get("block_key") == 1e6);
    CHECK(cfg.get("z_pe") == 6.5);
    CHECK(cfg.get("dim_hx") == 2.0);

    SECTION("set/get roundtrip and key errors") {
        CHECK(thzqkd_config_set(cfg.ptr, "frequency_hz", 2.5e11) == THZQKD_OK);
        CHECK(cfg.get("frequency_hz") == 2.5e11);
        CHECK(thzqkd_config_set(cfg.ptr, "bogus_key", 1.0) ==
              THZQKD_ERR_UNKNOWN_KEY);
        CHECK(std::string(thzqkd_last_error()).find("unknown key") !=
              std::string::npos);
        double v = 0.0;
        CHECK(thzqkd_config_get(cfg.ptr, "bogus_key", &v) ==
              THZQKD_ERR_UNKNOWN_KEY);
        CHECK(thzqkd_config_set(cfg.ptr, "mod_variance",
                                std::nan("")) == THZQKD_ERR_DOMAIN);
        CHECK(thzqkd_config_set(cfg.ptr, "n_tx_a", 2.5) == THZQKD_ERR_DOMAIN);
        CHECK(std::string(thzqkd_last_error()).rfind("n_tx_a", 0) == 0);
    }
    SECTION("validation points at the offending field") {
        CHECK(thzqkd_config_validate(cfg.ptr) == THZQKD_OK);
        CHECK(thzqkd_config_set(cfg.ptr, "mod_variance", -1.0) == THZQKD_OK);
        CHECK(thzqkd_config_validate(cfg.ptr) == THZQKD_ERR_INVALID_CONFIG);
        CHECK(std::string(thzqkd_last_error()).rfind("mod_variance", 0) == 0);
    }
    SECTION("symmetric constructor") {
        thzqkd_config* raw = nullptr;
        REQUIRE(thzqkd_config_create_symmetric(8, 2.5e11, 3.0, 5.0, &raw) ==
                THZQKD_OK);
        Config sym(raw);
        CHECK(sym.get("n_tx_a") == 8.0);
        CHECK(sym.get("n_rx_b") == 8.0);
        CHECK(sym.get("multipath_a") == 8.0);
        CHECK(sym.get("distance_ac_m") == 1.5);
        CHECK(sym.get("distance_bc_m") == 1.5);
        CHECK(sym.get("frequency_hz") == 2.5e11);
        CHECK(sym.get("atmo_loss_db_per_km") == 5.0);
    }
}

TEST_CASE("config files load with line-accurate errors", "[capi]") {
    TempDir tmp;
    thzqkd_config* raw = nullptr;
    CHECK(thzqkd_config_load(tmp.file("missing.cfg").c_str(), &raw) ==
          THZQKD_ERR_IO);

    {
        std::ofstream out(tmp.file("bad.cfg"));
        out << "mod_variance=2e5\n";
        out << "this line has no equals sign\n";
    }
    CHECK(thzqkd_config_load(tmp.file("bad.cfg").c_str(), &raw) ==
          THZQKD_ERR_PARSE);
    CHECK(std::string(thzqkd_last_error()).find("line 2") !=
          std::string::npos);

    {
        std::ofstream out(tmp.file("good.cfg"));
        out << "# carrier selection\n";
        out << "frequency_hz = 2.5e11\n";
        out << "\n";
        out << "mod_variance=5e4\n";
        out << "n_tx_a=4\n";
    }
    REQUIRE(thzqkd_config_load(tmp.file("good.cfg").c_str(), &raw) ==
            THZQKD_OK);
    Config cfg(raw);
    CHECK(cfg.get("frequency_hz") == 2.5e11);
    CHECK(cfg.get("mod_variance") == 5e4);
    CHECK(cfg.get("n_tx_a") == 4.0);
    CHECK(cfg.get("temperature_k") == 300.0);  // untouched default
}

TEST_CASE("physics helpers match their oracles", "[capi]") {
    double nbar = 0.0;
    REQUIRE(thzqkd_thermal_occupation(1e11, 300.0, &nbar) == THZQKD_OK);
    CHECK_THAT(nbar, WithinRel(61.982468653246194, 1e-12));
    CHECK(thzqkd_thermal_occupation(0.0, 300.0, &nbar) == THZQKD_ERR_DOMAIN);

    double gamma = 0.0;
    REQUIRE(thzqkd_path_loss(1e11, 1.0, 0.6, 1, 1, 30.0, &gamma) == THZQKD_OK);
    CHECK_THAT(gamma, WithinRel(5.121840364445704e-05, 1e-12));
    CHECK(thzqkd_path_loss(1e11, 0.0, 0.6, 1, 1, 30.0, &gamma) ==
          THZQKD_ERR_DOMAIN);
}

TEST_CASE("channel sets expose counts, pairs and clamps", "[capi]") {
    Config cfg;
    thzqkd_channels* ch = nullptr;
    REQUIRE(thzqkd_channels_idealized(cfg.ptr, &ch) == THZQKD_OK);
    int r = 0, clamped = -1;
    CHECK(thzqkd_channels_count(ch, &r) == THZQKD_OK);
    CHECK(r == 1);
    CHECK(thzqkd_channels_clamped(ch, &clamped) == THZQKD_OK);
    CHECK(clamped == 0);

    thzqkd_channel_pair pair{};
    REQUIRE(thzqkd_channels_get(ch, 0, &pair) == THZQKD_OK);
    double gamma = 0.0;
    REQUIRE(thzqkd_path_loss(1e11, 0.5, 0.6, 1, 1, 30.0, &gamma) == THZQKD_OK);
    CHECK(pair.t_a == gamma);
    CHECK(pair.t_b == gamma);
    CHECK(pair.w_a == 1.0);

    CHECK(thzqkd_channels_get(ch, 1, &pair) == THZQKD_ERR_INDEX);
    CHECK(thzqkd_channels_get(ch, -1, &pair) == THZQKD_ERR_INDEX);
    thzqkd_channels_free(ch);

    SECTION("realized draws are seed-deterministic") {
        thzqkd_channels* a = nullptr;
        thzqkd_channels* b = nullptr;
        REQUIRE(thzqkd_channels_realized(cfg.ptr, 7, &a) == THZQKD_OK);
        REQUIRE(thzqkd_channels_realized(cfg.ptr, 7, &b) == THZQKD_OK);
        thzqkd_channel_pair pa{}, pb{};
        REQUIRE(thzqkd_channels_get(a, 0, &pa) == THZQKD_OK);
        REQUIRE(thzqkd_channels_get(b, 0, &pb) == THZQKD_OK);
        CHECK(pa.t_a == pb.t_a);
        CHECK(pa.t_b == pb.t_b);
        thzqkd_channels_free(a);
        thzqkd_channels_free(b);
    }
    SECTION("matrix export writes the documented text format") {
        TempDir tmp;
        const std::string path = tmp.file("h.txt");
        REQUIRE(thzqkd_channel_matrix_export(cfg.ptr, 0, 7, path.c_str()) ==
                THZQKD_OK);
        const std::string text = read_file(path);
        CHECK(first_line(text) == "1 1");
        CHECK(thzqkd_channel_matrix_export(cfg.ptr, 2, 7, path.c_str()) ==
              THZQKD_ERR_DOMAIN);
    }
}

TEST_CASE("asymptotic reports are internally consistent", "[capi]") {
    Config cfg;
    thzqkd_channels* ch = nullptr;
    REQUIRE(thzqkd_channels_idealized(cfg.ptr, &ch) == THZQKD_OK);
    thzqkd_report* rep = nullptr;
    REQUIRE(thzqkd_rate_asymptotic(cfg.ptr, ch, &rep) == THZQKD_OK);

    thzqkd_report_info info{};
    REQUIRE(thzqkd_report_info_get(rep, &info) == THZQKD_OK);
    CHECK(info.finite == 0);
    CHECK(info.delta_n == 0.0);
    CHECK(info.prefactor == 0);
    CHECK(info.r == 1);
    CHECK_THAT(info.total_rate, WithinRel(1.60318707, 1e-7));

    thzqkd_channel_rate c{};
    REQUIRE(thzqkd_report_channel(rep, 0, &c) == THZQKD_OK);
    CHECK(c.rate == info.total_rate);
    CHECK(c.rate == c.s_ab - c.i_be);  // beta = 1
    CHECK(c.lambda1 >= 1.0 - 1e-9);
    CHECK(c.lambda4 >= 1.0 - 1e-9);
    CHECK(c.bracket == 0.0);
    CHECK(c.bounds_clamped == 0);
    CHECK(thzqkd_report_channel(rep, 1, &c) == THZQKD_ERR_INDEX);

    SECTION("identical channels multiply exactly") {
        thzqkd_config* raw = nullptr;
        REQUIRE(thzqkd_config_create_symmetric(2, 1e11, 1.0, 0.6, &raw) ==
                THZQKD_OK);
        Config sym(raw);
        thzqkd_channels* ch2 = nullptr;
        REQUIRE(thzqkd_channels_idealized(sym.ptr, &ch2) == THZQKD_OK);
        thzqkd_report* rep2 = nullptr;
        REQUIRE(thzqkd_rate_asymptotic(sym.ptr, ch2, &rep2) == THZQKD_OK);
        thzqkd_report_info info2{};
        thzqkd_channel_rate c2{};
        REQUIRE(thzqkd_report_info_get(rep2, &info2) == THZQKD_OK);
        REQUIRE(thzqkd_report_channel(rep2, 0, &c2) == THZQKD_OK);
        CHECK(info2.r == 2);
        CHECK(info2.total_rate == 2.0 * c2.rate);
        thzqkd_report_free(rep2);
        thzqkd_channels_free(ch2);
    }
    SECTION("serialization") {
        TempDir tmp;
        const std::string csv = tmp.file("report.csv");
        REQUIRE(thzqkd_report_write(rep, csv.c_str(), 0) == THZQKD_OK);
        CHECK(first_line(read_file(csv)) ==
              "channel,t_a,t_b,t_eq,eps_eq,w_hat,s_ab,i_be,lambda1,lambda2,"
              "lambda3,lambda4,rate,truncated");
        const std::string js = tmp.file("report.json");
        REQUIRE(thzqkd_report_write(rep, js.c_str(), 1) == THZQKD_OK);
        const nlohmann::json obj = nlohmann::json::parse(read_file(js));
        CHECK(obj["total_rate"].get<double>() == info.total_rate);
        CHECK(obj["channels"].size() == 1);
        CHECK(thzqkd_report_write(rep, csv.c_str(), 2) == THZQKD_ERR_DOMAIN);
        CHECK(thzqkd_report_write(rep, "/nonexistent_dir_xyz/x.csv", 0) ==
              THZQKD_ERR_IO);
    }
    thzqkd_report_free(rep);
    thzqkd_channels_free(ch);
}

TEST_CASE("finite reports expose bounds and the exact prefactor", "[capi]") {
    Config cfg;
    thzqkd_channels* ch = nullptr;
    REQUIRE(thzqkd_channels_idealized(cfg.ptr, &ch) == THZQKD_OK);

    thzqkd_report* with = nullptr;
    thzqkd_report* without = nullptr;
    REQUIRE(thzqkd_rate_finite(cfg.ptr, ch, 1, &with) == THZQKD_OK);
    REQUIRE(thzqkd_rate_finite(cfg.ptr, ch, 0, &without) == THZQKD_OK);

    thzqkd_report_info iw{}, io{};
    REQUIRE(thzqkd_report_info_get(with, &iw) == THZQKD_OK);
    REQUIRE(thzqkd_report_info_get(without, &io) == THZQKD_OK);
    CHECK(iw.finite == 1);
    CHECK(iw.prefactor == 1);
    CHECK(io.prefactor == 0);
    CHECK_THAT(iw.delta_n, WithinRel(0.04101451258858193, 1e-12));
    CHECK(iw.total_rate == 0.5 * io.total_rate);  // N/M = 1/2 exactly

    thzqkd_channel_rate c{};
    REQUIRE(thzqkd_report_channel(with, 0, &c) == THZQKD_OK);
    CHECK(c.t_low_a > 0.0);
    CHECK(c.t_low_a < c.t_a);
    CHECK(c.w_up_a >= 1.0);
    CHECK(c.bracket == c.rate - iw.delta_n);
    CHECK(c.contribution == 0.5 * c.bracket);
    CHECK(c.bounds_clamped == 0);

    thzqkd_report_free(with);
    thzqkd_report_free(without);
    thzqkd_channels_free(ch);
}

TEST_CASE("max distance anchors and failure modes", "[capi]") {
    Config cfg;
    double d = 0.0, inside = 0.0, outside = 0.0;
    REQUIRE(thzqkd_max_distance(cfg.ptr, 0, 1e-3, &d, &inside, &outside) ==
            THZQKD_OK);
    CHECK_THAT(d, WithinAbs(2.5158871708869928, 1e-3));
    CHECK(inside > 0.0);
    CHECK(outside <= 0.0);
    // The rate pointers are optional.
    CHECK(thzqkd_max_distance(cfg.ptr, 0, 1e-3, &d, nullptr, nullptr) ==
          THZQKD_OK);
    CHECK(thzqkd_max_distance(cfg.ptr, 2, 1e-3, &d, nullptr, nullptr) ==
          THZQKD_ERR_DOMAIN);
    CHECK(thzqkd_max_distance(cfg.ptr, 0, 0.0, &d, nullptr, nullptr) ==
          THZQKD_ERR_DOMAIN);

    REQUIRE(thzqkd_config_set(cfg.ptr, "recon_eff", 0.01) == THZQKD_OK);
    CHECK(thzqkd_max_distance(cfg.ptr, 0, 1e-3, &d, nullptr, nullptr) ==
          THZQKD_ERR_INFEASIBLE);
}

TEST_CASE("sweeps evaluate grids with per-point error reporting", "[capi]") {
    Config cfg;
    const double grid[] = {0.5, 1.0, 2.0};
    thzqkd_sweep* sw = nullptr;
    REQUIRE(thzqkd_sweep_run(cfg.ptr, THZQKD_AXIS_DISTANCE, grid, 3, 0, 0, 0,
                             &sw) == THZQKD_OK);
    size_t n = 0;
    CHECK(thzqkd_sweep_count(sw, &n) == THZQKD_OK);
    REQUIRE(n == 3);
    for (size_t i = 0; i < n; ++i) {
        thzqkd_sweep_point p{};
        REQUIRE(thzqkd_sweep_point_get(sw, i, &p) == THZQKD_OK);
        CHECK(p.axis_value == grid[i]);
        CHECK(std::isfinite(p.total_rate));
        CHECK(p.error == 0);
        CHECK(std::string(thzqkd_sweep_point_error(sw, i)).empty());
    }
    CHECK(thzqkd_sweep_point_error(sw, 99) == nullptr);
    CHECK(thzqkd_sweep_point_error(nullptr, 0) == nullptr);
    thzqkd_sweep_point oob{};
    CHECK(thzqkd_sweep_point_get(sw, 3, &oob) == THZQKD_ERR_INDEX);

    SECTION("serialization replays byte-identically") {
        TempDir tmp;
        REQUIRE(thzqkd_sweep_write(sw, tmp.file("a.csv").c_str(), 0) ==
                THZQKD_OK);
        REQUIRE(thzqkd_sweep_write(sw, tmp.file("b.csv").c_str(), 0) ==
                THZQKD_OK);
        const std::string a = read_file(tmp.file("a.csv"));
        CHECK(a == read_file(tmp.file("b.csv")));
        CHECK(first_line(a) ==
              "axis_value,total_rate,channel1_rate,r,clamp_count,feasible,"
              "error");
    }
    thzqkd_sweep_free(sw);

    SECTION("bad grid points are recorded, not fatal") {
        const double etas[] = {0.5, 2.0};
        thzqkd_sweep* sw2 = nullptr;
        REQUIRE(thzqkd_sweep_run(cfg.ptr, THZQKD_AXIS_DETECTOR_EFFICIENCY,
                                 etas, 2, 0, 0, 0, &sw2) == THZQKD_OK);
        thzqkd_sweep_point p{};
        REQUIRE(thzqkd_sweep_point_get(sw2, 1, &p) == THZQKD_OK);
        CHECK(p.error == THZQKD_ERR_DOMAIN);
        CHECK(std::isnan(p.total_rate));
        CHECK(p.feasible == 0);
        CHECK(std::string(thzqkd_sweep_point_error(sw2, 1)).size() > 0);
        thzqkd_sweep_free(sw2);
    }
    SECTION("grid and enum validation") {
        const double flat[] = {1.0, 1.0};
        thzqkd_sweep* bad = nullptr;
        CHECK(thzqkd_sweep_run(cfg.ptr, THZQKD_AXIS_DISTANCE, flat, 2, 0, 0, 0,
                               &bad) == THZQKD_ERR_INVALID_CONFIG);
        CHECK(thzqkd_sweep_run(cfg.ptr, static_cast<thzqkd_sweep_axis>(7),
                               grid, 3, 0, 0, 0, &bad) == THZQKD_ERR_DOMAIN);
        CHECK(thzqkd_sweep_run(cfg.ptr, THZQKD_AXIS_DISTANCE, grid, 3, 5, 0, 0,
                               &bad) == THZQKD_ERR_DOMAIN);
    }
}

TEST_CASE("preset reproduction through the C surface", "[capi]") {
    const std::string ids = thzqkd_reproduce_ids();
    CHECK(ids ==
          "fig2a fig2b fig2c fig2d fig3 fig4 fig5 fig6 fig7 fig10 table2");
    TempDir tmp;
    CHECK(thzqkd_reproduce("nope", tmp.path.string().c_str(), 0) ==
          THZQKD_ERR_UNKNOWN_KEY);
    REQUIRE(thzqkd_reproduce("fig5", tmp.path.string().c_str(), 0) ==
            THZQKD_OK);
    CHECK(fs::exists(tmp.path / "fig5.csv"));
}

TEST_CASE("estimator surface: MLE, distribution, bounds, dumps", "[capi]") {
    thzqkd_mle_result a{}, b{};
    REQUIRE(thzqkd_estimator_mle(0.5, 1.0, 1e5, 10000, 6.5, 3, &a) ==
            THZQKD_OK);
    REQUIRE(thzqkd_estimator_mle(0.5, 1.0, 1e5, 10000, 6.5, 3, &b) ==
            THZQKD_OK);
    CHECK(a.t_hat == b.t_hat);
    CHECK(a.sigma2_hat == b.sigma2_hat);
    CHECK(a.t_ci_lo < 0.5);
    CHECK(a.t_ci_hi > 0.5);
    CHECK(thzqkd_estimator_mle(0.5, 1.0, 1e5, 1, 6.5, 3, &a) ==
          THZQKD_ERR_DOMAIN);

    thzqkd_estimator_stats stats{};
    REQUIRE(thzqkd_estimator_distribution(0.5, 1.0125, 1e5, 1000, 2000, 7,
                                          &stats) == THZQKD_OK);
    CHECK(stats.pass == 1);
    CHECK(stats.theory_mean_chi == 999.0);

    thzqkd_bounds bounds{};
    REQUIRE(thzqkd_estimator_bounds(0.5, 1.2, 1e5, 1000000, 6.5, 11,
                                    &bounds) == THZQKD_OK);
    CHECK(bounds.clamped == 0);
    CHECK_THAT(bounds.t_low, WithinRel(0.2499774839, 1e-3));
    CHECK_THAT(bounds.eps_up, WithinAbs(0.8441234631460408, 0.034));
    CHECK(bounds.w_up > 1.0);

    TempDir tmp;
    const std::string path = tmp.file("trials.csv");
    REQUIRE(thzqkd_estimator_dump(0.5, 1.0, 1e5, 100, 10, 5, path.c_str()) ==
            THZQKD_OK);
    const std::string text = read_file(path);
    CHECK(first_line(text) == "trial,t_hat,sigma2_hat");
    CHECK(std::count(text.begin(), text.end(), '\n') == 11);
}
