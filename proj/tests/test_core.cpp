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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "config.hpp"
#include "config_io.hpp"
#include "rng.hpp"

using namespace thzqkd;
using Catch::Matchers::WithinRel;

TEST_CASE("physical constants are the pinned values", "[core]") {
    CHECK(PhysicalConstants::planck == 6.626e-34);
    CHECK(PhysicalConstants::boltzmann == 1.38e-23);
    CHECK(PhysicalConstants::light_speed == 2.998e8);
}

TEST_CASE("thermal photon number matches the independent oracle", "[core]") {
    // Oracle: nbar = 1/expm1(h f/(k_B T)) evaluated in extended precision.
    CHECK_THAT(thermal_photon_number(1e11, 300.0),
               WithinRel(61.982468653246194, 1e-12));
    CHECK_THAT(thermal_photon_number(1e12, 300.0),
               WithinRel(5.761445160828379, 1e-12));
}

TEST_CASE("thermal photon number domain and monotonicity", "[core]") {
    CHECK_THROWS_AS(thermal_photon_number(0.0, 300.0), std::domain_error);
    CHECK_THROWS_AS(thermal_photon_number(-1e11, 300.0), std::domain_error);
    CHECK_THROWS_AS(thermal_photon_number(1e11, 0.0), std::domain_error);
    CHECK_THROWS_AS(thermal_photon_number(1e11, -5.0), std::domain_error);

    // Decreasing in f, increasing in T.
    double prev = thermal_photon_number(5e10, 300.0);
    for (double f = 1e11; f <= 1e12; f += 1e11) {
        const double cur = thermal_photon_number(f, 300.0);
        CHECK(cur < prev);
        prev = cur;
    }
    prev = thermal_photon_number(1e11, 100.0);
    for (double t = 150.0; t <= 400.0; t += 50.0) {
        const double cur = thermal_photon_number(1e11, t);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("source variances decompose as V = V_M + V_O", "[core]") {
    const SourceVariances v = source_variances(1e5, 1e11, 300.0);
    CHECK(v.v_mod == 1e5);
    CHECK_THAT(v.v_thermal, WithinRel(124.96493730649239, 1e-12));
    CHECK(v.v_total == v.v_mod + v.v_thermal);
    CHECK_THROWS_AS(source_variances(0.0, 1e11, 300.0), std::domain_error);
}

TEST_CASE("default config is valid and symmetric helper splits legs",
          "[core]") {
    const SystemConfig def;
    CHECK(validate_config(def).empty());
    CHECK(def.frequency_hz == 1e11);
    CHECK(def.mod_variance == 1e5);
    CHECK(def.finite.block_est() == 1e6);

    const SystemConfig sym = SystemConfig::symmetric(128, 2.5e11, 3.0, 5.0);
    CHECK(validate_config(sym).empty());
    CHECK(sym.n_tx_a == 128);
    CHECK(sym.n_rx_a == 128);
    CHECK(sym.n_tx_b == 128);
    CHECK(sym.n_rx_b == 128);
    CHECK(sym.multipath_a == 128);
    CHECK(sym.multipath_b == 128);
    CHECK(sym.distance_ac_m == 1.5);
    CHECK(sym.distance_bc_m == 1.5);
    CHECK(sym.distance_ab() == 3.0);
    CHECK(sym.frequency_hz == 2.5e11);
    CHECK(sym.atmo_loss_db_per_km == 5.0);
}

TEST_CASE("validation reports the first violated field by name", "[core]") {
    SystemConfig cfg;

    SECTION("frequency") {
        cfg.frequency_hz = 0.0;
        CHECK(validate_config(cfg) == "frequency_hz: must be > 0");
    }
    SECTION("modulation variance") {
        cfg.mod_variance = -3.0;
        CHECK(validate_config(cfg) == "mod_variance: must be > 0");
    }
    SECTION("ancilla floor at vacuum") {
        cfg.ancilla_variance = 0.5;
        CHECK(validate_config(cfg).rfind("ancilla_variance", 0) == 0);
    }
    SECTION("detector efficiency range") {
        cfg.det_eff_a = 1.5;
        CHECK(validate_config(cfg) == "det_eff_a: must be in (0, 1]");
        cfg.det_eff_a = 0.0;
        CHECK(validate_config(cfg) == "det_eff_a: must be in (0, 1]");
    }
    SECTION("reconciliation efficiency range") {
        cfg.recon_eff = 1.01;
        CHECK(validate_config(cfg) == "recon_eff: must be in [0, 1]");
    }
    SECTION("multipath cannot exceed the array") {
        cfg.n_tx_a = 4;
        cfg.n_rx_a = 4;
        cfg.multipath_a = 5;
        CHECK(validate_config(cfg) ==
              "multipath_a: exceeds min(n_tx_a, n_rx_a)");
    }
    SECTION("block sizes") {
        cfg.finite.block_key = cfg.finite.block_total;
        CHECK(validate_config(cfg) == "block_key: must satisfy 1 <= N < M");
    }
    SECTION("key dimension is pinned") {
        cfg.finite.dim_hx = 3;
        CHECK(validate_config(cfg) == "dim_hx: must be 2");
    }
    SECTION("declaration order decides which violation is named") {
        cfg.frequency_hz = -1.0;
        cfg.mod_variance = -1.0;
        CHECK(validate_config(cfg) == "frequency_hz: must be > 0");
    }
    SECTION("require_valid throws invalid_argument") {
        cfg.temperature_k = 0.0;
        CHECK_THROWS_AS(require_valid(cfg), std::invalid_argument);
    }
}

TEST_CASE("config schema covers every field and roundtrips by name",
          "[core]") {
    SystemConfig cfg;
    const auto& fields = config_fields();
    CHECK(fields.size() == 24);

    double probe = 3.0;  // valid for every numeric field
    for (const ConfigField& field : fields) {
        std::string err;
        INFO("field " << field.name);
        REQUIRE(config_set_field(cfg, field.name, probe, &err));
        double back = 0.0;
        REQUIRE(config_get_field(cfg, field.name, &back));
        CHECK(back == probe);
    }
}

TEST_CASE("config schema rejects unknown keys and bad values", "[core]") {
    SystemConfig cfg;
    std::string err;
    CHECK_FALSE(config_set_field(cfg, "bogus_key", 1.0, &err));
    CHECK(err == "unknown key: bogus_key");

    double out = 0.0;
    CHECK_FALSE(config_get_field(cfg, "bogus_key", &out));

    // Integer fields reject non-integral values...
    CHECK_FALSE(config_set_field(cfg, "n_tx_a", 2.5, &err));
    CHECK(err.rfind("n_tx_a", 0) == 0);
    // ...and every field rejects non-finite input.
    CHECK_FALSE(config_set_field(cfg, "mod_variance",
                                 std::nan(""), &err));
}

TEST_CASE("config file parser handles comments, spacing and precedence",
          "[core]") {
    std::istringstream in(
        "# leading comment\n"
        "frequency_hz = 2.5e11\n"
        "\n"
        "  mod_variance=1e4   # trailing comment\n"
        "n_tx_a = 8\n"
        "n_rx_a = 8\n"
        "multipath_a = 3\n"
        "frequency_hz = 5e11\n");  // later assignment wins
    const SystemConfig cfg = parse_config(in);
    CHECK(cfg.frequency_hz == 5e11);
    CHECK(cfg.mod_variance == 1e4);
    CHECK(cfg.n_tx_a == 8);
    CHECK(cfg.multipath_a == 3);
    CHECK(cfg.temperature_k == 300.0);  // untouched default
}

TEST_CASE("config file parser reports the offending line", "[core]") {
    SECTION("unknown key") {
        std::istringstream in("frequency_hz = 1e11\nturbo = 9\n");
        CHECK_THROWS_WITH(parse_config(in),
                          Catch::Matchers::StartsWith("line 2:"));
    }
    SECTION("missing separator") {
        std::istringstream in("frequency_hz\n");
        CHECK_THROWS_WITH(parse_config(in),
                          Catch::Matchers::StartsWith("line 1:"));
    }
    SECTION("non-numeric value") {
        std::istringstream in("mod_variance = fast\n");
        CHECK_THROWS_WITH(parse_config(in),
                          Catch::Matchers::StartsWith("line 1:"));
    }
    SECTION("missing file") {
        CHECK_THROWS_WITH(parse_config_file("/nonexistent/path.cfg"),
                          Catch::Matchers::StartsWith("cannot open"));
    }
}

TEST_CASE("rng streams are deterministic and independent", "[core]") {
    Rng a(42), b(42), c(derive_seed(42, 1));
    for (int i = 0; i < 100; ++i) {
        const double ua = a.uniform01();
        CHECK(ua == b.uniform01());
        CHECK(ua >= 0.0);
        CHECK(ua < 1.0);
    }
    // A derived stream must not replay the master stream.
    Rng a2(42);
    bool differs = false;
    for (int i = 0; i < 16; ++i)
        differs = differs || (a2.uniform01() != c.uniform01());
    CHECK(differs);

    // derive_seed separates neighbouring stream ids.
    CHECK(derive_seed(42, 0) != derive_seed(42, 1));
    CHECK(derive_seed(42, 0) != derive_seed(43, 0));
}

TEST_CASE("rng normal moments are sane", "[core]") {
    Rng rng(7);
    const int n = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);        // ~0.002 expected sd of the mean
    CHECK(std::abs(var - 1.0) < 0.02);

    Rng rng2(7);
    (void)rng2;
    CHECK(Rng(9).uniform(2.0, 5.0) >= 2.0);
    CHECK(Rng(9).uniform(2.0, 5.0) < 5.0);
}
