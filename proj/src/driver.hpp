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

#ifndef THZQKD_DRIVER_HPP
#define THZQKD_DRIVER_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "finite.hpp"
#include "rates.hpp"

namespace thzqkd {

enum class RateMode { asymptotic, finite };
enum class ChannelMode { idealized, realized };
enum class OutputFormat { csv, json };

enum class SweepAxis {
    distance,             // total d_AB (m); legs scaled proportionally
    frequency,            // carrier (Hz)
    detector_efficiency,  // both detectors
    block_size,           // M, with N kept at M/2
    antennas              // all four arrays and both path counts
};

struct SweepSpec {
    SweepAxis axis = SweepAxis::distance;
    std::vector<double> grid;  // strictly increasing
    RateMode mode = RateMode::asymptotic;
    ChannelMode channel_mode = ChannelMode::idealized;
    std::uint64_t seed = 0;  // per-point streams are derived from this
};

struct SweepRow {
    double axis_value = 0.0;
    double total_rate = 0.0;
    double channel1_rate = 0.0;
    int r = 0;
    int clamp_count = 0;
    bool feasible = false;  // total_rate > 0
    std::string error;      // empty when the point evaluated cleanly
    int error_kind = 0;     // 0 ok, 1 domain, 2 invalid-config, 3 other
};

// Apply one axis value to a copy of the base config (used by sweeps, the
// bisection and the presets). Throws std::domain_error on bad values.
SystemConfig apply_axis(const SystemConfig& base, SweepAxis axis, double value);

// Evaluate the grid; per-point failures are recorded in the row's error
// field without aborting. Rows are independent of evaluation order.
std::vector<SweepRow> run_sweep(const SystemConfig& base, const SweepSpec& spec);

struct MaxDistanceResult {
    double distance_m = 0.0;
    double rate_inside = 0.0;   // total rate just inside the boundary
    double rate_outside = 0.0;  // total rate just outside
};

// Largest feasible total distance d_AB by sign bisection on the idealized
// total rate. Throws std::runtime_error (infeasible) when the rate is
// non-positive already at d -> 0+.
MaxDistanceResult max_distance(const SystemConfig& cfg, RateMode mode,
                               double tolerance_m);

// Serialization. CSV: header row, %.9g floats, LF endings. JSON mirrors the
// same fields; report JSON adds the totals object.
void write_sweep(std::ostream& os, const std::vector<SweepRow>& rows,
                 OutputFormat format);
void write_report(std::ostream& os, const KeyRateReport& report,
                  OutputFormat format);
void write_report(std::ostream& os, const FiniteKeyRateReport& report,
                  OutputFormat format);

// Preset studies. Each id produces one table written as <out_dir>/<id>.csv
// or .json; returns the paths written. Throws std::invalid_argument for an
// unknown id (the message lists the valid ones).
const std::vector<std::string>& reproduce_ids();
std::vector<std::string> reproduce(const std::string& id,
                                   const std::string& out_dir,
                                   OutputFormat format);

}  // namespace thzqkd

#endif  // THZQKD_DRIVER_HPP
