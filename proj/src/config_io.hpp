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

#ifndef THZQKD_CONFIG_IO_HPP
#define THZQKD_CONFIG_IO_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"

namespace thzqkd {

// One entry of the canonical key=value schema. Integer-valued fields accept
// only integral doubles.
struct ConfigField {
    std::string_view name;
    bool integral;
};

// Schema in canonical order (SystemConfig fields, then FiniteSizeConfig).
const std::vector<ConfigField>& config_fields();

// Set/get by schema name. On failure returns false and, for set, fills
// `err` with "<field>: <why>" / "unknown key: <name>".
bool config_set_field(SystemConfig& cfg, std::string_view key, double value,
                      std::string* err);
bool config_get_field(const SystemConfig& cfg, std::string_view key,
                      double* out);

// Parse the key=value format: one assignment per line, '#' starts a comment,
// blank lines ignored, later assignments win. Throws std::runtime_error with
// a "line N: ..." message on syntax or schema errors. The result is NOT
// validated; call validate_config.
SystemConfig parse_config(std::istream& in);
SystemConfig parse_config_file(const std::string& path);

}  // namespace thzqkd

#endif  // THZQKD_CONFIG_IO_HPP
