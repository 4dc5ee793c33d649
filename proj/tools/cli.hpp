// Copyright 2026 The pureid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pureid::cli {

/// Exit statuses of the command-line tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalidConfig = 2;

enum class Command { verify, simulate, sweep, dims };
enum class OutputFormat { table, csv, json };

struct RunConfig {
    Command command = Command::verify;
    int d_a = 2;
    int d_b = 2;
    double eta1 = 0.5;
    std::int64_t trials = 100000;
    std::uint64_t seed = 1;
    std::string mode = "both";  ///< global | locc | both
    OutputFormat format = OutputFormat::table;
    std::string out;            ///< empty: standard output
    double grid_step = 0.05;
};

using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Report {
    std::string command;
    std::vector<std::pair<std::string, Cell>> config;
    std::vector<Table> tables;
    bool passed = true;
};

/// Throws std::invalid_argument on an inconsistent configuration.
void validate(const RunConfig& config);

Report cmd_verify(const RunConfig& config);
Report cmd_simulate(const RunConfig& config);
Report cmd_sweep(const RunConfig& config);
Report cmd_dims(const RunConfig& config);

void write_report(const Report& report, OutputFormat format, std::ostream& out);

/// `args` excludes the program name. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pureid::cli
