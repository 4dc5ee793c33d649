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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "pureid/global.hpp"
#include "pureid/locc.hpp"
#include "pureid/protocol.hpp"
#include "pureid/symmetry.hpp"

namespace pureid::cli {

namespace {

constexpr int kMachineDigits = 12;
constexpr int kHumanDigits = 6;

std::string format_double(double x, int digits) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

std::string format_cell(const Cell& cell, int digits) {
    return std::visit(
        [&](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                return format_double(v, digits);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else {
                return std::to_string(v);
            }
        },
        cell);
}

nlohmann::ordered_json to_json(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v)) {
                    return format_double(v, kMachineDigits);
                }
                // the shortest representation of the rounded value has <= 12 digits
                return std::stod(format_double(v, kMachineDigits));
            } else {
                return v;
            }
        },
        cell);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::string_view command_name(Command c) {
    switch (c) {
    case Command::verify:
        return "verify";
    case Command::simulate:
        return "simulate";
    case Command::sweep:
        return "sweep";
    case Command::dims:
        return "dims";
    }
    return "?";
}

std::string dims_string(std::int64_t s, std::int64_t a, std::int64_t m) {
    return std::to_string(s) + "/" + std::to_string(a) + "/" + std::to_string(m);
}

std::string identity_string(const DimIdentity& id) {
    std::string s = std::to_string(id.lhs) + " =";
    for (std::size_t k = 0; k < id.terms.size(); ++k) {
        s += (k == 0 ? " " : "+") + std::to_string(id.terms[k]);
    }
    return s;
}

std::vector<std::pair<std::string, Cell>> base_config(const RunConfig& c) {
    return {{"d_a", std::int64_t{c.d_a}}, {"d_b", std::int64_t{c.d_b}}, {"eta1", c.eta1}};
}

int grid_points(double step) {
    return static_cast<int>(std::lround(1.0 / step));
}

/// Sector-dimension row comparing projector traces with the closed-form polynomials.
std::vector<Cell> sector_row(const std::string& label, int d) {
    const auto sectors = build_sectors<double>(d);
    const std::string built = dims_string(sectors.dimS, sectors.dimA, sectors.dimM);
    const std::string expected = dims_string(dim_symmetric(d), dim_antisymmetric(d), dim_mixed(d));
    return {label, built, expected, built == expected};
}

} // namespace

void validate(const RunConfig& c) {
    if (c.d_a < 1 || c.d_b < 1) {
        throw std::invalid_argument("--da and --db must be at least 1");
    }
    if (!(c.eta1 >= 0 && c.eta1 <= 1)) {
        throw std::invalid_argument("--eta1 must lie in [0, 1]");
    }
    if ((c.command == Command::verify || c.command == Command::simulate ||
         c.command == Command::sweep) &&
        c.d_a * c.d_b < 2) {
        throw std::invalid_argument("d_a * d_b must be at least 2");
    }
    if (c.command == Command::simulate && c.trials < 1) {
        throw std::invalid_argument("--trials must be at least 1");
    }
    if (c.mode != "global" && c.mode != "locc" && c.mode != "both") {
        throw std::invalid_argument("--mode must be global, locc or both");
    }
    if (c.command == Command::sweep) {
        if (!(c.grid_step > 0 && c.grid_step <= 1)) {
            throw std::invalid_argument("--grid-step must lie in (0, 1]");
        }
        const int n = grid_points(c.grid_step);
        if (std::abs(n * c.grid_step - 1) > 1e-9) {
            throw std::invalid_argument("--grid-step must divide 1 evenly");
        }
    }
}

Report cmd_verify(const RunConfig& c) {
    const HilbertLayout layout(c.d_a, c.d_b);
    const int d = layout.d();
    const auto priors = PriorPair::from_eta1(c.eta1);

    Report r{"verify", base_config(c), {}, true};
    Table t{"checks", {"check", "value", "expected", "pass"}, {}};

    t.rows.push_back(sector_row("sectors_a", c.d_a));
    t.rows.push_back(sector_row("sectors_b", c.d_b));
    t.rows.push_back(sector_row("sectors_joint", d));
    const auto identity = dim_identity_check(layout);
    t.rows.push_back({"dim_identity", identity_string(identity), std::to_string(identity.lhs),
                      identity.holds});

    const auto global = optimal_global_povm(d, priors);
    const double census = max_abs(global.spectrum.eigenvalues - expected_delta_spectrum(d, priors));
    t.rows.push_back({"lambda_plus", global.lambda_plus, global.lambda_plus, true});
    t.rows.push_back({"lambda_minus", global.lambda_minus, global.lambda_minus, true});
    t.rows.push_back({"delta_spectrum_deviation", census, 0.0, census <= 1e-9});

    const auto expected_spectrum = expected_delta_spectrum(d, priors);
    const std::int64_t expected_rank =
        (expected_spectrum.array() > kPositiveEigenTolerance).count();
    const bool rank_ok = global.rank_e1 == expected_rank;
    t.rows.push_back({"rank_e1", std::int64_t{global.rank_e1}, expected_rank, rank_ok});

    t.rows.push_back({"p_max_closed", global.p_max_closed, global.p_max_closed, true});
    t.rows.push_back({"p_max_spectral", global.p_max_spectral, global.p_max_closed,
                      std::abs(global.p_max_spectral - global.p_max_closed) <= 1e-9});

    const auto locc = build_E1_locc(layout, priors);
    const auto cert = certify_locc(locc, global);
    t.rows.push_back({"p_locc", cert.p_locc, global.p_max_closed,
                      std::abs(cert.p_locc - global.p_max_closed) <= 1e-8});
    t.rows.push_back({"locc_trace_discrepancy", cert.discrepancy, 0.0, cert.discrepancy <= 1e-8});

    const auto global_povm = check_povm_pair(global.povm);
    t.rows.push_back({"global_povm_valid", global_povm.valid, true, global_povm.valid});
    const bool locc_valid = cert.povm.valid && cert.hermiticity_defect <= 1e-12 &&
                            cert.idempotency_defect <= 1e-10;
    t.rows.push_back({"locc_povm_valid", locc_valid, true, locc_valid});

    const auto fact = local_factorization_check(layout);
    const double fact_res = std::max(fact.d_residual, fact.a_residual);
    t.rows.push_back({"local_factorization_residual", fact_res, 0.0, fact_res <= 1e-10});

    for (const auto& row : t.rows) {
        r.passed = r.passed && std::get<bool>(row.back());
    }
    r.tables.push_back(std::move(t));
    return r;
}

Report cmd_simulate(const RunConfig& c) {
    const HilbertLayout layout(c.d_a, c.d_b);
    const auto priors = PriorPair::from_eta1(c.eta1);
    Report r{"simulate", base_config(c), {}, true};
    r.config.emplace_back("trials", c.trials);
    r.config.emplace_back("seed", static_cast<std::int64_t>(c.seed));
    r.config.emplace_back("mode", c.mode);

    Table t{"runs",
            {"mode", "trials", "successes", "empirical_p", "std_error", "reference_p", "z_score",
             "pass"},
            {}};
    std::vector<Mode> modes;
    if (c.mode != "locc") {
        modes.push_back(Mode::global);
    }
    if (c.mode != "global") {
        modes.push_back(Mode::locc);
    }
    for (Mode m : modes) {
        const auto s = monte_carlo(m, layout, priors, c.trials, c.seed);
        const bool ok = std::abs(s.z_score) <= 4;
        r.passed = r.passed && ok;
        t.rows.push_back({std::string(to_string(m)), s.trials, s.successes, s.empirical_p,
                          s.std_error, s.reference_p, s.z_score, ok});
    }
    r.tables.push_back(std::move(t));
    return r;
}

Report cmd_sweep(const RunConfig& c) {
    const HilbertLayout layout(c.d_a, c.d_b);
    const int d = layout.d();
    Report r{"sweep", {{"d_a", std::int64_t{c.d_a}}, {"d_b", std::int64_t{c.d_b}}}, {}, true};
    r.config.emplace_back("grid_step", c.grid_step);

    Table t{"grid",
            {"d", "eta1", "p_max_closed", "p_global_spectral", "p_locc_constructive",
             "discrepancy", "mirror_gap", "pass"},
            {}};
    const int n = grid_points(c.grid_step);
    for (int k = 0; k <= n; ++k) {
        const double eta1 = static_cast<double>(k) / n;
        const auto priors = PriorPair::from_eta1(eta1);
        const auto global = optimal_global_povm(d, priors);
        const auto locc = build_E1_locc(layout, priors);
        const auto cert = certify_locc(locc, global);
        const double closed = global.p_max_closed;
        const double discrepancy =
            std::max({std::abs(closed - global.p_max_spectral), std::abs(closed - cert.p_locc),
                      std::abs(global.p_max_spectral - cert.p_locc)});
        const double mirror =
            std::abs(closed - p_max_closed_form(d, PriorPair::from_eta1(1 - eta1)));
        const bool ok = discrepancy <= 1e-8 && mirror <= 1e-12 && cert.povm.valid;
        r.passed = r.passed && ok;
        t.rows.push_back({std::int64_t{d}, eta1, closed, global.p_max_spectral, cert.p_locc,
                          discrepancy, mirror, ok});
    }
    r.tables.push_back(std::move(t));
    return r;
}

Report cmd_dims(const RunConfig& c) {
    const HilbertLayout layout(c.d_a, c.d_b);
    Report r{"dims", {{"d_a", std::int64_t{c.d_a}}, {"d_b", std::int64_t{c.d_b}}}, {}, true};
    Table sectors{"sectors", {"space", "d", "dimS", "dimA", "dimM"}, {}};
    const std::pair<const char*, int> spaces[] = {{"a", c.d_a}, {"b", c.d_b}, {"joint", layout.d()}};
    for (const auto& [label, d] : spaces) {
        sectors.rows.push_back({std::string(label), std::int64_t{d}, dim_symmetric(d),
                                dim_antisymmetric(d), dim_mixed(d)});
    }
    const auto id = dim_identity_check(layout);
    Table identity{"identity",
                   {"dimM", "S_a*M_b", "M_a*S_b", "A_a*M_b", "M_a*A_b", "M_a*M_b/2", "holds"},
                   {{id.lhs, id.terms[0], id.terms[1], id.terms[2], id.terms[3], id.terms[4],
                     id.holds}}};
    r.passed = id.holds;
    r.tables.push_back(std::move(sectors));
    r.tables.push_back(std::move(identity));
    return r;
}

void write_report(const Report& report, OutputFormat format, std::ostream& out) {
    switch (format) {
    case OutputFormat::json: {
        nlohmann::ordered_json j;
        j["schema"] = 1;
        j["command"] = report.command;
        nlohmann::ordered_json config = nlohmann::ordered_json::object();
        for (const auto& [k, v] : report.config) {
            config[k] = to_json(v);
        }
        j["config"] = config;
        nlohmann::ordered_json tables = nlohmann::ordered_json::object();
        for (const auto& t : report.tables) {
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            for (const auto& row : t.rows) {
                nlohmann::ordered_json obj;
                for (std::size_t k = 0; k < t.columns.size(); ++k) {
                    obj[t.columns[k]] = to_json(row[k]);
                }
                rows.push_back(std::move(obj));
            }
            tables[t.name] = std::move(rows);
        }
        j["tables"] = std::move(tables);
        j["passed"] = report.passed;
        out << j.dump(2) << '\n';
        break;
    }
    case OutputFormat::csv: {
        out << "# schema=1\n# command=" << report.command << '\n';
        for (const auto& [k, v] : report.config) {
            out << "# " << k << '=' << format_cell(v, kMachineDigits) << '\n';
        }
        for (const auto& t : report.tables) {
            out << "# table=" << t.name << '\n';
            for (std::size_t k = 0; k < t.columns.size(); ++k) {
                out << (k ? "," : "") << csv_escape(t.columns[k]);
            }
            out << '\n';
            for (const auto& row : t.rows) {
                for (std::size_t k = 0; k < row.size(); ++k) {
                    out << (k ? "," : "") << csv_escape(format_cell(row[k], kMachineDigits));
                }
                out << '\n';
            }
        }
        out << "# passed=" << (report.passed ? "true" : "false") << '\n';
        break;
    }
    case OutputFormat::table: {
        out << report.command;
        for (const auto& [k, v] : report.config) {
            out << "  " << k << '=' << format_cell(v, kHumanDigits);
        }
        out << "\n";
        for (const auto& t : report.tables) {
            std::vector<std::size_t> width(t.columns.size());
            std::vector<std::vector<std::string>> text;
            for (std::size_t k = 0; k < t.columns.size(); ++k) {
                width[k] = t.columns[k].size();
            }
            for (const auto& row : t.rows) {
                auto& line = text.emplace_back();
                for (std::size_t k = 0; k < row.size(); ++k) {
                    line.push_back(format_cell(row[k], kHumanDigits));
                    width[k] = std::max(width[k], line.back().size());
                }
            }
            out << "\n[" << t.name << "]\n";
            auto emit = [&](const std::vector<std::string>& cells) {
                for (std::size_t k = 0; k < cells.size(); ++k) {
                    out << (k ? "  " : "") << cells[k]
                        << std::string(k + 1 < cells.size() ? width[k] - cells[k].size() : 0, ' ');
                }
                out << '\n';
            };
            emit(t.columns);
            for (const auto& line : text) {
                emit(line);
            }
        }
        out << "\nresult: " << (report.passed ? "PASS" : "FAIL") << '\n';
        break;
    }
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal global and LOCC identification of Haar-random bipartite pure states",
                 "pureid"};
    app.require_subcommand(1);

    RunConfig config;
    const std::map<std::string, OutputFormat> formats = {
        {"table", OutputFormat::table}, {"csv", OutputFormat::csv}, {"json", OutputFormat::json}};

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--da", config.d_a, "Alice's local dimension");
        sub->add_option("--db", config.d_b, "Bob's local dimension");
        sub->add_option("--format", config.format, "Output format: table, csv or json")
            ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case).description(""))
            ->option_text("table|csv|json");
        sub->add_option("--out", config.out, "Write output to this file instead of stdout");
    };
    auto add_priors = [&](CLI::App* sub) {
        sub->add_option("--eta1", config.eta1, "Prior probability of the first reference");
    };

    auto* verify = app.add_subcommand("verify", "Construct both POVMs and check every identity");
    add_common(verify);
    add_priors(verify);
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of the measurement protocols");
    add_common(simulate);
    add_priors(simulate);
    simulate->add_option("--trials", config.trials, "Number of protocol trials");
    simulate->add_option("--seed", config.seed, "Master random seed");
    simulate->add_option("--mode", config.mode, "global, locc or both");
    auto* sweep = app.add_subcommand("sweep", "Tabulate success probabilities over a prior grid");
    add_common(sweep);
    sweep->add_option("--grid-step", config.grid_step, "Spacing of the eta1 grid");
    auto* dims = app.add_subcommand("dims", "Print sector dimensions and the mixed-sector identity");
    add_common(dims);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidConfig;
    }

    if (verify->parsed()) {
        config.command = Command::verify;
    } else if (simulate->parsed()) {
        config.command = Command::simulate;
    } else if (sweep->parsed()) {
        config.command = Command::sweep;
    } else {
        config.command = Command::dims;
    }

    try {
        validate(config);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidConfig;
    }

    Report report;
    try {
        switch (config.command) {
        case Command::verify:
            report = cmd_verify(config);
            break;
        case Command::simulate:
            report = cmd_simulate(config);
            break;
        case Command::sweep:
            report = cmd_sweep(config);
            break;
        case Command::dims:
            report = cmd_dims(config);
            break;
        }
    } catch (const std::exception& e) {
        err << "error: " << command_name(config.command) << " failed: " << e.what() << '\n';
        return kExitCheckFailed;
    }

    if (config.out.empty()) {
        write_report(report, config.format, out);
    } else {
        std::ofstream file(config.out);
        if (!file) {
            err << "error: cannot open " << config.out << " for writing\n";
            return kExitInvalidConfig;
        }
        write_report(report, config.format, file);
    }
    if (!report.passed) {
        for (const auto& t : report.tables) {
            for (const auto& row : t.rows) {
                if (const bool* ok = std::get_if<bool>(&row.back()); ok && !*ok) {
                    err << "error: " << command_name(config.command) << ": check failed: "
                        << format_cell(row.front(), kMachineDigits) << '\n';
                }
            }
        }
    }
    return report.passed ? kExitPass : kExitCheckFailed;
}

} // namespace pureid::cli
