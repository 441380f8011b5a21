// Copyright 2026 The ohsense Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: `ohsense sweep` streams a grid of scenario
// evaluations as CSV or JSON lines, `ohsense report` prints one point.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure
// (partial output is still written).

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ohsense/matrix.hpp"
#include "ohsense/sweep.hpp"

namespace {

using ohsense::ConfigError;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
    std::string config_path;
    std::string scenario;
    std::vector<std::string> grid;
    std::vector<std::string> set;
    std::string probe;
    int eta_direction = 0;
    std::string weight;
    std::string outputs;
    std::string out;
    std::string format;
    int workers = 0;
    long long seed = -1;
    bool with_hcrb = false;
    bool time_ns = false;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::pair<std::string, double> parse_assignment(const std::string &s) {
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("expected axis=value, got '" + s + "'");
    }
    const std::string key = s.substr(0, eq);
    const std::string val = s.substr(eq + 1);
    try {
        std::size_t used = 0;
        const double v = std::stod(val, &used);
        if (used != val.size()) {
            throw std::invalid_argument(val);
        }
        return {key, v};
    } catch (const std::exception &) {
        throw ConfigError("cannot parse value for " + key + ": '" + val + "'");
    }
}

/// Config file first, then command-line flags on top.
ohsense::SweepConfig build_config(const CommonOptions &o, std::string &format, std::string &out) {
    ohsense::SweepConfig cfg;
    if (!o.config_path.empty()) {
        const std::string text = read_file(o.config_path);
        cfg = ohsense::SweepConfig::from_json_text(text);
        const auto j = nlohmann::json::parse(text);
        format = j.value("format", format);
        out = j.value("out", out);
    }
    if (!o.scenario.empty()) {
        cfg.scenario = ohsense::parse_scenario(o.scenario);
    }
    if (!o.grid.empty()) {
        std::vector<ohsense::GridAxis> axes;
        for (const std::string &g : o.grid) {
            axes.push_back(ohsense::GridAxis::parse(g));
        }
        // Flags replace config axes with the same name and append new ones.
        for (const ohsense::GridAxis &a : axes) {
            bool replaced = false;
            for (ohsense::GridAxis &existing : cfg.grid) {
                if (existing.name == a.name) {
                    existing = a;
                    replaced = true;
                }
            }
            if (!replaced) {
                cfg.grid.push_back(a);
            }
        }
    }
    for (const std::string &s : o.set) {
        const auto [k, v] = parse_assignment(s);
        cfg.fixed[k] = v;
    }
    if (!o.probe.empty()) {
        if (o.probe == "optimized") {
            cfg.adaptive_probe = ohsense::AdaptiveProbe::optimized;
        } else {
            try {
                cfg.probe = ohsense::parse_probe_id(o.probe);
            } catch (const std::invalid_argument &ex) {
                throw ConfigError(ex.what());
            }
            if (cfg.probe == ohsense::ProbeId::psiOpt) {
                cfg.adaptive_probe = ohsense::AdaptiveProbe::psiOpt;
            }
        }
    }
    if (o.eta_direction != 0) {
        cfg.eta_direction = o.eta_direction;
    }
    if (!o.weight.empty()) {
        if (o.weight == "identity") {
            cfg.weight = ohsense::WeightKind::identity;
        } else if (o.weight == "msnr") {
            cfg.weight = ohsense::WeightKind::msnr;
        } else {
            throw ConfigError("weight must be 'identity' or 'msnr'");
        }
    }
    if (!o.outputs.empty()) {
        cfg.outputs.clear();
        std::stringstream ss(o.outputs);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) {
                cfg.outputs.push_back(item);
            }
        }
    }
    if (o.workers != 0) {
        cfg.workers = o.workers;
    }
    if (o.seed >= 0) {
        cfg.seed = static_cast<std::uint64_t>(o.seed);
    }
    if (o.with_hcrb) {
        cfg.with_hcrb = true;
    }
    if (!o.format.empty()) {
        format = o.format;
    }
    if (!o.out.empty()) {
        out = o.out;
    }
    if (o.time_ns) {
        // Time inputs in nanoseconds become internal 1/K units.
        auto convert = [](double ns) { return ohsense::time_from_seconds(ns * 1e-9); };
        for (ohsense::GridAxis &a : cfg.grid) {
            if (a.name == "t" || a.name == "tau") {
                a.start = convert(a.start);
                a.stop = convert(a.stop);
            }
        }
        for (auto &[k, v] : cfg.fixed) {
            if (k == "t" || k == "tau") {
                v = convert(v);
            }
        }
    }
    if (format != "csv" && format != "jsonl") {
        throw ConfigError("format must be 'csv' or 'jsonl'");
    }
    cfg.validate();
    return cfg;
}

void add_common(CLI::App &cmd, CommonOptions &o) {
    cmd.add_option("--config", o.config_path, "JSON config file; flags override its values");
    cmd.add_option("--scenario", o.scenario,
                   "stationary-ground | stationary-thermal | dynamic-aligned | dynamic-thermal | adaptive | hcrb-compare");
    cmd.add_option("--set", o.set, "fixed axis value, axis=value (repeatable)");
    cmd.add_option("--probe", o.probe, "psiA | psiB (dynamic-aligned), psiOpt | optimized (adaptive)");
    cmd.add_option("--eta-direction", o.eta_direction, "adaptive: control error along lambda_1, 2 or 3");
    cmd.add_option("--weight", o.weight, "identity | msnr");
    cmd.add_option("--out", o.out, "output file, '-' for stdout (default stdout)");
    cmd.add_option("--seed", o.seed, "seed for randomized probe optimization");
    cmd.add_flag("--with-hcrb", o.with_hcrb, "also compute the Holevo bound");
    cmd.add_flag("--time-ns", o.time_ns, "read t and tau in nanoseconds");
}

template <class Body> int guarded(Body &&body) {
    try {
        return body();
    } catch (const ConfigError &ex) {
        std::cerr << "configuration error: " << ex.what() << "\n";
        return kExitConfig;
    } catch (const ohsense::NumericalError &ex) {
        std::cerr << "numerical failure: " << ex.what() << "\n";
        return kExitNumerical;
    }
}

int run_sweep_command(const CommonOptions &o) {
    std::string format = "csv";
    std::string out_path;
    const ohsense::SweepConfig cfg = build_config(o, format, out_path);
    // "-" and the empty path both mean stdout.
    const bool to_stdout = out_path.empty() || out_path == "-";
    std::ofstream file;
    if (!to_stdout) {
        file.open(out_path, std::ios::binary);
        if (!file) {
            throw ConfigError("cannot open output file '" + out_path + "'");
        }
    }
    std::ostream &os = to_stdout ? std::cout : file;
    const bool csv = format == "csv";
    if (csv) {
        os << ohsense::csv_header(cfg);
    }
    const ohsense::SweepSummary s = ohsense::run_sweep(cfg, [&](const ohsense::SweepRow &row) {
        os << (csv ? ohsense::csv_row(cfg, row) : ohsense::jsonl_row(cfg, row));
    });
    os.flush();
    if (s.failures > 0) {
        std::cerr << s.failures << " of " << s.rows << " points failed numerically\n";
        return kExitNumerical;
    }
    return 0;
}

int run_report_command(const CommonOptions &o) {
    std::string format = "csv";
    std::string out_path;
    CommonOptions copy = o;
    std::map<std::string, double> point;
    for (const std::string &s : o.set) {
        point.insert(parse_assignment(s));
    }
    copy.set.clear();
    ohsense::SweepConfig cfg = build_config(copy, format, out_path);
    if (o.time_ns) {
        for (auto &[k, v] : point) {
            if (k == "t" || k == "tau") {
                v = ohsense::time_from_seconds(v * 1e-9);
            }
        }
    }
    const std::string doc = ohsense::report_point_json(cfg, point);
    if (out_path.empty()) {
        std::cout << doc;
    } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) {
            throw ConfigError("cannot open output file '" + out_path + "'");
        }
        file << doc;
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Multiparameter quantum-estimation bounds for the OH Stark-Zeeman model"};
    app.require_subcommand(1);

    CommonOptions sweep_opts;
    CLI::App *sweep = app.add_subcommand("sweep", "evaluate a scenario on a parameter grid");
    add_common(*sweep, sweep_opts);
    sweep->add_option("--grid", sweep_opts.grid, "axis=start:stop:count[:log] (repeatable)");
    sweep->add_option("--outputs", sweep_opts.outputs, "comma-separated subset of output columns");
    sweep->add_option("--format", sweep_opts.format, "csv | jsonl");
    sweep->add_option("--workers", sweep_opts.workers, "worker threads");

    CommonOptions report_opts;
    CLI::App *report = app.add_subcommand("report", "full report for a single point as JSON");
    add_common(*report, report_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }
    if (sweep->parsed()) {
        return guarded([&] { return run_sweep_command(sweep_opts); });
    }
    return guarded([&] { return run_report_command(report_opts); });
}
