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

/**
 * @file
 * Parameter sweeps over fields, temperature and time for the six
 * scenarios, with deterministic row order and CSV / JSON-lines rendering.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ohsense/model.hpp"
#include "ohsense/probes.hpp"

namespace ohsense {

/// Invalid scenario, axis or option; raised before any point is computed.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Scenario { stationary_ground, stationary_thermal, dynamic_aligned, dynamic_thermal, adaptive, hcrb_compare };

Scenario parse_scenario(std::string_view name);
std::string to_string(Scenario s);

/// Axes a scenario accepts on its grid.
std::vector<std::string> scenario_axes(Scenario s);

/// Output columns a scenario can produce, in emission order.
std::vector<std::string> scenario_outputs(Scenario s);

struct GridAxis {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    int count = 1;
    bool log = false;

    /// Parses "name=start:stop:count[:log]".
    static GridAxis parse(std::string_view spec);
    /// count points from start to stop inclusive; a single point is `start`.
    [[nodiscard]] std::vector<double> values() const;
};

enum class WeightKind { identity, msnr };
enum class OutputFormat { csv, jsonl };

enum class AdaptiveProbe { psiOpt, optimized };

struct SweepConfig {
    Scenario scenario = Scenario::stationary_ground;
    std::vector<GridAxis> grid;
    std::map<std::string, double> fixed;     ///< values for axes not on the grid
    ProbeId probe = ProbeId::psiA;           ///< dynamic-aligned probe
    AdaptiveProbe adaptive_probe = AdaptiveProbe::psiOpt;
    int eta_direction = 1;                   ///< adaptive: η = eta·e_{direction}
    WeightKind weight = WeightKind::identity;
    std::vector<std::string> outputs;        ///< empty means all scenario outputs
    std::uint64_t seed = 1;
    int workers = 1;
    bool with_hcrb = false;
    PhysicalConstants constants = default_constants();

    /// Throws ConfigError on unknown axes, duplicate axes, bad counts etc.
    void validate() const;
    /// Output columns that will be emitted.
    [[nodiscard]] std::vector<std::string> output_columns() const;
    /// Value of an axis at a point: grid coordinate, fixed value or default.
    [[nodiscard]] double value(const std::string &axis, const std::map<std::string, double> &point) const;

    /// Reads the JSON config document. Unknown keys are a ConfigError.
    static SweepConfig from_json_text(const std::string &text);
};

/// Default for each physical axis (B = 500 G, E = 5 kV/cm, θ = π/4, T = 0.1 K,
/// t = 10 K⁻¹, τ = 10 K⁻¹, N = 1000, η = 0).
double axis_default(const std::string &axis);

/// Flag columns emitted after the outputs.
std::vector<std::string> flag_columns();

struct SweepRow {
    std::size_t index = 0;
    std::vector<double> coords;
    std::vector<std::optional<double>> values; ///< aligned with output_columns()
    bool degenerate = false;
    bool singular = false;
    std::string status = "ok";                 ///< "ok" or "numerical_error"
    std::optional<std::string> hcrb_method;
    std::optional<double> hcrb_gap;
    std::optional<bool> hcrb_converged;
};

/// Evaluates a single grid point given axis coordinates.
SweepRow evaluate_point(const SweepConfig &cfg, const std::map<std::string, double> &point);

struct SweepSummary {
    std::size_t rows = 0;
    std::size_t failures = 0;
};

/// Computes all grid points on `cfg.workers` threads and calls `emit` in
/// lexicographic grid order (first axis slowest) from the calling thread.
SweepSummary run_sweep(const SweepConfig &cfg, const std::function<void(const SweepRow &)> &emit);

/// Shortest round-trip decimal; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double x);

std::string csv_header(const SweepConfig &cfg);
std::string csv_row(const SweepConfig &cfg, const SweepRow &row);
std::string jsonl_row(const SweepConfig &cfg, const SweepRow &row);

/// Schema tag written as the first CSV comment line.
inline constexpr std::string_view kSweepSchema = "ohsense.sweep/1";

/// Single-point report as a JSON document (scenario, coordinates, Q, D,
/// bounds, residual flags, estimable / not-estimable parameters, optional HCRB).
std::string report_point_json(const SweepConfig &cfg, const std::map<std::string, double> &point);

} // namespace ohsense
