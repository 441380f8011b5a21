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

#include "ohsense/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <condition_variable>
#include <limits>
#include <mutex>
#include <numbers>
#include <set>
#include <thread>

#include <json.hpp>

#include "ohsense/adaptive.hpp"
#include "ohsense/estimation.hpp"
#include "ohsense/hcrb.hpp"
#include "ohsense/unitary.hpp"

namespace ohsense {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<std::pair<Scenario, std::string>> &scenario_names() {
    static const std::vector<std::pair<Scenario, std::string>> names = {
        {Scenario::stationary_ground, "stationary-ground"}, {Scenario::stationary_thermal, "stationary-thermal"},
        {Scenario::dynamic_aligned, "dynamic-aligned"},     {Scenario::dynamic_thermal, "dynamic-thermal"},
        {Scenario::adaptive, "adaptive"},                   {Scenario::hcrb_compare, "hcrb-compare"},
    };
    return names;
}

double parse_double(std::string_view s, const std::string &what) {
    double v = 0.0;
    const auto *end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) {
        throw ConfigError("cannot parse " + what + " from '" + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find(sep, pos);
        out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos) {
            break;
        }
        pos = next + 1;
    }
    return out;
}

void check_axis_value(const std::string &axis, double v) {
    auto bad = [&](const char *why) {
        throw ConfigError("axis " + axis + " value " + format_number(v) + ": " + why);
    };
    if (!std::isfinite(v)) {
        bad("must be finite");
    }
    if ((axis == "B" || axis == "E" || axis == "t") && v < 0.0) {
        bad("must be non-negative");
    }
    if (axis == "theta" && (v < 0.0 || v > std::numbers::pi + 1e-12)) {
        bad("must lie in [0, pi]");
    }
    if ((axis == "T" || axis == "tau") && !(v > 0.0)) {
        bad("must be positive");
    }
    if (axis == "N" && (v < 1.0 || v != std::floor(v) || v > 1e9)) {
        bad("must be a positive integer");
    }
}

RMatrix identity(int d) { return RMatrix::Identity(d, d); }

/// Model-level quantities shared by every output.
struct Evaluation {
    RMatrix Q;
    RMatrix D;
    RVector lambda;
    ResidualFlags flags;
    std::optional<DerivativeBundle> bundle;
    bool degenerate = false;
    std::optional<double> trFinv;
    std::optional<double> p_null;
    std::optional<double> r_qd;
};

bool needs_hcrb(const SweepConfig &cfg) { return cfg.with_hcrb || cfg.scenario == Scenario::hcrb_compare; }

Evaluation evaluate_model(const SweepConfig &cfg, const std::map<std::string, double> &point) {
    const PhysicalConstants &c = cfg.constants;
    const double theta = cfg.scenario == Scenario::dynamic_aligned ? 0.0 : cfg.value("theta", point);
    const FieldSpec fields{cfg.value("B", point), cfg.value("E", point), theta};
    const ParamPoint lam = lambdas_from_fields(fields, c);
    const HermitianOperator h = build_hamiltonian(lam, c);
    Evaluation e;
    e.lambda = lam.as_vector();

    auto from_bundle = [&](DerivativeBundle b) {
        const EstimationReport r = make_report(b, identity(b.num_params()), e.lambda);
        e.Q = r.Q;
        e.D = r.D;
        e.flags = r.flags;
        e.bundle = std::move(b);
    };

    switch (cfg.scenario) {
    case Scenario::stationary_ground: {
        if (ground_state(h).degenerate) {
            e.degenerate = true;
            return e;
        }
        from_bundle(ground_state_bundle(h, all_dH()));
        break;
    }
    case Scenario::stationary_thermal:
        from_bundle(thermal_bundle(h, all_dH(), cfg.value("T", point)));
        break;
    case Scenario::dynamic_aligned: {
        const GeneratorSet g = generators_spectral(h, {build_dH(1), build_dH(2)}, cfg.value("t", point));
        e.lambda = e.lambda.head(2).eval();
        from_bundle(evolved_bundle(named_probe(cfg.probe), h, g));
        break;
    }
    case Scenario::dynamic_thermal:
    case Scenario::hcrb_compare: {
        const double temp = cfg.value("T", point);
        const double t = cfg.value("t", point);
        const ThermalDynamicalReport r = thermal_dynamical_report(lam, t, temp, c, identity(kNumParams));
        e.Q = r.report.Q;
        e.D = r.report.D;
        e.flags = r.report.flags;
        e.r_qd = r.r_qd;
        if (needs_hcrb(cfg)) {
            const ExponentialModel m = ExponentialModel::thermal(build_hamiltonian(ParamPoint{}, c), temp);
            e.bundle = evolved_bundle(m.state(), h, r.gens);
        }
        break;
    }
    case Scenario::adaptive: {
        const double tau = cfg.value("tau", point);
        const std::vector<HermitianOperator> dH = all_dH();
        const QuantumState psi = cfg.adaptive_probe == AdaptiveProbe::psiOpt
                                     ? named_probe(ProbeId::psiOpt)
                                     : QuantumState::pure(optimize_probe(dH, 8, cfg.seed).psi.normalized());
        std::vector<CVector> d_psi;
        for (const HermitianOperator &a : dH) {
            d_psi.emplace_back(-kI * tau * (a.matrix() * psi.vector()));
        }
        from_bundle(DerivativeBundle::from_pure(psi, std::move(d_psi), DerivativeSource::analytic));
        RVector eta = RVector::Zero(kNumParams);
        eta(cfg.eta_direction - 1) = cfg.value("eta", point);
        e.trFinv = robustness_expansion(psi, dH, tau).resummed_trace(eta);
        const ParamPoint hat = lam.shifted(cfg.eta_direction, -eta(cfg.eta_direction - 1));
        e.p_null = fim_dichotomic(psi, lam, hat, tau, static_cast<int>(cfg.value("N", point)), c).q;
        break;
    }
    }
    return e;
}

} // namespace

Scenario parse_scenario(std::string_view name) {
    for (const auto &[s, n] : scenario_names()) {
        if (n == name) {
            return s;
        }
    }
    throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

std::string to_string(Scenario s) {
    for (const auto &[k, n] : scenario_names()) {
        if (k == s) {
            return n;
        }
    }
    return "unknown";
}

std::vector<std::string> scenario_axes(Scenario s) {
    switch (s) {
    case Scenario::stationary_ground: return {"B", "E", "theta"};
    case Scenario::stationary_thermal: return {"B", "E", "theta", "T"};
    case Scenario::dynamic_aligned: return {"B", "E", "t"};
    case Scenario::dynamic_thermal:
    case Scenario::hcrb_compare: return {"B", "E", "theta", "T", "t"};
    case Scenario::adaptive: return {"B", "E", "theta", "tau", "N", "eta"};
    }
    return {};
}

std::vector<std::string> scenario_outputs(Scenario s) {
    std::vector<std::string> out = {"trQinv", "msnr", "R", "CS", "CHbar", "CH"};
    if (s == Scenario::adaptive) {
        out.emplace_back("trFinv");
        out.emplace_back("p_null");
    }
    if (s == Scenario::dynamic_thermal || s == Scenario::hcrb_compare) {
        out.emplace_back("r_qd");
    }
    return out;
}

std::vector<std::string> flag_columns() {
    return {"degenerate", "singular", "status", "hcrb_method", "hcrb_gap", "hcrb_converged"};
}

double axis_default(const std::string &axis) {
    static const std::map<std::string, double> defaults = {
        {"B", 500.0}, {"E", 5.0}, {"theta", std::numbers::pi / 4.0}, {"T", 0.1},
        {"t", 10.0},  {"tau", 10.0}, {"N", 1000.0}, {"eta", 0.0},
    };
    const auto it = defaults.find(axis);
    if (it == defaults.end()) {
        throw ConfigError("unknown axis '" + axis + "'");
    }
    return it->second;
}

GridAxis GridAxis::parse(std::string_view spec) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError("grid spec must look like axis=start:stop:count[:log], got '" + std::string(spec) + "'");
    }
    GridAxis a;
    a.name = std::string(spec.substr(0, eq));
    const std::vector<std::string_view> parts = split(spec.substr(eq + 1), ':');
    if (parts.size() != 3 && parts.size() != 4) {
        throw ConfigError("grid spec for " + a.name + " needs start:stop:count[:log]");
    }
    a.start = parse_double(parts[0], a.name + " start");
    a.stop = parse_double(parts[1], a.name + " stop");
    const double count = parse_double(parts[2], a.name + " count");
    if (count < 1.0 || count != std::floor(count) || count > 1e7) {
        throw ConfigError("grid count for " + a.name + " must be a positive integer");
    }
    a.count = static_cast<int>(count);
    if (parts.size() == 4) {
        if (parts[3] == "log") {
            a.log = true;
        } else if (parts[3] != "lin" && parts[3] != "linear") {
            throw ConfigError("grid scale for " + a.name + " must be 'log' or 'linear'");
        }
    }
    if (a.log && !(a.start > 0.0 && a.stop > 0.0)) {
        throw ConfigError("log grid for " + a.name + " needs positive start and stop");
    }
    return a;
}

std::vector<double> GridAxis::values() const {
    std::vector<double> v(static_cast<std::size_t>(count));
    if (count == 1) {
        v[0] = start;
        return v;
    }
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / (count - 1);
        if (i == 0) {
            v[i] = start;
        } else if (log) {
            v[i] = i == count - 1 ? stop : std::pow(10.0, std::log10(start) + f * (std::log10(stop) - std::log10(start)));
        } else {
            v[i] = i == count - 1 ? stop : start + f * (stop - start);
        }
    }
    return v;
}

void SweepConfig::validate() const {
    const std::vector<std::string> allowed = scenario_axes(scenario);
    auto is_allowed = [&](const std::string &a) { return std::find(allowed.begin(), allowed.end(), a) != allowed.end(); };
    std::set<std::string> seen;
    for (const GridAxis &a : grid) {
        if (!is_allowed(a.name)) {
            throw ConfigError("axis '" + a.name + "' is not valid for scenario " + to_string(scenario));
        }
        if (!seen.insert(a.name).second) {
            throw ConfigError("axis '" + a.name + "' appears twice on the grid");
        }
        if (a.count < 1) {
            throw ConfigError("grid count for " + a.name + " must be at least 1");
        }
        if (a.log && !(a.start > 0.0 && a.stop > 0.0)) {
            throw ConfigError("log axis " + a.name + " needs positive endpoints");
        }
        for (double v : a.values()) {
            check_axis_value(a.name, v);
        }
    }
    for (const auto &[k, v] : fixed) {
        if (!is_allowed(k)) {
            throw ConfigError("fixed value '" + k + "' is not valid for scenario " + to_string(scenario));
        }
        check_axis_value(k, v);
    }
    for (const std::string &a : allowed) {
        check_axis_value(a, value(a, {}));
    }
    const std::vector<std::string> outs = scenario_outputs(scenario);
    for (const std::string &o : outputs) {
        if (std::find(outs.begin(), outs.end(), o) == outs.end()) {
            throw ConfigError("output '" + o + "' is not available for scenario " + to_string(scenario));
        }
    }
    if (eta_direction < 1 || eta_direction > kNumParams) {
        throw ConfigError("eta_direction must be 1, 2 or 3");
    }
    if (workers < 1 || workers > 256) {
        throw ConfigError("workers must be between 1 and 256");
    }
    if (scenario == Scenario::dynamic_aligned && probe == ProbeId::psiOpt) {
        throw ConfigError("dynamic-aligned supports probes psiA and psiB");
    }
    try {
        constants.validate();
    } catch (const std::invalid_argument &ex) {
        throw ConfigError(ex.what());
    }
}

std::vector<std::string> SweepConfig::output_columns() const {
    const std::vector<std::string> all = scenario_outputs(scenario);
    if (outputs.empty()) {
        return all;
    }
    std::vector<std::string> out;
    for (const std::string &o : all) {
        if (std::find(outputs.begin(), outputs.end(), o) != outputs.end()) {
            out.push_back(o);
        }
    }
    return out;
}

double SweepConfig::value(const std::string &axis, const std::map<std::string, double> &point) const {
    if (const auto it = point.find(axis); it != point.end()) {
        return it->second;
    }
    if (const auto it = fixed.find(axis); it != fixed.end()) {
        return it->second;
    }
    return axis_default(axis);
}

SweepConfig SweepConfig::from_json_text(const std::string &text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const ojson::parse_error &ex) {
        throw ConfigError(std::string("config is not valid JSON: ") + ex.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    SweepConfig cfg;
    try {
        for (const auto &[key, v] : j.items()) {
            if (key == "scenario") {
                cfg.scenario = parse_scenario(v.get<std::string>());
            } else if (key == "grid") {
                for (const auto &g : v) {
                    if (g.is_string()) {
                        cfg.grid.push_back(GridAxis::parse(g.get<std::string>()));
                        continue;
                    }
                    GridAxis a;
                    a.name = g.at("axis").get<std::string>();
                    a.start = g.at("start").get<double>();
                    a.stop = g.at("stop").get<double>();
                    a.count = g.at("count").get<int>();
                    const std::string scale = g.value("scale", std::string("linear"));
                    if (scale != "linear" && scale != "log") {
                        throw ConfigError("grid scale must be 'linear' or 'log'");
                    }
                    a.log = scale == "log";
                    cfg.grid.push_back(a);
                }
            } else if (key == "fixed") {
                for (const auto &[k, x] : v.items()) {
                    cfg.fixed[k] = x.get<double>();
                }
            } else if (key == "probe") {
                const std::string p = v.get<std::string>();
                if (p == "optimized") {
                    cfg.adaptive_probe = AdaptiveProbe::optimized;
                } else {
                    cfg.probe = parse_probe_id(p);
                }
            } else if (key == "eta_direction") {
                cfg.eta_direction = v.get<int>();
            } else if (key == "weight") {
                const std::string w = v.get<std::string>();
                if (w == "identity") {
                    cfg.weight = WeightKind::identity;
                } else if (w == "msnr") {
                    cfg.weight = WeightKind::msnr;
                } else {
                    throw ConfigError("weight must be 'identity' or 'msnr'");
                }
            } else if (key == "outputs") {
                cfg.outputs = v.get<std::vector<std::string>>();
            } else if (key == "seed") {
                cfg.seed = v.get<std::uint64_t>();
            } else if (key == "workers") {
                cfg.workers = v.get<int>();
            } else if (key == "with_hcrb") {
                cfg.with_hcrb = v.get<bool>();
            } else if (key == "format" || key == "out") {
                // Consumed by the command line front end.
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        }
    } catch (const ojson::exception &ex) {
        throw ConfigError(std::string("config value has the wrong type: ") + ex.what());
    } catch (const std::invalid_argument &ex) {
        throw ConfigError(ex.what());
    }
    return cfg;
}

SweepRow evaluate_point(const SweepConfig &cfg, const std::map<std::string, double> &point) {
    SweepRow row;
    const std::vector<std::string> cols = cfg.output_columns();
    row.values.assign(cols.size(), std::nullopt);
    auto set = [&](const std::string &name, std::optional<double> v) {
        const auto it = std::find(cols.begin(), cols.end(), name);
        if (it != cols.end()) {
            row.values[static_cast<std::size_t>(it - cols.begin())] = v;
        }
    };
    try {
        const Evaluation e = evaluate_model(cfg, point);
        row.degenerate = e.degenerate;
        if (e.degenerate) {
            return row;
        }
        const int d = static_cast<int>(e.Q.rows());
        const ScalarBounds id = bounds(e.Q, e.D, identity(d), e.lambda);
        row.singular = id.singular;
        set("trQinv", id.CS);
        set("msnr", id.mSNRbar);
        set("R", id.R);
        set("trFinv", e.trFinv);
        set("p_null", e.p_null);
        set("r_qd", e.r_qd);
        std::optional<RMatrix> W = identity(d);
        if (cfg.weight == WeightKind::msnr) {
            W = msnr_weight(e.lambda);
        }
        if (!W) {
            return row;
        }
        const ScalarBounds wb = cfg.weight == WeightKind::identity ? id : bounds(e.Q, e.D, *W, e.lambda);
        set("CS", wb.CS);
        set("CHbar", wb.CHbar);
        if (needs_hcrb(cfg) && e.bundle) {
            if (wb.singular) {
                set("CH", kInf);
            } else {
                try {
                    const HolevoResult hr = holevo_bound(HolevoProblem::from_bundle(*e.bundle, *W));
                    set("CH", hr.value);
                    row.hcrb_method = to_string(hr.certificate.method);
                    row.hcrb_gap = hr.certificate.gap;
                    row.hcrb_converged = hr.certificate.converged;
                } catch (const NumericalError &) {
                    row.hcrb_method = "failed";
                    row.status = "numerical_error";
                }
            }
        }
    } catch (const NumericalError &) {
        row.status = "numerical_error";
        std::fill(row.values.begin(), row.values.end(), std::nullopt);
    }
    return row;
}

SweepSummary run_sweep(const SweepConfig &cfg, const std::function<void(const SweepRow &)> &emit) {
    cfg.validate();
    std::vector<std::vector<double>> axis_values;
    std::size_t total = 1;
    for (const GridAxis &a : cfg.grid) {
        axis_values.push_back(a.values());
        total *= axis_values.back().size();
    }
    auto coords_of = [&](std::size_t index) {
        std::vector<double> coords(cfg.grid.size());
        for (std::size_t k = cfg.grid.size(); k-- > 0;) {
            const std::size_t n = axis_values[k].size();
            coords[k] = axis_values[k][index % n];
            index /= n;
        }
        return coords;
    };
    auto compute = [&](std::size_t index) {
        const std::vector<double> coords = coords_of(index);
        std::map<std::string, double> point;
        for (std::size_t k = 0; k < coords.size(); ++k) {
            point[cfg.grid[k].name] = coords[k];
        }
        SweepRow row = evaluate_point(cfg, point);
        row.index = index;
        row.coords = coords;
        return row;
    };

    SweepSummary summary;
    auto account = [&](const SweepRow &row) {
        ++summary.rows;
        if (row.status != "ok") {
            ++summary.failures;
        }
        emit(row);
    };
    const int workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), total);
    if (workers <= 1) {
        for (std::size_t i = 0; i < total; ++i) {
            account(compute(i));
        }
        return summary;
    }

    // Bounded reorder buffer: workers stay within `window` rows of the
    // next row to emit, and the calling thread emits in index order.
    const std::size_t window = 8 * static_cast<std::size_t>(workers);
    std::mutex mu;
    std::condition_variable cv;
    std::map<std::size_t, SweepRow> ready;
    std::size_t next_task = 0;
    std::size_t next_emit = 0;
    std::exception_ptr failure;

    auto worker = [&] {
        while (true) {
            std::size_t index;
            {
                std::unique_lock<std::mutex> lock(mu);
                cv.wait(lock, [&] { return next_task >= total || failure || next_task < next_emit + window; });
                if (next_task >= total || failure) {
                    return;
                }
                index = next_task++;
            }
            try {
                SweepRow row = compute(index);
                std::lock_guard<std::mutex> lock(mu);
                ready.emplace(index, std::move(row));
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
            cv.notify_all();
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    while (next_emit < total) {
        SweepRow row;
        {
            std::unique_lock<std::mutex> lock(mu);
            cv.wait(lock, [&] { return failure || ready.count(next_emit) > 0; });
            if (failure) {
                break;
            }
            auto node = ready.extract(next_emit);
            row = std::move(node.mapped());
            ++next_emit;
        }
        cv.notify_all();
        account(row);
    }
    cv.notify_all();
    for (std::thread &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return summary;
}

std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    return out + "\"";
}

ojson json_number(double x) {
    if (std::isfinite(x)) {
        return x;
    }
    return format_number(x);
}

ojson json_optional(const std::optional<double> &x) { return x ? json_number(*x) : ojson(nullptr); }

} // namespace

std::string csv_header(const SweepConfig &cfg) {
    std::string out = "# schema=" + std::string(kSweepSchema) + " scenario=" + to_string(cfg.scenario) + "\r\n";
    std::vector<std::string> cols;
    for (const GridAxis &a : cfg.grid) {
        cols.push_back(a.name);
    }
    for (const std::string &o : cfg.output_columns()) {
        cols.push_back(o);
    }
    for (const std::string &f : flag_columns()) {
        cols.push_back(f);
    }
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out += (i ? "," : "") + csv_field(cols[i]);
    }
    return out + "\r\n";
}

std::string csv_row(const SweepConfig & /*cfg*/, const SweepRow &row) {
    std::vector<std::string> f;
    for (double c : row.coords) {
        f.push_back(format_number(c));
    }
    for (const std::optional<double> &v : row.values) {
        f.push_back(v ? format_number(*v) : std::string());
    }
    f.emplace_back(row.degenerate ? "1" : "0");
    f.emplace_back(row.singular ? "1" : "0");
    f.push_back(row.status);
    f.push_back(row.hcrb_method.value_or(""));
    f.push_back(row.hcrb_gap ? format_number(*row.hcrb_gap) : std::string());
    f.emplace_back(row.hcrb_converged ? (*row.hcrb_converged ? "1" : "0") : "");
    std::string out;
    for (std::size_t i = 0; i < f.size(); ++i) {
        out += (i ? "," : "") + csv_field(f[i]);
    }
    return out + "\r\n";
}

std::string jsonl_row(const SweepConfig &cfg, const SweepRow &row) {
    ojson j;
    j["schema"] = std::string(kSweepSchema);
    j["index"] = row.index;
    for (std::size_t k = 0; k < cfg.grid.size(); ++k) {
        j[cfg.grid[k].name] = json_number(row.coords[k]);
    }
    const std::vector<std::string> cols = cfg.output_columns();
    for (std::size_t k = 0; k < cols.size(); ++k) {
        j[cols[k]] = json_optional(row.values[k]);
    }
    j["degenerate"] = row.degenerate;
    j["singular"] = row.singular;
    j["status"] = row.status;
    j["hcrb_method"] = row.hcrb_method ? ojson(*row.hcrb_method) : ojson(nullptr);
    j["hcrb_gap"] = json_optional(row.hcrb_gap);
    j["hcrb_converged"] = row.hcrb_converged ? ojson(*row.hcrb_converged) : ojson(nullptr);
    return j.dump() + "\n";
}

std::string report_point_json(const SweepConfig &cfg, const std::map<std::string, double> &point) {
    cfg.validate();
    for (const auto &[k, v] : point) {
        const std::vector<std::string> allowed = scenario_axes(cfg.scenario);
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
            throw ConfigError("axis '" + k + "' is not valid for scenario " + to_string(cfg.scenario));
        }
        check_axis_value(k, v);
    }
    ojson j;
    j["schema"] = "ohsense.report/1";
    j["scenario"] = to_string(cfg.scenario);
    ojson pt = ojson::object();
    for (const std::string &a : scenario_axes(cfg.scenario)) {
        pt[a] = json_number(cfg.value(a, point));
    }
    j["point"] = pt;

    const Evaluation e = evaluate_model(cfg, point);
    auto matrix_json = [](const RMatrix &m) {
        ojson rows = ojson::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            ojson r = ojson::array();
            for (Eigen::Index k = 0; k < m.cols(); ++k) {
                r.push_back(json_number(m(i, k)));
            }
            rows.push_back(r);
        }
        return rows;
    };
    ojson lam = ojson::array();
    for (Eigen::Index i = 0; i < e.lambda.size(); ++i) {
        lam.push_back(json_number(e.lambda(i)));
    }
    j["lambda"] = lam;
    j["degenerate"] = e.degenerate;
    if (e.degenerate) {
        j["status"] = "degenerate ground state; QFIM undefined";
        return j.dump(2) + "\n";
    }
    const int d = static_cast<int>(e.Q.rows());
    std::optional<RMatrix> W = identity(d);
    if (cfg.weight == WeightKind::msnr) {
        W = msnr_weight(e.lambda);
    }
    const ScalarBounds id = bounds(e.Q, e.D, identity(d), e.lambda);
    j["Q"] = matrix_json(e.Q);
    j["D"] = matrix_json(e.D);
    j["trQinv"] = json_number(id.CS);
    j["R"] = json_number(id.R);
    j["msnr"] = json_optional(id.mSNRbar);
    j["weight"] = cfg.weight == WeightKind::identity ? "identity" : "msnr";
    if (W) {
        const ScalarBounds wb = bounds(e.Q, e.D, *W, e.lambda);
        j["CS"] = json_number(wb.CS);
        j["CHbar"] = json_number(wb.CHbar);
        j["CS_estimable"] = json_number(wb.CS_estimable);
    } else {
        j["CS"] = nullptr;
        j["CHbar"] = nullptr;
        j["CS_estimable"] = nullptr;
    }
    ojson est = ojson::array();
    ojson not_est = ojson::array();
    for (int k = 0; k < d; ++k) {
        const std::string name = "lambda" + std::to_string(k + 1);
        if (std::find(id.estimable.begin(), id.estimable.end(), k) != id.estimable.end()) {
            est.push_back(name);
        } else {
            not_est.push_back(name);
        }
    }
    j["estimable"] = est;
    j["not_estimable"] = not_est;
    ojson flags;
    flags["wcc_residual"] = json_number(e.flags.wcc);
    flags["pcc_residual"] = json_number(e.flags.pcc);
    flags["rpd_residual"] = json_optional(e.flags.rpd);
    flags["singular"] = id.singular;
    j["flags"] = flags;
    if (e.r_qd) {
        j["r_qd"] = json_number(*e.r_qd);
    }
    if (e.trFinv) {
        j["trFinv"] = json_number(*e.trFinv);
        j["p_null"] = json_optional(e.p_null);
    }
    if (needs_hcrb(cfg) && e.bundle && W) {
        ojson hc;
        if (id.singular) {
            hc["value"] = json_number(kInf);
        } else {
            try {
                const HolevoResult hr = holevo_bound(HolevoProblem::from_bundle(*e.bundle, *W));
                hc["value"] = json_number(hr.value);
                hc["gap"] = json_number(hr.certificate.gap);
                hc["iterations"] = hr.certificate.iterations;
                hc["converged"] = hr.certificate.converged;
                hc["method"] = to_string(hr.certificate.method);
                hc["sld_objective"] = json_number(hr.certificate.sld_objective);
            } catch (const NumericalError &ex) {
                hc["value"] = nullptr;
                hc["error"] = ex.what();
            }
        }
        j["CH"] = hc;
    }
    return j.dump(2) + "\n";
}

} // namespace ohsense
