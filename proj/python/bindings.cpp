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

// Python bindings for the ohsense core. Matrices cross the boundary as numpy
// arrays (complex128 for operators and states, float64 for Q, D, W).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ohsense/adaptive.hpp"
#include "ohsense/estimation.hpp"
#include "ohsense/hcrb.hpp"
#include "ohsense/matrix.hpp"
#include "ohsense/model.hpp"
#include "ohsense/probes.hpp"
#include "ohsense/sweep.hpp"
#include "ohsense/unitary.hpp"

namespace py = pybind11;
using namespace ohsense;

namespace {

ParamPoint to_point(const RVector &v) {
    if (v.size() != kNumParams) {
        throw std::invalid_argument("parameter vector must have 3 components");
    }
    return ParamPoint::from_vector(v);
}

std::vector<CMatrix> matrices(const std::vector<HermitianOperator> &ops) {
    std::vector<CMatrix> out;
    out.reserve(ops.size());
    for (const HermitianOperator &op : ops) {
        out.push_back(op.matrix());
    }
    return out;
}

std::vector<HermitianOperator> operators(const std::vector<CMatrix> &ms) {
    std::vector<HermitianOperator> out;
    out.reserve(ms.size());
    for (const CMatrix &m : ms) {
        out.emplace_back(m);
    }
    return out;
}

QuantumState state_from_array(const py::array &a) {
    if (a.ndim() == 1) {
        return QuantumState::pure(a.cast<CVector>());
    }
    return QuantumState::mixed(a.cast<CMatrix>());
}

py::dict bounds_dict(const ScalarBounds &b) {
    py::dict d;
    d["CS"] = b.CS;
    d["CHbar"] = b.CHbar;
    d["R"] = b.R;
    d["mSNRbar"] = b.mSNRbar;
    d["singular"] = b.singular;
    d["estimable"] = b.estimable;
    d["CS_estimable"] = b.CS_estimable;
    return d;
}

py::dict report_dict(const EstimationReport &r) {
    py::dict d;
    d["Q"] = r.Q;
    d["D"] = r.D;
    d["CS"] = r.CS;
    d["CHbar"] = r.CHbar;
    d["CH"] = r.CH;
    d["R"] = r.R;
    d["mSNRbar"] = r.mSNRbar;
    d["wcc_residual"] = r.flags.wcc;
    d["pcc_residual"] = r.flags.pcc;
    d["rpd_residual"] = r.flags.rpd;
    d["singular"] = r.singular;
    d["estimable"] = r.estimable;
    d["CS_estimable"] = r.CS_estimable;
    return d;
}

py::dict certificate_dict(const HolevoCertificate &c) {
    py::dict d;
    d["gap"] = c.gap;
    d["iterations"] = c.iterations;
    d["converged"] = c.converged;
    d["method"] = to_string(c.method);
    d["sld_objective"] = c.sld_objective;
    return d;
}

GeneratorMethod parse_method(const std::string &name) {
    if (name == "series") {
        return GeneratorMethod::series;
    }
    if (name == "spectral") {
        return GeneratorMethod::spectral;
    }
    throw std::invalid_argument("generator method must be 'series' or 'spectral'");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multiparameter quantum estimation bounds for an OH-molecule field probe.";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.attr("DIM") = kDim;
    m.attr("NUM_PARAMS") = kNumParams;
    m.attr("COV_NORMALIZATION_FACTOR") = kCovNormalizationFactor;
    m.attr("SWEEP_SCHEMA") = std::string(kSweepSchema);

    // -- model ----------------------------------------------------------------

    py::class_<PhysicalConstants>(m, "PhysicalConstants")
        .def(py::init([](double delta, double mu_b, double mu_e) {
                 PhysicalConstants c{delta, mu_b, mu_e};
                 c.validate();
                 return c;
             }),
             py::arg("Delta"), py::arg("muB_per_gauss"), py::arg("muE_per_kVcm"))
        .def_readonly("Delta", &PhysicalConstants::Delta)
        .def_readonly("muB_per_gauss", &PhysicalConstants::muB_per_gauss)
        .def_readonly("muE_per_kVcm", &PhysicalConstants::muE_per_kVcm)
        .def("__repr__", [](const PhysicalConstants &c) {
            return "PhysicalConstants(Delta=" + format_number(c.Delta) + ", muB_per_gauss=" +
                   format_number(c.muB_per_gauss) + ", muE_per_kVcm=" + format_number(c.muE_per_kVcm) + ")";
        });

    m.def("default_constants", &default_constants);

    m.def(
        "lambdas_from_fields",
        [](double B, double E, double theta, const PhysicalConstants &c) {
            return lambdas_from_fields(FieldSpec{B, E, theta}, c).as_vector();
        },
        py::arg("B"), py::arg("E"), py::arg("theta"), py::arg("constants") = default_constants(),
        "(lambda1, lambda2, lambda3) in kelvin from B [G], E [kV/cm] and theta [rad].");

    m.def(
        "hamiltonian",
        [](const RVector &lambda, const PhysicalConstants &c) { return build_hamiltonian(to_point(lambda), c).matrix(); },
        py::arg("lambda"), py::arg("constants") = default_constants());

    m.def(
        "dH", [](int mu) { return build_dH(mu).matrix(); }, py::arg("mu"), "Derivative of H along lambda_mu, mu in 1..3.");
    m.def("all_dH", [] { return matrices(all_dH()); });
    m.def("time_from_seconds", &time_from_seconds, py::arg("seconds"));

    // -- probes ---------------------------------------------------------------

    m.def(
        "ground_state",
        [](const CMatrix &h) {
            const GroundState g = ground_state(HermitianOperator(h));
            return py::make_tuple(g.state.vector(), g.energy, g.gap, g.degenerate);
        },
        py::arg("h"), "(psi, energy, gap, degenerate) of a Hermitian matrix.");

    m.def(
        "thermal_state", [](const CMatrix &h, double T) { return thermal_state(HermitianOperator(h), T).density(); },
        py::arg("h"), py::arg("temperature"));

    m.def(
        "named_probe", [](const std::string &name) { return named_probe(parse_probe_id(name)).vector(); },
        py::arg("name"), "psiA, psiB or psiOpt.");

    // -- estimation -----------------------------------------------------------

    py::class_<Tolerances>(m, "Tolerances")
        .def(py::init<>())
        .def_readwrite("kernel", &Tolerances::kernel)
        .def_readwrite("support", &Tolerances::support)
        .def_readwrite("singular_rel", &Tolerances::singular_rel)
        .def_readwrite("probability", &Tolerances::probability)
        .def_readwrite("probability_grad", &Tolerances::probability_grad)
        .def_readwrite("normalization", &Tolerances::normalization)
        .def_readwrite("orthogonal", &Tolerances::orthogonal);

    py::class_<DerivativeBundle>(m, "Bundle", "A state together with its parameter derivatives.")
        .def_static(
            "pure",
            [](const CVector &psi, const std::vector<CVector> &d_psi) {
                return DerivativeBundle::from_pure(QuantumState::pure(psi), d_psi, DerivativeSource::analytic);
            },
            py::arg("psi"), py::arg("d_psi"))
        .def_static(
            "mixed",
            [](const CMatrix &rho, const std::vector<CMatrix> &d_rho) {
                return DerivativeBundle::from_mixed(QuantumState::mixed(rho), d_rho, DerivativeSource::analytic);
            },
            py::arg("rho"), py::arg("d_rho"))
        .def_static(
            "ground",
            [](const CMatrix &h, const std::vector<CMatrix> &dH) {
                return ground_state_bundle(HermitianOperator(h), operators(dH));
            },
            py::arg("h"), py::arg("dH"))
        .def_static(
            "thermal",
            [](const CMatrix &h, const std::vector<CMatrix> &dH, double T) {
                return thermal_bundle(HermitianOperator(h), operators(dH), T);
            },
            py::arg("h"), py::arg("dH"), py::arg("temperature"))
        .def_static(
            "finite_difference",
            [](const std::function<py::array(const RVector &)> &model, const RVector &p, double step) {
                const StateModel sm = [&model](const RVector &x) {
                    py::gil_scoped_acquire gil;
                    return state_from_array(model(x));
                };
                return fd_derivatives(sm, p, step);
            },
            py::arg("model"), py::arg("p"), py::arg("step") = 1e-4,
            "Richardson finite-difference bundle of model(p) -> psi (1-D) or rho (2-D).")
        .def_property_readonly("is_pure", [](const DerivativeBundle &b) { return b.state.is_pure(); })
        .def_property_readonly("num_params", &DerivativeBundle::num_params)
        .def_property_readonly("rho", [](const DerivativeBundle &b) { return b.state.density(); })
        .def_property_readonly("psi", [](const DerivativeBundle &b) { return b.state.vector(); })
        .def_readonly("d_psi", &DerivativeBundle::d_psi)
        .def_readonly("d_rho", &DerivativeBundle::d_rho);

    m.def(
        "sld", [](const DerivativeBundle &b, const Tolerances &tol) { return matrices(sld(b, tol)); }, py::arg("bundle"),
        py::arg("tol") = Tolerances{});
    m.def(
        "qfim", [](const DerivativeBundle &b, const Tolerances &tol) { return qfim(b, tol); }, py::arg("bundle"),
        py::arg("tol") = Tolerances{});
    m.def(
        "uhlmann_curvature",
        [](const DerivativeBundle &b, const Tolerances &tol) { return uhlmann_curvature(b.state, sld(b, tol)); },
        py::arg("bundle"), py::arg("tol") = Tolerances{});
    m.def(
        "check_pcc",
        [](const DerivativeBundle &b, const Tolerances &tol) { return check_pcc(b.state, sld(b, tol), tol); },
        py::arg("bundle"), py::arg("tol") = Tolerances{});
    m.def("check_rpd", &check_rpd, py::arg("bundle"));

    m.def(
        "qfim_ground_state",
        [](const CMatrix &h, const std::vector<CMatrix> &dH) { return qfim_ground_state(HermitianOperator(h), operators(dH)); },
        py::arg("h"), py::arg("dH"));
    m.def(
        "qfim_thermal_stationary",
        [](const CMatrix &h, const std::vector<CMatrix> &dH, double T) {
            return qfim_thermal_stationary(HermitianOperator(h), operators(dH), T);
        },
        py::arg("h"), py::arg("dH"), py::arg("temperature"));
    m.def(
        "qfim_thermal_small_t",
        [](const CMatrix &h, const std::vector<CMatrix> &dH, double T) {
            return qfim_thermal_small_t(HermitianOperator(h), operators(dH), T);
        },
        py::arg("h"), py::arg("dH"), py::arg("temperature"));

    m.def(
        "fim_povm",
        [](const DerivativeBundle &b, const std::vector<CMatrix> &povm, const Tolerances &tol) {
            return fim_povm(outcome_distribution(b, povm), tol);
        },
        py::arg("bundle"), py::arg("povm"), py::arg("tol") = Tolerances{});

    m.def(
        "bounds",
        [](const RMatrix &Q, const RMatrix &D, const RMatrix &W, const std::optional<RVector> &lambda) {
            return bounds_dict(bounds(Q, D, W, lambda));
        },
        py::arg("Q"), py::arg("D"), py::arg("W"), py::arg("lambda") = std::nullopt);

    m.def(
        "report",
        [](const DerivativeBundle &b, const RMatrix &W, const std::optional<RVector> &lambda) {
            return report_dict(make_report(b, W, lambda));
        },
        py::arg("bundle"), py::arg("W"), py::arg("lambda") = std::nullopt);

    // -- hcrb -----------------------------------------------------------------

    m.def(
        "holevo_bound",
        [](const DerivativeBundle &b, const RMatrix &W) {
            const HolevoResult r = holevo_bound(HolevoProblem::from_bundle(b, W));
            py::dict d = certificate_dict(r.certificate);
            d["value"] = r.value;
            d["X"] = r.X;
            return d;
        },
        py::arg("bundle"), py::arg("W"), "Holevo bound with its duality certificate.");

    m.def(
        "sandwich",
        [](const DerivativeBundle &b, const RMatrix &W) {
            const SandwichReport s = sandwich_report(b, W);
            py::dict d;
            d["CS"] = s.CS;
            d["CH"] = s.CH;
            d["CHbar"] = s.CHbar;
            d["gap"] = s.gap;
            d["ordered"] = s.ordered;
            d["certificate"] = certificate_dict(s.certificate);
            return d;
        },
        py::arg("bundle"), py::arg("W"));

    // -- unitary --------------------------------------------------------------

    m.def(
        "generators",
        [](const CMatrix &h, const std::vector<CMatrix> &dH, double t, const std::string &method) {
            const HermitianOperator hh(h);
            const GeneratorSet g = parse_method(method) == GeneratorMethod::series
                                       ? generators_series(hh, operators(dH), t)
                                       : generators_spectral(hh, operators(dH), t);
            return matrices(g.generators);
        },
        py::arg("h"), py::arg("dH"), py::arg("t"), py::arg("method") = "spectral",
        "Effective generators i(dU^dagger)U of U = exp(-itH).");

    m.def(
        "generators_aligned",
        [](double l1, double l2, double t, const PhysicalConstants &c) {
            return matrices(generators_aligned(l1, l2, t, c).generators);
        },
        py::arg("lambda1"), py::arg("lambda2"), py::arg("t"), py::arg("constants") = default_constants());

    m.def(
        "evolved_bundle",
        [](const DerivativeBundle &initial, const RVector &lambda, double t, const std::string &method,
           const PhysicalConstants &c) {
            const HermitianOperator h = build_hamiltonian(to_point(lambda), c);
            const GeneratorSet g = parse_method(method) == GeneratorMethod::series ? generators_series(h, all_dH(), t)
                                                                                   : generators_spectral(h, all_dH(), t);
            return evolved_bundle(initial.state, h, g);
        },
        py::arg("initial"), py::arg("lambda"), py::arg("t"), py::arg("method") = "spectral",
        py::arg("constants") = default_constants(),
        "Bundle of U(lambda, t) applied to the state of `initial` (its derivatives are ignored).");

    m.def(
        "aligned_closed_form_bound",
        [](const std::string &probe, double l2, double t, const PhysicalConstants &c) {
            return aligned_closed_form_bound(parse_probe_id(probe), l2, t, c);
        },
        py::arg("probe"), py::arg("lambda2"), py::arg("t"), py::arg("constants") = default_constants());
    m.def(
        "aligned_numeric_trace",
        [](const CVector &psi, double l1, double l2, double t, int nparams, const PhysicalConstants &c) {
            return aligned_numeric_trace(QuantumState::pure(psi), l1, l2, t, c, nparams);
        },
        py::arg("psi"), py::arg("lambda1"), py::arg("lambda2"), py::arg("t"), py::arg("nparams") = 2,
        py::arg("constants") = default_constants());

    m.def(
        "thermal_dynamical_report",
        [](const RVector &lambda, double t, double T, const RMatrix &W, const PhysicalConstants &c) {
            const ThermalDynamicalReport r = thermal_dynamical_report(to_point(lambda), t, T, c, W);
            py::dict d = report_dict(r.report);
            d["q"] = r.q;
            d["d"] = r.d;
            d["r_qd"] = r.r_qd;
            d["tanh_factor"] = r.tanh_factor;
            return d;
        },
        py::arg("lambda"), py::arg("t"), py::arg("temperature"), py::arg("W"),
        py::arg("constants") = default_constants());

    // -- adaptive -------------------------------------------------------------

    m.def(
        "qfim_controlled_ideal",
        [](const CVector &psi0, double tau) { return qfim_controlled_ideal(QuantumState::pure(psi0), all_dH(), tau); },
        py::arg("psi0"), py::arg("tau"));
    m.def(
        "controlled_trace", [](const CVector &psi) { return controlled_trace(psi, all_dH()); }, py::arg("psi"),
        "Tr[(4 cov)^-1] of the ideally controlled model at tau = 1.");

    m.def(
        "fim_dichotomic",
        [](const CVector &psi0, const RVector &lambda, const RVector &lambda_hat, double tau, int N,
           const PhysicalConstants &c) {
            const DichotomicFim f =
                fim_dichotomic(QuantumState::pure(psi0), to_point(lambda), to_point(lambda_hat), tau, N, c);
            py::dict d;
            d["F"] = f.F;
            d["p"] = f.p;
            d["q"] = f.q;
            d["grad_p"] = f.grad_p;
            d["rank"] = f.rank;
            d["divergent"] = f.divergent;
            d["null_point"] = f.null_point;
            d["segment_error"] = f.segment_error;
            return d;
        },
        py::arg("psi0"), py::arg("lambda"), py::arg("lambda_hat"), py::arg("tau"), py::arg("N"),
        py::arg("constants") = default_constants());

    m.def(
        "robustness_expansion",
        [](const CVector &psi0, double tau) {
            const RobustnessExpansion e = robustness_expansion(QuantumState::pure(psi0), all_dH(), tau);
            py::dict d;
            d["Gamma"] = e.Gamma;
            d["K"] = e.K;
            d["F0"] = e.F0;
            d["tau"] = e.tau;
            return d;
        },
        py::arg("psi0"), py::arg("tau"));

    m.def(
        "optimize_probe",
        [](int restarts, std::uint64_t seed) {
            const ProbeOptimum o = optimize_probe(all_dH(), restarts, seed);
            py::dict d;
            d["psi"] = o.psi;
            d["value"] = o.value;
            d["best_start"] = o.best_start;
            d["starts"] = o.starts;
            d["converged"] = o.converged;
            return d;
        },
        py::arg("restarts") = 8, py::arg("seed") = 1);

    // -- sweep ----------------------------------------------------------------

    m.def(
        "report_point_json",
        [](const std::string &config_json, const std::map<std::string, double> &point) {
            return report_point_json(SweepConfig::from_json_text(config_json), point);
        },
        py::arg("config_json"), py::arg("point"));

    m.def(
        "sweep_jsonl",
        [](const std::string &config_json) {
            const SweepConfig cfg = SweepConfig::from_json_text(config_json);
            std::vector<std::string> lines;
            {
                py::gil_scoped_release release;
                run_sweep(cfg, [&](const SweepRow &row) { lines.push_back(jsonl_row(cfg, row)); });
            }
            return lines;
        },
        py::arg("config_json"), "Runs a sweep and returns one JSON document per grid point, in grid order.");

    m.def(
        "sweep_csv",
        [](const std::string &config_json) {
            const SweepConfig cfg = SweepConfig::from_json_text(config_json);
            std::string out = csv_header(cfg);
            {
                py::gil_scoped_release release;
                run_sweep(cfg, [&](const SweepRow &row) { out += csv_row(cfg, row); });
            }
            return out;
        },
        py::arg("config_json"));
}
