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

#include <doctest.h>

#include <random>

#include "ohsense/unitary.hpp"
#include "../oracles.hpp"

using namespace ohsense;

namespace {

double rel_max(const CMatrix &a, const CMatrix &b) { return max_abs(a - b) / max_abs(b); }

const PhysicalConstants kC = default_constants();

} // namespace

TEST_CASE("frak functions are continuous across the series switch") {
    for (double x : {0.3, 1.7, 12.0}) {
        for (double y : {0.0999, 0.1001, 9.9e-4, 1.001e-3}) {
            const double t = y / x;
            CHECK(frak_s(x, t) == doctest::Approx(std::sin(y) - y == 0.0 ? 0.0 : (std::sin(y) - y) / (x * x * x))
                                      .epsilon(1e-6));
            CHECK(frak_c(x, t) == doctest::Approx((std::cos(y) - 1.0) / (x * x)).epsilon(1e-8));
        }
    }
}

TEST_CASE("series and spectral generators agree where the series converges") {
    const ParamPoint p{0.7 * kC.Delta, -0.4 * kC.Delta, 0.9 * kC.Delta};
    const HermitianOperator h = build_hamiltonian(p, kC);
    const double t = 1.5 / kC.Delta;
    const GeneratorSet a = generators_series(h, all_dH(), t, 40);
    const GeneratorSet b = generators_spectral(h, all_dH(), t);
    for (int mu = 0; mu < 3; ++mu) {
        CHECK(rel_max(a.generators[mu].matrix(), b.generators[mu].matrix()) < 1e-10);
    }
    CHECK(a.hermiticity_residual < 1e-12);
}

TEST_CASE("spectral generators match the finite-difference definition") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (double tdelta : {0.01, 1.0, 37.0}) {
        const ParamPoint p{u(rng) * kC.Delta, u(rng) * kC.Delta, u(rng) * kC.Delta};
        const HermitianOperator h = build_hamiltonian(p, kC);
        const double t = tdelta / kC.Delta;
        const GeneratorSet g = generators_spectral(h, all_dH(), t);
        const double step = 1e-2 * kC.Delta / std::max(1.0, tdelta);
        for (int mu = 1; mu <= 3; ++mu) {
            const CMatrix ref = oracle::generator_fd(h.matrix(), build_dH(mu).matrix(), t, step);
            CHECK(rel_max(g.generators[mu - 1].matrix(), ref) < 1e-8);
        }
    }
}

TEST_CASE("aligned closed-form generators reproduce the spectral ones") {
    for (double l2 : {0.0, 0.3, 1.0, 4.0}) {
        for (double tdelta : {1e-3, 0.5, 3.0, 40.0}) {
            const double lambda2 = l2 * kC.Delta;
            const double t = tdelta / kC.Delta;
            const HermitianOperator h = build_hamiltonian(ParamPoint{0.8 * kC.Delta, lambda2, 0.0}, kC);
            const GeneratorSet ref = generators_spectral(h, {build_dH(1), build_dH(2)}, t);
            const GeneratorSet ana = generators_aligned(0.8 * kC.Delta, lambda2, t, kC);
            REQUIRE(ana.generators.size() == 2);
            CHECK(rel_max(ana.generators[0].matrix(), ref.generators[0].matrix()) < 1e-12);
            CHECK(rel_max(ana.generators[1].matrix(), ref.generators[1].matrix()) < 1e-10);
        }
    }
}

TEST_CASE("the alternative closed form deviates from i(dU^dagger)U") {
    const double lambda2 = kC.Delta;
    const double t = 1.0 / kC.Delta;
    const HermitianOperator h = build_hamiltonian(ParamPoint{0.0, lambda2, 0.0}, kC);
    const GeneratorSet ref = generators_spectral(h, {build_dH(1), build_dH(2)}, t);
    const GeneratorSet alt = generators_aligned_alt(0.0, lambda2, t, kC);
    CHECK(rel_max(alt.generators[1].matrix(), ref.generators[1].matrix()) > 1e-2);
}

TEST_CASE("pure-state unitary QFIM matches the evolved-state QFIM and an FD oracle") {
    std::mt19937_64 rng(11);
    const QuantumState psi0 = QuantumState::pure(oracle::random_state(8, rng));
    const ParamPoint p{0.5 * kC.Delta, 1.1 * kC.Delta, -0.3 * kC.Delta};
    const double t = 2.0 / kC.Delta;
    const HermitianOperator h = build_hamiltonian(p, kC);
    const GeneratorSet g = generators_spectral(h, all_dH(), t);
    const RMatrix q = qfim_unitary(psi0, g);
    const RMatrix q_bundle = qfim(evolved_bundle(psi0, h, g));
    CHECK((q - q_bundle).cwiseAbs().maxCoeff() < 1e-10 * q.cwiseAbs().maxCoeff());

    auto rho_of = [&](const RVector &v) {
        const CMatrix u = oracle::expm_hermitian(build_hamiltonian(ParamPoint::from_vector(v), kC).matrix(), t);
        const CVector s = u * psi0.vector();
        return CMatrix(s * s.adjoint());
    };
    const RMatrix q_fd = oracle::qfim_fd(rho_of, p.as_vector(), RVector::Constant(3, 1e-2 * kC.Delta));
    CHECK((q - q_fd).cwiseAbs().maxCoeff() < 1e-7 * q.cwiseAbs().maxCoeff());
}

TEST_CASE("mixed-state unitary QFIM matches the SLD route and an FD oracle") {
    std::mt19937_64 rng(5);
    const QuantumState rho0 = QuantumState::mixed(oracle::random_density(8, rng, 1e-2));
    const ParamPoint p{-0.2 * kC.Delta, 0.6 * kC.Delta, 0.4 * kC.Delta};
    const double t = 3.0 / kC.Delta;
    const HermitianOperator h = build_hamiltonian(p, kC);
    const GeneratorSet g = generators_spectral(h, all_dH(), t);
    const RMatrix q = qfim_unitary(rho0, g);
    const RMatrix q_bundle = qfim(evolved_bundle(rho0, h, g));
    CHECK((q - q_bundle).cwiseAbs().maxCoeff() < 1e-10 * q.cwiseAbs().maxCoeff());

    auto rho_of = [&](const RVector &v) {
        const CMatrix u = oracle::expm_hermitian(build_hamiltonian(ParamPoint::from_vector(v), kC).matrix(), t);
        return CMatrix(u * rho0.density() * u.adjoint());
    };
    const RMatrix q_fd = oracle::qfim_fd(rho_of, p.as_vector(), RVector::Constant(3, 1e-2 * kC.Delta));
    CHECK((q - q_fd).cwiseAbs().maxCoeff() < 1e-7 * q.cwiseAbs().maxCoeff());
}

TEST_CASE("exponential-form QFIM and curvature agree with the generic SLD path") {
    const ParamPoint p{0.3 * kC.Delta, 0.9 * kC.Delta, 0.5 * kC.Delta};
    const double t = 4.0 / kC.Delta;
    const HermitianOperator h = build_hamiltonian(p, kC);
    const GeneratorSet g = generators_spectral(h, all_dH(), t);
    for (double temp : {0.02, 0.1, 1.0}) {
        const ExponentialModel m = ExponentialModel::thermal(build_hamiltonian(ParamPoint{}, kC), temp);
        CHECK(m.weights().sum() == doctest::Approx(1.0).epsilon(1e-12));
        const DerivativeBundle b = evolved_bundle(m.state(), h, g);
        const std::vector<HermitianOperator> L = sld(b);
        const RMatrix q_ref = qfim(b);
        const RMatrix d_ref = uhlmann_curvature(b.state, L);
        const RMatrix q = qfim_exponential_evolved(m, g);
        const RMatrix d = uhlmann_exponential_evolved(m, g);
        const double scale = q_ref.cwiseAbs().maxCoeff();
        CHECK((q - q_ref).cwiseAbs().maxCoeff() < 1e-10 * scale);
        CHECK((d - d_ref).cwiseAbs().maxCoeff() < 1e-10 * scale);
        CHECK((q - qfim_unitary(m.state(), g)).cwiseAbs().maxCoeff() < 1e-10 * scale);
    }
}

TEST_CASE("stationary exponential QFIM equals the Gibbs QFIM") {
    const ParamPoint p{0.3 * kC.Delta, 0.9 * kC.Delta, 0.5 * kC.Delta};
    const HermitianOperator h = build_hamiltonian(p, kC);
    const double temp = 0.05;
    const ExponentialModel m = ExponentialModel::thermal(h, temp);
    const QuantumState rho = m.state();
    std::vector<CMatrix> dG;
    for (const HermitianOperator &a : all_dH()) {
        const double mean = (rho.density() * a.matrix()).trace().real();
        dG.emplace_back(-(a.matrix() - mean * CMatrix::Identity(8, 8)) / temp);
    }
    const RMatrix q = qfim_exponential_stationary(m, dG);
    const RMatrix ref = qfim_thermal_stationary(h, all_dH(), temp);
    CHECK((q - ref).cwiseAbs().maxCoeff() < 1e-10 * ref.cwiseAbs().maxCoeff());
}

TEST_CASE("thermal dynamical model factorizes through tanh(beta Delta)") {
    const ParamPoint p{0.4 * kC.Delta, 0.7 * kC.Delta, 0.6 * kC.Delta};
    const double t = 2.5 / kC.Delta;
    for (double temp : {0.01, 0.08, 0.5, 5.0}) {
        const ThermalDynamicalReport r = thermal_dynamical_report(p, t, temp, kC, RMatrix::Identity(3, 3));
        const double th = r.tanh_factor;
        const double qs = r.q.cwiseAbs().maxCoeff();
        CHECK((r.report.Q - th * th * r.q).cwiseAbs().maxCoeff() < 1e-10 * qs);
        CHECK((r.report.D - th * th * th * r.d).cwiseAbs().maxCoeff() < 1e-10 * qs);
        CHECK(r.report.R == doctest::Approx(th * r.r_qd).epsilon(1e-8));
    }
}

TEST_CASE("aligned dynamical QFIM has vanishing lambda1 rows at the thermal point") {
    const double t = 1.0 / kC.Delta;
    const ThermalDynamicalReport r =
        thermal_dynamical_report(ParamPoint{0.5 * kC.Delta, kC.Delta, 0.0}, t, 0.1, kC, RMatrix::Identity(3, 3));
    CHECK(r.report.Q.row(0).cwiseAbs().maxCoeff() < 1e-10 * r.report.Q.cwiseAbs().maxCoeff());
}

TEST_CASE("closed-form bounds reach their small-t constants") {
    const double t = 1e-4 / kC.Delta;
    for (ProbeId id : {ProbeId::psiA, ProbeId::psiB}) {
        CHECK(aligned_closed_form_bound(id, kC.Delta, t, kC) * t * t ==
              doctest::Approx(aligned_small_t_constant(id)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(aligned_small_t_constant(ProbeId::psiOpt), std::invalid_argument);
}

TEST_CASE("numeric aligned trace follows the small-t scaling of the convention factor") {
    const double t = 1e-4 / kC.Delta;
    for (ProbeId id : {ProbeId::psiA, ProbeId::psiB}) {
        const double v = aligned_numeric_trace(named_probe(id), 0.0, kC.Delta, t, kC, 2);
        CHECK(kCovNormalizationFactor * v * t * t == doctest::Approx(aligned_small_t_constant(id)).epsilon(1e-4));
    }
}
