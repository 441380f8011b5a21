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

#include <cmath>
#include <numbers>

#include "ohsense/model.hpp"

using namespace ohsense;

namespace {

const PhysicalConstants kC = default_constants();

// Constants with round numbers so expected spectra are exact.
const PhysicalConstants kRound{1.0, 1.0, 1.0};

} // namespace

TEST_CASE("default constants from CODATA values") {
    // h·1.667e9/k_B, μ_B/k_B per gauss, 1.66 D × 1 kV/cm / k_B.
    const double h = 6.62607015e-34, kb = 1.380649e-23, muB = 9.2740100783e-24, debye = 3.33564e-30;
    CHECK(kC.Delta == doctest::Approx(h * 1.667e9 / kb).epsilon(1e-9));
    CHECK(kC.Delta == doctest::Approx(0.08000).epsilon(1e-3));
    CHECK(kC.muB_per_gauss == doctest::Approx(muB * 1e-4 / kb).epsilon(1e-9));
    CHECK(kC.muB_per_gauss == doctest::Approx(6.7171e-5).epsilon(1e-4));
    CHECK(kC.muE_per_kVcm == doctest::Approx(1.66 * debye * 1e5 / kb).epsilon(1e-5));
    CHECK(kC.muE_per_kVcm == doctest::Approx(4.0106e-2).epsilon(1e-4));
    CHECK_NOTHROW(kC.validate());
    CHECK_THROWS_AS((PhysicalConstants{0.0, 1.0, 1.0}.validate()), std::invalid_argument);
}

TEST_CASE("lambdas_from_fields") {
    const ParamPoint z = lambdas_from_fields({0.0, 0.0, 1.234}, kC);
    CHECK(z == ParamPoint{});
    const ParamPoint p = lambdas_from_fields({0.0, 1.0, std::numbers::pi / 2}, kC);
    CHECK(p.lambda1 == 0.0);
    CHECK(std::abs(p.lambda2) < 1e-17);
    CHECK(p.lambda3 == doctest::Approx(kC.muE_per_kVcm));
    for (double th : {0.0, 0.3, 1.2, 2.5, std::numbers::pi}) {
        const ParamPoint q = lambdas_from_fields({250.0, 3.0, th}, kC);
        CHECK(q.lambda1 == doctest::Approx(250.0 * kC.muB_per_gauss));
        CHECK(q.lambda2 * q.lambda2 + q.lambda3 * q.lambda3 ==
              doctest::Approx(std::pow(3.0 * kC.muE_per_kVcm, 2)).epsilon(1e-12));
    }
    CHECK(lambdas_from_fields({0.0, 1.0, 2.5}, kC).lambda2 < 0.0);
    CHECK_THROWS_AS(lambdas_from_fields({-1.0, 0.0, 0.0}, kC), std::invalid_argument);
    CHECK_THROWS_AS(lambdas_from_fields({0.0, 1.0, 4.0}, kC), std::invalid_argument);
}

TEST_CASE("zero-field Hamiltonian has two four-fold levels") {
    const HermitianOperator h = build_hamiltonian({}, kC);
    CHECK(max_abs(h.matrix() + kC.Delta * pauli_tensor(3, 0, 0).matrix()) == 0.0);
    const Spectrum &s = h.spectrum();
    for (int k = 0; k < 8; ++k) {
        CHECK(s.values(k) == doctest::Approx(k < 4 ? -kC.Delta : kC.Delta).epsilon(1e-12));
    }
}

TEST_CASE("aligned electric field spectrum") {
    for (double l2 : {0.3, 1.0, -2.0}) {
        const HermitianOperator h = build_hamiltonian({0.0, l2, 0.0}, kRound);
        const double xi = std::sqrt(1.0 + 4.0 * l2 * l2 / 25.0);
        const double om = std::sqrt(1.0 + 36.0 * l2 * l2 / 25.0);
        const double expect[8] = {-om, -om, -xi, -xi, xi, xi, om, om};
        const Spectrum &s = h.spectrum();
        for (int k = 0; k < 8; ++k) {
            CHECK(s.values(k) == doctest::Approx(expect[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("aligned ground state has the two-component closed form") {
    const double l2 = 0.37;
    const HermitianOperator h = build_hamiltonian({0.0, l2, 0.0}, kRound);
    const double P = 25.0 + 36.0 * l2 * l2;
    CVector v = CVector::Zero(8);
    v(0) = -5.0 - std::sqrt(P);
    v(4) = 6.0 * l2;
    v.normalize();
    // Degenerate ground space: check that v lies inside it.
    const Spectrum &s = h.spectrum();
    const CMatrix proj = s.vectors.leftCols(2) * s.vectors.leftCols(2).adjoint();
    CHECK((proj * v - v).norm() < 1e-10);
    CHECK((h.matrix() * v - s.values(0) * v).norm() < 1e-10);
}

TEST_CASE("dH operators") {
    const CMatrix d1 = build_dH(1).matrix();
    CHECK(max_abs(CMatrix(d1 - CMatrix(d1.diagonal().asDiagonal()))) == 0.0);
    // Bits (b₂,b₃): 00 → −12/5, 01 → −4/5, 10 → 4/5, 11 → 12/5.
    const double pattern[4] = {-12.0 / 5, -4.0 / 5, 4.0 / 5, 12.0 / 5};
    for (int i = 0; i < 8; ++i) {
        CHECK(d1(i, i).real() == doctest::Approx(pattern[i % 4]));
    }
    CHECK_THROWS_AS(build_dH(0), std::invalid_argument);
    CHECK_THROWS_AS(build_dH(4), std::invalid_argument);
    CHECK(all_dH().size() == 3);
}

TEST_CASE("H is affine in the parameters") {
    const ParamPoint p{0.013, -0.021, 0.034};
    const HermitianOperator h0 = build_hamiltonian({}, kC);
    CMatrix sum = h0.matrix();
    for (int mu = 1; mu <= 3; ++mu) {
        const double h = 1e-3;
        const CMatrix fd = (build_hamiltonian(p.shifted(mu, h), kC).matrix() -
                            build_hamiltonian(p.shifted(mu, -h), kC).matrix()) /
                           (2.0 * h);
        CHECK(max_abs(fd - build_dH(mu).matrix()) < 1e-12);
        sum += p(mu) * build_dH(mu).matrix();
    }
    CHECK(max_abs(sum - build_hamiltonian(p, kC).matrix()) < 1e-15);
}

TEST_CASE("magnetic term commutes with the aligned Hamiltonian") {
    const CMatrix h = build_hamiltonian({0.2, 0.5, 0.0}, kC).matrix();
    CHECK(max_abs(commutator(h, build_dH(1).matrix())) < 1e-15);
    const CMatrix h3 = build_hamiltonian({0.2, 0.5, 0.1}, kC).matrix();
    CHECK(max_abs(commutator(h3, build_dH(1).matrix())) > 1e-3);
}

TEST_CASE("aligned spectrum is even in the electric coupling") {
    const HermitianOperator a = build_hamiltonian({0.1, 0.4, 0.0}, kC);
    const HermitianOperator b = build_hamiltonian({0.1, -0.4, 0.0}, kC);
    CHECK((a.spectrum().values - b.spectrum().values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("time conversion") {
    // 1 s corresponds to k_B·1s/ħ in 1/K.
    CHECK(time_from_seconds(1.0) == doctest::Approx(1.380649e-23 / 1.054571817e-34).epsilon(1e-9));
    CHECK(time_from_seconds(0.0) == 0.0);
}

TEST_CASE("ParamPoint helpers") {
    const ParamPoint p{1.0, 2.0, 3.0};
    CHECK(p(2) == 2.0);
    CHECK_THROWS(static_cast<void>(p(0)));
    CHECK(ParamPoint::from_vector(p.as_vector()) == p);
    CHECK(p.shifted(3, 0.5).lambda3 == 3.5);
}
