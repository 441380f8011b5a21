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

#include "ohsense/matrix.hpp"
#include "../oracles.hpp"

using namespace ohsense;

namespace {

// Index of σ_a·σ_b up to phase, and its phase, by direct 2×2 multiplication.
std::pair<int, cplx> pauli_product(int a, int b) {
    const CMatrix m = pauli(a) * pauli(b);
    for (int c = 0; c < 4; ++c) {
        const cplx ph = (pauli(c).adjoint() * m).trace() / 2.0;
        if (std::abs(ph) > 0.5) {
            return {c, ph};
        }
    }
    return {-1, 0.0};
}

} // namespace

TEST_CASE("pauli_tensor identity and most significant slot") {
    CHECK(max_abs(pauli_tensor(0, 0, 0).matrix() - CMatrix::Identity(8, 8)) == 0.0);
    const CMatrix z = pauli_tensor(3, 0, 0).matrix();
    for (int i = 0; i < 8; ++i) {
        CHECK(z(i, i).real() == (i < 4 ? 1.0 : -1.0));
    }
    CHECK(max_abs(CMatrix(z - CMatrix(z.diagonal().asDiagonal()))) == 0.0);
    CHECK_THROWS_AS(pauli_tensor(4, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(pauli_tensor(0, -1, 0), std::invalid_argument);
}

TEST_CASE("pauli_tensor products follow the single-qubit algebra") {
    const CMatrix p = pauli_tensor(1, 3, 0).matrix() * pauli_tensor(1, 0, 3).matrix();
    CHECK(max_abs(p - pauli_tensor(0, 3, 3).matrix()) < 1e-15);
    // Exhaustive: T_ijk·T_lmn = (phase) T_{(il)(jm)(kn)}.
    for (int a = 0; a < 64; ++a) {
        for (int b = 0; b < 64; ++b) {
            const int i = a / 16, j = (a / 4) % 4, k = a % 4;
            const int l = b / 16, m = (b / 4) % 4, n = b % 4;
            const auto [x, px] = pauli_product(i, l);
            const auto [y, py] = pauli_product(j, m);
            const auto [z, pz] = pauli_product(k, n);
            const CMatrix lhs = pauli_tensor(i, j, k).matrix() * pauli_tensor(l, m, n).matrix();
            const CMatrix rhs = px * py * pz * pauli_tensor(x, y, z).matrix();
            REQUIRE(max_abs(lhs - rhs) < 1e-15);
        }
    }
}

TEST_CASE("eig_hermitian sorts and matches canonical vectors") {
    CMatrix d = CMatrix::Zero(8, 8);
    const double vals[8] = {2, 1, 5, -3, 0.5, 4, -1, 3};
    for (int i = 0; i < 8; ++i) {
        d(i, i) = vals[i];
    }
    const Spectrum s = eig_hermitian(d);
    const int order[8] = {3, 6, 4, 1, 0, 7, 5, 2};
    for (int k = 0; k < 8; ++k) {
        CHECK(s.values(k) == vals[order[k]]);
        CHECK(std::abs(s.vectors(order[k], k) - 1.0) < 1e-15);
    }
}

TEST_CASE("eig_hermitian reconstructs random matrices and agrees with Eigen") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = trial % 3 == 0 ? 8 : 1 + trial % 9;
        const CMatrix a = oracle::random_hermitian(n, rng);
        const Spectrum s = eig_hermitian(a);
        const CMatrix rec = s.vectors * s.values.cast<cplx>().asDiagonal() * s.vectors.adjoint();
        const double scale = 1.0 + norm(a, NormKind::operator_norm);
        REQUIRE(max_abs(rec - a) < 1e-10 * scale);
        REQUIRE(max_abs(s.vectors.adjoint() * s.vectors - CMatrix::Identity(n, n)) < 1e-10);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
        REQUIRE((s.values - es.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10 * scale);
        for (int k = 0; k < n; ++k) {
            REQUIRE((a * s.vectors.col(k) - s.values(k) * s.vectors.col(k)).norm() < 1e-10 * scale);
        }
    }
}

TEST_CASE("eig_hermitian is deterministic and phase fixed") {
    std::mt19937_64 rng(3);
    const CMatrix a = oracle::random_hermitian(8, rng);
    const Spectrum s1 = eig_hermitian(a);
    const Spectrum s2 = eig_hermitian(a);
    CHECK(max_abs(s1.vectors - s2.vectors) == 0.0);
    for (int k = 0; k < 8; ++k) {
        int first = 0;
        while (std::abs(s1.vectors(first, k)) <= 1e-10) {
            ++first;
        }
        CHECK(std::abs(s1.vectors(first, k).imag()) < 1e-14);
        CHECK(s1.vectors(first, k).real() > 0.0);
    }
}

TEST_CASE("non-Hermitian input is rejected") {
    CMatrix a = CMatrix::Identity(4, 4);
    a(0, 1) = 1e-3;
    CHECK_THROWS_AS(eig_hermitian(a), std::invalid_argument);
    CHECK_THROWS_AS(HermitianOperator{a}, std::invalid_argument);
    CHECK_THROWS_AS(norm(a, NormKind::operator_norm), std::invalid_argument);
    CMatrix bad = CMatrix::Identity(2, 2);
    bad(0, 0) = std::nan("");
    CHECK_THROWS(HermitianOperator{bad});
}

TEST_CASE("unitary_of basics and group law") {
    std::mt19937_64 rng(5);
    const HermitianOperator h(oracle::random_hermitian(8, rng));
    CHECK(max_abs(unitary_of(h, 0.0) - CMatrix::Identity(8, 8)) < 1e-14);
    const CMatrix u = unitary_of(h, 1.3);
    CHECK(max_abs(u * u.adjoint() - CMatrix::Identity(8, 8)) < 1e-10);
    CHECK(max_abs(unitary_of(h, 0.4) * unitary_of(h, 0.9) - u) < 1e-10);
    CHECK(max_abs(u - oracle::expm_hermitian(h.matrix(), 1.3)) < 1e-10);

    CMatrix d = CMatrix::Zero(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = -2.0;
    d(2, 2) = 0.5;
    const CMatrix ud = unitary_of(HermitianOperator(d), 0.7);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(ud(i, i) - std::exp(-kI * 0.7 * d(i, i).real())) < 1e-14);
    }
}

TEST_CASE("norms") {
    CHECK(norm(CMatrix::Identity(8, 8), NormKind::trace) == doctest::Approx(8.0).epsilon(1e-14));
    CMatrix d = CMatrix::Zero(8, 8);
    d(0, 0) = 3.0;
    d(1, 1) = -1.0;
    CHECK(norm(d, NormKind::operator_norm) == doctest::Approx(3.0));
    d(1, 1) = -4.0;
    CHECK(norm(d, NormKind::operator_norm) == doctest::Approx(4.0));
    CHECK(norm(d, NormKind::max) == 4.0);

    std::mt19937_64 rng(9);
    const CMatrix a = oracle::random_hermitian(8, rng);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    CHECK(norm(a, NormKind::trace) == doctest::Approx(es.eigenvalues().cwiseAbs().sum()).epsilon(1e-12));
    // Non-Hermitian trace norm: singular values from Eigen's SVD.
    CMatrix g(3, 3);
    g << 1.0, 2.0, 0.0, cplx(0, 1), 0.0, 3.0, 0.5, 0.0, -1.0;
    Eigen::JacobiSVD<CMatrix> svd(g);
    CHECK(norm(g, NormKind::trace) == doctest::Approx(svd.singularValues().sum()).epsilon(1e-12));
}

TEST_CASE("sqrt_psd and pinv_symmetric") {
    RMatrix a(3, 3);
    a << 4.0, 1.0, 0.0, 1.0, 3.0, 0.5, 0.0, 0.5, 2.0;
    const RMatrix r = sqrt_psd(a);
    CHECK((r * r - a).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((r - r.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((pinv_symmetric(a) - a.inverse()).cwiseAbs().maxCoeff() < 1e-12);

    RMatrix s = RMatrix::Zero(3, 3);
    s(0, 0) = 2.0;
    s(1, 1) = 1e-20;
    const RMatrix ps = pinv_symmetric(s);
    CHECK(ps(0, 0) == doctest::Approx(0.5));
    CHECK(ps(1, 1) == 0.0);
}

TEST_CASE("spectrum cache is shared by copies and safe under concurrent reads") {
    std::mt19937_64 rng(2);
    const HermitianOperator h(oracle::random_hermitian(8, rng));
    const HermitianOperator c = h;
    CHECK(&h.spectrum() == &c.spectrum());
}
