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

// Independent reference computations for the unit and acceptance tests.
// They use Eigen's own eigensolvers and finite differences only, never the
// library's Jacobi solver or closed forms.

#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using cplx = std::complex<double>;

inline const cplx I{0.0, 1.0};

/// exp(−itH) through Eigen's Hermitian eigensolver.
inline CMatrix expm_hermitian(const CMatrix &h, double t) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    CVector ph = (-I * t * es.eigenvalues().cast<cplx>()).array().exp();
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

/// Three-level Richardson central difference of f at x along a scalar shift.
inline CMatrix richardson(const std::function<CMatrix(double)> &f, double h) {
    auto central = [&](double s) { return CMatrix((f(s) - f(-s)) / (2.0 * s)); };
    const CMatrix d1 = central(h);
    const CMatrix d2 = central(h / 2.0);
    const CMatrix d4 = central(h / 4.0);
    const CMatrix r1 = (4.0 * d2 - d1) / 3.0;
    const CMatrix r2 = (4.0 * d4 - d2) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
}

/// 𝓗 = i(∂U†)U for U(s) = exp(−it(H + s·A)), with ∂U from finite differences.
inline CMatrix generator_fd(const CMatrix &h, const CMatrix &a, double t, double step) {
    const CMatrix u = expm_hermitian(h, t);
    const CMatrix du =
        richardson([&](double s) { return CMatrix(expm_hermitian(CMatrix(h + s * a), t)); }, step);
    return I * du.adjoint() * u;
}

/// Random Hermitian matrix with entries of order one.
inline CMatrix random_hermitian(int n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m(i, j) = cplx(g(rng), g(rng));
        }
    }
    return 0.5 * (m + m.adjoint());
}

inline CVector random_state(int n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    CVector v(n);
    for (int i = 0; i < n; ++i) {
        v(i) = cplx(g(rng), g(rng));
    }
    return v.normalized();
}

/// Full-rank random density matrix with smallest eigenvalue ≥ floor.
inline CMatrix random_density(int n, std::mt19937_64 &rng, double floor = 1e-3) {
    std::normal_distribution<double> g;
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m(i, j) = cplx(g(rng), g(rng));
        }
    }
    CMatrix rho = m * m.adjoint() + floor * n * CMatrix::Identity(n, n);
    return rho / rho.trace().real();
}

/// QFIM of a density-matrix family from Eigen's eigensolver and the SLD
/// formula 2|∂ρ_nm|²/(ρ_n+ρ_m), derivatives by Richardson differences.
inline RMatrix qfim_fd(const std::function<CMatrix(const RVector &)> &rho_of, const RVector &p,
                       const RVector &steps) {
    const int d = static_cast<int>(p.size());
    std::vector<CMatrix> dr;
    for (int mu = 0; mu < d; ++mu) {
        dr.push_back(richardson(
            [&](double s) {
                RVector q = p;
                q(mu) += s;
                return rho_of(q);
            },
            steps(mu)));
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_of(p));
    const RVector w = es.eigenvalues();
    const CMatrix &v = es.eigenvectors();
    RMatrix q = RMatrix::Zero(d, d);
    for (int mu = 0; mu < d; ++mu) {
        const CMatrix am = v.adjoint() * dr[mu] * v;
        for (int nu = 0; nu < d; ++nu) {
            const CMatrix an = v.adjoint() * dr[nu] * v;
            for (int a = 0; a < w.size(); ++a) {
                for (int b = 0; b < w.size(); ++b) {
                    const double s = w(a) + w(b);
                    if (s > 1e-10) {
                        q(mu, nu) += 2.0 * (am(a, b) * an(b, a)).real() / s;
                    }
                }
            }
        }
    }
    return q;
}

} // namespace oracle
