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

#include "ohsense/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace ohsense {

double max_abs(const CMatrix &a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool all_finite(const CMatrix &a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) {
                return false;
            }
        }
    }
    return true;
}

double hermiticity_residual(const CMatrix &a) { return max_abs(a - a.adjoint()); }

CMatrix hermitian_part(const CMatrix &a) { return 0.5 * (a + a.adjoint()); }

namespace {

void require_hermitian(const CMatrix &m, double tolerance) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("matrix is not square");
    }
    if (!all_finite(m)) {
        throw std::invalid_argument("matrix has non-finite entries");
    }
    const double r = hermiticity_residual(m);
    if (r > tolerance * (1.0 + max_abs(m))) {
        throw std::invalid_argument("matrix is not Hermitian (residual " + std::to_string(r) + ")");
    }
}

} // namespace

HermitianOperator::HermitianOperator() : cache_(std::make_shared<Cache>()) {}

HermitianOperator::HermitianOperator(CMatrix m, double tolerance)
    : cache_(std::make_shared<Cache>()) {
    require_hermitian(m, tolerance);
    m_ = hermitian_part(m);
}

HermitianOperator::HermitianOperator(CMatrix m, Spectrum known)
    : cache_(std::make_shared<Cache>()) {
    require_hermitian(m, 1e-10);
    if (known.values.size() != m.rows() || known.vectors.rows() != m.rows() ||
        known.vectors.cols() != m.rows()) {
        throw std::invalid_argument("spectrum shape does not match matrix");
    }
    m_ = hermitian_part(m);
    std::call_once(cache_->once, [&] { cache_->spectrum = std::move(known); });
}

const Spectrum &HermitianOperator::spectrum() const {
    std::call_once(cache_->once, [this] { cache_->spectrum = eig_hermitian(m_); });
    return cache_->spectrum;
}

double HermitianOperator::degeneracy_threshold() const {
    const RVector &e = spectrum().values;
    const double op = e.size() == 0 ? 0.0 : std::max(std::abs(e(0)), std::abs(e(e.size() - 1)));
    return 1e-10 * (1.0 + op);
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator &o) const {
    return HermitianOperator(CMatrix(m_ + o.m_));
}
HermitianOperator HermitianOperator::operator-(const HermitianOperator &o) const {
    return HermitianOperator(CMatrix(m_ - o.m_));
}
HermitianOperator HermitianOperator::operator*(double s) const {
    return HermitianOperator(CMatrix(s * m_));
}

CMatrix pauli(int i) {
    CMatrix s(2, 2);
    switch (i) {
    case 0: s << 1.0, 0.0, 0.0, 1.0; break;
    case 1: s << 0.0, 1.0, 1.0, 0.0; break;
    case 2: s << 0.0, -kI, kI, 0.0; break;
    case 3: s << 1.0, 0.0, 0.0, -1.0; break;
    default: throw std::invalid_argument("Pauli index out of range: " + std::to_string(i));
    }
    return s;
}

namespace {

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

} // namespace

HermitianOperator pauli_tensor(int i, int j, int k) {
    return HermitianOperator(kron(kron(pauli(i), pauli(j)), pauli(k)));
}

Spectrum eig_hermitian(const CMatrix &input, double tolerance) {
    require_hermitian(input, tolerance);
    const Eigen::Index n = input.rows();
    CMatrix a = hermitian_part(input);
    CMatrix v = CMatrix::Identity(n, n);

    const double fro = a.norm();
    const double target = 1e-14 * fro;
    constexpr int kMaxSweeps = 100;

    auto off_norm = [&] {
        double s = 0.0;
        for (Eigen::Index q = 0; q < n; ++q) {
            for (Eigen::Index p = 0; p < n; ++p) {
                if (p != q) {
                    s += std::norm(a(p, q));
                }
            }
        }
        return std::sqrt(s);
    };

    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        const double off = off_norm();
        if (off <= target || off == 0.0) {
            break;
        }
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0 || mag < 1e-300) {
                    continue;
                }
                const cplx phase = apq / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // J = diag(1, conj(phase)) · [[c, s], [-s, c]]
                const cplx j00 = c, j01 = s;
                const cplx j10 = -s * std::conj(phase), j11 = c * std::conj(phase);

                for (Eigen::Index r = 0; r < n; ++r) {
                    const cplx arp = a(r, p), arq = a(r, q);
                    a(r, p) = arp * j00 + arq * j10;
                    a(r, q) = arp * j01 + arq * j11;
                }
                for (Eigen::Index r = 0; r < n; ++r) {
                    const cplx apr = a(p, r), aqr = a(q, r);
                    a(p, r) = std::conj(j00) * apr + std::conj(j10) * aqr;
                    a(q, r) = std::conj(j01) * apr + std::conj(j11) * aqr;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (Eigen::Index r = 0; r < n; ++r) {
                    const cplx vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = vrp * j00 + vrq * j10;
                    v(r, q) = vrp * j01 + vrq * j11;
                }
            }
        }
    }
    if (sweep == kMaxSweeps) {
        throw NumericalError("Jacobi eigensolver did not converge");
    }

    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return a(x, x).real() < a(y, y).real(); });

    Spectrum out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = a(order[static_cast<size_t>(k)], order[static_cast<size_t>(k)]).real();
        CVector col = v.col(order[static_cast<size_t>(k)]);
        for (Eigen::Index r = 0; r < n; ++r) {
            if (std::abs(col(r)) > 1e-10) {
                col *= std::conj(col(r)) / std::abs(col(r));
                break;
            }
        }
        out.vectors.col(k) = col;
    }
    return out;
}

Spectrum eig_hermitian(const HermitianOperator &a) { return a.spectrum(); }

CMatrix unitary_of(const HermitianOperator &h, double t) {
    const Spectrum &s = h.spectrum();
    CVector phases(s.values.size());
    for (Eigen::Index k = 0; k < s.values.size(); ++k) {
        phases(k) = std::exp(-kI * (t * s.values(k)));
    }
    return s.vectors * phases.asDiagonal() * s.vectors.adjoint();
}

double norm(const CMatrix &a, NormKind kind) {
    if (!all_finite(a)) {
        throw std::invalid_argument("norm of a matrix with non-finite entries");
    }
    switch (kind) {
    case NormKind::max: return max_abs(a);
    case NormKind::trace: {
        Eigen::JacobiSVD<CMatrix> svd(a);
        return svd.singularValues().sum();
    }
    case NormKind::operator_norm: {
        if (hermiticity_residual(a) > 1e-10 * (1.0 + max_abs(a))) {
            throw std::invalid_argument("operator norm requested for a non-Hermitian matrix");
        }
        const Spectrum s = eig_hermitian(a, 1e-10);
        return s.values.size() == 0 ? 0.0 : s.values.cwiseAbs().maxCoeff();
    }
    }
    throw std::invalid_argument("unknown norm kind");
}

RMatrix sqrt_psd(const RMatrix &a) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (a + a.transpose()));
    const RVector r = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * r.asDiagonal() * es.eigenvectors().transpose();
}

RMatrix pinv_symmetric(const RMatrix &a, double rel_cutoff) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (a + a.transpose()));
    const RVector &e = es.eigenvalues();
    const double top = e.size() == 0 ? 0.0 : e.cwiseAbs().maxCoeff();
    RVector inv(e.size());
    for (Eigen::Index k = 0; k < e.size(); ++k) {
        inv(k) = std::abs(e(k)) > rel_cutoff * top && top > 0.0 ? 1.0 / e(k) : 0.0;
    }
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

} // namespace ohsense
