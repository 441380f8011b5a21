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

#include "ohsense/probes.hpp"

#include <cmath>

namespace ohsense {

QuantumState QuantumState::pure(CVector psi, double tolerance) {
    if (!all_finite(psi)) {
        throw std::invalid_argument("state vector has non-finite entries");
    }
    if (std::abs(psi.norm() - 1.0) > tolerance) {
        throw std::invalid_argument("state vector is not normalized");
    }
    CMatrix rho = psi * psi.adjoint();
    return QuantumState(StateKind::pure, std::move(psi), HermitianOperator(std::move(rho)));
}

namespace {

void check_density(const HermitianOperator &rho, double tolerance) {
    const double tr = rho.matrix().trace().real();
    if (std::abs(tr - 1.0) > tolerance) {
        throw std::invalid_argument("density matrix trace differs from 1");
    }
    const RVector &e = rho.spectrum().values;
    if (e.size() > 0 && e(0) < -tolerance) {
        throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
}

} // namespace

QuantumState QuantumState::mixed(CMatrix rho, double tolerance) {
    HermitianOperator op(std::move(rho), tolerance);
    check_density(op, tolerance);
    return QuantumState(StateKind::mixed, CVector(), std::move(op));
}

QuantumState QuantumState::mixed(CMatrix rho, Spectrum known) {
    HermitianOperator op(std::move(rho), std::move(known));
    check_density(op, 1e-12);
    return QuantumState(StateKind::mixed, CVector(), std::move(op));
}

const CVector &QuantumState::vector() const {
    if (kind_ != StateKind::pure) {
        throw std::logic_error("state vector requested for a mixed state");
    }
    return psi_;
}

CVector fix_phase(const CVector &psi) {
    Eigen::Index best = 0;
    double best_mod = -1.0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        const double m = std::abs(psi(i));
        if (m > best_mod + 1e-12) {
            best = i;
            best_mod = m;
        }
    }
    if (best_mod <= 0.0) {
        return psi;
    }
    return psi * (std::conj(psi(best)) / best_mod);
}

GroundState ground_state(const HermitianOperator &h) {
    const Spectrum &s = h.spectrum();
    if (s.values.size() < 1) {
        throw std::invalid_argument("empty Hamiltonian");
    }
    const double gap = s.values.size() > 1 ? s.values(1) - s.values(0) : INFINITY;
    CVector v = fix_phase(s.vectors.col(0));
    v.normalize();
    return GroundState{QuantumState::pure(std::move(v)), s.values(0), gap, gap < h.degeneracy_threshold()};
}

QuantumState thermal_state(const HermitianOperator &h, double temperature) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw std::invalid_argument("temperature must be finite and positive");
    }
    const Spectrum &s = h.spectrum();
    const Eigen::Index n = s.values.size();
    const double e0 = s.values(0);
    RVector w(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        w(k) = std::exp(-(s.values(k) - e0) / temperature);
    }
    w /= w.sum();

    // ρ eigenvalues ascending means reversed energy order.
    Spectrum rs;
    rs.values.resize(n);
    rs.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        rs.values(k) = w(n - 1 - k);
        rs.vectors.col(k) = s.vectors.col(n - 1 - k);
    }
    CMatrix rho = s.vectors * w.asDiagonal() * s.vectors.adjoint();
    rho = hermitian_part(rho);
    return QuantumState::mixed(std::move(rho), std::move(rs));
}

ProbeId parse_probe_id(std::string_view name) {
    if (name == "psiA") {
        return ProbeId::psiA;
    }
    if (name == "psiB") {
        return ProbeId::psiB;
    }
    if (name == "psiOpt") {
        return ProbeId::psiOpt;
    }
    throw std::invalid_argument("unknown probe id: " + std::string(name));
}

std::string to_string(ProbeId id) {
    switch (id) {
    case ProbeId::psiA: return "psiA";
    case ProbeId::psiB: return "psiB";
    case ProbeId::psiOpt: return "psiOpt";
    }
    return "unknown";
}

QuantumState named_probe(ProbeId id) {
    CVector v = CVector::Zero(8);
    switch (id) {
    case ProbeId::psiA:
        v(4) = v(7) = 1.0 / std::sqrt(2.0);
        break;
    case ProbeId::psiB:
        v(4) = v(5) = v(6) = v(7) = 0.5;
        break;
    case ProbeId::psiOpt: {
        const double s = 1.0 / std::sqrt(10.0);
        v(0) = 2.0 * s;
        v(1) = s;
        v(2) = s;
        v(3) = 2.0 * s;
        break;
    }
    }
    return QuantumState::pure(std::move(v));
}

} // namespace ohsense
