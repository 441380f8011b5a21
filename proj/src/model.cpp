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

#include "ohsense/model.hpp"

#include <cmath>
#include <numbers>

namespace ohsense {

namespace codata {
constexpr double h = 6.62607015e-34;       // J s
constexpr double hbar = h / (2.0 * std::numbers::pi);
constexpr double k_B = 1.380649e-23;       // J/K
constexpr double mu_B = 9.2740100783e-24;  // J/T
constexpr double debye = 3.33564e-30;      // C m
} // namespace codata

void PhysicalConstants::validate() const {
    for (double v : {Delta, muB_per_gauss, muE_per_kVcm}) {
        if (!std::isfinite(v) || v <= 0.0) {
            throw std::invalid_argument("physical constants must be finite and positive");
        }
    }
}

PhysicalConstants default_constants() {
    constexpr double splitting_hz = 1.667e9;
    constexpr double dipole_debye = 1.66;
    constexpr double tesla_per_gauss = 1e-4;
    constexpr double volt_per_m_per_kVcm = 1e5;
    return PhysicalConstants{
        codata::h * splitting_hz / codata::k_B,
        codata::mu_B * tesla_per_gauss / codata::k_B,
        dipole_debye * codata::debye * volt_per_m_per_kVcm / codata::k_B,
    };
}

void FieldSpec::validate() const {
    if (!std::isfinite(B) || !std::isfinite(E) || !std::isfinite(theta)) {
        throw std::invalid_argument("field specification must be finite");
    }
    if (B < 0.0 || E < 0.0) {
        throw std::invalid_argument("field magnitudes must be non-negative");
    }
    if (theta < 0.0 || theta > std::numbers::pi + 1e-12) {
        throw std::invalid_argument("theta must lie in [0, pi]");
    }
}

double ParamPoint::operator()(int mu) const {
    switch (mu) {
    case 1: return lambda1;
    case 2: return lambda2;
    case 3: return lambda3;
    default: throw std::invalid_argument("parameter index must be 1, 2 or 3");
    }
}

RVector ParamPoint::as_vector() const {
    RVector v(kNumParams);
    v << lambda1, lambda2, lambda3;
    return v;
}

ParamPoint ParamPoint::from_vector(const RVector &v) {
    if (v.size() != kNumParams) {
        throw std::invalid_argument("parameter vector must have 3 components");
    }
    return ParamPoint{v(0), v(1), v(2)};
}

ParamPoint ParamPoint::shifted(int mu, double h) const {
    RVector v = as_vector();
    v(mu - 1) += h;
    return from_vector(v);
}

ParamPoint lambdas_from_fields(const FieldSpec &f, const PhysicalConstants &c) {
    f.validate();
    c.validate();
    const double dipole = c.muE_per_kVcm * f.E;
    return ParamPoint{c.muB_per_gauss * f.B, dipole * std::cos(f.theta), dipole * std::sin(f.theta)};
}

namespace {

HermitianOperator make_dH(int mu) {
    switch (mu) {
    case 1:
        return HermitianOperator(CMatrix(-0.8 * (2.0 * pauli_tensor(0, 3, 0).matrix() +
                                                 pauli_tensor(0, 0, 3).matrix())));
    case 2:
        return HermitianOperator(CMatrix(0.4 * (2.0 * pauli_tensor(1, 3, 0).matrix() +
                                                pauli_tensor(1, 0, 3).matrix())));
    case 3:
        return HermitianOperator(CMatrix(-0.4 * (std::sqrt(3.0) * pauli_tensor(1, 0, 1).matrix() +
                                                 pauli_tensor(1, 1, 1).matrix() +
                                                 pauli_tensor(1, 2, 2).matrix())));
    default: throw std::invalid_argument("parameter index must be 1, 2 or 3");
    }
}

} // namespace

HermitianOperator build_dH(int mu) {
    if (mu < 1 || mu > kNumParams) {
        throw std::invalid_argument("parameter index must be 1, 2 or 3");
    }
    static const std::array<HermitianOperator, kNumParams> cache{make_dH(1), make_dH(2), make_dH(3)};
    return cache[static_cast<size_t>(mu - 1)];
}

std::vector<HermitianOperator> all_dH() { return {build_dH(1), build_dH(2), build_dH(3)}; }

HermitianOperator build_hamiltonian(const ParamPoint &p, const PhysicalConstants &c) {
    c.validate();
    if (!std::isfinite(p.lambda1) || !std::isfinite(p.lambda2) || !std::isfinite(p.lambda3)) {
        throw std::invalid_argument("parameter point must be finite");
    }
    CMatrix h = -c.Delta * pauli_tensor(3, 0, 0).matrix();
    for (int mu = 1; mu <= kNumParams; ++mu) {
        h += p(mu) * build_dH(mu).matrix();
    }
    return HermitianOperator(std::move(h));
}

double time_from_seconds(double seconds) { return seconds * codata::k_B / codata::hbar; }

} // namespace ohsense
