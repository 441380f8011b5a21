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
 * Stark-Zeeman Hamiltonian of the OH ground manifold in the 8-state basis.
 *
 * Units: energies in kelvin (E/k_B), times in 1/kelvin, ħ = k_B = 1.
 */

#pragma once

#include <array>
#include <vector>

#include "ohsense/matrix.hpp"

namespace ohsense {

/// Number of encoded parameters (λ₁, λ₂, λ₃).
inline constexpr int kNumParams = 3;

/// Hilbert-space dimension of the model.
inline constexpr int kDim = 8;

struct PhysicalConstants {
    double Delta;         ///< lambda-doubling energy [K]
    double muB_per_gauss; ///< Bohr magneton per gauss [K/G]
    double muE_per_kVcm;  ///< dipole moment times 1 kV/cm [K/(kV/cm)]

    /// Throws std::invalid_argument unless all fields are finite and > 0.
    void validate() const;
};

/// Constants from CODATA h, k_B, μ_B and a 1.66 D dipole at 1.667 GHz splitting.
PhysicalConstants default_constants();

/// Field magnitudes and the angle between E and B (B along z).
struct FieldSpec {
    double B;     ///< gauss
    double E;     ///< kV/cm
    double theta; ///< radians, [0, π]

    void validate() const;
};

struct ParamPoint {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda3 = 0.0;

    /// 1-based component access (μ ∈ 1..3).
    [[nodiscard]] double operator()(int mu) const;
    [[nodiscard]] RVector as_vector() const;
    [[nodiscard]] static ParamPoint from_vector(const RVector &v);
    [[nodiscard]] ParamPoint shifted(int mu, double h) const;

    bool operator==(const ParamPoint &) const = default;
};

ParamPoint lambdas_from_fields(const FieldSpec &f, const PhysicalConstants &c);

/// H = −Δ·T₃₀₀ + Σ_μ λ_μ·∂_μH.
HermitianOperator build_hamiltonian(const ParamPoint &p, const PhysicalConstants &c);

/**
 * ∂_μH for μ ∈ 1..3. The model is affine in λ, so these are constants:
 * ∂₁H = −(4/5)(2T₀₃₀ + T₀₀₃), ∂₂H = (2/5)(2T₁₃₀ + T₁₀₃),
 * ∂₃H = −(2/5)(√3·T₁₀₁ + T₁₁₁ + T₁₂₂).
 */
HermitianOperator build_dH(int mu);

/// {∂₁H, ∂₂H, ∂₃H}.
std::vector<HermitianOperator> all_dH();

/// Converts a duration in seconds to the internal 1/K time unit (t·k_B/ħ).
double time_from_seconds(double seconds);

} // namespace ohsense
