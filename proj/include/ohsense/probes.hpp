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
 * Probe states: pure vectors, density matrices, ground and Gibbs states,
 * and the named pure probes of the dynamical scenarios.
 */

#pragma once

#include <string>
#include <string_view>

#include "ohsense/matrix.hpp"

namespace ohsense {

enum class StateKind { pure, mixed };

/**
 * Immutable probe state.
 *
 * Pure: ‖ψ‖₂ = 1 ± 1e-12. Mixed: Hermitian, eigenvalues ≥ −1e-12 and
 * trace 1 ± 1e-12. The density matrix and its eigendata are available for
 * both kinds (for a pure state they describe |ψ⟩⟨ψ|).
 */
class QuantumState {
  public:
    static QuantumState pure(CVector psi, double tolerance = 1e-12);
    static QuantumState mixed(CMatrix rho, double tolerance = 1e-12);

    /// Mixed state whose eigendecomposition is already known (values
    /// ascending, orthonormal columns).
    static QuantumState mixed(CMatrix rho, Spectrum known);

    [[nodiscard]] StateKind kind() const noexcept { return kind_; }
    [[nodiscard]] bool is_pure() const noexcept { return kind_ == StateKind::pure; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return rho_.dim(); }

    /// State vector. Throws std::logic_error for mixed states.
    [[nodiscard]] const CVector &vector() const;
    [[nodiscard]] const CMatrix &density() const noexcept { return rho_.matrix(); }
    [[nodiscard]] const HermitianOperator &density_operator() const noexcept { return rho_; }
    [[nodiscard]] const Spectrum &eigen() const { return rho_.spectrum(); }

  private:
    QuantumState(StateKind kind, CVector psi, HermitianOperator rho)
        : kind_(kind), psi_(std::move(psi)), rho_(std::move(rho)) {}

    StateKind kind_;
    CVector psi_;
    HermitianOperator rho_;
};

/// Multiplies ψ by the phase that makes its largest-modulus component real
/// positive (first such component on ties within 1e-12).
CVector fix_phase(const CVector &psi);

struct GroundState {
    QuantumState state;
    double energy;
    double gap;      ///< E₁ − E₀
    bool degenerate; ///< gap below the degeneracy threshold of H
};

/// Lowest eigenvector of H with deterministic phase and a degeneracy flag.
GroundState ground_state(const HermitianOperator &h);

/// Gibbs state e^{−H/T}/Z from the spectrum of H. Throws for T ≤ 0.
QuantumState thermal_state(const HermitianOperator &h, double temperature);

enum class ProbeId { psiA, psiB, psiOpt };

/// Parses "psiA", "psiB" or "psiOpt". Throws std::invalid_argument otherwise.
ProbeId parse_probe_id(std::string_view name);
std::string to_string(ProbeId id);

/// psiA = (e₅+e₈)/√2, psiB = (e₅+e₆+e₇+e₈)/2, psiOpt = (2e₁+e₂+e₃+2e₄)/√10.
QuantumState named_probe(ProbeId id);

} // namespace ohsense
