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
 * Sequential feedback control: N segments of U_t(λ) each followed by the
 * control U_t(λ̂)†, t = τ/N, the ideal controlled QFIM 4τ²cov(∂_μH,∂_νH),
 * the FIM of the dichotomic measurement {|ψ₀⟩⟨ψ₀|, 1 − |ψ₀⟩⟨ψ₀|}, its
 * second-order expansion in the control error η = λ − λ̂, and a multi-start
 * probe optimizer for Tr[Q⁻¹].
 */

#pragma once

#include <cstdint>
#include <vector>

#include "ohsense/matrix.hpp"
#include "ohsense/model.hpp"
#include "ohsense/probes.hpp"

namespace ohsense {

struct ControlPlan {
    double tau = 1.0;          ///< total time [1/K]
    int N = 1;                 ///< number of segments
    ParamPoint control_lambda; ///< λ̂ defining U_C = U_{τ/N}(λ̂)†

    /// Throws std::invalid_argument unless τ > 0 is finite and N ≥ 1.
    void validate() const;
    [[nodiscard]] double segment_time() const { return tau / N; }
};

/// [U_C·U_t(λ)]^N by binary powering.
CMatrix controlled_propagator(const ParamPoint &lambda_true, const ControlPlan &plan, const PhysicalConstants &c);

/// Final state [U_C·U_t(λ)]^Nψ₀.
QuantumState evolve_controlled(const QuantumState &psi0, const ParamPoint &lambda_true, const ControlPlan &plan,
                               const PhysicalConstants &c);

/// 4τ²·cov(∂_μH, ∂_νH) on ψ₀ with the symmetrized covariance.
RMatrix qfim_controlled_ideal(const QuantumState &psi0, const std::vector<HermitianOperator> &dH, double tau);

enum class ProbabilityDerivative { exact, finite_difference };

struct DichotomicOptions {
    ProbabilityDerivative derivative = ProbabilityDerivative::exact;
    double fd_step = 1e-6;               ///< relative step h_μ = fd_step·(1+|λ_μ|)
    double null_floor = 1e-14;           ///< p or 1−p below this is a null outcome
};

struct DichotomicFim {
    RMatrix F;                 ///< ∇p∇pᵀ/(p(1−p)); +∞ entries at a divergent point
    double p = 0.0;            ///< |⟨ψ₀|ξ⟩|²
    double q = 0.0;            ///< 1 − p, computed without cancellation
    RVector grad_p;
    int rank = 0;              ///< numerical rank of F (at most 1)
    bool divergent = false;    ///< a null outcome carries non-vanishing gradient
    bool null_point = false;   ///< p = 1 with ∇p = 0: the FIM is 0/0 and left at zero
    double segment_error = 0.0; ///< τ²‖[H(λ),H(λ̂)]‖/(2N), size of the neglected segment corrections
};

/**
 * FIM of the dichotomic measurement on ξ = [U_C·U_t(λ)]^Nψ₀.
 * Exact derivatives propagate (M, ∂_μM) through the binary powering with
 * ∂_μM = U_C·iU_t·𝓗_μ(t); the finite-difference mode differences p in λ
 * with Richardson extrapolation.
 */
DichotomicFim fim_dichotomic(const QuantumState &psi0, const ParamPoint &lambda_true, const ParamPoint &lambda_hat,
                             double tau, int N, const PhysicalConstants &c, const DichotomicOptions &opt = {});

/// Second-order expansion of the dichotomic FIM in η.
struct RobustnessExpansion {
    RVector Gamma;  ///< ⟨ψ₀|∂_μH|ψ₀⟩
    RMatrix K;      ///< Re⟨ψ₀|∂_μH∂_νH|ψ₀⟩
    RMatrix F0;     ///< 4τ²(K − ΓΓᵀ)
    double tau = 0.0;

    /// −4τ⁴[(ηᵀKη)(K−ΓΓᵀ) + (Kη)(Kη)ᵀ − (Γ·η)²ΓΓᵀ].
    [[nodiscard]] RMatrix F2(const RVector &eta) const;
    [[nodiscard]] RMatrix F(const RVector &eta) const { return F0 + F2(eta); }
    /// Tr[F0⁻¹]; throws NumericalError when F0 is singular.
    [[nodiscard]] double trace_F0_inverse() const;
    /// c_μ in Tr[F⁻¹] ≈ Tr[F0⁻¹] + Σ_μ c_μη_μ² + (cross terms), c_μ = −Tr[F0⁻¹F2(e_μ)F0⁻¹].
    [[nodiscard]] RVector eta_coefficients() const;
    /// Second-order prediction Tr[F0⁻¹] − Tr[F0⁻¹F2(η)F0⁻¹].
    [[nodiscard]] double predicted_trace(const RVector &eta) const;
    /// Tr[(F0+F2(η))⁻¹] without further expansion.
    [[nodiscard]] double resummed_trace(const RVector &eta) const;
};

RobustnessExpansion robustness_expansion(const QuantumState &psi0, const std::vector<HermitianOperator> &dH,
                                         double tau);

struct ProbeOptimum {
    CVector psi;
    double value = 0.0;        ///< Tr[(4cov)⁻¹] at τ = 1
    int best_start = 0;        ///< 0 is the psiOpt start
    int starts = 0;
    bool converged = false;
};

/// Riemannian gradient descent with Armijo steps from psiOpt plus
/// `restarts − 1` seeded random starts. Throws NumericalError when every
/// start has a singular covariance.
ProbeOptimum optimize_probe(const std::vector<HermitianOperator> &dH, int restarts, std::uint64_t seed = 1);

/// Tr[(4cov)⁻¹] for a state vector; +∞ when the covariance is singular.
double controlled_trace(const CVector &psi, const std::vector<HermitianOperator> &dH);

} // namespace ohsense
