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
 * Unitary encoding U = exp(−itH(λ)): effective generators
 * 𝓗_μ = i(∂_μU†)U, QFIMs of evolved pure, mixed and exponential-form
 * states, the thermal dynamical model and the aligned-field closed forms.
 */

#pragma once

#include <vector>

#include "ohsense/estimation.hpp"
#include "ohsense/matrix.hpp"
#include "ohsense/model.hpp"
#include "ohsense/probes.hpp"

namespace ohsense {

/**
 * Scale g between this library's QFIM (Q = 4·cov for pure unitary models)
 * and the covariance normalization Q/4 of the closed-form aligned bounds and
 * the controlled-probe constants: those traces equal g·Tr[Q⁻¹].
 */
inline constexpr double kCovNormalizationFactor = 4.0;

enum class GeneratorMethod { series, spectral, analytic_aligned };

struct GeneratorSet {
    std::vector<HermitianOperator> generators;
    double t = 0.0;
    GeneratorMethod method = GeneratorMethod::spectral;
    double hermiticity_residual = 0.0; ///< before symmetrization
};

/// 𝓗_μ = iΣ_{n=0}^{order}(it)^{n+1}/(n+1)!·Γ_H^n(∂_μH); stops early once a
/// term falls below 1e-16 of the partial sum.
GeneratorSet generators_series(const HermitianOperator &h, const std::vector<HermitianOperator> &dH, double t,
                               int order = 40);

/**
 * Eigenbasis form ⟨E_n|𝓗_μ|E_k⟩ = −t⟨E_n|∂_μH|E_k⟩·e^{it(E_n−E_k)/2}·sinc(t(E_n−E_k)/2).
 * Degenerate pairs take the sinc → 1 limit.
 */
GeneratorSet generators_spectral(const HermitianOperator &h, const std::vector<HermitianOperator> &dH, double t);

/**
 * Closed-form generators (𝓗_{λ₁}, 𝓗_{λ₂}) at λ₃ = 0, with
 * 𝔠_t(x) = (cos xt − 1)/x², 𝔰_t(x) = (sin xt − xt)/x³ evaluated at the
 * Bohr frequencies 2Ξ and 2Ω, Ξ = √(Δ²+4λ₂²/25), Ω = √(Δ²+36λ₂²/25):
 *
 *   𝓗_{λ₁} = −t∂₁H
 *   𝓗_{λ₂} = −t∂₂H + (4/5)Δ[½((T₂₃₀−T₂₀₃)𝔠(2Ξ) + 3(T₂₃₀+T₂₀₃)𝔠(2Ω))
 *            − Δ((T₁₃₀−T₁₀₃)𝔰(2Ξ) + 3(T₁₃₀+T₁₀₃)𝔰(2Ω))
 *            + (2/5)λ₂((T₃₃₃−T₃₀₀)𝔰(2Ξ) − 9(T₃₃₃+T₃₀₀)𝔰(2Ω))]
 *
 * λ₁ enters neither generator.
 */
GeneratorSet generators_aligned(double lambda1, double lambda2, double t, const PhysicalConstants &c);

/**
 * Alternative closed form with 𝔠, 𝔰 at Ξ, Ω, no ½ on the first bracket and
 * T₃₃₀ in place of T₃₀₀. It does not reproduce i(∂U†)U for this
 * Hamiltonian and is kept to quantify that mismatch.
 */
GeneratorSet generators_aligned_alt(double lambda1, double lambda2, double t, const PhysicalConstants &c);

/// 𝔠_t(x) and 𝔰_t(x), cancellation-free for small xt.
double frak_c(double x, double t);
double frak_s(double x, double t);

/// Symmetrized covariance ½⟨{A,B}⟩ − ⟨A⟩⟨B⟩ on ψ.
double covariance(const CVector &psi, const CMatrix &a, const CMatrix &b);

/**
 * QFIM of U·state0·U†. Pure: Q = 4·cov(𝓗_μ, 𝓗_ν). Mixed:
 * 4Σ_nρ_n cov_n − 8Σ_{n≠m} ρ_nρ_m/(ρ_n+ρ_m)·Re[𝓗^μ_{nm}𝓗^ν_{mn}] with pairs
 * ρ_n+ρ_m below the kernel tolerance dropped.
 */
RMatrix qfim_unitary(const QuantumState &state0, const GeneratorSet &gens,
                     const Tolerances &tol = kDefaultTolerances);

/// Evolved state Uψ₀ (or Uρ₀U†) with ∂ψ = iU𝓗ψ₀ (or ∂ρ = iU[𝓗,ρ₀]U†).
DerivativeBundle evolved_bundle(const QuantumState &state0, const HermitianOperator &h, const GeneratorSet &gens);

/// ρ₀ = e^{G₀}: eigenvalues g_n, eigenvectors, and χ_{nm} = tanh(x)/x, x = (g_n−g_m)/2.
struct ExponentialModel {
    RVector g;
    CMatrix vectors;
    RMatrix chi;

    /// Gibbs state of h0 at temperature T.
    static ExponentialModel thermal(const HermitianOperator &h0, double temperature);
    /// Full-rank density matrix; throws NumericalError on a zero eigenvalue.
    static ExponentialModel from_state(const QuantumState &state);

    [[nodiscard]] RVector weights() const;
    [[nodiscard]] QuantumState state() const;
};

/// 4Σ_{n>m}(e^{g_m}+e^{g_n})tanh²((g_n−g_m)/2)·Re[⟨ψ_n|𝓗_μ|ψ_m⟩⟨ψ_m|𝓗_ν|ψ_n⟩].
RMatrix qfim_exponential_evolved(const ExponentialModel &model, const GeneratorSet &gens);

/// Companion curvature 4Σ_{nm} e^{g_n}tanh²((g_n−g_m)/2)·Im[⟨ψ_n|𝓗_μ|ψ_m⟩⟨ψ_m|𝓗_ν|ψ_n⟩].
RMatrix uhlmann_exponential_evolved(const ExponentialModel &model, const GeneratorSet &gens);

/// QFIM of the stationary exponential state via the χ-weighted SLD.
RMatrix qfim_exponential_stationary(const ExponentialModel &model, const std::vector<CMatrix> &dG);

struct ThermalDynamicalReport {
    EstimationReport report;
    RMatrix q; ///< Re Σ_{n∈{e₁..e₄}, m∈{e₅..e₈}} ⟨e_n|𝓗_μ|e_m⟩⟨e_m|𝓗_ν|e_n⟩
    RMatrix d; ///< Im of the same double sum
    double r_qd = 0.0; ///< ‖q⁻¹d‖_∞
    double tanh_factor = 0.0; ///< tanh(βΔ), with Q = tanh²·q and |D| = tanh³·|d|
    GeneratorSet gens;
};

/// Thermal state of H₀ = H(0) evolved for time t under H(λ).
ThermalDynamicalReport thermal_dynamical_report(const ParamPoint &lambda, double t, double temperature,
                                                const PhysicalConstants &c, const RMatrix &W);

/// Closed-form Tr[Q⁻¹] for psiA or psiB in the covariance normalization
/// (includes κ for psiB). Throws for other probes.
double aligned_closed_form_bound(ProbeId probe, double lambda2, double t, const PhysicalConstants &c);

/// Large-t leading terms of the closed forms.
double aligned_large_t_bound(ProbeId probe, double lambda2, double t, const PhysicalConstants &c);

/// Small-t constants t²·Tr[Q⁻¹] → 125/144 (psiA), 25/16 (psiB).
double aligned_small_t_constant(ProbeId probe);

/// Tr[Q⁻¹] of the aligned dynamical model with numerically computed
/// spectral generators, over λ₁,λ₂ (nparams = 2) or λ₁,λ₂,λ₃ (nparams = 3).
/// Uses this library's normalization Q = 4·cov.
double aligned_numeric_trace(const QuantumState &probe, double lambda1, double lambda2, double t,
                             const PhysicalConstants &c, int nparams);

} // namespace ohsense
