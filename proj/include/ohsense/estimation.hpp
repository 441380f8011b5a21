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
 * Local multiparameter estimation toolbox: SLDs, QFIM, measurement FIM,
 * Uhlmann curvature, scalar bounds and the compatibility checks.
 *
 * Everything is generic in the number of parameters d; the model fixes d = 3.
 */

#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ohsense/matrix.hpp"
#include "ohsense/model.hpp"
#include "ohsense/probes.hpp"

namespace ohsense {

/// Numerical thresholds shared by the estimation routines.
struct Tolerances {
    double kernel = 1e-12;          ///< ρ_n + ρ_m below this is dropped
    double support = 1e-12;         ///< ρ_n above this spans supp(ρ)
    double singular_rel = 1e-12;    ///< Q eigenvalue / ‖Q‖_op below this is a kernel direction
    double probability = 1e-14;     ///< outcome probabilities below this are null outcomes
    double probability_grad = 1e-12;
    double normalization = 1e-10;   ///< probability sums, POM resolution
    double orthogonal = 1e-12;      ///< |⟨ψ|π⟩|² below this counts as orthogonal
};

inline constexpr Tolerances kDefaultTolerances{};

enum class DerivativeSource { analytic, finite_difference, perturbative };

/**
 * A state together with its parameter derivatives.
 *
 * Pure states carry ∂_μψ in `d_psi`; mixed states carry ∂_μρ in `d_rho`.
 * `d_rho` is always populated (for pure states from ∂ρ = |∂ψ⟩⟨ψ| + |ψ⟩⟨∂ψ|).
 */
struct DerivativeBundle {
    QuantumState state;
    std::vector<CVector> d_psi;
    std::vector<CMatrix> d_rho;
    DerivativeSource source = DerivativeSource::analytic;

    [[nodiscard]] int num_params() const { return static_cast<int>(d_rho.size()); }

    static DerivativeBundle from_pure(QuantumState s, std::vector<CVector> d_psi, DerivativeSource src);
    static DerivativeBundle from_mixed(QuantumState s, std::vector<CMatrix> d_rho, DerivativeSource src);
};

/// L_μ with (L_μ)_{nm} = 2(∂_μρ)_{nm}/(ρ_n+ρ_m) in the eigenbasis of ρ; pairs
/// with ρ_n+ρ_m < tol.kernel are set to zero.
std::vector<HermitianOperator> sld(const DerivativeBundle &b, const Tolerances &tol = kDefaultTolerances);

/// max_μ ‖∂_μρ − (L_μρ+ρL_μ)/2‖_max restricted to rows/columns touching supp(ρ).
double sld_residual(const DerivativeBundle &b, const std::vector<HermitianOperator> &L,
                    const Tolerances &tol = kDefaultTolerances);

/**
 * QFIM. Pure bundles use Q = 4Re[⟨∂_μψ|∂_νψ⟩ + ⟨∂_μψ|ψ⟩⟨∂_νψ|ψ⟩]; mixed
 * bundles use Σ_{nm} 2Re[(∂_μρ)_{nm}(∂_νρ)_{mn}]/(ρ_n+ρ_m) over non-kernel pairs.
 */
RMatrix qfim(const DerivativeBundle &b, const Tolerances &tol = kDefaultTolerances);

/// Q_{μν} = 4Σ_{n≥1} Re[⟨E₀|∂_μH|E_n⟩⟨E_n|∂_νH|E₀⟩]/(E₀−E_n)². Throws
/// NumericalError when the ground state is degenerate.
RMatrix qfim_ground_state(const HermitianOperator &h, const std::vector<HermitianOperator> &dH);

/// Ground state with ∂_μ|E₀⟩ = Σ_{n≠0}|E_n⟩⟨E_n|∂_μH|E₀⟩/(E₀−E_n) (zero
/// component along |E₀⟩). Throws NumericalError when degenerate.
DerivativeBundle ground_state_bundle(const HermitianOperator &h, const std::vector<HermitianOperator> &dH);

/// Gibbs state of H with its exact derivative ∂_μρ.
DerivativeBundle thermal_bundle(const HermitianOperator &h, const std::vector<HermitianOperator> &dH,
                                double temperature);

/// Gibbs QFIM Σ_{nm} ρ_n χ²_{nm} Re[(β∂_μH̃)_{nm}(β∂_νH̃)_{mn}] with
/// ∂H̃ = ∂H − ⟨∂H⟩ and χ from the spectrum of G = −βH − log Z.
RMatrix qfim_thermal_stationary(const HermitianOperator &h, const std::vector<HermitianOperator> &dH,
                                double temperature);

/// Low-temperature form Q^GS − 16Σ_{n≥1} e^{−βδE_n}/δE_n²·Re[...].
RMatrix qfim_thermal_small_t(const HermitianOperator &h, const std::vector<HermitianOperator> &dH,
                             double temperature);

/// Outcome probabilities p_k and their gradients dp(k, μ).
struct OutcomeDistribution {
    RVector p;
    RMatrix dp;
};

/// p_k = Tr[ρΠ_k], ∂_μp_k = Tr[∂_μρ Π_k].
OutcomeDistribution outcome_distribution(const DerivativeBundle &b, const std::vector<CMatrix> &povm);

/// F_{μν} = Σ_k ∂_μp_k∂_νp_k/p_k. Null outcomes with non-vanishing gradient
/// make the affected entries +∞.
RMatrix fim_povm(const OutcomeDistribution &dist, const Tolerances &tol = kDefaultTolerances);

/// D_{μν} = −(i/2)Tr[ρ[L_μ,L_ν]] = Im Tr[ρL_μL_ν].
RMatrix uhlmann_curvature(const QuantumState &state, const std::vector<HermitianOperator> &L);

struct ScalarBounds {
    double CS;                      ///< Tr[WQ⁻¹], +∞ when Q is singular
    double CHbar;                   ///< CS + ‖√W Q⁻¹DQ⁻¹ √W‖₁
    double R;                       ///< max|eig(iQ⁻¹D)| clipped to [0, 1]
    std::optional<double> mSNRbar;  ///< 1/Tr[W₀Q⁻¹], absent when some λ_μ = 0
    bool singular;
    std::vector<int> estimable;     ///< 0-based indices with non-vanishing Q rows
    double CS_estimable;            ///< Tr[W Q⁻¹] on the estimable sub-block
};

/// Throws std::invalid_argument when W is not positive definite.
ScalarBounds bounds(const RMatrix &Q, const RMatrix &D, const RMatrix &W,
                    const std::optional<RVector> &lambda = std::nullopt,
                    const Tolerances &tol = kDefaultTolerances);

/// W₀ = diag(1/λ_μ²); nullopt when some λ_μ = 0.
std::optional<RMatrix> msnr_weight(const RVector &lambda);

/// iQ⁻¹D spectrum radius computed through the Hermitian matrix Q^{-1/2}(iD)Q^{-1/2}.
double asymptotic_incompatibility(const RMatrix &Q, const RMatrix &D, const Tolerances &tol = kDefaultTolerances);

/// max_{μ<ν} ‖P_supp[L_μ,L_ν]P_supp‖_max.
double check_pcc(const QuantumState &state, const std::vector<HermitianOperator> &L,
                 const Tolerances &tol = kDefaultTolerances);

/// Largest |Im| over the phase-fixed ψ and its derivatives with the
/// component along ψ removed. Throws std::invalid_argument for mixed bundles.
double check_rpd(const DerivativeBundle &b);

struct ScpmResidual {
    double non_orthogonal; ///< max |Im[⟨∂ψ|π⟩⟨π|ψ⟩] − |⟨ψ|π⟩|²Im⟨∂ψ|ψ⟩|
    double orthogonal;     ///< max |Im[⟨∂_μψ|θ⟩⟨θ|∂_νψ⟩]|
};

/// Saturability residuals of a projective measurement given by unit vectors.
/// Throws std::invalid_argument when the projectors do not resolve identity.
ScpmResidual check_scpm(const DerivativeBundle &b, const std::vector<CVector> &pom,
                        const Tolerances &tol = kDefaultTolerances);

enum class FdScheme { central, richardson };

using StateModel = std::function<QuantumState(const RVector &)>;

/**
 * Finite-difference bundle with per-component step h_μ = step·(1+|p_μ|).
 * Pure states are gauge aligned (phase of ψ(p±h) rotated onto ψ(p)) before
 * differencing. Richardson combines steps h and h/2 to fourth order.
 */
DerivativeBundle fd_derivatives(const StateModel &model, const RVector &p, double step,
                                FdScheme scheme = FdScheme::richardson);

struct ResidualFlags {
    double wcc = 0.0;
    double pcc = 0.0;
    std::optional<double> rpd;
};

struct EstimationReport {
    RMatrix Q;
    RMatrix D;
    double CS = 0.0;
    double CHbar = 0.0;
    std::optional<double> CH;
    double R = 0.0;
    std::optional<double> mSNRbar;
    ResidualFlags flags;
    bool singular = false;
    std::vector<int> estimable;
    double CS_estimable = 0.0;
};

/// Report from Q, D and precomputed residuals.
EstimationReport make_report(const RMatrix &Q, const RMatrix &D, const RMatrix &W, const std::optional<RVector> &lambda,
                             ResidualFlags flags, const Tolerances &tol = kDefaultTolerances);

/// Report from a derivative bundle (SLD-based Q and D, PCC and, for pure
/// bundles, RPD residuals).
EstimationReport make_report(const DerivativeBundle &b, const RMatrix &W, const std::optional<RVector> &lambda,
                             const Tolerances &tol = kDefaultTolerances);

} // namespace ohsense
