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
 * Holevo Cramér–Rao bound
 *
 *   C_H = min_X Tr[W·Re Z[X]] + ‖√W·Im Z[X]·√W‖₁,  Z_μν = Tr[ρX_μX_ν],
 *
 * over Hermitian X_μ with Tr[∂_νρ X_μ] = δ_μν, solved as the equivalent
 * convex program min Tr[WU] s.t. U ⪰ Z[X] with a log-det barrier, and the
 * sandwich CS ≤ C_H ≤ C̄H ≤ 2·CS around it.
 */

#pragma once

#include <string>
#include <vector>

#include "ohsense/estimation.hpp"
#include "ohsense/matrix.hpp"

namespace ohsense {

struct HolevoProblem {
    QuantumState state;
    std::vector<CMatrix> d_rho;
    RMatrix W;

    static HolevoProblem from_bundle(const DerivativeBundle &b, const RMatrix &W);
};

struct HolevoOptions {
    double gap_tolerance = 1e-10;  ///< relative to CS
    double growth = 10.0;          ///< barrier parameter multiplier per outer step
    int max_outer = 60;
    int max_newton = 100;          ///< per outer step
    int subgradient_iterations = 20000;
    bool allow_fallback = true;
};

enum class HolevoMethod { barrier, subgradient };

std::string to_string(HolevoMethod m);

/// How far the returned value can be above the optimum.
struct HolevoCertificate {
    double gap = 0.0;            ///< value − gap ≤ C_H ≤ value (barrier only)
    int iterations = 0;          ///< Newton steps or subgradient steps
    bool converged = false;
    HolevoMethod method = HolevoMethod::barrier;
    double sld_objective = 0.0;  ///< objective at X_μ = Σ_ν(Q⁻¹)_μν L_ν, equal to C̄H
};

struct HolevoResult {
    double value = 0.0;          ///< objective at the returned feasible X
    std::vector<CMatrix> X;      ///< minimizing observables
    HolevoCertificate certificate;
};

/// Objective Tr[W Re Z] + ‖√W Im Z √W‖₁ at a given set of observables.
double holevo_objective(const QuantumState &state, const std::vector<CMatrix> &X, const RMatrix &W);

/// Barrier-method solve with subgradient fallback. Throws NumericalError
/// when the constraints cannot be met (singular QFIM).
HolevoResult holevo_bound(const HolevoProblem &p, const HolevoOptions &opt = {});

/// Projected subgradient descent with diminishing steps, best iterate kept.
HolevoResult holevo_bound_subgradient(const HolevoProblem &p, const HolevoOptions &opt = {});

struct SandwichReport {
    double CS = 0.0;
    double CH = 0.0;
    double CHbar = 0.0;
    double gap = 0.0;            ///< solver certificate gap
    bool ordered = false;        ///< CS ≤ CH ≤ C̄H ≤ 2CS within the gap
    HolevoCertificate certificate;
};

SandwichReport sandwich_report(const DerivativeBundle &b, const RMatrix &W, const HolevoOptions &opt = {});

} // namespace ohsense
