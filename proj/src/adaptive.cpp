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

#include "ohsense/adaptive.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "ohsense/unitary.hpp"

namespace ohsense {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CMatrix matrix_power(CMatrix base, int n) {
    CMatrix out = CMatrix::Identity(base.rows(), base.cols());
    while (n > 0) {
        if (n & 1) {
            out = out * base;
        }
        n >>= 1;
        if (n > 0) {
            base = base * base;
        }
    }
    return out;
}

/// (A, ∂A) ↦ (A^n, ∂(A^n)) with the product rule (A,dA)(B,dB) = (AB, dA·B + A·dB).
struct Dual {
    CMatrix value;
    std::vector<CMatrix> d;

    Dual operator*(const Dual &o) const {
        Dual r;
        r.value = value * o.value;
        for (size_t mu = 0; mu < d.size(); ++mu) {
            r.d.emplace_back(d[mu] * o.value + value * o.d[mu]);
        }
        return r;
    }
};

Dual dual_power(Dual base, int n) {
    Dual out;
    out.value = CMatrix::Identity(base.value.rows(), base.value.cols());
    out.d.assign(base.d.size(), CMatrix::Zero(base.value.rows(), base.value.cols()));
    while (n > 0) {
        if (n & 1) {
            out = out * base;
        }
        n >>= 1;
        if (n > 0) {
            base = base * base;
        }
    }
    return out;
}

RMatrix covariance_matrix(const CVector &psi, const std::vector<HermitianOperator> &dH) {
    const int d = static_cast<int>(dH.size());
    RMatrix c(d, d);
    for (int mu = 0; mu < d; ++mu) {
        for (int nu = mu; nu < d; ++nu) {
            c(mu, nu) = c(nu, mu) = covariance(psi, dH[mu].matrix(), dH[nu].matrix());
        }
    }
    return c;
}

/// Inverse of a symmetric PD matrix, or nullopt-like empty result when singular.
bool spd_inverse(const RMatrix &a, RMatrix &inv) {
    const Eigen::LDLT<RMatrix> l(a);
    const double scale = a.cwiseAbs().maxCoeff();
    if (l.info() != Eigen::Success || !(scale > 0.0) || l.vectorD().minCoeff() <= 1e-13 * scale) {
        return false;
    }
    inv = l.solve(RMatrix::Identity(a.rows(), a.cols()));
    return true;
}

} // namespace

void ControlPlan::validate() const {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw std::invalid_argument("control plan needs a finite τ > 0");
    }
    if (N < 1) {
        throw std::invalid_argument("control plan needs N ≥ 1");
    }
}

CMatrix controlled_propagator(const ParamPoint &lambda_true, const ControlPlan &plan, const PhysicalConstants &c) {
    plan.validate();
    const double t = plan.segment_time();
    const CMatrix ut = unitary_of(build_hamiltonian(lambda_true, c), t);
    const CMatrix uc = unitary_of(build_hamiltonian(plan.control_lambda, c), t).adjoint();
    return matrix_power(uc * ut, plan.N);
}

QuantumState evolve_controlled(const QuantumState &psi0, const ParamPoint &lambda_true, const ControlPlan &plan,
                               const PhysicalConstants &c) {
    CVector out = controlled_propagator(lambda_true, plan, c) * psi0.vector();
    out.normalize();
    return QuantumState::pure(std::move(out));
}

RMatrix qfim_controlled_ideal(const QuantumState &psi0, const std::vector<HermitianOperator> &dH, double tau) {
    return 4.0 * tau * tau * covariance_matrix(psi0.vector(), dH);
}

DichotomicFim fim_dichotomic(const QuantumState &psi0, const ParamPoint &lambda_true, const ParamPoint &lambda_hat,
                             double tau, int N, const PhysicalConstants &c, const DichotomicOptions &opt) {
    const ControlPlan plan{tau, N, lambda_hat};
    plan.validate();
    const CVector &psi = psi0.vector();
    const double t = plan.segment_time();
    const HermitianOperator h = build_hamiltonian(lambda_true, c);
    const HermitianOperator hhat = build_hamiltonian(lambda_hat, c);
    const std::vector<HermitianOperator> dH = all_dH();
    const CMatrix ut = unitary_of(h, t);
    const CMatrix uc = unitary_of(hhat, t).adjoint();

    DichotomicFim r;
    r.grad_p = RVector::Zero(kNumParams);

    auto outcome = [&](const CVector &xi) {
        const cplx a = psi.dot(xi);
        return std::pair<cplx, double>(a, (xi - a * psi).squaredNorm());
    };

    CVector xi;
    if (opt.derivative == ProbabilityDerivative::exact) {
        const GeneratorSet gens = generators_spectral(h, dH, t);
        Dual m;
        m.value = uc * ut;
        for (const HermitianOperator &g : gens.generators) {
            m.d.emplace_back(uc * (kI * (ut * g.matrix())));
        }
        const Dual mn = dual_power(std::move(m), N);
        xi = mn.value * psi;
        const cplx a = psi.dot(xi);
        for (int mu = 0; mu < kNumParams; ++mu) {
            r.grad_p(mu) = 2.0 * (std::conj(a) * psi.dot(mn.d[mu] * psi)).real();
        }
    } else {
        auto prob = [&](const ParamPoint &p) {
            const CVector x = controlled_propagator(p, plan, c) * psi;
            return std::norm(psi.dot(x));
        };
        xi = controlled_propagator(lambda_true, plan, c) * psi;
        for (int mu = 1; mu <= kNumParams; ++mu) {
            const double hs = opt.fd_step * (1.0 + std::abs(lambda_true(mu)));
            auto central = [&](double s) {
                return (prob(lambda_true.shifted(mu, s)) - prob(lambda_true.shifted(mu, -s))) / (2.0 * s);
            };
            r.grad_p(mu - 1) = (4.0 * central(hs / 2.0) - central(hs)) / 3.0;
        }
    }
    const auto [a, q] = outcome(xi);
    r.p = std::norm(a);
    r.q = q;

    double dh_scale = 0.0;
    for (const HermitianOperator &d : dH) {
        dh_scale = std::max(dh_scale, norm(d.matrix(), NormKind::operator_norm));
    }
    const double grad_floor = 1e-10 * tau * dh_scale;
    const bool has_grad = r.grad_p.cwiseAbs().maxCoeff() > grad_floor;
    r.F = RMatrix::Zero(kNumParams, kNumParams);
    if (r.p < opt.null_floor || r.q < opt.null_floor) {
        if (has_grad) {
            r.divergent = true;
            for (int mu = 0; mu < kNumParams; ++mu) {
                for (int nu = 0; nu < kNumParams; ++nu) {
                    const bool nz = std::abs(r.grad_p(mu)) > grad_floor && std::abs(r.grad_p(nu)) > grad_floor;
                    r.F(mu, nu) = nz ? kInf : 0.0;
                }
            }
            r.rank = 1;
        } else {
            r.null_point = true;
        }
    } else {
        r.F = r.grad_p * r.grad_p.transpose() / (r.p * r.q);
        if (has_grad) {
            r.rank = 1;
        }
    }
    const CMatrix comm = kI * commutator(h.matrix(), hhat.matrix());
    r.segment_error = tau * tau * norm(hermitian_part(comm), NormKind::operator_norm) / (2.0 * N);
    return r;
}

RMatrix RobustnessExpansion::F2(const RVector &eta) const {
    const RMatrix C = K - Gamma * Gamma.transpose();
    const RVector k_eta = K * eta;
    const double g_eta = Gamma.dot(eta);
    const double t4 = tau * tau * tau * tau;
    return -4.0 * t4 * (eta.dot(k_eta) * C + k_eta * k_eta.transpose() - g_eta * g_eta * Gamma * Gamma.transpose());
}

double RobustnessExpansion::trace_F0_inverse() const {
    RMatrix inv;
    if (!spd_inverse(F0, inv)) {
        throw NumericalError("leading FIM is singular");
    }
    return inv.trace();
}

RVector RobustnessExpansion::eta_coefficients() const {
    RMatrix inv;
    if (!spd_inverse(F0, inv)) {
        throw NumericalError("leading FIM is singular");
    }
    const int d = static_cast<int>(Gamma.size());
    RVector out(d);
    for (int mu = 0; mu < d; ++mu) {
        const RVector e = RVector::Unit(d, mu);
        out(mu) = -(inv * F2(e) * inv).trace();
    }
    return out;
}

double RobustnessExpansion::predicted_trace(const RVector &eta) const {
    RMatrix inv;
    if (!spd_inverse(F0, inv)) {
        throw NumericalError("leading FIM is singular");
    }
    return inv.trace() - (inv * F2(eta) * inv).trace();
}

double RobustnessExpansion::resummed_trace(const RVector &eta) const {
    RMatrix inv;
    if (!spd_inverse(F(eta), inv)) {
        return kInf;
    }
    return inv.trace();
}

RobustnessExpansion robustness_expansion(const QuantumState &psi0, const std::vector<HermitianOperator> &dH,
                                         double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw std::invalid_argument("τ must be finite and positive");
    }
    const CVector &psi = psi0.vector();
    const int d = static_cast<int>(dH.size());
    RobustnessExpansion r;
    r.tau = tau;
    r.Gamma.resize(d);
    r.K.resize(d, d);
    std::vector<CVector> a;
    for (const HermitianOperator &op : dH) {
        a.emplace_back(op.matrix() * psi);
    }
    for (int mu = 0; mu < d; ++mu) {
        r.Gamma(mu) = psi.dot(a[mu]).real();
        for (int nu = 0; nu < d; ++nu) {
            r.K(mu, nu) = a[mu].dot(a[nu]).real();
        }
    }
    r.K = 0.5 * (r.K + r.K.transpose());
    r.F0 = 4.0 * tau * tau * (r.K - r.Gamma * r.Gamma.transpose());
    return r;
}

double controlled_trace(const CVector &psi, const std::vector<HermitianOperator> &dH) {
    RMatrix inv;
    if (!spd_inverse(4.0 * covariance_matrix(psi, dH), inv)) {
        return kInf;
    }
    return inv.trace();
}

namespace {

struct Descent {
    CVector psi;
    double value;
    bool converged;
};

/// Tangent-space gradient of Tr[(4cov)⁻¹] at unit ψ (real inner product Re⟨·,·⟩).
bool tangent_gradient(const CVector &psi, const std::vector<HermitianOperator> &dH, CVector &grad, double &value) {
    const int d = static_cast<int>(dH.size());
    RMatrix inv;
    if (!spd_inverse(4.0 * covariance_matrix(psi, dH), inv)) {
        return false;
    }
    value = inv.trace();
    const RMatrix m = inv * inv;
    std::vector<CVector> a;
    RVector gamma(d);
    for (int mu = 0; mu < d; ++mu) {
        a.emplace_back(dH[mu].matrix() * psi);
        gamma(mu) = psi.dot(a.back()).real();
    }
    CVector g = CVector::Zero(psi.size());
    for (int mu = 0; mu < d; ++mu) {
        for (int nu = 0; nu < d; ++nu) {
            const CVector s = 0.5 * (dH[mu].matrix() * a[nu] + dH[nu].matrix() * a[mu]);
            g += m(mu, nu) * (s - gamma(nu) * a[mu] - gamma(mu) * a[nu]);
        }
    }
    g *= -8.0;
    grad = g - psi * psi.dot(g).real();
    return true;
}

Descent descend(CVector psi, const std::vector<HermitianOperator> &dH) {
    psi.normalize();
    CVector g;
    double f = 0.0;
    if (!tangent_gradient(psi, dH, g, f)) {
        return {psi, kInf, false};
    }
    double alpha = 1e-2 / std::max(g.norm(), 1e-300);
    for (int it = 0; it < 20000; ++it) {
        const double gn2 = g.squaredNorm();
        if (std::sqrt(gn2) <= 1e-10 * (1.0 + f)) {
            return {psi, f, true};
        }
        alpha *= 2.0;
        CVector trial;
        double ft = kInf;
        while (alpha > 1e-300) {
            trial = (psi - alpha * g).normalized();
            ft = controlled_trace(trial, dH);
            if (ft <= f - 1e-4 * alpha * gn2) {
                break;
            }
            alpha *= 0.5;
        }
        if (!(ft < f)) {
            return {psi, f, true};
        }
        psi = trial;
        const double f_old = f;
        if (!tangent_gradient(psi, dH, g, f)) {
            return {psi, kInf, false};
        }
        if (f_old - f <= 1e-16 * f) {
            return {psi, f, true};
        }
    }
    return {psi, f, false};
}

} // namespace

ProbeOptimum optimize_probe(const std::vector<HermitianOperator> &dH, int restarts, std::uint64_t seed) {
    if (restarts < 1) {
        throw std::invalid_argument("restarts must be at least 1");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    ProbeOptimum best;
    best.value = kInf;
    best.starts = restarts;
    for (int s = 0; s < restarts; ++s) {
        CVector start;
        if (s == 0) {
            start = named_probe(ProbeId::psiOpt).vector();
        } else {
            start.resize(kDim);
            for (int i = 0; i < kDim; ++i) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                start(i) = cplx(re, im);
            }
        }
        const Descent d = descend(start, dH);
        if (d.value < best.value) {
            best.value = d.value;
            best.psi = fix_phase(d.psi);
            best.best_start = s;
            best.converged = d.converged;
        }
    }
    if (!std::isfinite(best.value)) {
        throw NumericalError("every start has a singular covariance");
    }
    return best;
}

} // namespace ohsense
