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

#include "ohsense/unitary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ohsense {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RMatrix symmetrize(const RMatrix &a) { return 0.5 * (a + a.transpose()); }

GeneratorSet finish(std::vector<CMatrix> raw, double t, GeneratorMethod method) {
    GeneratorSet out;
    out.t = t;
    out.method = method;
    for (const CMatrix &g : raw) {
        out.hermiticity_residual = std::max(out.hermiticity_residual, hermiticity_residual(g));
        out.generators.emplace_back(hermitian_part(g));
    }
    return out;
}

double sinc(double x) { return std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

void require_time(double t) {
    if (!std::isfinite(t) || t < 0.0) {
        throw std::invalid_argument("evolution time must be finite and non-negative");
    }
}

} // namespace

GeneratorSet generators_series(const HermitianOperator &h, const std::vector<HermitianOperator> &dH, double t,
                               int order) {
    require_time(t);
    if (order < 0) {
        throw std::invalid_argument("series order must be non-negative");
    }
    const CMatrix &hm = h.matrix();
    std::vector<CMatrix> raw;
    for (const HermitianOperator &d : dH) {
        CMatrix nested = d.matrix(); // Γ^n(∂H)
        cplx coeff = kI * (kI * t);  // i(it)^{n+1}/(n+1)!
        CMatrix sum = coeff * nested;
        for (int n = 1; n <= order; ++n) {
            nested = commutator(hm, nested);
            coeff *= kI * t / static_cast<double>(n + 1);
            const CMatrix term = coeff * nested;
            sum += term;
            if (max_abs(term) <= 1e-16 * max_abs(sum)) {
                break;
            }
        }
        raw.push_back(std::move(sum));
    }
    return finish(std::move(raw), t, GeneratorMethod::series);
}

GeneratorSet generators_spectral(const HermitianOperator &h, const std::vector<HermitianOperator> &dH, double t) {
    require_time(t);
    const Spectrum &s = h.spectrum();
    const Eigen::Index n = s.values.size();
    const double degenerate = h.degeneracy_threshold();
    CMatrix kernel(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            const double w = s.values(a) - s.values(b);
            if (std::abs(w) < degenerate) {
                kernel(a, b) = -t;
            } else {
                const double x = 0.5 * t * w;
                kernel(a, b) = -t * std::exp(kI * x) * sinc(x);
            }
        }
    }
    std::vector<CMatrix> raw;
    for (const HermitianOperator &d : dH) {
        const CMatrix a = s.vectors.adjoint() * d.matrix() * s.vectors;
        raw.emplace_back(s.vectors * a.cwiseProduct(kernel) * s.vectors.adjoint());
    }
    return finish(std::move(raw), t, GeneratorMethod::spectral);
}

double frak_c(double x, double t) {
    const double y = x * t;
    if (std::abs(y) < 1e-3) {
        // (cos y − 1)/x² = −t²(1/2 − y²/24 + y⁴/720)
        return -t * t * (0.5 - y * y / 24.0 + y * y * y * y / 720.0);
    }
    const double s = std::sin(0.5 * y);
    return -2.0 * s * s / (x * x);
}

double frak_s(double x, double t) {
    const double y = x * t;
    if (std::abs(y) < 0.1) {
        // (sin y − y)/x³ = −t³(1/6 − y²/120 + y⁴/5040 − y⁶/362880 + y⁸/39916800)
        const double y2 = y * y;
        return -t * t * t *
               (1.0 / 6.0 - y2 / 120.0 + y2 * y2 / 5040.0 - y2 * y2 * y2 / 362880.0 +
                y2 * y2 * y2 * y2 / 39916800.0);
    }
    return (std::sin(y) - y) / (x * x * x);
}

namespace {

struct AlignedFrequencies {
    double xi;
    double omega;
};

AlignedFrequencies aligned_frequencies(double lambda2, const PhysicalConstants &c) {
    const double d2 = c.Delta * c.Delta;
    const double l2 = lambda2 * lambda2;
    return {std::sqrt(d2 + 4.0 * l2 / 25.0), std::sqrt(d2 + 36.0 * l2 / 25.0)};
}

CMatrix T(int i, int j, int k) { return pauli_tensor(i, j, k).matrix(); }

GeneratorSet aligned_impl(double lambda2, double t, const PhysicalConstants &c, bool alt) {
    require_time(t);
    c.validate();
    const AlignedFrequencies f = aligned_frequencies(lambda2, c);
    const double scale = alt ? 1.0 : 2.0;
    const double ci = frak_c(scale * f.xi, t);
    const double co = frak_c(scale * f.omega, t);
    const double si = frak_s(scale * f.xi, t);
    const double so = frak_s(scale * f.omega, t);
    const double half = alt ? 1.0 : 0.5;
    const CMatrix t3z = alt ? T(3, 3, 0) : T(3, 0, 0);
    const double dl = c.Delta;

    const CMatrix g1 = -t * build_dH(1).matrix();
    const CMatrix bracket = half * ((T(2, 3, 0) - T(2, 0, 3)) * ci + 3.0 * (T(2, 3, 0) + T(2, 0, 3)) * co) -
                            dl * ((T(1, 3, 0) - T(1, 0, 3)) * si + 3.0 * (T(1, 3, 0) + T(1, 0, 3)) * so) +
                            0.4 * lambda2 * ((T(3, 3, 3) - t3z) * si - 9.0 * (T(3, 3, 3) + t3z) * so);
    const CMatrix g2 = -t * build_dH(2).matrix() + 0.8 * dl * bracket;
    return finish({g1, g2}, t, GeneratorMethod::analytic_aligned);
}

} // namespace

GeneratorSet generators_aligned(double /*lambda1*/, double lambda2, double t, const PhysicalConstants &c) {
    return aligned_impl(lambda2, t, c, false);
}

GeneratorSet generators_aligned_alt(double /*lambda1*/, double lambda2, double t, const PhysicalConstants &c) {
    return aligned_impl(lambda2, t, c, true);
}

double covariance(const CVector &psi, const CMatrix &a, const CMatrix &b) {
    const CVector ap = a * psi;
    const CVector bp = b * psi;
    const double sym = psi.dot(a * bp).real() * 0.5 + psi.dot(b * ap).real() * 0.5;
    return sym - psi.dot(ap).real() * psi.dot(bp).real();
}

RMatrix qfim_unitary(const QuantumState &state0, const GeneratorSet &gens, const Tolerances &tol) {
    const int d = static_cast<int>(gens.generators.size());
    RMatrix q = RMatrix::Zero(d, d);
    if (state0.is_pure()) {
        const CVector &psi = state0.vector();
        for (int mu = 0; mu < d; ++mu) {
            for (int nu = mu; nu < d; ++nu) {
                q(mu, nu) = q(nu, mu) =
                    4.0 * covariance(psi, gens.generators[mu].matrix(), gens.generators[nu].matrix());
            }
        }
        return q;
    }
    const Spectrum &s = state0.eigen();
    const Eigen::Index n = s.values.size();
    std::vector<CMatrix> g;
    for (const HermitianOperator &op : gens.generators) {
        g.push_back(s.vectors.adjoint() * op.matrix() * s.vectors);
    }
    for (Eigen::Index a = 0; a < n; ++a) {
        const double ra = std::max(s.values(a), 0.0);
        if (ra > 0.0) {
            const CVector psi = s.vectors.col(a);
            for (int mu = 0; mu < d; ++mu) {
                for (int nu = mu; nu < d; ++nu) {
                    q(mu, nu) += 4.0 * ra *
                                 covariance(psi, gens.generators[mu].matrix(), gens.generators[nu].matrix());
                }
            }
        }
        for (Eigen::Index b = 0; b < n; ++b) {
            const double rb = std::max(s.values(b), 0.0);
            if (a == b || ra + rb < tol.kernel) {
                continue;
            }
            const double c = 8.0 * ra * rb / (ra + rb);
            for (int mu = 0; mu < d; ++mu) {
                for (int nu = mu; nu < d; ++nu) {
                    q(mu, nu) -= c * (g[mu](a, b) * g[nu](b, a)).real();
                }
            }
        }
    }
    for (int mu = 0; mu < d; ++mu) {
        for (int nu = 0; nu < mu; ++nu) {
            q(mu, nu) = q(nu, mu);
        }
    }
    return q;
}

DerivativeBundle evolved_bundle(const QuantumState &state0, const HermitianOperator &h, const GeneratorSet &gens) {
    const CMatrix u = unitary_of(h, gens.t);
    if (state0.is_pure()) {
        const CVector &psi0 = state0.vector();
        CVector psi = u * psi0;
        psi.normalize();
        std::vector<CVector> d_psi;
        for (const HermitianOperator &g : gens.generators) {
            d_psi.emplace_back(kI * (u * (g.matrix() * psi0)));
        }
        return DerivativeBundle::from_pure(QuantumState::pure(std::move(psi)), std::move(d_psi),
                                           DerivativeSource::analytic);
    }
    const CMatrix &rho0 = state0.density();
    Spectrum s = state0.eigen();
    s.vectors = u * s.vectors;
    std::vector<CMatrix> d_rho;
    for (const HermitianOperator &g : gens.generators) {
        d_rho.emplace_back(kI * (u * commutator(g.matrix(), rho0) * u.adjoint()));
    }
    CMatrix rho = hermitian_part(u * rho0 * u.adjoint());
    return DerivativeBundle::from_mixed(QuantumState::mixed(std::move(rho), std::move(s)), std::move(d_rho),
                                        DerivativeSource::analytic);
}

namespace {

RMatrix chi_table(const RVector &g) {
    const Eigen::Index n = g.size();
    RMatrix chi(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            const double x = 0.5 * (g(a) - g(b));
            chi(a, b) = std::abs(x) < 1e-6 ? 1.0 - x * x / 3.0 : std::tanh(x) / x;
        }
    }
    return chi;
}

} // namespace

ExponentialModel ExponentialModel::thermal(const HermitianOperator &h0, double temperature) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw std::invalid_argument("temperature must be finite and positive");
    }
    const Spectrum &s = h0.spectrum();
    const Eigen::Index n = s.values.size();
    RVector g(n);
    double z = 0.0; // Σ e^{−β(E_k−E₀)}, ≥ 1
    for (Eigen::Index k = 0; k < n; ++k) {
        g(k) = -(s.values(k) - s.values(0)) / temperature;
        z += std::exp(g(k));
    }
    g.array() -= std::log(z);
    return ExponentialModel{g, s.vectors, chi_table(g)};
}

ExponentialModel ExponentialModel::from_state(const QuantumState &state) {
    const Spectrum &s = state.eigen();
    RVector g(s.values.size());
    for (Eigen::Index k = 0; k < g.size(); ++k) {
        if (!(s.values(k) > 0.0)) {
            throw NumericalError("exponential form needs a full-rank state");
        }
        g(k) = std::log(s.values(k));
    }
    return ExponentialModel{g, s.vectors, chi_table(g)};
}

RVector ExponentialModel::weights() const { return g.array().exp().matrix(); }

QuantumState ExponentialModel::state() const {
    const RVector w = weights();
    CMatrix rho = hermitian_part(vectors * w.asDiagonal() * vectors.adjoint());
    // Ascending ρ eigenvalues for the known spectrum.
    std::vector<Eigen::Index> order(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        order[k] = k;
    }
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return w(a) < w(b); });
    Spectrum s;
    s.values.resize(w.size());
    s.vectors.resize(vectors.rows(), vectors.cols());
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        s.values(k) = w(order[k]);
        s.vectors.col(k) = vectors.col(order[k]);
    }
    return QuantumState::mixed(std::move(rho), std::move(s));
}

namespace {

template <class Part>
RMatrix exponential_sum(const ExponentialModel &model, const GeneratorSet &gens, bool upper_only, Part part) {
    const int d = static_cast<int>(gens.generators.size());
    std::vector<CMatrix> g;
    for (const HermitianOperator &op : gens.generators) {
        g.push_back(model.vectors.adjoint() * op.matrix() * model.vectors);
    }
    const Eigen::Index n = model.g.size();
    RMatrix out = RMatrix::Zero(d, d);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            if (a == b || (upper_only && a < b)) {
                continue;
            }
            const double th = std::tanh(0.5 * (model.g(a) - model.g(b)));
            const double w = upper_only ? std::exp(model.g(a)) + std::exp(model.g(b)) : std::exp(model.g(a));
            const double c = 4.0 * w * th * th;
            if (c == 0.0) {
                continue;
            }
            for (int mu = 0; mu < d; ++mu) {
                for (int nu = 0; nu < d; ++nu) {
                    out(mu, nu) += c * part(g[mu](a, b) * g[nu](b, a));
                }
            }
        }
    }
    return out;
}

} // namespace

RMatrix qfim_exponential_evolved(const ExponentialModel &model, const GeneratorSet &gens) {
    return symmetrize(exponential_sum(model, gens, true, [](cplx z) { return z.real(); }));
}

RMatrix uhlmann_exponential_evolved(const ExponentialModel &model, const GeneratorSet &gens) {
    const RMatrix d = exponential_sum(model, gens, false, [](cplx z) { return z.imag(); });
    return 0.5 * (d - d.transpose());
}

RMatrix qfim_exponential_stationary(const ExponentialModel &model, const std::vector<CMatrix> &dG) {
    const int d = static_cast<int>(dG.size());
    std::vector<CMatrix> a;
    for (const CMatrix &m : dG) {
        a.push_back(model.vectors.adjoint() * m * model.vectors);
    }
    const Eigen::Index n = model.g.size();
    RMatrix q = RMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double w = std::exp(model.g(i));
        for (Eigen::Index j = 0; j < n; ++j) {
            const double c = w * model.chi(i, j) * model.chi(i, j);
            for (int mu = 0; mu < d; ++mu) {
                for (int nu = 0; nu < d; ++nu) {
                    q(mu, nu) += c * (a[mu](i, j) * a[nu](j, i)).real();
                }
            }
        }
    }
    return symmetrize(q);
}

ThermalDynamicalReport thermal_dynamical_report(const ParamPoint &lambda, double t, double temperature,
                                                const PhysicalConstants &c, const RMatrix &W) {
    const HermitianOperator h = build_hamiltonian(lambda, c);
    const HermitianOperator h0 = build_hamiltonian(ParamPoint{}, c);
    ThermalDynamicalReport r;
    r.gens = generators_spectral(h, all_dH(), t);
    const ExponentialModel model = ExponentialModel::thermal(h0, temperature);
    const RMatrix Q = qfim_exponential_evolved(model, r.gens);
    const RMatrix D = uhlmann_exponential_evolved(model, r.gens);

    // H₀ = diag(−Δ·1₄, +Δ·1₄): e₁..e₄ is the lower block.
    const int d = kNumParams;
    r.q = RMatrix::Zero(d, d);
    r.d = RMatrix::Zero(d, d);
    for (int mu = 0; mu < d; ++mu) {
        const CMatrix &gm = r.gens.generators[mu].matrix();
        for (int nu = 0; nu < d; ++nu) {
            const CMatrix &gn = r.gens.generators[nu].matrix();
            cplx acc = 0.0;
            for (int a = 0; a < 4; ++a) {
                for (int b = 4; b < 8; ++b) {
                    acc += gm(a, b) * gn(b, a);
                }
            }
            r.q(mu, nu) = acc.real();
            r.d(mu, nu) = acc.imag();
        }
    }
    r.q = symmetrize(r.q);
    r.d = 0.5 * (r.d - r.d.transpose());
    r.tanh_factor = std::tanh(c.Delta / temperature);
    r.r_qd = asymptotic_incompatibility(r.q, r.d);

    const DerivativeBundle b = evolved_bundle(model.state(), h, r.gens);
    ResidualFlags flags;
    flags.wcc = D.cwiseAbs().maxCoeff();
    flags.pcc = check_pcc(b.state, sld(b));
    r.report = make_report(Q, D, W, lambda.as_vector(), flags);
    return r;
}

namespace {

void require_aligned_probe(ProbeId probe) {
    if (probe == ProbeId::psiOpt) {
        throw std::invalid_argument("aligned closed forms exist for psiA and psiB only");
    }
}

double sq(double x) { return x * x; }

} // namespace

double aligned_closed_form_bound(ProbeId probe, double lambda2, double t, const PhysicalConstants &c) {
    require_aligned_probe(probe);
    if (!(t > 0.0)) {
        throw std::invalid_argument("closed forms need t > 0");
    }
    const AlignedFrequencies f = aligned_frequencies(lambda2, c);
    const double d2 = sq(c.Delta);
    const double l2 = sq(lambda2);
    const double cx = frak_c(f.xi, t);
    const double co = frak_c(f.omega, t);
    const double sx = frak_s(f.xi, t);
    const double so = frak_s(f.omega, t);
    const double t2 = t * t;
    if (probe == ProbeId::psiA) {
        const double num = 225.0 * (8.0 * d2 * (2.0 * co * co + so * t) + 16.0 * d2 * d2 * so * so + 5.0 * t2) +
                           16.0 * d2 * l2 * sq(sx - 9.0 * so);
        const double den = 1296.0 * t2 * (16.0 * co * co * d2 + sq(4.0 * d2 * so + t));
        return num / den;
    }
    const double kappa =
        8.0 * d2 * (cx * cx + 9.0 * co * co + d2 * (sx * sx + 9.0 * so * so)) + 4.0 * d2 * t * (sx + 9.0 * so);
    const double num = 625.0 * (kappa + 25.0 * t2) + 800.0 * d2 * l2 * (sx * sx + 81.0 * so * so);
    const double den =
        16.0 * t2 * (125.0 * (kappa + 5.0 * t2) + 96.0 * d2 * l2 * (sx * sx + 12.0 * sx * so + 81.0 * so * so));
    return num / den;
}

double aligned_large_t_bound(ProbeId probe, double lambda2, double t, const PhysicalConstants &c) {
    require_aligned_probe(probe);
    const double d2 = sq(c.Delta);
    const double d4 = d2 * d2;
    const double l2 = sq(lambda2);
    const double l4 = l2 * l2;
    const double t2 = t * t;
    if (probe == ProbeId::psiA) {
        const double num = 125.0 * (9140625.0 * d4 * d4 + 8150000.0 * d4 * d2 * l2 + 8172000.0 * d4 * l4 +
                                    2384640.0 * d2 * l4 * l2 + 186624.0 * l4 * l4);
        const double den = 11664.0 * t2 * sq(-625.0 * d4 + 200.0 * d2 * l2 + 48.0 * l4);
        return den == 0.0 ? kInf : num / den;
    }
    const double num = 25.0 * (25.0 * d2 + 4.0 * l2) * (25.0 * d2 + 36.0 * l2) * (1625.0 * d4 + 1288.0 * d2 * l2 + 144.0 * l4);
    const double den = 16.0 * t2 *
                       (3515625.0 * d4 * d4 + 4590000.0 * d4 * d2 * l2 + 3340000.0 * d4 * l4 +
                        495360.0 * d2 * l4 * l2 + 20736.0 * l4 * l4);
    return num / den;
}

double aligned_small_t_constant(ProbeId probe) {
    require_aligned_probe(probe);
    return probe == ProbeId::psiA ? 125.0 / 144.0 : 25.0 / 16.0;
}

double aligned_numeric_trace(const QuantumState &probe, double lambda1, double lambda2, double t,
                             const PhysicalConstants &c, int nparams) {
    if (nparams != 2 && nparams != 3) {
        throw std::invalid_argument("nparams must be 2 or 3");
    }
    const HermitianOperator h = build_hamiltonian(ParamPoint{lambda1, lambda2, 0.0}, c);
    std::vector<HermitianOperator> dH;
    for (int mu = 1; mu <= nparams; ++mu) {
        dH.push_back(build_dH(mu));
    }
    const RMatrix q = qfim_unitary(probe, generators_spectral(h, dH, t));
    const Eigen::LDLT<RMatrix> ldlt(q);
    const RVector dvals = ldlt.vectorD();
    if (ldlt.info() != Eigen::Success || dvals.minCoeff() <= 1e-14 * q.cwiseAbs().maxCoeff()) {
        return kInf;
    }
    return ldlt.solve(RMatrix::Identity(nparams, nparams)).trace();
}

} // namespace ohsense
