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

#include "ohsense/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ohsense {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_dims(const QuantumState &s, const CMatrix &m) {
    if (m.rows() != s.dim() || m.cols() != s.dim()) {
        throw std::invalid_argument("derivative dimension does not match the state");
    }
}

RMatrix symmetrize(const RMatrix &a) { return 0.5 * (a + a.transpose()); }

/// Matrix elements v_n† A v_m.
CMatrix in_basis(const CMatrix &v, const CMatrix &a) { return v.adjoint() * a * v; }

} // namespace

DerivativeBundle DerivativeBundle::from_pure(QuantumState s, std::vector<CVector> d_psi, DerivativeSource src) {
    if (!s.is_pure()) {
        throw std::invalid_argument("pure bundle requires a pure state");
    }
    std::vector<CMatrix> d_rho;
    d_rho.reserve(d_psi.size());
    const CVector &psi = s.vector();
    for (const CVector &d : d_psi) {
        if (d.size() != psi.size()) {
            throw std::invalid_argument("derivative dimension does not match the state");
        }
        d_rho.emplace_back(d * psi.adjoint() + psi * d.adjoint());
    }
    return DerivativeBundle{std::move(s), std::move(d_psi), std::move(d_rho), src};
}

DerivativeBundle DerivativeBundle::from_mixed(QuantumState s, std::vector<CMatrix> d_rho, DerivativeSource src) {
    for (CMatrix &d : d_rho) {
        require_same_dims(s, d);
        d = hermitian_part(d);
    }
    return DerivativeBundle{std::move(s), {}, std::move(d_rho), src};
}

std::vector<HermitianOperator> sld(const DerivativeBundle &b, const Tolerances &tol) {
    const Spectrum &es = b.state.eigen();
    const Eigen::Index n = es.values.size();
    std::vector<HermitianOperator> out;
    out.reserve(b.d_rho.size());
    for (const CMatrix &d : b.d_rho) {
        CMatrix a = in_basis(es.vectors, d);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                const double s = es.values(i) + es.values(j);
                a(i, j) = s < tol.kernel ? cplx{0.0} : 2.0 * a(i, j) / s;
            }
        }
        out.emplace_back(hermitian_part(es.vectors * a * es.vectors.adjoint()));
    }
    return out;
}

double sld_residual(const DerivativeBundle &b, const std::vector<HermitianOperator> &L, const Tolerances &tol) {
    const Spectrum &es = b.state.eigen();
    const CMatrix &rho = b.state.density();
    double worst = 0.0;
    for (size_t mu = 0; mu < L.size(); ++mu) {
        const CMatrix &l = L[mu].matrix();
        const CMatrix r = in_basis(es.vectors, b.d_rho[mu] - 0.5 * (l * rho + rho * l));
        for (Eigen::Index i = 0; i < r.rows(); ++i) {
            for (Eigen::Index j = 0; j < r.cols(); ++j) {
                if (es.values(i) + es.values(j) >= tol.kernel) {
                    worst = std::max(worst, std::abs(r(i, j)));
                }
            }
        }
    }
    return worst;
}

RMatrix qfim(const DerivativeBundle &b, const Tolerances &tol) {
    const int d = b.num_params();
    RMatrix q = RMatrix::Zero(d, d);
    if (b.state.is_pure() && static_cast<int>(b.d_psi.size()) == d) {
        const CVector &psi = b.state.vector();
        for (int mu = 0; mu < d; ++mu) {
            for (int nu = mu; nu < d; ++nu) {
                const cplx a = b.d_psi[mu].dot(b.d_psi[nu]);
                const cplx c = b.d_psi[mu].dot(psi) * b.d_psi[nu].dot(psi);
                q(mu, nu) = q(nu, mu) = 4.0 * (a + c).real();
            }
        }
        return q;
    }
    const Spectrum &es = b.state.eigen();
    const Eigen::Index n = es.values.size();
    std::vector<CMatrix> a;
    a.reserve(static_cast<size_t>(d));
    for (const CMatrix &dr : b.d_rho) {
        a.push_back(in_basis(es.vectors, dr));
    }
    for (int mu = 0; mu < d; ++mu) {
        for (int nu = mu; nu < d; ++nu) {
            double s = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < n; ++j) {
                    const double w = es.values(i) + es.values(j);
                    if (w >= tol.kernel) {
                        s += 2.0 * (a[mu](i, j) * a[nu](j, i)).real() / w;
                    }
                }
            }
            q(mu, nu) = q(nu, mu) = s;
        }
    }
    return q;
}

RMatrix qfim_ground_state(const HermitianOperator &h, const std::vector<HermitianOperator> &dH) {
    const GroundState gs = ground_state(h);
    if (gs.degenerate) {
        throw NumericalError("ground state is degenerate; the QFIM diverges");
    }
    const Spectrum &s = h.spectrum();
    const CVector &v0 = gs.state.vector();
    const int d = static_cast<int>(dH.size());
    const Eigen::Index n = s.values.size();
    CMatrix amp(n, d); // ⟨E_k|∂_μH|E₀⟩
    for (int mu = 0; mu < d; ++mu) {
        amp.col(mu) = s.vectors.adjoint() * (dH[mu].matrix() * v0);
    }
    RMatrix q = RMatrix::Zero(d, d);
    for (Eigen::Index k = 1; k < n; ++k) {
        const double gap = s.values(k) - s.values(0);
        for (int mu = 0; mu < d; ++mu) {
            for (int nu = 0; nu < d; ++nu) {
                q(mu, nu) += 4.0 * (std::conj(amp(k, mu)) * amp(k, nu)).real() / (gap * gap);
            }
        }
    }
    return symmetrize(q);
}

DerivativeBundle ground_state_bundle(const HermitianOperator &h, const std::vector<HermitianOperator> &dH) {
    GroundState gs = ground_state(h);
    if (gs.degenerate) {
        throw NumericalError("ground state is degenerate; perturbative derivatives are undefined");
    }
    const Spectrum &s = h.spectrum();
    const CVector &v0 = gs.state.vector();
    std::vector<CVector> d_psi;
    for (const HermitianOperator &d : dH) {
        CVector out = CVector::Zero(v0.size());
        const CVector dv = d.matrix() * v0;
        for (Eigen::Index k = 1; k < s.values.size(); ++k) {
            out += s.vectors.col(k) * (s.vectors.col(k).dot(dv) / (s.values(0) - s.values(k)));
        }
        d_psi.push_back(std::move(out));
    }
    return DerivativeBundle::from_pure(std::move(gs.state), std::move(d_psi), DerivativeSource::perturbative);
}

namespace {

struct GibbsWeights {
    RVector w;
    double beta;
};

GibbsWeights gibbs_weights(const HermitianOperator &h, double temperature) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw std::invalid_argument("temperature must be finite and positive");
    }
    const RVector &e = h.spectrum().values;
    RVector w(e.size());
    for (Eigen::Index k = 0; k < e.size(); ++k) {
        w(k) = std::exp(-(e(k) - e(0)) / temperature);
    }
    w /= w.sum();
    return {w, 1.0 / temperature};
}

/// χ(x) = tanh(x)/x with x = (g_n − g_m)/2.
double chi_of_half_gap(double x) {
    return std::abs(x) < 1e-6 ? 1.0 - x * x / 3.0 : std::tanh(x) / x;
}

} // namespace

DerivativeBundle thermal_bundle(const HermitianOperator &h, const std::vector<HermitianOperator> &dH,
                                double temperature) {
    const GibbsWeights gw = gibbs_weights(h, temperature);
    const Spectrum &s = h.spectrum();
    const Eigen::Index n = s.values.size();
    std::vector<CMatrix> d_rho;
    for (const HermitianOperator &d : dH) {
        CMatrix a = in_basis(s.vectors, d.matrix());
        double mean = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            mean += gw.w(k) * a(k, k).real();
        }
        CMatrix out(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                const double delta = s.values(j) - s.values(i);
                double ddiff; // (w_i − w_j)/(E_i − E_j)
                if (std::abs(gw.beta * delta) > 1e-3) {
                    ddiff = (gw.w(i) - gw.w(j)) / (-delta);
                } else if (delta == 0.0) {
                    ddiff = -gw.beta * gw.w(i);
                } else {
                    ddiff = gw.w(i) * std::expm1(-gw.beta * delta) / delta;
                }
                out(i, j) = ddiff * a(i, j);
            }
            out(i, i) += gw.beta * mean * gw.w(i);
        }
        d_rho.emplace_back(s.vectors * out * s.vectors.adjoint());
    }
    return DerivativeBundle::from_mixed(thermal_state(h, temperature), std::move(d_rho), DerivativeSource::analytic);
}

RMatrix qfim_thermal_stationary(const HermitianOperator &h, const std::vector<HermitianOperator> &dH,
                                double temperature) {
    const GibbsWeights gw = gibbs_weights(h, temperature);
    const Spectrum &s = h.spectrum();
    const Eigen::Index n = s.values.size();
    const int d = static_cast<int>(dH.size());
    std::vector<CMatrix> a;
    for (const HermitianOperator &op : dH) {
        CMatrix m = in_basis(s.vectors, op.matrix());
        double mean = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            mean += gw.w(k) * m(k, k).real();
        }
        m.diagonal().array() -= mean;
        a.push_back(gw.beta * m);
    }
    RMatrix q = RMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (gw.w(i) == 0.0) {
            continue;
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            const double chi = chi_of_half_gap(-0.5 * gw.beta * (s.values(i) - s.values(j)));
            const double c = gw.w(i) * chi * chi;
            for (int mu = 0; mu < d; ++mu) {
                for (int nu = mu; nu < d; ++nu) {
                    q(mu, nu) += c * (a[mu](i, j) * a[nu](j, i)).real();
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

RMatrix qfim_thermal_small_t(const HermitianOperator &h, const std::vector<HermitianOperator> &dH,
                             double temperature) {
    if (!(temperature > 0.0)) {
        throw std::invalid_argument("temperature must be positive");
    }
    const GroundState gs = ground_state(h);
    if (gs.degenerate) {
        throw NumericalError("ground state is degenerate; the low-temperature expansion is undefined");
    }
    const Spectrum &s = h.spectrum();
    const CVector &v0 = gs.state.vector();
    const int d = static_cast<int>(dH.size());
    const Eigen::Index n = s.values.size();
    CMatrix amp(n, d);
    for (int mu = 0; mu < d; ++mu) {
        amp.col(mu) = s.vectors.adjoint() * (dH[mu].matrix() * v0);
    }
    RMatrix q = RMatrix::Zero(d, d);
    for (Eigen::Index k = 1; k < n; ++k) {
        const double gap = s.values(k) - s.values(0);
        const double c = (4.0 - 16.0 * std::exp(-gap / temperature)) / (gap * gap);
        for (int mu = 0; mu < d; ++mu) {
            for (int nu = 0; nu < d; ++nu) {
                q(mu, nu) += c * (std::conj(amp(k, mu)) * amp(k, nu)).real();
            }
        }
    }
    return symmetrize(q);
}

OutcomeDistribution outcome_distribution(const DerivativeBundle &b, const std::vector<CMatrix> &povm) {
    const int d = b.num_params();
    OutcomeDistribution out{RVector(static_cast<Eigen::Index>(povm.size())),
                            RMatrix(static_cast<Eigen::Index>(povm.size()), d)};
    for (size_t k = 0; k < povm.size(); ++k) {
        require_same_dims(b.state, povm[k]);
        const auto kk = static_cast<Eigen::Index>(k);
        out.p(kk) = (b.state.density() * povm[k]).trace().real();
        for (int mu = 0; mu < d; ++mu) {
            out.dp(kk, mu) = (b.d_rho[mu] * povm[k]).trace().real();
        }
    }
    return out;
}

RMatrix fim_povm(const OutcomeDistribution &dist, const Tolerances &tol) {
    if (dist.p.size() != dist.dp.rows()) {
        throw std::invalid_argument("probability and gradient lengths differ");
    }
    if (std::abs(dist.p.sum() - 1.0) > tol.normalization) {
        throw std::invalid_argument("outcome probabilities do not sum to 1");
    }
    const Eigen::Index d = dist.dp.cols();
    RMatrix f = RMatrix::Zero(d, d);
    for (Eigen::Index k = 0; k < dist.p.size(); ++k) {
        const double p = dist.p(k);
        if (p < -tol.probability) {
            throw std::invalid_argument("negative outcome probability");
        }
        const RVector g = dist.dp.row(k).transpose();
        if (p < tol.probability) {
            for (Eigen::Index mu = 0; mu < d; ++mu) {
                for (Eigen::Index nu = 0; nu < d; ++nu) {
                    if (std::abs(g(mu)) >= tol.probability_grad && std::abs(g(nu)) >= tol.probability_grad) {
                        f(mu, nu) = kInf;
                    }
                }
            }
            continue;
        }
        f += g * g.transpose() / p;
    }
    return f;
}

RMatrix uhlmann_curvature(const QuantumState &state, const std::vector<HermitianOperator> &L) {
    const auto d = static_cast<Eigen::Index>(L.size());
    RMatrix out = RMatrix::Zero(d, d);
    const CMatrix &rho = state.density();
    for (Eigen::Index mu = 0; mu < d; ++mu) {
        const CMatrix rl = rho * L[static_cast<size_t>(mu)].matrix();
        for (Eigen::Index nu = mu + 1; nu < d; ++nu) {
            const double v = (rl * L[static_cast<size_t>(nu)].matrix()).trace().imag();
            out(mu, nu) = v;
            out(nu, mu) = -v;
        }
    }
    return out;
}

namespace {

void require_positive_definite(const RMatrix &w) {
    if (w.rows() != w.cols() || (w - w.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + w.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("weight matrix must be square and symmetric");
    }
    Eigen::LLT<RMatrix> llt(w);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("weight matrix is not positive definite");
    }
}

struct QDecomposition {
    RVector values;
    RMatrix vectors;
    std::vector<bool> kernel;
    bool singular = false;
};

QDecomposition decompose(const RMatrix &q, const Tolerances &tol) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(symmetrize(q));
    QDecomposition out{es.eigenvalues(), es.eigenvectors(), {}, false};
    const double top = out.values.size() ? out.values.cwiseAbs().maxCoeff() : 0.0;
    for (Eigen::Index k = 0; k < out.values.size(); ++k) {
        const bool ker = top == 0.0 || out.values(k) < tol.singular_rel * top;
        out.kernel.push_back(ker);
        out.singular = out.singular || ker;
    }
    return out;
}

RMatrix pseudo_power(const QDecomposition &qd, double power) {
    RVector f(qd.values.size());
    for (Eigen::Index k = 0; k < qd.values.size(); ++k) {
        f(k) = qd.kernel[static_cast<size_t>(k)] ? 0.0 : std::pow(qd.values(k), power);
    }
    return qd.vectors * f.asDiagonal() * qd.vectors.transpose();
}

double trace_norm_real(const RMatrix &a) {
    Eigen::JacobiSVD<RMatrix> svd(a);
    return svd.singularValues().sum();
}

} // namespace

std::optional<RMatrix> msnr_weight(const RVector &lambda) {
    RMatrix w = RMatrix::Zero(lambda.size(), lambda.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        if (lambda(k) == 0.0 || !std::isfinite(lambda(k))) {
            return std::nullopt;
        }
        w(k, k) = 1.0 / (lambda(k) * lambda(k));
    }
    return w;
}

double asymptotic_incompatibility(const RMatrix &Q, const RMatrix &D, const Tolerances &tol) {
    const QDecomposition qd = decompose(Q, tol);
    const RMatrix s = pseudo_power(qd, -0.5);
    const CMatrix m = kI * (s * (0.5 * (D - D.transpose())) * s).cast<cplx>();
    if (max_abs(m) == 0.0) {
        return 0.0;
    }
    const Spectrum sp = eig_hermitian(hermitian_part(m), 1e-8);
    return std::min(1.0, sp.values.cwiseAbs().maxCoeff());
}

ScalarBounds bounds(const RMatrix &Q, const RMatrix &D, const RMatrix &W, const std::optional<RVector> &lambda,
                    const Tolerances &tol) {
    require_positive_definite(W);
    if (Q.rows() != W.rows() || D.rows() != W.rows()) {
        throw std::invalid_argument("Q, D and W dimensions differ");
    }
    const QDecomposition qd = decompose(Q, tol);
    ScalarBounds out{};
    out.singular = qd.singular;
    out.R = asymptotic_incompatibility(Q, D, tol);
    const RMatrix sw = sqrt_psd(W);
    if (qd.singular) {
        out.CS = kInf;
        out.CHbar = kInf;
    } else {
        const RMatrix qi = pseudo_power(qd, -1.0);
        out.CS = (W * qi).trace();
        out.CHbar = out.CS + trace_norm_real(sw * qi * D * qi * sw);
    }
    if (lambda) {
        if (const auto w0 = msnr_weight(*lambda)) {
            out.mSNRbar = qd.singular ? 0.0 : 1.0 / (*w0 * pseudo_power(qd, -1.0)).trace();
        }
    }

    const double top = Q.diagonal().cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < Q.rows(); ++k) {
        if (top > 0.0 && Q(k, k) > tol.singular_rel * top) {
            out.estimable.push_back(static_cast<int>(k));
        }
    }
    const auto m = static_cast<Eigen::Index>(out.estimable.size());
    if (m == 0) {
        out.CS_estimable = kInf;
    } else {
        RMatrix qs(m, m), ws(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < m; ++j) {
                qs(i, j) = Q(out.estimable[static_cast<size_t>(i)], out.estimable[static_cast<size_t>(j)]);
                ws(i, j) = W(out.estimable[static_cast<size_t>(i)], out.estimable[static_cast<size_t>(j)]);
            }
        }
        const QDecomposition sub = decompose(qs, tol);
        out.CS_estimable = sub.singular ? kInf : (ws * pseudo_power(sub, -1.0)).trace();
    }
    return out;
}

double check_pcc(const QuantumState &state, const std::vector<HermitianOperator> &L, const Tolerances &tol) {
    const Spectrum &es = state.eigen();
    CMatrix p = CMatrix::Zero(state.dim(), state.dim());
    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
        if (es.values(k) > tol.support) {
            p += es.vectors.col(k) * es.vectors.col(k).adjoint();
        }
    }
    double worst = 0.0;
    for (size_t mu = 0; mu < L.size(); ++mu) {
        for (size_t nu = mu + 1; nu < L.size(); ++nu) {
            worst = std::max(worst, max_abs(p * commutator(L[mu].matrix(), L[nu].matrix()) * p));
        }
    }
    return worst;
}

double check_rpd(const DerivativeBundle &b) {
    if (!b.state.is_pure() || b.d_psi.empty()) {
        throw std::invalid_argument("reality check requires a pure-state bundle");
    }
    const CVector &psi = b.state.vector();
    const CVector fixed = fix_phase(psi);
    const cplx phase = psi.squaredNorm() > 0.0 ? psi.dot(fixed) : cplx{1.0};
    double worst = fixed.imag().cwiseAbs().maxCoeff();
    for (const CVector &d : b.d_psi) {
        CVector dd = d * phase;
        dd -= fixed * fixed.dot(dd);
        worst = std::max(worst, dd.imag().cwiseAbs().maxCoeff());
    }
    return worst;
}

ScpmResidual check_scpm(const DerivativeBundle &b, const std::vector<CVector> &pom, const Tolerances &tol) {
    if (!b.state.is_pure() || b.d_psi.empty()) {
        throw std::invalid_argument("saturability check requires a pure-state bundle");
    }
    const CVector &psi = b.state.vector();
    CMatrix resolution = CMatrix::Zero(psi.size(), psi.size());
    for (const CVector &v : pom) {
        if (v.size() != psi.size() || std::abs(v.norm() - 1.0) > tol.normalization) {
            throw std::invalid_argument("projective measurement vectors must be unit vectors");
        }
        resolution += v * v.adjoint();
    }
    if (max_abs(resolution - CMatrix::Identity(psi.size(), psi.size())) > tol.normalization) {
        throw std::invalid_argument("projectors do not resolve the identity");
    }
    ScpmResidual out{0.0, 0.0};
    for (const CVector &v : pom) {
        const cplx vp = v.dot(psi);
        const double overlap = std::norm(vp);
        if (overlap > tol.orthogonal) {
            for (const CVector &d : b.d_psi) {
                const double lhs = (d.dot(v) * vp).imag();
                const double rhs = overlap * d.dot(psi).imag();
                out.non_orthogonal = std::max(out.non_orthogonal, std::abs(lhs - rhs));
            }
        } else {
            for (const CVector &dm : b.d_psi) {
                for (const CVector &dn : b.d_psi) {
                    out.orthogonal = std::max(out.orthogonal, std::abs((dm.dot(v) * v.dot(dn)).imag()));
                }
            }
        }
    }
    return out;
}

namespace {

CVector aligned(const CVector &psi, const CVector &ref) {
    const cplx ov = ref.dot(psi);
    return std::abs(ov) > 0.0 ? CVector(psi * (std::conj(ov) / std::abs(ov))) : psi;
}

} // namespace

DerivativeBundle fd_derivatives(const StateModel &model, const RVector &p, double step, FdScheme scheme) {
    if (!(step > 0.0)) {
        throw std::invalid_argument("finite-difference step must be positive");
    }
    QuantumState s0 = model(p);
    const Eigen::Index d = p.size();
    auto displaced = [&](Eigen::Index mu, double h) {
        RVector q = p;
        q(mu) += h;
        return model(q);
    };
    if (s0.is_pure()) {
        const CVector &psi0 = s0.vector();
        auto central = [&](Eigen::Index mu, double h) -> CVector {
            const CVector plus = aligned(displaced(mu, h).vector(), psi0);
            const CVector minus = aligned(displaced(mu, -h).vector(), psi0);
            return (plus - minus) / (2.0 * h);
        };
        std::vector<CVector> d_psi;
        for (Eigen::Index mu = 0; mu < d; ++mu) {
            const double h = step * (1.0 + std::abs(p(mu)));
            d_psi.push_back(scheme == FdScheme::central ? central(mu, h)
                                                        : CVector((4.0 * central(mu, 0.5 * h) - central(mu, h)) / 3.0));
        }
        return DerivativeBundle::from_pure(std::move(s0), std::move(d_psi), DerivativeSource::finite_difference);
    }
    auto central = [&](Eigen::Index mu, double h) -> CMatrix {
        return (displaced(mu, h).density() - displaced(mu, -h).density()) / (2.0 * h);
    };
    std::vector<CMatrix> d_rho;
    for (Eigen::Index mu = 0; mu < d; ++mu) {
        const double h = step * (1.0 + std::abs(p(mu)));
        d_rho.push_back(scheme == FdScheme::central ? central(mu, h)
                                                    : CMatrix((4.0 * central(mu, 0.5 * h) - central(mu, h)) / 3.0));
    }
    return DerivativeBundle::from_mixed(std::move(s0), std::move(d_rho), DerivativeSource::finite_difference);
}

EstimationReport make_report(const RMatrix &Q, const RMatrix &D, const RMatrix &W, const std::optional<RVector> &lambda,
                             ResidualFlags flags, const Tolerances &tol) {
    const ScalarBounds sb = bounds(Q, D, W, lambda, tol);
    EstimationReport r;
    r.Q = symmetrize(Q);
    r.D = 0.5 * (D - D.transpose());
    r.CS = sb.CS;
    r.CHbar = sb.CHbar;
    r.R = sb.R;
    r.mSNRbar = sb.mSNRbar;
    r.flags = flags;
    r.singular = sb.singular;
    r.estimable = sb.estimable;
    r.CS_estimable = sb.CS_estimable;
    return r;
}

EstimationReport make_report(const DerivativeBundle &b, const RMatrix &W, const std::optional<RVector> &lambda,
                             const Tolerances &tol) {
    const std::vector<HermitianOperator> L = sld(b, tol);
    const RMatrix Q = qfim(b, tol);
    const RMatrix D = uhlmann_curvature(b.state, L);
    ResidualFlags flags;
    flags.wcc = D.size() ? D.cwiseAbs().maxCoeff() : 0.0;
    flags.pcc = check_pcc(b.state, L, tol);
    if (b.state.is_pure() && !b.d_psi.empty()) {
        flags.rpd = check_rpd(b);
    }
    return make_report(Q, D, W, lambda, flags, tol);
}

} // namespace ohsense
