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

#include "ohsense/hcrb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ohsense {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// HS-orthonormal Hermitian basis: E_jj, (E_jk+E_kj)/√2, i(E_jk−E_kj)/√2.
std::vector<CMatrix> hermitian_basis(Eigen::Index n) {
    std::vector<CMatrix> out;
    const double r = 1.0 / std::sqrt(2.0);
    for (Eigen::Index j = 0; j < n; ++j) {
        CMatrix e = CMatrix::Zero(n, n);
        e(j, j) = 1.0;
        out.push_back(e);
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = j + 1; k < n; ++k) {
            CMatrix s = CMatrix::Zero(n, n);
            s(j, k) = s(k, j) = r;
            out.push_back(s);
            CMatrix a = CMatrix::Zero(n, n);
            a(j, k) = cplx(0.0, r);
            a(k, j) = cplx(0.0, -r);
            out.push_back(a);
        }
    }
    return out;
}

double trace_norm_antisymmetric(const RMatrix &b) {
    // iB is Hermitian; ‖B‖₁ = Σ|eig(iB)|.
    const CMatrix ib = kI * b.cast<cplx>();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(ib, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

/// sgn(iB) for real antisymmetric B.
CMatrix sign_of_ib(const RMatrix &b) {
    const CMatrix ib = kI * b.cast<cplx>();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(ib);
    const RVector &e = es.eigenvalues();
    const double cut = 1e-14 * (1.0 + e.cwiseAbs().maxCoeff());
    RVector s(e.size());
    for (Eigen::Index k = 0; k < e.size(); ++k) {
        s(k) = std::abs(e(k)) < cut ? 0.0 : (e(k) > 0.0 ? 1.0 : -1.0);
    }
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

/**
 * The problem in whitened coordinates. X_μ = Σ_a x_aμ B_a with x = T·y,
 * where T spans the range of Re G and makes Re G the identity, so
 * Z = YᵀY + i·YᵀKY. Feasible Y are Y₀ + N·Ẑ with N spanning ker C'ᵀ.
 */
struct Whitened {
    int d = 0;
    int k = 0;
    std::vector<CMatrix> basis;
    RMatrix T;
    RMatrix K;
    RMatrix Y0;
    RMatrix N;
    RMatrix W;
    RMatrix sqrtW;
    double cs = 0.0;
    double chbar = 0.0;

    [[nodiscard]] double objective(const RMatrix &y) const {
        const RMatrix re = y.transpose() * y;
        const RMatrix im = y.transpose() * K * y;
        return (W * re).trace() + trace_norm_antisymmetric(sqrtW * im * sqrtW);
    }

    [[nodiscard]] std::vector<CMatrix> observables(const RMatrix &y) const {
        const RMatrix x = T * y;
        std::vector<CMatrix> out;
        for (int mu = 0; mu < d; ++mu) {
            CMatrix m = CMatrix::Zero(basis[0].rows(), basis[0].cols());
            for (size_t a = 0; a < basis.size(); ++a) {
                m += x(static_cast<Eigen::Index>(a), mu) * basis[a];
            }
            out.push_back(m);
        }
        return out;
    }
};

Whitened whiten(const HolevoProblem &p) {
    const Eigen::Index n = p.state.dim();
    const int d = static_cast<int>(p.d_rho.size());
    if (d == 0) {
        throw std::invalid_argument("no parameters");
    }
    if (p.W.rows() != d || p.W.cols() != d) {
        throw std::invalid_argument("weight matrix size does not match the number of parameters");
    }
    Whitened w;
    w.d = d;
    w.W = 0.5 * (p.W + p.W.transpose());
    Eigen::LLT<RMatrix> wl(w.W);
    if (wl.info() != Eigen::Success) {
        throw std::invalid_argument("weight matrix must be positive definite");
    }
    w.sqrtW = sqrt_psd(w.W);
    w.basis = hermitian_basis(n);
    const Eigen::Index m = static_cast<Eigen::Index>(w.basis.size());

    const CMatrix sqrt_rho = spectral_function(p.state.density_operator(),
                                               [](double x) { return std::sqrt(std::max(x, 0.0)); });
    CMatrix P(n * n, m);
    RMatrix C(m, d);
    for (Eigen::Index a = 0; a < m; ++a) {
        const CMatrix bs = w.basis[a] * sqrt_rho;
        P.col(a) = Eigen::Map<const CVector>(bs.data(), n * n);
        for (int mu = 0; mu < d; ++mu) {
            C(a, mu) = (p.d_rho[mu] * w.basis[a]).trace().real();
        }
    }
    const RMatrix pr = P.real();
    const RMatrix pi = P.imag();
    const RMatrix reG = pr.transpose() * pr + pi.transpose() * pi;
    const RMatrix imG = pr.transpose() * pi - pi.transpose() * pr;

    Eigen::SelfAdjointEigenSolver<RMatrix> es(reG);
    const RVector &s = es.eigenvalues();
    const double cut = 1e-12 * s.maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > cut) {
            keep.push_back(i);
        }
    }
    w.k = static_cast<int>(keep.size());
    w.T.resize(m, w.k);
    RMatrix vk(m, w.k);
    RVector sk(w.k);
    for (int i = 0; i < w.k; ++i) {
        vk.col(i) = es.eigenvectors().col(keep[i]);
        sk(i) = s(keep[i]);
        w.T.col(i) = vk.col(i) / std::sqrt(sk(i));
    }
    w.K = w.T.transpose() * imG * w.T;
    w.K = 0.5 * (w.K - w.K.transpose());
    const RMatrix cp = w.T.transpose() * C;

    Eigen::JacobiSVD<RMatrix> svd(cp, Eigen::ComputeFullU);
    const RVector &sv = svd.singularValues();
    if (w.k < d || sv.minCoeff() <= 1e-10 * sv.maxCoeff() || sv.maxCoeff() == 0.0) {
        throw NumericalError("unbiasedness constraints are rank deficient; some parameter is not estimable");
    }
    w.N = svd.matrixU().rightCols(w.k - d);

    // SLD start X_μ = Σ_ν(Q⁻¹)_μν L_ν, then projected onto C'ᵀY = 1.
    const DerivativeBundle b = DerivativeBundle::from_mixed(p.state, p.d_rho, DerivativeSource::analytic);
    const std::vector<HermitianOperator> L = sld(b);
    const RMatrix Q = qfim(b);
    const Eigen::LDLT<RMatrix> ql(Q);
    if (ql.info() != Eigen::Success || ql.vectorD().minCoeff() <= 1e-12 * Q.cwiseAbs().maxCoeff()) {
        throw NumericalError("QFIM is singular; the Holevo bound is infinite");
    }
    const RMatrix qinv = ql.solve(RMatrix::Identity(d, d));
    RMatrix xl(m, d);
    for (Eigen::Index a = 0; a < m; ++a) {
        for (int mu = 0; mu < d; ++mu) {
            xl(a, mu) = (w.basis[a] * L[mu].matrix()).trace().real();
        }
    }
    const RMatrix xs = xl * qinv;
    RMatrix y0 = sk.cwiseSqrt().asDiagonal() * (vk.transpose() * xs);
    const RMatrix resid = RMatrix::Identity(d, d) - cp.transpose() * y0;
    y0 += cp * (cp.transpose() * cp).ldlt().solve(resid);
    w.Y0 = y0;
    w.cs = (w.W * qinv).trace();
    w.chbar = w.objective(y0);
    return w;
}

/// Barrier state at a point (u, ẑ): U − Z and its Cholesky factor.
struct BarrierPoint {
    RMatrix U;
    RMatrix Y;
    CMatrix S;
    Eigen::LLT<CMatrix> llt;
    bool feasible = false;
    double phi = kInf;
};

class Barrier {
  public:
    Barrier(const Whitened &w, double wscale) : w_(w), wn_(w.W / wscale) {
        const int d = w.d;
        for (int i = 0; i < d; ++i) {
            for (int j = i; j < d; ++j) {
                upairs_.emplace_back(i, j);
            }
        }
        nu_ = static_cast<int>(upairs_.size());
        nz_ = (w.k - d) * d;
    }

    [[nodiscard]] int size() const { return nu_ + nz_; }

    [[nodiscard]] RMatrix u_of(const RVector &v) const {
        RMatrix u(w_.d, w_.d);
        for (int a = 0; a < nu_; ++a) {
            u(upairs_[a].first, upairs_[a].second) = u(upairs_[a].second, upairs_[a].first) = v(a);
        }
        return u;
    }

    [[nodiscard]] RMatrix y_of(const RVector &v) const {
        const Eigen::Map<const RMatrix> z(v.data() + nu_, w_.k - w_.d, w_.d);
        return w_.Y0 + w_.N * z;
    }

    [[nodiscard]] RVector pack(const RMatrix &u) const {
        RVector v = RVector::Zero(size());
        for (int a = 0; a < nu_; ++a) {
            v(a) = u(upairs_[a].first, upairs_[a].second);
        }
        return v;
    }

    BarrierPoint evaluate(const RVector &v, double t) const {
        BarrierPoint bp;
        bp.U = u_of(v);
        bp.Y = y_of(v);
        const CMatrix z = (bp.Y.transpose() * bp.Y).cast<cplx>() + kI * (bp.Y.transpose() * w_.K * bp.Y).cast<cplx>();
        bp.S = bp.U.cast<cplx>() - z;
        bp.S = hermitian_part(bp.S);
        bp.llt.compute(bp.S);
        if (bp.llt.info() != Eigen::Success) {
            return bp;
        }
        double logdet = 0.0;
        for (int i = 0; i < w_.d; ++i) {
            const double l = bp.llt.matrixL()(i, i).real();
            if (!(l > 0.0)) {
                return bp;
            }
            logdet += 2.0 * std::log(l);
        }
        bp.feasible = true;
        bp.phi = t * (wn_ * bp.U).trace() - logdet;
        return bp;
    }

    /// Gradient and Hessian at a feasible point.
    void derivatives(const BarrierPoint &bp, double t, RVector &g, RMatrix &h) const {
        const int d = w_.d;
        const int nz_rows = w_.k - d;
        const CMatrix A = bp.Y.cast<cplx>() + kI * (w_.K * bp.Y).cast<cplx>();
        const CMatrix NA = w_.N.transpose().cast<cplx>() * A;
        const CMatrix sigma = bp.llt.solve(CMatrix::Identity(d, d));
        const CMatrix linv = bp.llt.matrixL().solve(CMatrix::Identity(d, d));

        const int n = size();
        g.resize(n);
        RMatrix phi(2 * d * d, n);
        auto add_column = [&](int col, const CMatrix &e, double wterm) {
            g(col) = t * wterm - (sigma * e).trace().real();
            const CMatrix mm = linv * e * linv.adjoint();
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) {
                    phi(i + d * j, col) = mm(i, j).real();
                    phi(d * d + i + d * j, col) = mm(i, j).imag();
                }
            }
        };
        for (int a = 0; a < nu_; ++a) {
            const auto [i, j] = upairs_[a];
            CMatrix e = CMatrix::Zero(d, d);
            e(i, j) = 1.0;
            e(j, i) = 1.0;
            const double wterm = i == j ? wn_(i, i) : 2.0 * wn_(i, j);
            add_column(a, e, wterm);
        }
        for (int j = 0; j < d; ++j) {
            for (int r = 0; r < nz_rows; ++r) {
                CMatrix e = CMatrix::Zero(d, d);
                e.row(j) -= NA.row(r);
                e.col(j) -= NA.row(r).adjoint();
                add_column(nu_ + r + nz_rows * j, e, 0.0);
            }
        }
        h = phi.transpose() * phi;
        // Curvature of −log det from the quadratic dependence of Z on Y.
        const RMatrix kn = w_.N.transpose() * w_.K * w_.N;
        for (int j = 0; j < d; ++j) {
            for (int jp = 0; jp < d; ++jp) {
                const cplx s = sigma(jp, j);
                if (s == cplx(0.0)) {
                    continue;
                }
                for (int r = 0; r < nz_rows; ++r) {
                    for (int rp = 0; rp < nz_rows; ++rp) {
                        const cplx gn(r == rp ? 1.0 : 0.0, kn(r, rp));
                        h(nu_ + r + nz_rows * j, nu_ + rp + nz_rows * jp) += 2.0 * (s * gn).real();
                    }
                }
            }
        }
        h = 0.5 * (h + h.transpose());
    }

  private:
    const Whitened &w_;
    RMatrix wn_;
    std::vector<std::pair<int, int>> upairs_;
    int nu_ = 0;
    int nz_ = 0;
};

HolevoResult solve_barrier(const Whitened &w, const HolevoOptions &opt) {
    const int d = w.d;
    const double scale = w.cs;
    Barrier bar(w, scale);

    const RMatrix re0 = w.Y0.transpose() * w.Y0;
    const RMatrix im0 = w.Y0.transpose() * w.K * w.Y0;
    const CMatrix iim = kI * im0.cast<cplx>();
    Eigen::SelfAdjointEigenSolver<CMatrix> ie(iim, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<RMatrix> re(re0, Eigen::EigenvaluesOnly);
    const double shift = ie.eigenvalues().cwiseAbs().maxCoeff() + 1e-2 * re.eigenvalues().cwiseAbs().maxCoeff();
    RVector v = bar.pack(re0 + shift * RMatrix::Identity(d, d));

    double t = 1.0;
    int iterations = 0;
    bool converged = false;
    for (int outer = 0; outer < opt.max_outer; ++outer) {
        BarrierPoint bp = bar.evaluate(v, t);
        if (!bp.feasible) {
            throw NumericalError("barrier iterate left the feasible set");
        }
        for (int it = 0; it < opt.max_newton; ++it) {
            RVector g;
            RMatrix h;
            bar.derivatives(bp, t, g, h);
            Eigen::LDLT<RMatrix> ldlt(h);
            RVector step = ldlt.solve(-g);
            if (ldlt.info() != Eigen::Success || !step.allFinite() || g.dot(step) >= 0.0) {
                const double reg = 1e-12 * h.diagonal().cwiseAbs().maxCoeff();
                ldlt.compute(h + reg * RMatrix::Identity(h.rows(), h.cols()));
                step = ldlt.solve(-g);
                if (!step.allFinite() || g.dot(step) >= 0.0) {
                    throw NumericalError("barrier Newton system is indefinite");
                }
            }
            ++iterations;
            const double decrement = -g.dot(step);
            if (decrement < 1e-12) {
                break;
            }
            double s = 1.0;
            BarrierPoint trial;
            while (s > 1e-14) {
                trial = bar.evaluate(v + s * step, t);
                if (trial.feasible && trial.phi <= bp.phi - 0.25 * s * decrement) {
                    break;
                }
                s *= 0.5;
            }
            if (!(s > 1e-14)) {
                break;
            }
            v += s * step;
            bp = std::move(trial);
            if (decrement < 1e-10) {
                break;
            }
        }
        if (d / t < opt.gap_tolerance) {
            converged = true;
            break;
        }
        t *= opt.growth;
    }
    const RMatrix y = bar.y_of(v);
    HolevoResult r;
    r.value = w.objective(y);
    r.X = w.observables(y);
    r.certificate.gap = scale * d / t;
    r.certificate.iterations = iterations;
    r.certificate.converged = converged;
    r.certificate.method = HolevoMethod::barrier;
    r.certificate.sld_objective = w.chbar;
    // The SLD point is feasible too; never return something worse.
    if (r.value > w.chbar) {
        r.value = w.chbar;
        r.X = w.observables(w.Y0);
    }
    return r;
}

HolevoResult solve_subgradient(const Whitened &w, const HolevoOptions &opt) {
    const RMatrix ntr = w.N.transpose();
    RMatrix y = w.Y0;
    RMatrix best = y;
    double best_f = w.objective(y);
    const double f0 = best_f;
    // Initial step length: a fraction of the SLD point's size.
    const double alpha0 = 0.1 * std::sqrt(std::max(w.Y0.squaredNorm(), 1e-300));
    int it = 0;
    for (; it < opt.subgradient_iterations; ++it) {
        const RMatrix im = y.transpose() * w.K * y;
        const RMatrix b = w.sqrtW * im * w.sqrtW;
        const RMatrix shat = (kI * (w.sqrtW.cast<cplx>() * sign_of_ib(b) * w.sqrtW.cast<cplx>())).real();
        const RMatrix ima = w.K * y;
        const RMatrix grad = 2.0 * y * w.W + ima * (shat - shat.transpose());
        const RMatrix gz = w.N * (ntr * grad);
        const double gn = gz.norm();
        if (gn == 0.0) {
            break;
        }
        y -= (alpha0 / std::sqrt(1.0 + it)) * gz / gn;
        const double f = w.objective(y);
        if (f < best_f) {
            best_f = f;
            best = y;
        }
    }
    HolevoResult r;
    r.value = best_f;
    r.X = w.observables(best);
    r.certificate.gap = kInf;
    r.certificate.iterations = it;
    r.certificate.converged = false;
    r.certificate.method = HolevoMethod::subgradient;
    r.certificate.sld_objective = f0;
    return r;
}

} // namespace

std::string to_string(HolevoMethod m) { return m == HolevoMethod::barrier ? "barrier" : "subgradient"; }

HolevoProblem HolevoProblem::from_bundle(const DerivativeBundle &b, const RMatrix &W) {
    return HolevoProblem{b.state, b.d_rho, W};
}

double holevo_objective(const QuantumState &state, const std::vector<CMatrix> &X, const RMatrix &W) {
    const int d = static_cast<int>(X.size());
    RMatrix re(d, d);
    RMatrix im(d, d);
    for (int mu = 0; mu < d; ++mu) {
        for (int nu = 0; nu < d; ++nu) {
            const cplx z = (state.density() * X[mu] * X[nu]).trace();
            re(mu, nu) = z.real();
            im(mu, nu) = z.imag();
        }
    }
    const RMatrix sw = sqrt_psd(0.5 * (W + W.transpose()));
    return (W * re).trace() + trace_norm_antisymmetric(sw * (0.5 * (im - im.transpose())) * sw);
}

HolevoResult holevo_bound(const HolevoProblem &p, const HolevoOptions &opt) {
    const Whitened w = whiten(p);
    try {
        return solve_barrier(w, opt);
    } catch (const NumericalError &) {
        if (!opt.allow_fallback) {
            throw;
        }
    }
    return solve_subgradient(w, opt);
}

HolevoResult holevo_bound_subgradient(const HolevoProblem &p, const HolevoOptions &opt) {
    return solve_subgradient(whiten(p), opt);
}

SandwichReport sandwich_report(const DerivativeBundle &b, const RMatrix &W, const HolevoOptions &opt) {
    const Whitened w = whiten(HolevoProblem::from_bundle(b, W));
    HolevoResult r;
    try {
        r = solve_barrier(w, opt);
    } catch (const NumericalError &) {
        if (!opt.allow_fallback) {
            throw;
        }
        r = solve_subgradient(w, opt);
    }
    SandwichReport s;
    s.CS = w.cs;
    s.CHbar = w.chbar;
    s.CH = r.value;
    s.gap = r.certificate.gap;
    s.certificate = r.certificate;
    const double slack = 1e-9 * s.CS + (std::isfinite(s.gap) ? s.gap : 0.0);
    s.ordered = s.CS <= s.CH + slack && s.CH <= s.CHbar + slack && s.CHbar <= 2.0 * s.CS + slack;
    return s;
}

} // namespace ohsense
