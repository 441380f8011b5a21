# Copyright 2026 The ohsense Authors.

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Holevo bound against an independent semidefinite program solved with cvxpy."""

import numpy as np
import pytest

import ohsense as o

cp = pytest.importorskip("cvxpy")


def holevo_sdp(rho, drho, W):
    """min Tr[WV] s.t. [[V, M], [M^H, 1]] >= 0 and Tr[d_nu rho X_mu] = delta.

    With rho = S S^H (S restricted to the support), M has rows vec(conj(X_mu S)),
    so that M M^H = Z[X].
    """
    n, d = rho.shape[0], len(drho)
    w, v = np.linalg.eigh(rho)
    keep = w > 1e-12
    s = v[:, keep] @ np.diag(np.sqrt(w[keep]))
    r = s.shape[1]
    X = [cp.Variable((n, n), hermitian=True) for _ in range(d)]
    V = cp.Variable((d, d), symmetric=True)
    M = cp.vstack([cp.reshape(cp.conj(x @ s), (1, n * r), order="C") for x in X])
    cons = [cp.bmat([[V, M], [M.H, np.eye(n * r)]]) >> 0]
    cons += [cp.real(cp.trace(drho[nu] @ X[mu])) == float(mu == nu) for mu in range(d) for nu in range(d)]
    problem = cp.Problem(cp.Minimize(cp.trace(W @ V)), cons)
    # CVXOPT is the more accurate interior-point solver on full-rank states but
    # fails on rank-deficient ones, where Clarabel is accurate.
    problem.solve(solver="CVXOPT" if r == n else "CLARABEL")
    assert problem.status == "optimal"
    return problem.value


def holevo_objective(rho, X, W):
    """Tr[W Re Z] + ||sqrt(W) Im Z sqrt(W)||_1 with Z = Tr[rho X_mu X_nu]."""
    Z = np.array([[np.trace(rho @ x @ y) for y in X] for x in X])
    w, v = np.linalg.eigh(W)
    sw = v @ np.diag(np.sqrt(w)) @ v.T
    return np.trace(W @ Z.real) + np.abs(np.linalg.eigvalsh(1j * (sw @ Z.imag @ sw))).sum()


LAM = o.lambdas_from_fields(400.0, 3.0, 1.0)


def models():
    T = 0.03
    thermal = o.Bundle.thermal(o.hamiltonian(np.zeros(3)), o.all_dH(), T)
    yield "thermal", o.evolved_bundle(thermal, LAM, 20.0)
    for name in ("psiA", "psiB", "psiOpt"):
        start = o.Bundle.pure(o.named_probe(name), [np.zeros(8, complex)] * 3)
        yield name, o.evolved_bundle(start, LAM, 6.0)


@pytest.mark.filterwarnings("ignore::UserWarning")
@pytest.mark.parametrize("name,bundle", list(models()))
def test_holevo_matches_sdp(name, bundle):
    W = np.diag([1.0, 2.0, 0.5])
    s = o.sandwich(bundle, W)
    assert s["ordered"] and s["certificate"]["converged"]
    assert s["CS"] <= s["CH"] <= s["CHbar"]
    ref = holevo_sdp(bundle.rho, bundle.d_rho, W)
    assert abs(ref - s["CH"]) <= 1e-6 * s["CS"]
    assert abs(ref - s["CH"]) <= 0.01 * (s["CHbar"] - s["CS"])


@pytest.mark.parametrize("name,bundle", list(models()))
def test_holevo_minimizer_is_feasible(name, bundle):
    W = np.diag([1.0, 2.0, 0.5])
    h = o.holevo_bound(bundle, W)
    X = h["X"]
    for mu, x in enumerate(X):
        assert np.abs(x - x.conj().T).max() < 1e-12
        for nu, d in enumerate(bundle.d_rho):
            assert abs(np.trace(d @ x) - float(mu == nu)) < 1e-9
    assert holevo_objective(bundle.rho, X, W) == pytest.approx(h["value"], rel=1e-10)


def test_holevo_equals_sld_bound_without_curvature():
    b = o.Bundle.thermal(o.hamiltonian(LAM), o.all_dH(), 0.05)
    s = o.sandwich(b, np.eye(3))
    assert s["CH"] == pytest.approx(s["CS"], rel=1e-6)
