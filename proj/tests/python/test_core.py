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


import numpy as np
import pytest
import scipy.linalg as sl

import ohsense as o

LAM = o.lambdas_from_fields(500.0, 3.0, 0.7)


def fd(f, p, h=1e-5):
    """Central differences of f along each component of p."""
    out = []
    for mu in range(len(p)):
        e = np.zeros(len(p))
        e[mu] = h
        out.append((f(p + e) - f(p - e)) / (2 * h))
    return out


def qfim_mixed_oracle(rho, drho, floor=1e-12):
    w, v = np.linalg.eigh(rho)
    d = [v.conj().T @ x @ v for x in drho]
    q = np.zeros((len(d), len(d)))
    for n in range(len(w)):
        for m in range(len(w)):
            if w[n] + w[m] > floor:
                for a in range(len(d)):
                    for b in range(len(d)):
                        q[a, b] += 2 * np.real(d[a][n, m] * d[b][m, n]) / (w[n] + w[m])
    return q


def test_hamiltonian_is_hermitian_and_affine():
    h = o.hamiltonian(LAM)
    assert h.shape == (o.DIM, o.DIM)
    assert np.allclose(h, h.conj().T, atol=1e-14)
    rebuilt = o.hamiltonian(np.zeros(3)) + sum(l * d for l, d in zip(LAM, o.all_dH()))
    assert np.allclose(h, rebuilt, atol=1e-14)
    e = np.linalg.eigvalsh(o.hamiltonian(np.zeros(3)))
    delta = o.default_constants().Delta
    assert np.allclose(e, [-delta] * 4 + [delta] * 4, atol=1e-14)


def test_invalid_inputs_raise():
    with pytest.raises(ValueError):
        o.lambdas_from_fields(-1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        o.thermal_state(o.hamiltonian(LAM), 0.0)
    with pytest.raises(ValueError):
        o.named_probe("psiC")
    with pytest.raises(o.NumericalError):
        o.qfim_ground_state(o.hamiltonian(np.zeros(3)), o.all_dH())


def test_ground_state_qfim_matches_numpy_finite_differences():
    def psi(p):
        w, v = np.linalg.eigh(o.hamiltonian(p))
        g = v[:, 0]
        return g * np.exp(-1j * np.angle(g[np.argmax(np.abs(g))]))

    p0 = psi(LAM)
    dpsi = fd(psi, LAM)
    q = np.array([[4 * np.real(np.vdot(a, b) - np.vdot(a, p0) * np.vdot(p0, b)) for b in dpsi] for a in dpsi])
    lib = o.qfim_ground_state(o.hamiltonian(LAM), o.all_dH())
    assert np.allclose(lib, q, rtol=1e-6, atol=1e-6 * np.abs(q).max())
    assert np.allclose(o.qfim(o.Bundle.ground(o.hamiltonian(LAM), o.all_dH())), lib, rtol=1e-10)


@pytest.mark.parametrize("T", [0.01, 0.1, 1.0])
def test_thermal_qfim_matches_numpy_oracle(T):
    rho = o.thermal_state(o.hamiltonian(LAM), T)
    # Truncation error scales as (h/T)^2.
    drho = fd(lambda p: o.thermal_state(o.hamiltonian(p), T), LAM, min(1e-5, 1e-4 * T))
    q = qfim_mixed_oracle(rho, drho)
    lib = o.qfim_thermal_stationary(o.hamiltonian(LAM), o.all_dH(), T)
    assert np.allclose(lib, q, rtol=1e-6, atol=1e-8 * np.abs(q).max())
    b = o.Bundle.thermal(o.hamiltonian(LAM), o.all_dH(), T)
    assert np.abs(o.uhlmann_curvature(b)).max() < 1e-10


def test_bundle_from_python_model():
    b = o.Bundle.finite_difference(lambda p: o.thermal_state(o.hamiltonian(p), 0.05), LAM, 1e-4)
    assert not b.is_pure and b.num_params == 3
    exact = o.qfim_thermal_stationary(o.hamiltonian(LAM), o.all_dH(), 0.05)
    assert np.allclose(o.qfim(b), exact, rtol=1e-6)


def test_measurement_fim_below_qfim():
    rng = np.random.default_rng(7)
    b = o.Bundle.thermal(o.hamiltonian(LAM), o.all_dH(), 0.05)
    q = o.qfim(b)
    for _ in range(10):
        u = sl.qr(rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8)))[0]
        povm = [np.outer(u[:, k], u[:, k].conj()) for k in range(8)]
        f = o.fim_povm(b, povm)
        assert np.linalg.eigvalsh(q - f).min() > -1e-8 * np.abs(q).max()


def test_bounds_trace_and_msnr():
    q = np.diag([4.0, 2.0, 1.0])
    b = o.bounds(q, np.zeros((3, 3)), np.eye(3), np.array([1.0, 2.0, 0.5]))
    assert b["CS"] == pytest.approx(1.75)
    assert b["CHbar"] == pytest.approx(1.75)
    assert b["R"] == 0.0
    assert b["mSNRbar"] == pytest.approx(1.0 / (0.25 + 0.5 / 4 + 1.0 / 0.25))
    singular = o.bounds(np.diag([1.0, 1.0, 0.0]), np.zeros((3, 3)), np.eye(3))
    assert singular["singular"] and singular["CS"] == np.inf and singular["estimable"] == [0, 1]


@pytest.mark.parametrize("method", ["spectral", "series"])
def test_generators_match_scipy_expm(method):
    t = 30.0
    h = o.hamiltonian(LAM)
    u = lambda p: sl.expm(-1j * t * o.hamiltonian(p))
    du = fd(u, LAM, 1e-6)
    u0 = u(LAM)
    gens = o.generators(h, o.all_dH(), t, method)
    for g, d in zip(gens, du):
        oracle = 1j * d.conj().T @ u0
        assert np.abs(g - oracle).max() < 1e-6 * np.abs(oracle).max()


def test_aligned_numeric_trace_small_time_constants():
    delta = o.default_constants().Delta
    t = 1e-3 / delta
    for name, const in [("psiA", 125 / 144), ("psiB", 25 / 16)]:
        v = o.COV_NORMALIZATION_FACTOR * o.aligned_numeric_trace(o.named_probe(name), 0.0, 0.05, t)
        assert v * t**2 == pytest.approx(const, rel=1e-3)


def test_thermal_dynamical_report_curvature_ratio():
    reports = [o.thermal_dynamical_report(LAM, 20.0, T, np.eye(3)) for T in (0.02, 0.2, 2.0)]
    r_qd = [r["r_qd"] for r in reports]
    assert max(r_qd) - min(r_qd) < 1e-9 * max(r_qd)
    for r in reports:
        assert r["R"] == pytest.approx(min(1.0, r["tanh_factor"] * r["r_qd"]), rel=1e-9)


def test_controlled_qfim_of_optimal_probe():
    psi = o.named_probe("psiOpt")
    q = o.qfim_controlled_ideal(psi, 1.0)
    assert np.abs(q - np.diag(np.diag(q))).max() < 1e-12
    assert q[0, 0] / q[1, 1] == pytest.approx(4.0, rel=1e-12)
    trace = o.COV_NORMALIZATION_FACTOR * np.trace(np.linalg.inv(q))
    assert trace == pytest.approx(125 * (3657 - 1184 * np.sqrt(3)) / 100048, rel=1e-12)
    assert o.controlled_trace(psi) == pytest.approx(np.trace(np.linalg.inv(q)), rel=1e-12)


def test_dichotomic_fim_is_rank_one():
    psi = o.named_probe("psiOpt")
    f = o.fim_dichotomic(psi, LAM, LAM + np.array([1e-3, 0.0, 0.0]), 10.0, 1000)
    assert f["rank"] == 1
    assert f["p"] + f["q"] == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(f["F"], np.outer(f["grad_p"], f["grad_p"]) / (f["p"] * f["q"]), rtol=1e-10)
    ideal = o.fim_dichotomic(psi, LAM, LAM, 10.0, 1000)
    assert ideal["null_point"]
