import cmath
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from rankone._kernels import _pykernels as py

ck = pytest.importorskip("rankone._kernels._ckernels")


@pytest.mark.parametrize("m1,m2", [(2, 0), (2, 1), (4, 3), (8, 7)])
@pytest.mark.parametrize("variant", [0, 1])
def test_hc_parity(m1, m2, variant):
    lam = 0.7 - 1.1j
    a, bad_a = py.hc_coefficients(m1, m2, lam, 60, variant)
    b, bad_b = ck.hc_coefficients(m1, m2, lam, 60, variant)
    assert bad_a == bad_b
    assert np.allclose(np.asarray(a), np.asarray(b), rtol=1e-13, atol=0)


def test_hc_reports_vanishing_factor():
    # k + 1 - i lam = 0 at k = 2 for lam = -3i
    g, bad = py.hc_coefficients(2, 1, -3j, 10, 0)
    assert bad == 3
    assert ck.hc_coefficients(2, 1, -3j, 10, 0)[1] == 3


@pytest.mark.parametrize("P,Q", [(0.0, 0.0), (2.0, 6.0), (12.0, 0.0)])
def test_mode_series_parity(P, Q):
    a, ba = py.mode_series_coefficients(4, 3, P, Q, 1.3 + 0.4j, 40)
    b, bb = ck.mode_series_coefficients(4, 3, P, Q, 1.3 + 0.4j, 40)
    assert ba == bb == -1
    assert np.allclose(np.asarray(a), np.asarray(b), rtol=1e-13, atol=0)


def test_hyp2f1_parity():
    for args in [(1 + 2j, -0.5j, 2.5 + 1j, 0.4), (200, 200, 1.5, 0.5), (3, -2, 1.0, 0.9)]:
        va, na, ta, oka = py.hyp2f1_sum(*args, 1e-14, 100000)
        vb, nb, tb, okb = ck.hyp2f1_sum(*args, 1e-14, 100000)
        assert oka and okb and na == nb
        assert abs(va - vb) <= 1e-14 * abs(va)


def _h3_exact(lam, t):
    # u = sin(lam t) / (lam sinh t) solves the H^3 radial equation with kappa = lam^2 + 1
    u = cmath.sin(lam * t) / (lam * math.sinh(t))
    du = (cmath.cos(lam * t) * math.sinh(t) - cmath.sin(lam * t) / lam * math.cosh(t)) / math.sinh(t) ** 2
    return u, du


@pytest.mark.parametrize("impl", [py, ck], ids=["python", "compiled"])
def test_integrator_h3_closed_form(impl):
    lam = 1.7 + 0.2j
    t0 = 0.5
    u0, du0 = _h3_exact(lam, t0)
    stops = [1.0, 2.0, 5.0, 9.0]
    u, du, acc, rej, status = impl.integrate_radial(
        2, 0, 0.0, 0.0, lam * lam + 1, t0, u0, du0, stops, 1e-12, 1e-300, 1e-3, 100000)
    assert status == py.OK and acc > 0
    for t, ui, dui in zip(stops, u, du):
        ue, due = _h3_exact(lam, t)
        scale = math.hypot(abs(ue), abs(due))
        assert abs(ui - ue) <= 1e-9 * scale
        assert abs(dui - due) <= 1e-9 * scale


def test_integrator_parity_backward():
    args = (8, 7, 0.0, 0.0, (0.3 - 1j) ** 2 + 121 / 4, 30.0, 1e-60 + 0j, -1e-60 + 0j,
            [20.0, 10.0, 2.0, 1.0], 1e-12, 1e-300, 1e-2, 200000)
    a = py.integrate_radial(*args)
    b = ck.integrate_radial(*args)
    assert a[4] == b[4] == py.OK
    assert a[2] == b[2]
    assert np.allclose(a[0], b[0], rtol=1e-11, atol=0)


def test_integrator_step_budget():
    u, du, acc, rej, status = py.integrate_radial(
        2, 0, 0.0, 0.0, 1.0 + 0j, 0.5, 1 + 0j, 0j, [50.0], 1e-12, 1e-300, 1e-3, 5)
    assert status == py.MAX_STEPS and u == []


def _backend_with(env_value):
    env = dict(os.environ, RANKONE_KERNELS=env_value)
    out = subprocess.run([sys.executable, "-c", "import rankone; print(rankone.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    return out.stdout.strip()


def test_backend_selection():
    assert _backend_with("python") == "python"
    assert _backend_with("auto") == "compiled"
