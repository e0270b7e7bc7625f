import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rankone.errors import ValidationError
from rankone.space import (RankOneSpace, ball_volume, complex_hyperbolic, jacobian,
                           log_ball_volume, log_jacobian, make_space, octonionic_plane,
                           quaternionic_hyperbolic, real_hyperbolic)


def test_real_hyperbolic_3():
    s = real_hyperbolic(3)
    assert (s.m_gamma, s.m_2gamma, s.rho, s.dim) == (2, 0, 1.0, 3)


def test_explicit_pair():
    s = make_space((2, 1))
    assert s.rho == 2.0 and s.dim == 4


@pytest.mark.parametrize("bad", [(0, 1), (-1, 0), (2, -1), (1.5, 0), (True, 0)])
def test_rejects_bad_multiplicities(bad):
    with pytest.raises(ValidationError):
        RankOneSpace(*bad)


@pytest.mark.parametrize("desc,key", [
    ("real:3", (2, 0)), ("real:5", (4, 0)), ("complex:2", (2, 1)), ("complex:3", (4, 1)),
    ("quaternionic:2", (4, 3)), ("octonionic", (8, 7)), ("2,1", (2, 1)), ((4, 3), (4, 3)),
])
def test_make_space_forms(desc, key):
    assert make_space(desc).key == key


def test_presets():
    assert complex_hyperbolic(2).key == (2, 1)
    assert quaternionic_hyperbolic(2).key == (4, 3)
    assert octonionic_plane().key == (8, 7)
    with pytest.raises(ValidationError):
        real_hyperbolic(1)
    with pytest.raises(ValidationError):
        make_space("hyperbolic-ish:3")


@given(st.integers(1, 40), st.integers(0, 40))
def test_rho_and_dim_exact(m1, m2):
    s = RankOneSpace(m1, m2)
    assert 2 * s.rho == m1 + 2 * m2
    assert s.dim == m1 + m2 + 1


def test_jacobian_values():
    s = RankOneSpace(2, 0)
    assert jacobian(s, 0.0) == 0.0
    mp.mp.dps = 30
    assert jacobian(s, 1.0) == pytest.approx(float((2 * mp.sinh(1)) ** 2), rel=1e-14)
    assert jacobian(s, 1.0) == pytest.approx(5.524, abs=1e-3)


def test_log_jacobian_slope():
    s = RankOneSpace(2, 1)
    t = 200.0
    assert log_jacobian(s, t) / t == pytest.approx(4.0, abs=1e-2)
    # the slope itself is exactly 2 rho once the e^{-2t} terms are gone
    assert (log_jacobian(s, 60.0) - log_jacobian(s, 50.0)) / 10 == pytest.approx(4.0, abs=1e-12)


@pytest.mark.parametrize("key", [(2, 0), (2, 1), (4, 3), (8, 7), (3, 0)])
def test_log_jacobian_constant(key):
    # (2 sinh t)^{m1+m2} (cosh t)^{m2} = e^{2 rho t} 2^{-m2} (1 + O(e^{-2t}))
    s = RankOneSpace(*key)
    assert log_jacobian(s, 30.0) - 2 * s.rho * 30.0 == pytest.approx(-s.m_2gamma * math.log(2), abs=1e-6)


@given(st.floats(0.0, 40.0))
@settings(max_examples=50)
def test_log_jacobian_matches_direct(t):
    s = RankOneSpace(4, 3)
    direct = jacobian(s, t)
    if direct > 0:
        assert log_jacobian(s, t) == pytest.approx(math.log(direct), abs=1e-12 * max(1, t))


def test_ball_volume_closed_form():
    s = RankOneSpace(2, 0)
    # int_0^r 4 sinh^2 = sinh(2r) - 2r
    for r in (0.1, 1.0, 3.0):
        assert ball_volume(s, r) == pytest.approx(math.sinh(2 * r) - 2 * r, rel=1e-10)
    mp.mp.dps = 40
    exact = float(mp.log(mp.sinh(40) - 40))
    assert log_ball_volume(s, 20.0) == pytest.approx(exact, abs=1e-9)


def test_ball_volume_small_r():
    s = RankOneSpace(2, 0)
    for r in (1e-2, 1e-3):
        assert ball_volume(s, r) / (4 / 3 * r ** 3) == pytest.approx(1.0, abs=r)


def test_ball_volume_growth():
    s = RankOneSpace(2, 0)
    # log V(r) = 2r - log 2 + o(1): the ratio to r approaches 2 like log(2)/r
    assert log_ball_volume(s, 100.0) / 100.0 == pytest.approx(2.0, abs=0.01)
    assert log_ball_volume(s, 20.0) / 20.0 == pytest.approx(2.0 - math.log(2) / 20, abs=1e-6)


def test_ball_volume_edge_and_monotone():
    s = RankOneSpace(2, 1)
    assert ball_volume(s, 0.0) == 0.0
    vals = [ball_volume(s, r) for r in np.linspace(0.1, 5, 20)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert log_ball_volume(s, 4.0, rtol=1e-8) == pytest.approx(log_ball_volume(s, 4.0, rtol=1e-12), abs=1e-8)
    with pytest.raises(ValidationError):
        ball_volume(s, -1.0)
