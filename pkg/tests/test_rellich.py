import math

import mpmath as mp
import numpy as np
import pytest

from rankone.errors import ValidationError
from rankone.harish_chandra import phi_big
from rankone.rellich import (DECAY, GROWTH, INDETERMINATE, LINEAR, Mass, ModelEigenfunction,
                             annulus_mass, classify, gamma_p, hardy_functional,
                             lp_spectrum_contains, oscillation_envelope, predicted, psi)
from rankone.space import RankOneSpace

H3 = RankOneSpace(2, 0)


def test_gamma_p():
    assert gamma_p(1) == 1 and gamma_p(2) == 0
    assert gamma_p(4) == -0.5 == -gamma_p(4 / 3)
    assert gamma_p(math.inf) == -1
    for bad in (0.5, float("nan"), "x"):
        with pytest.raises(ValidationError):
            gamma_p(bad)


def test_model_validation():
    with pytest.raises(ValidationError):
        ModelEigenfunction("other", H3, 1.0)
    with pytest.raises(ValidationError):
        ModelEigenfunction("phi", H3, 1.0, mode=(0, 2))
    f = ModelEigenfunction("mode", RankOneSpace(2, 1), "0.5+0.2i", mode="1,1")
    assert f.describe() == {"kind": "mode", "lambda": [0.5, 0.2], "mode": [1, 1]}


def test_governing_imag():
    lam = 0.5 + 0.3j
    assert ModelEigenfunction("big_phi_plus", H3, lam).governing_imag == 0.3
    assert ModelEigenfunction("big_phi_minus", H3, lam).governing_imag == -0.3
    assert ModelEigenfunction("phi", H3, lam).governing_imag == -0.3


def test_log_abs_against_closed_forms():
    t = np.array([1.0, 4.0, 12.0])
    f = ModelEigenfunction("big_phi_plus", H3, 1 + 0.5j)
    exact = np.log(np.abs(np.exp((1j * (1 + 0.5j) - 1) * t) / (1 - np.exp(-2 * t))))
    assert np.allclose(f.log_abs(t), exact, atol=1e-12)
    g = ModelEigenfunction("phi", H3, 1.0)
    assert np.allclose(g.log_abs(t), np.log(np.abs(np.sin(t) / np.sinh(t))), atol=1e-10)
    # excluded lambda falls back to the ODE; phi_i = sin(i t) / (i sinh t) = 1 on H^3
    e = ModelEigenfunction("phi", H3, 1j)
    assert np.allclose(e.log_abs(t), 0.0, atol=1e-9)


def test_mass_representation():
    m = Mass(1000.5)
    assert m.exponent == 1000 and m.mantissa == pytest.approx(math.exp(0.5))
    assert m.value == math.inf
    assert Mass(0.0).value == 1.0


def test_annulus_closed_form_growth():
    # |Phi_{0.5i}| J = e^{t/2} (1 - e^{-2t}) on H^3
    f = ModelEigenfunction("big_phi_plus", H3, 0.5j)
    F = lambda t: 2 * math.exp(t / 2) + (2 / 3) * math.exp(-1.5 * t)
    for R in (1.0, 4.0, 10.0):
        assert annulus_mass(f, 1, R).log == pytest.approx(math.log(F(2 * R) - F(R)), abs=1e-8)


def test_annulus_linear_closed_form():
    # |phi_1|^2 J = 4 sin^2 t on H^3
    f = ModelEigenfunction("phi", H3, 1.0)
    for R in (8.0, 11.0):
        exact = 2 * R - (math.sin(4 * R) - math.sin(2 * R))
        assert annulus_mass(f, 2, R).value == pytest.approx(exact, rel=1e-8)
        ratio = annulus_mass(f, 2, 2 * R).value / annulus_mass(f, 2, R).value
        assert abs(ratio - 2) <= 0.2


def test_annulus_decay():
    f = ModelEigenfunction("big_phi_plus", H3, 2j + 1e-3)
    logs = [annulus_mass(f, 1, R).log for R in range(4, 11)]
    assert all(b < a for a, b in zip(logs, logs[1:]))
    assert np.polyfit(range(4, 11), logs, 1)[0] == pytest.approx(-1.0, abs=0.05)


def test_annulus_octonionic_no_overflow():
    f = ModelEigenfunction("big_phi_minus", RankOneSpace(8, 7), 0.3 + 0.2j)
    m = annulus_mass(f, 1, 400)
    assert np.isfinite(m.log) and m.log > 709


def test_annulus_against_mpmath():
    s = RankOneSpace(2, 1)
    f = ModelEigenfunction("big_phi_plus", s, 0.4 + 0.3j)
    mp.mp.dps = 20
    integrand = lambda t: abs(phi_big(s, 0.4 + 0.3j, float(t))) ** 1.5 * (2 * mp.sinh(t)) ** 3 * mp.cosh(t)
    ref = float(mp.log(mp.quad(integrand, [3, 4.5, 6])))
    assert annulus_mass(f, 1.5, 3.0).log == pytest.approx(ref, abs=1e-8)


def test_annulus_errors():
    f = ModelEigenfunction("phi", H3, 1.0)
    with pytest.raises(ValidationError):
        annulus_mass(f, 1, 0.5)
    with pytest.raises(ValidationError):
        annulus_mass(f, 0.9, 2)


def test_predicted():
    assert predicted(ModelEigenfunction("big_phi_plus", H3, 0.5 + 0.3j), 1) == (GROWTH, pytest.approx(0.7))
    assert predicted(ModelEigenfunction("big_phi_plus", H3, 0.5 + 1j), 1)[0] == LINEAR
    assert predicted(ModelEigenfunction("phi", H3, 1.0), 2)[0] == LINEAR
    assert predicted(ModelEigenfunction("big_phi_plus", H3, 2j + 0.5), 1)[0] == DECAY


def test_classify_growth_example():
    f = ModelEigenfunction("big_phi_plus", H3, 0.5 + 0.3j)
    rep = classify(f, 1, R_grid=range(4, 11))
    assert rep.measured_class == GROWTH and rep.agrees
    assert rep.predicted_rate == pytest.approx(0.7)
    # the integrand carries the predicted rate; the annulus mass grows at twice it
    assert rep.integrand_rate == pytest.approx(0.7, abs=0.05)
    assert rep.fitted_rate == pytest.approx(1.406, abs=0.01)


def test_classify_fitted_rate_oracle():
    # log M(R) = log(2 e^{R} - 2 e^{R/2} + (2/3)(e^{-3R} - e^{-1.5R})) exactly on H^3
    R = np.arange(4.0, 11.0)
    F = lambda t: 2 * np.exp(t / 2) + (2 / 3) * np.exp(-1.5 * t)
    expected = np.polyfit(R, np.log(F(2 * R) - F(R)), 1)[0]
    rep = classify(ModelEigenfunction("big_phi_plus", H3, 0.5j), 1, R_grid=R)
    assert rep.fitted_rate == pytest.approx(expected, abs=1e-8)
    assert rep.fitted_rate == pytest.approx(1.0213, abs=1e-4)


def test_classify_linear_boundary():
    rep = classify(ModelEigenfunction("big_phi_plus", H3, 0.5 + 1j), 1)
    assert rep.predicted_class == LINEAR and rep.measured_class == LINEAR
    assert all(1.5 <= r <= 2.5 for r, x in zip(rep.ratios, rep.R_grid) if x >= 8)


def test_classify_phi_l2_linear():
    rep = classify(ModelEigenfunction("phi", H3, 1.0), 2)
    assert rep.measured_class == LINEAR == rep.predicted_class


def test_classify_oscillatory_indeterminate():
    rep = classify(ModelEigenfunction("phi", H3, 1.0), 1.5)
    assert rep.measured_class == INDETERMINATE
    lo, hi, period = rep.envelope
    assert (lo, hi) == pytest.approx((0.0, 4.0), abs=1e-9) and period == pytest.approx(math.pi)
    d = rep.as_dict()
    assert d["measured_class"] == INDETERMINATE and len(d["mass_ratios"]) == 9


def test_classify_grid_validation():
    f = ModelEigenfunction("phi", H3, 1.0)
    with pytest.raises(ValidationError):
        classify(f, 2, R_grid=[4, 5, 6])
    with pytest.raises(ValidationError):
        classify(f, 2, R_grid=[2, 4, 5, 6, 7, 8])


def test_classify_mapper_deterministic():
    from concurrent.futures import ThreadPoolExecutor
    f = ModelEigenfunction("big_phi_minus", RankOneSpace(2, 1), 0.4 - 0.2j)
    a = classify(f, 1.5)
    with ThreadPoolExecutor(4) as ex:
        b = classify(f, 1.5, mapper=ex.map)
    assert a == b


def test_mode_model_growth():
    s = RankOneSpace(2, 1)
    f = ModelEigenfunction("mode", s, 0.5 + 0.5j, mode=(1, 1))
    rep = classify(f, 1)
    assert rep.predicted_class == GROWTH == rep.measured_class
    assert rep.integrand_rate == pytest.approx(rep.predicted_rate, abs=0.05)


# --- spectrum, psi, envelope ------------------------------------------------------

def test_spectrum_examples():
    assert lp_spectrum_contains(H3, 2, 2)
    assert not lp_spectrum_contains(H3, 2, 0)
    assert lp_spectrum_contains(H3, 1, 0)
    assert lp_spectrum_contains(H3, 4, 0.75) == lp_spectrum_contains(H3, 4 / 3, 0.75)


def _brute_force_min_imag(c):
    # Newton from a fixed grid of starts finds every root of zeta^2 = c
    xs = np.linspace(-6, 6, 7)
    z = (xs[None, :, None] + 1j * xs[None, None, :]).reshape(1, -1) + 0 * c[:, None]
    for _ in range(80):
        with np.errstate(all="ignore"):
            z = z - (z * z - c[:, None]) / (2 * z)
    ok = np.abs(z * z - c[:, None]) <= 1e-9 * (1 + np.abs(c[:, None]))
    im = np.where(ok, np.abs(z.imag), np.inf)
    return im.min(axis=1)


@pytest.mark.parametrize("p", [1, 4 / 3, 2, 4])
def test_spectrum_brute_force(p):
    s = RankOneSpace(2, 1)
    rng = np.random.default_rng(int(p * 100))
    w = rng.uniform(-10, 20, 10_000) + 1j * rng.uniform(-15, 15, 10_000)
    b = abs(gamma_p(p)) * s.rho
    min_im = _brute_force_min_imag(w - s.rho ** 2)
    oracle = min_im <= b
    fast = np.array([lp_spectrum_contains(s, p, x) for x in w])
    bad = fast != oracle
    assert np.all(np.abs(min_im[bad] - b) <= 1e-6)


def test_spectrum_l2_scan_line():
    s = RankOneSpace(4, 3)
    for w in np.linspace(-10, 60, 701):
        assert lp_spectrum_contains(s, 2, w) == (w >= s.rho ** 2)
    assert not lp_spectrum_contains(s, 2, 40 + 1e-3j)


def test_psi():
    t = np.linspace(0, 5, 6)
    assert np.allclose(psi(H3, 2.0, t), np.exp(-t))
    assert psi(H3, 0.5j, 0.0) == 1.0
    tt = np.linspace(5, 25, 50)
    ratio = psi(H3, 0.5j, tt) / np.abs(phi_big(H3, 0.5j, tt))
    assert 0.5 <= ratio.min() and ratio.max() <= 2
    with pytest.raises(ValidationError):
        psi(H3, 1.0, -1.0)


@pytest.mark.parametrize("args,expected", [((1, 1, 1), (0, 4, math.pi)),
                                           ((1, 0, 2), (1, 1, math.pi / 2)),
                                           ((2, 1, 1), (1, 9, math.pi))])
def test_oscillation_envelope(args, expected):
    assert oscillation_envelope(*args) == pytest.approx(expected)


def test_oscillation_envelope_error():
    with pytest.raises(ValidationError):
        oscillation_envelope(1, 1, 0)


# --- Hardy functional ------------------------------------------------------------------

T_GRID = np.linspace(1.0, 400.0, 1597)


def test_hardy_bounded_at_eps_zero():
    f = ModelEigenfunction("big_phi_plus", H3, 0.5j)
    r = hardy_functional(f, math.inf, 0.0, T_GRID)
    assert not r.divergence_flag
    assert r.ratio <= 1.01


def test_hardy_diverges_with_eps():
    f = ModelEigenfunction("big_phi_plus", H3, 0.5j)
    r = hardy_functional(f, math.inf, 0.1, T_GRID)
    assert r.divergence_flag
    assert abs(r.ratio / 2 ** 0.1 - 1) <= 0.1


def test_hardy_phi_real_lambda():
    f = ModelEigenfunction("phi", H3, 1.0)
    assert hardy_functional(f, 2, 0.1, T_GRID).divergence_flag


def test_hardy_errors():
    f = ModelEigenfunction("phi", H3, 1.0)
    with pytest.raises(ValidationError):
        hardy_functional(f, 2, 0.1, [])
    with pytest.raises(ValidationError):
        hardy_functional(f, 2, -0.1, [1.0, 2.0])
