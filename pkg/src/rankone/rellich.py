"""Annulus L^p masses of model eigenfunctions, growth classification, the
L^p-spectrum region and the Hardy-type functional.

All magnitudes are handled as logarithms: at R = 20 the masses reach
e^{2 rho R p}, well past double range for the larger spaces.
"""

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._quad import log_integral
from .errors import ValidationError
from .harish_chandra import (as_param, c_function, log_abs_phi_series,
                             series_sum)
from .radial import ModeIndex, as_mode, mode_series_log_abs, solve_forward
from .space import RankOneSpace, log_jacobian

KINDS = ("phi", "big_phi_plus", "big_phi_minus", "mode")
GROWTH = "ExponentialGrowth"
LINEAR = "Linear"
DECAY = "ExponentialDecay"
INDETERMINATE = "Indeterminate"

DEAD_BAND = 0.02
LINEAR_RATIO = (1.5, 2.5)
LINEAR_FROM_R = 8.0
BOUNDARY_TOL = 1e-12
EQUALITY_TOL = 1e-9


def gamma_p(p: float) -> float:
    """2/p - 1 (p = inf gives -1)."""
    p = _check_p(p, allow_inf=True)
    return 2.0 / p - 1.0


def _check_p(p, allow_inf=False):
    try:
        p = float(p)
    except (TypeError, ValueError):
        raise ValidationError(f"exponent p must be a number, got {p!r}") from None
    if math.isnan(p) or p < 1.0 or (math.isinf(p) and not allow_inf):
        raise ValidationError(f"exponent p must satisfy 1 <= p{' <= inf' if allow_inf else ' < inf'}, got {p}")
    return p


@dataclass(frozen=True)
class ModelEigenfunction:
    """A radial profile f(a_t); for kind ``mode`` the angular factor has unit norm."""

    kind: str
    space: RankOneSpace
    lam: object
    mode: Optional[ModeIndex] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"kind must be one of {KINDS}, got {self.kind!r}")
        object.__setattr__(self, "lam", as_param(self.lam))
        if self.kind == "mode":
            object.__setattr__(self, "mode", as_mode(self.mode, self.space))
        elif self.mode is not None and not as_mode(self.mode).trivial:
            raise ValidationError(f"kind {self.kind!r} is K-biinvariant; mode must be (0, 0)")

    @property
    def governing_imag(self) -> float:
        """g with |f(a_t)| ~ e^{(-g - rho) t} up to oscillation and powers of t."""
        im = self.lam.imag
        if self.kind == "big_phi_plus" or self.kind == "mode":
            return im
        if self.kind == "big_phi_minus":
            return -im
        return -abs(im)

    def log_abs(self, t):
        """log|f(a_t)| (the K-mean of |f|^p is exp(p * this))."""
        t = np.asarray(t, dtype=float)
        sp = self.space
        lam = self.lam
        if self.kind == "big_phi_plus" or self.kind == "big_phi_minus":
            l = lam if self.kind == "big_phi_plus" else -lam
            s = series_sum(sp, l, t)
            with np.errstate(divide="ignore"):
                return (-l.imag - sp.rho) * t + np.log(np.abs(s))
        if self.kind == "mode":
            return mode_series_log_abs(sp, lam, self.mode, t)
        if lam.is_excluded():
            return _log_abs_phi_ode(sp, lam, t)
        return log_abs_phi_series(sp, lam, t, t_min=0.5)

    def describe(self) -> dict:
        d = {"kind": self.kind, "lambda": [self.lam.real, self.lam.imag]}
        if self.mode is not None:
            d["mode"] = [self.mode.p, self.mode.q]
        return d


def _log_abs_phi_ode(space, lam, t):
    flat = np.ravel(t)
    order = np.unique(flat)
    sol = solve_forward(space, lam, grid=order)
    with np.errstate(divide="ignore"):
        vals = np.log(np.abs(sol.u))
    return vals[np.searchsorted(order, flat)].reshape(np.shape(t))


@dataclass(frozen=True)
class Mass:
    """A positive number stored as log; mantissa * e^exponent with integer exponent."""

    log: float

    @property
    def exponent(self) -> int:
        return int(math.floor(self.log))

    @property
    def mantissa(self) -> float:
        return math.exp(self.log - self.exponent)

    @property
    def value(self) -> float:
        return math.exp(self.log) if self.log < 709.0 else math.inf


def log_integrand(f: ModelEigenfunction, p: float, t):
    return p * f.log_abs(t) + log_jacobian(f.space, t)


def annulus_mass(f: ModelEigenfunction, p: float, R: float, rtol: float = 1e-8) -> Mass:
    """Integral over R < t < 2R of (K-mean of |f|^p) J(t) dt."""
    p = _check_p(p)
    R = float(R)
    if R < 1.0:
        raise ValidationError(f"annulus radius must be >= 1, got {R}")
    val, _ = log_integral(lambda t: log_integrand(f, p, t), R, 2.0 * R, rtol=rtol)
    return Mass(float(val))


def predicted(f: ModelEigenfunction, p: float):
    """(class, rate) for the model: rate = p (gamma_p rho - governing |Im|)."""
    g = f.governing_imag
    rate = p * (gamma_p(p) * f.space.rho - g)
    if f.kind == "phi" and f.lam.imag == 0.0:
        if abs(p - 2.0) <= EQUALITY_TOL:
            return LINEAR, rate
    if abs(rate) <= EQUALITY_TOL:
        return LINEAR, 0.0
    return (GROWTH if rate > 0 else DECAY), rate


def oscillation_envelope(C1, C2, lambda_real: float):
    """(min, max) of |C1 e^{i lam t} + C2 e^{-i lam t}|^2 and its period in t."""
    lambda_real = float(lambda_real)
    if lambda_real == 0.0:
        raise ValidationError("oscillation envelope needs a nonzero real lambda")
    a, b = abs(complex(C1)), abs(complex(C2))
    return (a - b) ** 2, (a + b) ** 2, math.pi / abs(lambda_real)


@dataclass(frozen=True)
class GrowthReport:
    p_exponent: float
    R_grid: tuple
    log_masses: tuple
    log_ratios: tuple
    fitted_rate: float
    integrand_rate: float
    predicted_rate: float
    predicted_class: str
    measured_class: str
    model: dict = field(default_factory=dict)
    envelope: Optional[tuple] = None

    @property
    def masses(self):
        return tuple(Mass(x) for x in self.log_masses)

    @property
    def ratios(self):
        return tuple(math.exp(x) for x in self.log_ratios)

    @property
    def agrees(self) -> bool:
        return self.measured_class == self.predicted_class

    def as_dict(self) -> dict:
        return {
            "p_exponent": self.p_exponent,
            "R_grid": list(self.R_grid),
            "log_masses": list(self.log_masses),
            "mass_ratios": list(self.ratios),
            "fitted_rate": self.fitted_rate,
            "integrand_rate": self.integrand_rate,
            "predicted_rate": self.predicted_rate,
            "predicted_class": self.predicted_class,
            "measured_class": self.measured_class,
            "model": self.model,
            "envelope": list(self.envelope) if self.envelope is not None else None,
        }


def classify(f: ModelEigenfunction, p: float, R_grid=None, rtol: float = 1e-8,
             dead_band: float = DEAD_BAND, mapper=map) -> GrowthReport:
    """Fit log M_p(R) against R and sort the result into the trichotomy.

    The doubling test M(2R)/M(R) in [1.5, 2.5] (for R >= 8, or the whole grid
    if it stops short of 8) is tried first: a mass growing like R has log
    slope about 1/R, which a slope-only rule would call exponential growth.
    ``integrand_rate`` is the slope of log(m_p J) itself; for exponential
    growth the annulus mass grows at twice that rate, for decay at the
    same rate.
    """
    p = _check_p(p)
    R = np.asarray(sorted(float(x) for x in (R_grid if R_grid is not None else range(4, 13))))
    if R.size < 6 or R[0] < 4.0:
        raise ValidationError("classify needs at least 6 radii, all >= 4")
    # ``mapper`` must preserve order (builtin map, Executor.map)
    radii = list(R) + [2 * r for r in R]
    logs = np.array(list(mapper(lambda r: annulus_mass(f, p, r, rtol).log, radii)))
    logM, logM2 = logs[:R.size], logs[R.size:]
    log_ratio = logM2 - logM
    slope = float(np.polyfit(R, logM, 1)[0])
    dens = log_integrand(f, p, R)
    integrand_rate = float(np.polyfit(R, dens, 1)[0])
    pred_class, pred_rate = predicted(f, p)

    envelope = None
    sel = R >= LINEAR_FROM_R
    if not sel.any():
        sel = np.ones_like(R, dtype=bool)
    lo, hi = LINEAR_RATIO
    linear_ok = bool(np.all((log_ratio[sel] >= math.log(lo)) & (log_ratio[sel] <= math.log(hi))))
    if f.kind == "phi" and f.lam.imag == 0.0 and abs(p - 2.0) > EQUALITY_TOL:
        measured = INDETERMINATE
        if f.lam.real != 0.0:
            envelope = oscillation_envelope(c_function(f.space, f.lam), c_function(f.space, -f.lam),
                                            f.lam.real)
    elif linear_ok:
        measured = LINEAR
    elif slope > dead_band:
        measured = GROWTH
    elif slope < -dead_band:
        measured = DECAY
    else:
        measured = INDETERMINATE
    return GrowthReport(p, tuple(R.tolist()), tuple(logM.tolist()), tuple(log_ratio.tolist()),
                        slope, integrand_rate, pred_rate, pred_class, measured, f.describe(), envelope)


def lp_spectrum_contains(space: RankOneSpace, p: float, w, tol: float = BOUNDARY_TOL) -> bool:
    """w in {z^2 + rho^2 : |Im z| <= |2/p - 1| rho} (closed region)."""
    p = _check_p(p, allow_inf=True)
    zeta = cmath.sqrt(complex(w) - space.rho ** 2)
    # the two roots differ by sign, so one |Im| covers both branches
    return abs(zeta.imag) <= abs(gamma_p(p)) * space.rho + tol


def psi(space: RankOneSpace, lam, t):
    """e^{(-|Im lam| - rho) t}."""
    lam = as_param(lam)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValidationError("psi needs t >= 0")
    out = np.exp((-abs(lam.imag) - space.rho) * t_arr)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class HardyResult:
    sup_value: float
    divergence_flag: bool
    running_sup: tuple
    t_grid: tuple
    ratio: float
    threshold: float


def hardy_functional(f: ModelEigenfunction, p: float, eps: float, t_grid) -> HardyResult:
    """sup_t t^eps psi_lam(a_t)^{-1} (K-mean of |f|^p)^{1/p} over the grid.

    For the models here |f| is constant on K-orbits (or carries a unit-norm
    angular factor), so the L^p mean over the sphere is |f(a_t)| for every p,
    including p = inf. The flag compares the running sup at T_max with that
    at T_max/2; the factor must reach max(2^{eps/2}, 1.01), the floor
    keeping rounding noise from tripping it at eps = 0.
    """
    _check_p(p, allow_inf=True)
    eps = float(eps)
    if eps < 0:
        raise ValidationError("eps must be >= 0")
    t = np.asarray(sorted(float(x) for x in t_grid), dtype=float)
    if t.size == 0:
        raise ValidationError("Hardy functional needs a nonempty t grid")
    if t[0] <= 0:
        raise ValidationError("Hardy grid must lie in t > 0")
    lam = f.lam
    logv = eps * np.log(t) + (abs(lam.imag) + f.space.rho) * t + f.log_abs(t)
    run = np.maximum.accumulate(logv)
    half = t[-1] / 2.0
    i_half = int(np.searchsorted(t, half, side="right")) - 1
    if i_half < 0:
        i_half = 0
    log_ratio = float(run[-1] - run[i_half])
    threshold = max(2.0 ** (eps / 2.0), 1.01)
    return HardyResult(float(math.exp(run[-1])), bool(log_ratio >= math.log(threshold)),
                       tuple(np.exp(run).tolist()), tuple(t.tolist()), math.exp(log_ratio),
                       threshold)
