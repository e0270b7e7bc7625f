"""Harish-Chandra series, c-function and the spherical function via its expansion.

Phi_lam(a_t) = e^{(i lam - rho) t} sum_k Gamma_k(lam) e^{-2kt} is evaluated from
the coefficient recursion; phi_lam = c(lam) Phi_lam + c(-lam) Phi_{-lam}. The
c-function's lambda-dependent factor comes from a closed form while its
constant prefactor is calibrated once per space against the radial ODE.
"""

import cmath
import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import (ExcludedParameterError, NumericalError, PoleError,
                     ValidationError)
from .space import RankOneSpace
from .special import _as_complex, log_complex_gamma

LATTICE_TOL = 1e-12
T_MIN = 0.5
TERM_CAP = 4096

VARIANTS = ("A", "B")
DEFAULT_VARIANT = "A"
C_FORMULAS = ("standard", "literal")
DEFAULT_C_FORMULA = "standard"

# reference point for the c-function normalization; Im < 0 so the
# c(-lam) Phi_{-lam} part is negligible at T_CAL
LAMBDA_REF = 0.37 - 1.2j
T_CAL = 15.0


@dataclass(frozen=True)
class SpectralParam:
    """A complex spectral parameter lambda."""

    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", _as_complex(self.value, "lambda"))

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def imag(self) -> float:
        return self.value.imag

    def is_excluded(self, tol: float = LATTICE_TOL) -> bool:
        """True on the lattice i*Z (including 0)."""
        lam = self.value
        return abs(lam.real) <= tol and abs(lam.imag - round(lam.imag)) <= tol

    def is_real(self) -> bool:
        return self.value.imag == 0.0

    @property
    def half_plane(self) -> str:
        if self.value.imag > 0:
            return "upper"
        if self.value.imag < 0:
            return "lower"
        return "real"

    def __neg__(self):
        return SpectralParam(-self.value)

    def __complex__(self):
        return self.value


def as_param(lam) -> SpectralParam:
    if isinstance(lam, SpectralParam):
        return lam
    if isinstance(lam, str):
        from .parsing import parse_complex
        lam = parse_complex(lam)
    return SpectralParam(lam)


def require_admissible(lam) -> SpectralParam:
    lam = as_param(lam)
    if lam.is_excluded():
        raise ExcludedParameterError(f"lambda = {lam.value} lies on the excluded lattice i*Z")
    return lam


@dataclass(frozen=True)
class HCCoefficients:
    """Gamma_0..Gamma_K for one space and lambda; ``values`` is read-only."""

    space: RankOneSpace
    lam: SpectralParam
    values: np.ndarray
    variant: str

    @property
    def order(self) -> int:
        return len(self.values) - 1

    def growth_fit(self):
        """Least-squares (c, d) with |Gamma_k| <= c k^d on the computed range."""
        return _growth_fit(self.values)


@lru_cache(maxsize=512)
def _coefficient_table(m1, m2, lam, K, variant):
    vals, bad = _kernels.hc_coefficients(m1, m2, lam, K, VARIANTS.index(variant))
    if bad >= 0:
        raise NumericalError(
            f"Gamma_k recursion failed at k = {bad} for lambda = {lam} "
            f"(vanishing left factor or overflow)")
    arr = np.asarray(vals, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


def gamma_coefficients(space: RankOneSpace, lam, K: int, variant: str = DEFAULT_VARIANT) -> HCCoefficients:
    """Coefficients of the Harish-Chandra series up to order K.

    The recursion is applied from k = 0 (Gamma_1 needs it). ``variant`` picks
    the range of the second sum: "A" takes l >= 1, "B" also admits l = 0 and
    moves that term to the left side.
    """
    lam = require_admissible(lam)
    if variant not in VARIANTS:
        raise ValidationError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if K < 0:
        raise ValidationError("K must be >= 0")
    vals = _coefficient_table(space.m_gamma, space.m_2gamma, lam.value, int(K), variant)
    return HCCoefficients(space, lam, vals, variant)


def _growth_fit(values):
    k = np.arange(1, len(values))
    mag = np.abs(values[1:])
    keep = mag > 0
    if keep.sum() < 2:
        c = float(mag.max()) if len(mag) else 0.0
        return max(c, 0.0), 0.0
    d = float(np.polyfit(np.log(k[keep]), np.log(mag[keep]), 1)[0])
    d = max(d, 0.0)
    c = float(np.max(mag[keep] / k[keep] ** d))
    return c, d


def tail_bound(values, t: float) -> float:
    """Bound on sum_{k>K} |Gamma_k| e^{-2kt} assuming |Gamma_k| <= c k^d."""
    c, d = _growth_fit(values)
    K = len(values) - 1
    x = math.exp(-2.0 * t)
    ratio = x * (1.0 + 1.0 / (K + 1)) ** d
    if ratio >= 1.0:
        return math.inf
    return c * (K + 1) ** d * x ** (K + 1) / (1.0 - ratio)


def _series_coefficients(space, lam, t_lo, tol, variant, table=None):
    """Smallest tabulated prefix whose tail bound at t_lo is below tol * |sum|."""
    K = 16
    while True:
        if table is None:
            vals = _coefficient_table(space.m_gamma, space.m_2gamma, lam, K, variant)
        else:
            vals = table(K)
        partial = abs(np.polyval(vals[::-1], math.exp(-2.0 * t_lo)))
        if tail_bound(vals, t_lo) <= tol * partial:
            return vals
        if K >= TERM_CAP:
            raise NumericalError(
                f"series tail bound not reached with {K} terms at t = {t_lo} "
                f"for lambda = {lam}")
        K *= 2


def _check_t(t, t_min):
    t = np.asarray(t, dtype=float)
    if t.size and t.min() < t_min:
        raise ValidationError(f"series evaluation needs t >= {t_min}, got {t.min()}")
    return t


def series_sum(space, lam, t, tol=1e-10, variant=DEFAULT_VARIANT, t_min=T_MIN):
    """sum_k Gamma_k(lam) e^{-2kt}, i.e. e^{-(i lam - rho) t} Phi_lam(a_t)."""
    lam = require_admissible(lam)
    t = _check_t(t, t_min)
    vals = _series_coefficients(space, lam.value, float(t.min()) if t.size else t_min, tol, variant)
    return np.polyval(vals[::-1], np.exp(-2.0 * t))


def phi_big(space: RankOneSpace, lam, t, tol: float = 1e-10,
            variant: str = DEFAULT_VARIANT, t_min: float = T_MIN):
    """Phi_lam(a_t) from the truncated Harish-Chandra series (scalar or array t)."""
    lam = require_admissible(lam)
    t_arr = _check_t(t, t_min)
    s = series_sum(space, lam, t_arr, tol, variant, t_min)
    out = np.exp((1j * lam.value - space.rho) * t_arr) * s
    return complex(out) if out.ndim == 0 else out


# --- c-function ------------------------------------------------------------

def _log_c_factor(space, lam: complex, formula: str) -> complex:
    """log of the lambda-dependent part of c(lam); PoleError at numerator poles."""
    il = 1j * lam
    rho = space.rho
    mg = space.m_gamma
    if formula == "standard":
        num = log_complex_gamma(il) - il * math.log(2.0)
        den = [(rho + il) / 2, (mg / 2 + 1 + il) / 2]
    elif formula == "literal":
        num = log_complex_gamma(il) + log_complex_gamma((mg + il) / 2)
        den = [mg / 2 + il, (rho + il) / 2]
    else:
        raise ValidationError(f"formula must be one of {C_FORMULAS}, got {formula!r}")
    total = num
    for z in den:
        try:
            total -= log_complex_gamma(z)
        except PoleError:
            return -math.inf + 0j
    return total


def _c_factor(space, lam, formula):
    lg = _log_c_factor(space, lam, formula)
    if lg.real == -math.inf:
        return 0j
    return cmath.exp(lg)


_kappa_lock = threading.Lock()
_kappa_cache = {}


def c_function_limit(space: RankOneSpace, lam, t: float = T_CAL, **solver_kw) -> complex:
    """e^{-(i lam - rho) t} phi_lam(a_t) with phi from the forward radial ODE."""
    from .radial import solve_forward
    lam = as_param(lam)
    sol = solve_forward(space, lam, grid=[t], **solver_kw)
    return complex(sol.u[-1] * cmath.exp(-(1j * lam.value - space.rho) * t))


def kappa(space: RankOneSpace, formula: str = DEFAULT_C_FORMULA) -> complex:
    """Normalization constant of c(lam); computed once per (space, formula)."""
    key = (space.key, formula)
    val = _kappa_cache.get(key)
    if val is not None:
        return val
    with _kappa_lock:
        val = _kappa_cache.get(key)
        if val is None:
            from .radial import solve_forward
            sol = solve_forward(space, LAMBDA_REF, grid=[T_CAL])
            # dividing by Phi rather than its leading exponential removes the
            # e^{-2t} corrections; c(-lam) Phi_{-lam} is O(e^{2 Im(lam) T_CAL})
            ratio = complex(sol.u[-1]) / phi_big(space, LAMBDA_REF, T_CAL, tol=1e-14)
            val = ratio / _c_factor(space, LAMBDA_REF, formula)
            _kappa_cache[key] = val
    return val


def c_function(space: RankOneSpace, lam, formula: str = DEFAULT_C_FORMULA) -> complex:
    """Harish-Chandra c-function, normalized by the ODE limit at LAMBDA_REF.

    Poles (PoleError) sit where Gamma(i lam) does, lam in i*Z_{>=0}; further
    numerator poles of the ``literal`` formula are reported the same way.
    """
    lam = as_param(lam)
    return kappa(space, formula) * _c_factor(space, lam.value, formula)


def spherical_phi_series(space: RankOneSpace, lam, t, tol: float = 1e-10,
                         formula: str = DEFAULT_C_FORMULA,
                         variant: str = DEFAULT_VARIANT, t_min: float = T_MIN):
    """phi_lam(a_t) = c(lam) Phi_lam(a_t) + c(-lam) Phi_{-lam}(a_t)."""
    lam = require_admissible(lam)
    t_arr = _check_t(t, t_min)
    a = c_function(space, lam, formula) * phi_big(space, lam, t_arr, tol, variant, t_min)
    b = c_function(space, -lam, formula) * phi_big(space, -lam, t_arr, tol, variant, t_min)
    out = a + b
    return complex(out) if np.ndim(out) == 0 else out


def log_abs_phi_series(space, lam, t, tol=1e-10, t_min=1.0):
    """log|phi_lam(a_t)| without overflow for large t (used by the L^p masses)."""
    lam = require_admissible(lam)
    t_arr = _check_t(t, t_min)
    s_plus = series_sum(space, lam, t_arr, tol, t_min=t_min)
    s_minus = series_sum(space, -lam, t_arr, tol, t_min=t_min)
    la = cmath.log(c_function(space, lam)) + 1j * lam.value * t_arr + np.log(s_plus)
    lb = cmath.log(c_function(space, -lam)) - 1j * lam.value * t_arr + np.log(s_minus)
    return -space.rho * t_arr + log_abs_sum(la, lb)


def log_abs_sum(la, lb):
    """log|e^la + e^lb| for complex log-magnitudes la, lb."""
    la = np.asarray(la, dtype=np.complex128)
    lb = np.asarray(lb, dtype=np.complex128)
    m = np.maximum(la.real, lb.real)
    with np.errstate(divide="ignore"):
        return m + np.log(np.abs(np.exp(la - m) + np.exp(lb - m)))
