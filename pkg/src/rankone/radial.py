"""Radial Helmholtz equation for a single (p, q) mode.

    u'' + A(t) u' + (B(t) + lam^2 + rho^2) u = 0,
    A = m1 coth t + 2 m2 coth 2t,
    B = p(p + m2 - 1)/cosh^2 t - q(q + m1 + m2 - 1)/sinh^2 t.

Solutions come from DOP853 integration (forward from the origin, or the
asymptotic frames from either end), from the e^{-2t} mode series, or from
hypergeometric closed forms. Everything returns immutable RadialSolution
objects that know how to evaluate themselves between grid points.
"""

import bisect
import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .errors import ExcludedParameterError, NumericalError, PoleError, ValidationError
from .harish_chandra import (T_MIN, _series_coefficients, as_param,
                             require_admissible)
from .space import RankOneSpace, log_jacobian
from .special import gauss_2f1

T0 = 1e-3
T_MAX = 30.0
RTOL = 1e-12
ATOL = 1e-300
MAX_STEPS = 200_000
FROBENIUS_ORDER = 24
SMALL_REAL_LAMBDA = 1e-6
RESIDUAL_LIMIT = 1e-5
CONDITION_LIMIT = 1e8
CROSS_CHECK_LIMIT = 1e-6

METHODS = ("forward_ode", "backward_frame_plus", "backward_frame_minus",
           "forward_frame_plus", "forward_frame_minus", "mode_series",
           "hypergeometric")
PARAMETER_SETS = ("corrected", "literal_u1", "literal_u2", "literal_abc")

_STATUS_TEXT = {
    _kernels.STEP_COLLAPSE: "step size collapsed",
    _kernels.MAX_STEPS: "step budget exhausted",
    _kernels.NON_FINITE: "non-finite state",
}


@dataclass(frozen=True)
class ModeIndex:
    p: int = 0
    q: int = 0

    def __post_init__(self):
        for name in ("p", "q"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 0:
                raise ValidationError(f"mode index {name} must be a nonnegative integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.q < self.p:
            raise ValidationError(f"mode index needs q >= p, got (p, q) = ({self.p}, {self.q})")

    def check(self, space: RankOneSpace) -> "ModeIndex":
        if space.m_2gamma == 0 and self.p != 0:
            raise ValidationError(f"p must be 0 when m_2gamma = 0, got p = {self.p}")
        return self

    @property
    def trivial(self) -> bool:
        return self.p == 0 and self.q == 0

    def __str__(self):
        return f"({self.p},{self.q})"


def as_mode(mode, space: Optional[RankOneSpace] = None) -> ModeIndex:
    if mode is None:
        mode = ModeIndex()
    elif not isinstance(mode, ModeIndex):
        if isinstance(mode, str):
            try:
                mode = tuple(int(x) for x in mode.strip("() ").split(","))
            except ValueError:
                raise ValidationError(f"cannot parse mode {mode!r}; expected p,q") from None
        try:
            p, q = mode
        except (TypeError, ValueError):
            raise ValidationError(f"mode must be a (p, q) pair, got {mode!r}") from None
        mode = ModeIndex(p, q)
    if space is not None:
        mode.check(space)
    return mode


def potential_constants(space: RankOneSpace, mode: ModeIndex):
    """(P, Q) with B(t) = P/cosh^2 t - Q/sinh^2 t."""
    p, q = mode.p, mode.q
    m1, m2 = space.m_gamma, space.m_2gamma
    return float(p * (p + m2 - 1)), float(q * (q + m1 + m2 - 1))


def radial_operator_coefficients(space: RankOneSpace, mode, t: float):
    """(A(t), B(t)) of the radial equation; singular at t = 0."""
    mode = as_mode(mode, space)
    t = float(t)
    if t <= 0.0:
        raise ValidationError(f"radial coefficients are singular at t = {t}; need t > 0")
    P, Q = potential_constants(space, mode)
    A = space.m_gamma / math.tanh(t) + 2.0 * space.m_2gamma / math.tanh(2.0 * t)
    B = P / math.cosh(t) ** 2 - Q / math.sinh(t) ** 2
    return A, B


def spectral_kappa(space: RankOneSpace, lam) -> complex:
    lam = as_param(lam).value
    return lam * lam + space.rho ** 2


# --- Frobenius data at the origin -----------------------------------------

def _series_inv(a, N):
    b = np.zeros(N, dtype=complex)
    b[0] = 1.0 / a[0]
    for k in range(1, N):
        b[k] = -np.dot(a[1:k + 1], b[k - 1::-1]) / a[0]
    return b


def _mul(a, b, N):
    return np.convolve(a, b)[:N]


@lru_cache(maxsize=64)
def _operator_taylor(m1, m2, P, Q, N):
    """Taylor coefficients of t*A(t) and t^2*B(t) at t = 0 (up to t^{N-1})."""
    k = np.arange(N)
    even = k % 2 == 0
    fact = np.array([math.factorial(int(j)) for j in range(N + 1)], dtype=float)
    sinh_over_t = np.where(even, 1.0 / fact[np.minimum(k + 1, N)], 0.0)
    cosh_ = np.where(even, 1.0 / fact[k], 0.0)
    inv_s = _series_inv(sinh_over_t.astype(complex), N)
    f = _mul(cosh_, inv_s, N).real            # t coth t
    tA = m1 * f + m2 * f * 2.0 ** k           # m1 f(t) + m2 f(2t)
    t2_sinh2 = _mul(inv_s, inv_s, N).real
    sech2 = _mul(_series_inv(cosh_.astype(complex), N), _series_inv(cosh_.astype(complex), N), N).real
    t2_cosh2 = np.concatenate([[0.0, 0.0], sech2[:N - 2]])
    t2B = P * t2_cosh2 - Q * t2_sinh2
    return tA, t2B


def frobenius_coefficients(space: RankOneSpace, lam, mode=None, order: int = FROBENIUS_ORDER):
    """a_k with u(t) = sum_k a_k t^{q+k}, a_0 = 1 (the regular branch)."""
    mode = as_mode(mode, space)
    P, Q = potential_constants(space, mode)
    kap = spectral_kappa(space, lam)
    tA, t2B = _operator_taylor(space.m_gamma, space.m_2gamma, P, Q, order)
    R = t2B.astype(complex)
    R[2] += kap
    q = mode.q
    n = space.dim
    a = np.zeros(order, dtype=complex)
    a[0] = 1.0
    for k in range(1, order):
        j = np.arange(1, k + 1)
        s = np.sum(a[k - j] * ((q + k - j) * tA[j] + R[j]))
        a[k] = -s / (k * (k + 2 * q + n - 2))
    return a


def frobenius_data(space, lam, mode=None, t0: float = T0, order: int = FROBENIUS_ORDER):
    """(u(t0), u'(t0)) of the regular solution normalized by u ~ t^q."""
    mode = as_mode(mode, space)
    a = frobenius_coefficients(space, lam, mode, order)
    q = mode.q
    powers = np.arange(order) + q
    u = np.sum(a * t0 ** powers)
    du = np.sum(a[powers > 0] * powers[powers > 0] * t0 ** (powers[powers > 0] - 1))
    return complex(u), complex(du)


# --- e^{-2t} mode series (asymptotic frames) -------------------------------

@lru_cache(maxsize=512)
def _mode_table(m1, m2, P, Q, lam, K):
    vals, bad = _kernels.mode_series_coefficients(m1, m2, P, Q, lam, K)
    if bad >= 0:
        raise NumericalError(f"mode series recursion failed at n = {bad} for lambda = {lam}")
    arr = np.asarray(vals, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


def mode_series(space: RankOneSpace, lam, mode, t, tol: float = 1e-14, t_min: float = T_MIN):
    """(u, u') of the solution sum_n G_n e^{(i lam - rho - 2n) t}, G_0 = 1."""
    lam = require_admissible(lam)
    mode = as_mode(mode, space)
    P, Q = potential_constants(space, mode)
    t = np.asarray(t, dtype=float)
    if t.size and t.min() < t_min:
        raise ValidationError(f"mode series needs t >= {t_min}, got {t.min()}")
    key = (space.m_gamma, space.m_2gamma, P, Q, lam.value)
    g = _series_coefficients(space, lam.value, float(t.min()) if t.size else t_min, tol, None,
                             table=lambda K: _mode_table(*key, K))
    mu = 1j * lam.value - space.rho
    n = np.arange(len(g))
    x = np.exp(-2.0 * t)
    s = np.polyval(g[::-1], x)
    ds = np.polyval((g * (mu - 2 * n))[::-1], x)
    lead = np.exp(mu * t)
    return lead * s, lead * ds


def mode_series_log_abs(space: RankOneSpace, lam, mode, t, tol: float = 1e-14,
                        t_min: float = T_MIN):
    """log|u(t)| for the mode-series solution, without overflow at large t."""
    lam = require_admissible(lam)
    mode = as_mode(mode, space)
    P, Q = potential_constants(space, mode)
    t = np.asarray(t, dtype=float)
    if t.size and t.min() < t_min:
        raise ValidationError(f"mode series needs t >= {t_min}, got {t.min()}")
    key = (space.m_gamma, space.m_2gamma, P, Q, lam.value)
    g = _series_coefficients(space, lam.value, float(t.min()) if t.size else t_min, tol, None,
                             table=lambda K: _mode_table(*key, K))
    s = np.polyval(g[::-1], np.exp(-2.0 * t))
    with np.errstate(divide="ignore"):
        return (-lam.imag - space.rho) * t + np.log(np.abs(s))


# --- solutions --------------------------------------------------------------

@dataclass(frozen=True)
class RadialSolution:
    """A solution sampled on a strictly increasing grid.

    ``evaluator(t) -> (u, u')`` fills in off-grid points; for integrated
    solutions it re-integrates from the nearest stored grid point.
    """

    space: RankOneSpace
    lam: object
    mode: ModeIndex
    grid: np.ndarray
    u: np.ndarray
    du: np.ndarray
    method: str
    residual_sup: float = math.nan
    evaluator: Optional[Callable] = field(default=None, repr=False, compare=False)
    domain: tuple = (0.0, math.inf)

    @property
    def valid(self) -> bool:
        return bool(self.residual_sup <= RESIDUAL_LIMIT)

    def _index(self, t):
        i = bisect.bisect_left(self.grid, t)
        if i < len(self.grid) and self.grid[i] == t:
            return i
        return None

    def at(self, t: float):
        """(u(t), u'(t)); grid values are returned as stored."""
        t = float(t)
        i = self._index(t)
        if i is not None:
            return complex(self.u[i]), complex(self.du[i])
        lo, hi = self.domain
        if not (lo <= t <= hi):
            raise ValidationError(f"t = {t} outside the solution domain [{lo}, {hi}]")
        if self.evaluator is None:
            raise ValidationError(f"t = {t} is not a grid point and no evaluator is attached")
        u, du = self.evaluator(t)
        return complex(u), complex(du)

    def value(self, t: float) -> complex:
        return self.at(t)[0]

    def with_residual(self, value: float) -> "RadialSolution":
        return RadialSolution(self.space, self.lam, self.mode, self.grid, self.u, self.du,
                              self.method, float(value), self.evaluator, self.domain)


def _freeze(arr, dtype):
    a = np.array(arr, dtype=dtype)
    a.setflags(write=False)
    return a


def _check_grid(grid, lo, hi, what):
    g = np.asarray(sorted(set(float(x) for x in grid)), dtype=float)
    if g.size == 0:
        raise ValidationError("grid is empty")
    if g[0] < lo or g[-1] > hi:
        raise ValidationError(f"{what} grid must lie in [{lo}, {hi}], got [{g[0]}, {g[-1]}]")
    return g


def integrate(space, lam, mode, t0, u0, du0, stops, rtol=RTOL, h0=None):
    """Integrate from (t0, u0, du0) through ``stops``; returns (u, du) arrays."""
    P, Q = potential_constants(space, mode)
    kap = spectral_kappa(space, lam)
    stops = [float(s) for s in stops]
    if h0 is None:
        h0 = min(0.01, max(abs(t0) * 0.1, 1e-6))
    u, du, _, _, status = _kernels.integrate_radial(
        space.m_gamma, space.m_2gamma, P, Q, kap, float(t0), complex(u0), complex(du0),
        stops, rtol, ATOL, h0, MAX_STEPS)
    if status != _kernels.OK:
        reached = stops[len(u) - 1] if u else t0
        raise NumericalError(
            f"radial integration failed ({_STATUS_TEXT.get(status, status)}) "
            f"after t = {reached} for lambda = {as_param(lam).value}")
    return np.asarray(u, dtype=complex), np.asarray(du, dtype=complex)


def _grid_evaluator(space, lam, mode, grid, u, du, rtol, lo, hi, fallback=None):
    def evaluate(t):
        if fallback is not None and t < grid[0]:
            return fallback(t)
        i = int(np.clip(np.searchsorted(grid, t), 1, len(grid) - 1))
        j = i if abs(grid[i] - t) < abs(grid[i - 1] - t) else i - 1
        if grid[j] == t:
            return u[j], du[j]
        uu, dd = integrate(space, lam, mode, grid[j], u[j], du[j], [t], rtol,
                           h0=min(0.01, abs(t - grid[j])))
        return uu[0], dd[0]
    return evaluate


def solve_forward(space: RankOneSpace, lam, mode=None, grid=None, t_max: float = None,
                  t0: float = T0, rtol: float = RTOL,
                  frobenius_order: int = FROBENIUS_ORDER) -> RadialSolution:
    """Regular solution from the origin (phi_lam itself for mode (0, 0)).

    Grid points at or below ``t0`` are filled from the Frobenius series.
    """
    lam = as_param(lam)
    mode = as_mode(mode, space)
    if grid is None:
        t_max = 10.0 if t_max is None else float(t_max)
        grid = np.linspace(0.0, t_max, int(round(t_max / 0.25)) + 1)
    g = _check_grid(grid, 0.0, math.inf, "forward")
    if not (0 < t0 < 0.1):
        raise ValidationError(f"Frobenius start t0 must lie in (0, 0.1), got {t0}")
    coeffs = frobenius_coefficients(space, lam, mode, frobenius_order)
    q = mode.q

    def frob(t):
        k = np.arange(len(coeffs)) + q
        u = np.sum(coeffs * t ** k)
        du = np.sum(coeffs[k > 0] * k[k > 0] * t ** (k[k > 0] - 1)) if t > 0 or q == 1 else 0j
        return complex(u), complex(du)

    u0, du0 = frob(t0)
    inner = g[g <= t0]
    outer = g[g > t0]
    us = [frob(t) for t in inner]
    u_in = np.array([x[0] for x in us], dtype=complex)
    du_in = np.array([x[1] for x in us], dtype=complex)
    u_out, du_out = (integrate(space, lam, mode, t0, u0, du0, outer, rtol)
                     if outer.size else (np.zeros(0, complex), np.zeros(0, complex)))
    u_all = np.concatenate([u_in, u_out])
    du_all = np.concatenate([du_in, du_out])
    # anchor the evaluator at t0 as well so off-grid points near 0 stay exact
    eval_grid = np.concatenate([[t0], outer])
    eval_u = np.concatenate([[u0], u_out])
    eval_du = np.concatenate([[du0], du_out])
    ev = _grid_evaluator(space, lam, mode, eval_grid, eval_u, eval_du, rtol, 0.0, math.inf,
                         fallback=frob)
    if len(eval_grid) == 1:
        def ev(t, _f=frob, _s=(space, lam, mode, t0, u0, du0, rtol)):
            if t <= t0:
                return _f(t)
            uu, dd = integrate(*_s[:6], [t], _s[6])
            return uu[0], dd[0]
    return RadialSolution(space, lam, mode, _freeze(g, float), _freeze(u_all, complex),
                          _freeze(du_all, complex), "forward_ode", evaluator=ev,
                          domain=(0.0, math.inf))


def _frame_branch(space, lam, mode, g, sign, T_max, rtol):
    bl = as_param(sign * lam.value)
    growth = -(sign * lam.value).imag
    other = (sign * lam.value).imag
    dominant = growth > other
    if dominant:
        # integrate away from the subdominant partner: forward from the left end
        t_start = float(g[0])
        u0, du0 = mode_series(space, bl, mode, t_start)
        rest = g[g > t_start]
        u, du = integrate(space, lam, mode, t_start, u0, du0, rest, rtol)
        u = np.concatenate([[u0], u])
        du = np.concatenate([[du0], du])
        method = "forward_frame_plus" if sign > 0 else "forward_frame_minus"
    else:
        u0, du0 = mode_series(space, bl, mode, T_max)
        rest = g[g < T_max][::-1]
        u, du = integrate(space, lam, mode, T_max, u0, du0, rest, rtol)
        u, du = u[::-1], du[::-1]
        if g[-1] == T_max:
            u = np.concatenate([u, [u0]])
            du = np.concatenate([du, [du0]])
        method = "backward_frame_plus" if sign > 0 else "backward_frame_minus"
    ev = _grid_evaluator(space, lam, mode, g, u, du, rtol, g[0], g[-1])
    return RadialSolution(space, bl, mode, _freeze(g, float), _freeze(u, complex),
                          _freeze(du, complex), method, evaluator=ev,
                          domain=(float(g[0]), float(g[-1])))


def frame_solutions(space: RankOneSpace, lam, mode=None, grid=None, T_max: float = T_MAX,
                    rtol: float = RTOL):
    """(u_1, u_2) with e^{-(+-i lam - rho) t} u_{1,2}(t) -> 1.

    Starting data come from the e^{-2t} mode series; each frame is then
    integrated in the direction in which it is numerically stable
    (backward from T_max when it is subdominant or oscillatory, forward
    from the left end of the grid when it dominates).
    """
    lam = require_admissible(lam)
    mode = as_mode(mode, space)
    if lam.imag == 0.0 and abs(lam.real) < SMALL_REAL_LAMBDA:
        raise ExcludedParameterError(
            f"frame is ill-conditioned for real lambda with |lambda| < {SMALL_REAL_LAMBDA}")
    T_max = float(T_max)
    if T_max < 25.0:
        raise ValidationError(f"T_max must be >= 25, got {T_max}")
    if grid is None:
        grid = np.arange(1.0, 10.0 + 1e-12, 0.25)
    g = _check_grid(grid, T_MIN, T_max, "frame")
    return (_frame_branch(space, lam, mode, g, +1, T_max, rtol),
            _frame_branch(space, lam, mode, g, -1, T_max, rtol))


def mode_series_solution(space, lam, mode=None, grid=None, sign: int = 1) -> RadialSolution:
    lam = require_admissible(lam)
    mode = as_mode(mode, space)
    bl = as_param(sign * lam.value)
    g = _check_grid(grid if grid is not None else np.arange(1.0, 10.0 + 1e-12, 0.25),
                    T_MIN, math.inf, "mode series")
    u, du = mode_series(space, bl, mode, g)

    def ev(t):
        a, b = mode_series(space, bl, mode, t)
        return complex(a), complex(b)
    return RadialSolution(space, bl, mode, _freeze(g, float), _freeze(u, complex),
                          _freeze(du, complex), "mode_series", evaluator=ev,
                          domain=(T_MIN, math.inf))


# --- hypergeometric closed forms -------------------------------------------

def _hyper_params(space, lam: complex, mode, parameter_set, branch):
    """(a, b, c, exponent E, natural_branch) with u = tanh^q (2 cosh)^E 2F1(a, b; c; sech^2)."""
    m1, m2 = space.m_gamma, space.m_2gamma
    rho = space.rho
    p, q = mode.p, mode.q
    if parameter_set == "corrected":
        s = 1 if branch == "plus" else -1
        l = s * 1j * lam - rho
        return (q - l + p) / 2, (q - l - p - m2 + 1) / 2, 1 - s * 1j * lam, l
    l = 1j * lam - rho
    if parameter_set == "literal_u1":
        return (q - l + p) / 2, (q - l - p - m2 + 1) / 2, 1 - 1j * lam, l
    if parameter_set == "literal_u2":
        return ((p + l + q - m1 + m2 + 1) / 2, (m1 + 2 * m2 + p + q + l) / 2,
                1 + 1j * lam, -1j * lam - rho)
    if parameter_set == "literal_abc":
        a = (q - l - p) / 2
        b = (q - l - p - m2 + 1) / 2
        c = q + (m1 + m2 + 1) / 2
        if branch == "plus":
            return a, b, a + b - c + 1, l
        e = c - a - b
        return c - a, c - b, e + 1, l - 2 * e
    raise ValidationError(f"parameter_set must be one of {PARAMETER_SETS}, got {parameter_set!r}")


_NATURAL_BRANCH = {"literal_u1": "plus", "literal_u2": "minus"}


def _check_branch(parameter_set, branch):
    if branch is None:
        branch = _NATURAL_BRANCH.get(parameter_set, "plus")
    if branch not in ("plus", "minus"):
        raise ValidationError(f"branch must be 'plus' or 'minus', got {branch!r}")
    nat = _NATURAL_BRANCH.get(parameter_set)
    if nat is not None and branch != nat:
        raise ValidationError(f"{parameter_set} only defines the {nat} branch")
    return branch


def hypergeometric_candidate_with_derivative(space, lam, mode, t, parameter_set="corrected",
                                             branch=None, t_min: float = T_MIN):
    lam = require_admissible(lam)
    mode = as_mode(mode, space)
    branch = _check_branch(parameter_set, branch)
    t = float(t)
    if t < t_min:
        raise ValidationError(f"hypergeometric candidate needs t >= {t_min}, got {t}")
    a, b, c, E = _hyper_params(space, lam.value, mode, parameter_set, branch)
    ch = math.cosh(t)
    th = math.tanh(t)
    z = 1.0 / (ch * ch)
    try:
        F = gauss_2f1(a, b, c, z)
        dF = a * b / c * gauss_2f1(a + 1, b + 1, c + 1, z)
    except PoleError:
        raise PoleError(
            f"2F1 lower parameter {c} is a nonpositive integer for lambda = {lam.value}") from None
    pref = th ** mode.q * cmath.exp(E * math.log(2.0 * ch))
    u = pref * F
    dlog = (mode.q / (math.sinh(t) * ch) if mode.q else 0.0) + E * th
    du = u * dlog + pref * dF * (-2.0 * z * th)
    return complex(u), complex(du)


def hypergeometric_candidate(space: RankOneSpace, lam, mode, t, parameter_set: str = "corrected",
                             branch: str = None) -> complex:
    """tanh^q t (2 cosh t)^E 2F1(a, b; c; sech^2 t) for the chosen parameter set.

    ``corrected`` satisfies the radial equation for every mode; the literal_*
    sets are the literal alternatives kept for comparison. The (2 cosh t)
    normalization makes each candidate ~ e^{E t} at infinity.
    """
    return hypergeometric_candidate_with_derivative(space, lam, mode, t, parameter_set, branch)[0]


def hypergeometric_solution(space, lam, mode=None, grid=None, parameter_set="corrected",
                            branch=None) -> RadialSolution:
    lam = require_admissible(lam)
    mode = as_mode(mode, space)
    branch = _check_branch(parameter_set, branch)
    g = _check_grid(grid if grid is not None else np.arange(1.0, 10.0 + 1e-12, 0.25),
                    T_MIN, math.inf, "hypergeometric")

    def ev(t):
        return hypergeometric_candidate_with_derivative(space, lam, mode, t, parameter_set, branch)
    vals = [ev(t) for t in g]
    return RadialSolution(space, lam, mode, _freeze(g, float),
                          _freeze([v[0] for v in vals], complex),
                          _freeze([v[1] for v in vals], complex), "hypergeometric",
                          evaluator=ev, domain=(T_MIN, math.inf))


# --- residual ---------------------------------------------------------------

def residual(space: RankOneSpace, lam, mode, solution, probes, h: float = None,
             floor: float = 1e-300) -> float:
    """sup over probes of |u'' + A u' + (B + lam^2 + rho^2) u| / scale.

    Derivatives are Richardson-extrapolated central differences of u alone
    (steps h and h/2). ``scale`` is sqrt(|u|^2 + |u'|^2/(|lam^2+rho^2|+1)),
    which stays away from zero at the zeros of oscillating solutions, and is
    clamped below by ``floor``. ``solution`` is a RadialSolution or a callable
    t -> u.
    """
    mode = as_mode(mode, space)
    kap = spectral_kappa(space, lam)
    auto = h is None
    if isinstance(solution, RadialSolution):
        lo, hi = solution.domain
        fn = solution.value
        h_base = 1e-2 if auto else float(h)
    else:
        lo, hi = T_MIN, math.inf
        fn = solution
        h_base = 1e-3 if auto else float(h)
    probes = [float(t) for t in probes]
    if not probes:
        raise ValidationError("residual needs at least one probe")
    # solutions vary like e^{(+-i lam - rho) t}; keep h |rate| small
    rate_step = 0.05 / (space.rho + abs(as_param(lam).value) + 1.0)
    worst = 0.0
    for t in probes:
        # near the origin the t^{2-n} branch makes high derivatives large;
        # an explicit h is honoured exactly so grid-aligned probes stay on the grid
        h = min(h_base, 2e-3 * t, rate_step) if auto else h_base
        if t - h < max(lo, 0.0) or t + h > hi or t - 2 * h <= 0.0:
            raise ValidationError(f"probe t = {t} is closer than 2h = {2 * h} to the domain edge")
        f = {k: complex(fn(t + k * h / 2)) for k in (-2, -1, 0, 1, 2)}
        d2_h = (f[2] - 2 * f[0] + f[-2]) / h ** 2
        d2_h2 = (f[1] - 2 * f[0] + f[-1]) / (h / 2) ** 2
        d1_h = (f[2] - f[-2]) / (2 * h)
        d1_h2 = (f[1] - f[-1]) / h
        d2 = (4 * d2_h2 - d2_h) / 3
        d1 = (4 * d1_h2 - d1_h) / 3
        A, B = radial_operator_coefficients(space, mode, t)
        r = abs(d2 + A * d1 + (B + kap) * f[0])
        scale = max(math.sqrt(abs(f[0]) ** 2 + abs(d1) ** 2 / (abs(kap) + 1.0)), floor)
        worst = max(worst, r / scale)
    return worst


def default_probes(solution: RadialSolution, h: float = 1e-2, count: int = 6):
    lo = max(float(solution.grid[0]), solution.domain[0], 2 * h) + 2 * h
    hi = min(float(solution.grid[-1]), solution.domain[1]) - 2 * h
    if hi <= lo:
        return [0.5 * (lo + hi)]
    return list(np.linspace(lo, hi, count))


def checked(solution: RadialSolution, probes=None, h: float = None) -> RadialSolution:
    """Attach residual_sup; the result's ``valid`` reports the 1e-5 limit."""
    probes = default_probes(solution, h or 1e-2) if probes is None else probes
    r = residual(solution.space, solution.lam, solution.mode, solution, probes, h)
    return solution.with_residual(r)


# --- connection coefficients -------------------------------------------------

@dataclass(frozen=True)
class ConnectionCoefficients:
    c1: complex
    c2: complex
    conditioning: float
    probes: tuple
    defect: float


def connection_coefficients(u: RadialSolution, frames, t_a: float = 1.0, t_b: float = 2.0,
                            t_c: float = 1.5, condition_limit: float = CONDITION_LIMIT,
                            defect_limit: float = CROSS_CHECK_LIMIT) -> ConnectionCoefficients:
    """Solve u = c1 u_1 + c2 u_2 from values at t_a, t_b; verify at t_c.

    The 2x2 system is column-scaled before its condition number is taken so
    that the very different sizes of dominant and subdominant frames do not
    count against it.
    """
    u1, u2 = frames
    if not (t_a < t_b):
        raise ValidationError("connection probes need t_a < t_b")
    M = np.array([[u1.value(t_a), u2.value(t_a)], [u1.value(t_b), u2.value(t_b)]], dtype=complex)
    rhs = np.array([u.value(t_a), u.value(t_b)], dtype=complex)
    col = np.max(np.abs(M), axis=0)
    if np.any(col == 0):
        raise NumericalError("connection system has a vanishing frame column")
    Ms = M / col
    cond = float(np.linalg.cond(Ms))
    if not math.isfinite(cond) or cond > condition_limit:
        raise NumericalError(f"connection system ill-conditioned (cond = {cond:.3e})")
    y = np.linalg.solve(Ms, rhs)
    c = y / col
    pred = c[0] * u1.value(t_c) + c[1] * u2.value(t_c)
    actual = u.value(t_c)
    defect = abs(pred - actual) / max(abs(actual), 1e-300)
    if defect > defect_limit:
        raise NumericalError(
            f"connection cross-check at t = {t_c} failed (relative defect {defect:.3e})")
    return ConnectionCoefficients(complex(c[0]), complex(c[1]), cond, (t_a, t_b, t_c), float(defect))


def wronskian(f: RadialSolution, g: RadialSolution, t: float) -> complex:
    fu, fd = f.at(t)
    gu, gd = g.at(t)
    return fu * gd - gu * fd


def abel_invariant(f: RadialSolution, g: RadialSolution, t: float) -> complex:
    """J(t) W(f, g)(t); constant in t because A = J'/J."""
    return cmath.exp(complex(log_jacobian(f.space, t))) * wronskian(f, g, t)


def wronskian_coefficients(u: RadialSolution, frames, t: float):
    """(c1, c2) from Wronskians at a single point; an independent extraction."""
    u1, u2 = frames
    w12 = wronskian(u1, u2, t)
    return wronskian(u, u2, t) / w12, wronskian(u1, u, t) / w12
