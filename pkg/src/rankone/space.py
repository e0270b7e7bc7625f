"""Rank-one symmetric spaces parametrized by their root multiplicities."""

import math
import re
from dataclasses import dataclass

import numpy as np

from ._quad import log_integral
from .errors import ValidationError

# Standard multiplicity presets (m_gamma, m_2gamma); not derived here.
FAMILIES = {
    "real": lambda n: (n - 1, 0),
    "complex": lambda m: (2 * m - 2, 1),
    "quaternionic": lambda m: (4 * m - 4, 3),
    "octonionic": lambda _: (8, 7),
}
_FAMILY_MIN = {"real": 2, "complex": 2, "quaternionic": 2, "octonionic": 2}
_ALIASES = {
    "real_hyperbolic": "real", "h": "real", "real": "real",
    "complex_hyperbolic": "complex", "complex": "complex",
    "quaternionic_hyperbolic": "quaternionic", "quaternionic": "quaternionic",
    "octonionic_plane": "octonionic", "octonionic": "octonionic",
}


@dataclass(frozen=True)
class RankOneSpace:
    """G/K of real rank one, determined by the multiplicities of gamma and 2*gamma."""

    m_gamma: int
    m_2gamma: int
    family: str | None = None

    def __post_init__(self):
        for name in ("m_gamma", "m_2gamma"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise ValidationError(f"{name} must be an integer, got {v!r}")
        if self.m_2gamma < 0:
            raise ValidationError(f"m_2gamma must be >= 0, got {self.m_2gamma}")
        if self.m_gamma < 1:
            raise ValidationError(f"m_gamma must be >= 1, got {self.m_gamma}")
        object.__setattr__(self, "m_gamma", int(self.m_gamma))
        object.__setattr__(self, "m_2gamma", int(self.m_2gamma))

    @property
    def two_rho(self) -> int:
        return self.m_gamma + 2 * self.m_2gamma

    @property
    def rho(self) -> float:
        return self.two_rho / 2

    @property
    def dim(self) -> int:
        return self.m_gamma + self.m_2gamma + 1

    @property
    def key(self) -> tuple[int, int]:
        return (self.m_gamma, self.m_2gamma)

    def descriptor(self) -> dict:
        return {"m_gamma": self.m_gamma, "m_2gamma": self.m_2gamma,
                "family": self.family, "rho": self.rho, "n": self.dim}

    def __str__(self):
        base = f"({self.m_gamma},{self.m_2gamma})"
        return f"{self.family} {base}" if self.family else base


def real_hyperbolic(n: int) -> RankOneSpace:
    return _preset("real", n)


def complex_hyperbolic(m: int) -> RankOneSpace:
    return _preset("complex", m)


def quaternionic_hyperbolic(m: int) -> RankOneSpace:
    return _preset("quaternionic", m)


def octonionic_plane() -> RankOneSpace:
    return _preset("octonionic", 2)


def _preset(family, size):
    if isinstance(size, bool) or not isinstance(size, (int, np.integer)):
        raise ValidationError(f"family size must be an integer, got {size!r}")
    if size < _FAMILY_MIN[family]:
        raise ValidationError(f"{family} family needs size >= {_FAMILY_MIN[family]}, got {size}")
    mg, m2g = FAMILIES[family](int(size))
    label = "octonionic" if family == "octonionic" else f"{family}:{size}"
    return RankOneSpace(mg, m2g, family=label)


def make_space(desc) -> RankOneSpace:
    """Build a space from a preset name, a ``(m_gamma, m_2gamma)`` pair or a space.

    Accepted forms: ``"real:3"``, ``"octonionic"``, ``"2,1"``, ``("complex_hyperbolic", 2)``,
    ``(2, 1)``, or an existing :class:`RankOneSpace`.
    """
    if isinstance(desc, RankOneSpace):
        return desc
    if isinstance(desc, str):
        pair = re.fullmatch(r"\s*(\d+)\s*,\s*(\d+)\s*", desc)
        if pair:
            return RankOneSpace(int(pair.group(1)), int(pair.group(2)))
        m = re.fullmatch(r"\s*([a-z_]+)\s*(?::\s*(\d+))?\s*", desc.lower())
        if not m or m.group(1) not in _ALIASES:
            raise ValidationError(f"unknown space family {desc!r}")
        family = _ALIASES[m.group(1)]
        if family == "octonionic":
            return octonionic_plane()
        if m.group(2) is None:
            raise ValidationError(f"family {family!r} needs a size, e.g. '{family}:3'")
        return _preset(family, int(m.group(2)))
    if isinstance(desc, (tuple, list)) and len(desc) == 2:
        first, second = desc
        if isinstance(first, str):
            return make_space(f"{first}:{second}")
        return RankOneSpace(first, second)
    raise ValidationError(f"cannot build a space from {desc!r}")


def log_jacobian(space: RankOneSpace, t):
    """log J(t), stable for large t (J normalized with unit constant)."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        e = np.exp(-2.0 * t)
        log_2sinh = t + np.log(-np.expm1(-2.0 * t))
        log_cosh = t - math.log(2.0) + np.log1p(e)
        out = (space.m_gamma + space.m_2gamma) * log_2sinh + space.m_2gamma * log_cosh
    if np.any(t < 0):
        raise ValidationError("jacobian needs t >= 0")
    return out[()] if out.ndim == 0 else out


def jacobian(space: RankOneSpace, t):
    """(2 sinh t)^{m_gamma + m_2gamma} (cosh t)^{m_2gamma}."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValidationError("jacobian needs t >= 0")
    out = (2.0 * np.sinh(t_arr)) ** (space.m_gamma + space.m_2gamma) * np.cosh(t_arr) ** space.m_2gamma
    return float(out) if out.ndim == 0 else out


def log_ball_volume(space: RankOneSpace, r: float, rtol: float = 1e-10) -> float:
    if r < 0:
        raise ValidationError("radius must be >= 0")
    if r == 0:
        return -math.inf
    # J vanishes like t^{n-1} at the origin; nodes never hit t = 0 exactly
    val, _ = log_integral(lambda t: log_jacobian(space, t), 0.0, float(r), rtol=rtol)
    return float(val)


def ball_volume(space: RankOneSpace, r: float, rtol: float = 1e-10) -> float:
    """Volume of the geodesic ball of radius r: the integral of J over [0, r]."""
    return math.exp(log_ball_volume(space, r, rtol))
