"""Complex gamma function and the Gauss hypergeometric series on [0, 1)."""

import cmath
import math

from . import _kernels
from .errors import ConvergenceError, PoleError, ValidationError

# Lanczos approximation, g = 7, n = 9 (P. Godfrey's coefficient set, as
# reproduced in Numerical Recipes 3rd ed. and many standard libraries).
_LANCZOS_G = 7.0
_LANCZOS_P = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_POLE_TOL = 1e-14


def _as_complex(z, name="z") -> complex:
    try:
        z = complex(z)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be a number, got {z!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValidationError(f"{name} must be finite, got {z!r}")
    return z


def _near_nonpositive_integer(z: complex) -> bool:
    if abs(z.imag) > _POLE_TOL or z.real > _POLE_TOL:
        return False
    return abs(z.real - round(z.real)) <= _POLE_TOL


def _lanczos_log(z: complex) -> complex:
    # log Gamma(z) for Re z >= 0.5
    z -= 1.0
    x = _LANCZOS_P[0]
    for i in range(1, len(_LANCZOS_P)):
        x += _LANCZOS_P[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def log_complex_gamma(z) -> complex:
    """A branch of log Gamma(z); only exp() of the result is meaningful.

    Raises :class:`PoleError` at the nonpositive integers.
    """
    z = _as_complex(z)
    if _near_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at z = {z}")
    if z.real < 0.5:
        # reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        return math.log(math.pi) - cmath.log(cmath.sin(math.pi * z)) - _lanczos_log(1.0 - z)
    return _lanczos_log(z)


def complex_gamma(z) -> complex:
    """Gamma(z) for complex z off the nonpositive integers."""
    z = _as_complex(z)
    if z.imag == 0.0 and z.real > 0 and z.real == round(z.real) and z.real <= 20:
        return complex(math.factorial(int(z.real) - 1))
    return cmath.exp(log_complex_gamma(z))


def reciprocal_gamma(z) -> complex:
    """1/Gamma(z), entire; exactly zero at the nonpositive integers."""
    z = _as_complex(z)
    if _near_nonpositive_integer(z):
        return 0j
    return cmath.exp(-log_complex_gamma(z))


def gauss_2f1(a, b, c, z: float, tol: float = 1e-13, cap: int = 100_000) -> complex:
    """Gauss series 2F1(a, b; c; z) for complex parameters and real 0 <= z < 1.

    Summation stops once the estimated tail falls below ``tol`` times the
    partial sum. Convergence slows as z approaches 1 (roughly 1/(1 - z)
    terms per decade); no continuation beyond the unit interval is done.
    """
    a = _as_complex(a, "a")
    b = _as_complex(b, "b")
    c = _as_complex(c, "c")
    z = float(z)
    if not (0.0 <= z < 1.0):
        raise ValidationError(f"2F1 argument must lie in [0, 1), got {z}")
    if _near_nonpositive_integer(c):
        raise PoleError(f"2F1 lower parameter c = {c} is a nonpositive integer")
    value, n_terms, tail, ok = _kernels.hyp2f1_sum(a, b, c, z, tol, cap)
    if not ok:
        raise ConvergenceError(
            f"2F1({a}, {b}; {c}; {z}) not converged after {n_terms} terms "
            f"(tail estimate {tail:.3e})", tail=tail)
    return complex(value)
