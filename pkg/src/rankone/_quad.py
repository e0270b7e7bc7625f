"""Composite Gauss-Legendre quadrature in log space with panel doubling."""

import numpy as np

from .errors import ConvergenceError

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(20)


def _log_sum(logf, a, b, panels):
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    t = (mid[:, None] + half[:, None] * _NODES[None, :]).ravel()
    w = (half[:, None] * _WEIGHTS[None, :]).ravel()
    L = np.asarray(logf(t), dtype=float)
    finite = np.isfinite(L)
    if not finite.any():
        return -np.inf
    Lmax = L[finite].max()
    s = np.sum(w[finite] * np.exp(L[finite] - Lmax))
    return Lmax + np.log(s)


def log_integral(logf, a, b, rtol=1e-10, panels=2, max_panels=1 << 14):
    """Return ``(log I, est)`` for I = int_a^b exp(logf(t)) dt.

    ``logf`` must accept a numpy array. Panels are doubled until two
    successive estimates of log I differ by at most ``rtol`` (a relative
    error on I). ``est`` is that final difference.
    """
    if b == a:
        return -np.inf, 0.0
    prev = _log_sum(logf, a, b, panels)
    while panels < max_panels:
        panels *= 2
        cur = _log_sum(logf, a, b, panels)
        if np.isinf(cur) and np.isinf(prev):
            return cur, 0.0
        diff = abs(cur - prev)
        if diff <= rtol:
            return cur, diff
        prev = cur
    raise ConvergenceError(f"quadrature on [{a}, {b}] did not reach rtol={rtol}", tail=diff)
