"""Pure-Python implementations of the numerical hot loops.

Every function here has a twin with the identical signature in the compiled
``_ckernels`` extension. The two are kept algorithmically identical so that
either can serve as the reference for the other.
"""

import math

from . import _dop853 as _tab

# Status codes shared with the compiled kernels.
OK = 0
STEP_COLLAPSE = 1
MAX_STEPS = 2
NON_FINITE = 3

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0
_ERR_EXP = -1.0 / 8.0


def hc_coefficients(m1, m2, lam, K, variant):
    """Harish-Chandra coefficients Gamma_0..Gamma_K for mode (0, 0).

    ``variant`` 0 restricts the second sum to l >= 1; variant 1 admits l = 0
    and moves the resulting Gamma_{k+1} term to the left-hand side.
    Returns ``(coeffs, bad_k)`` with ``bad_k = -1`` on success, otherwise the
    index whose left-hand factor vanished or whose value overflowed.
    """
    rho = 0.5 * (m1 + 2 * m2)
    il = 1j * lam
    g = [0j] * (K + 1)
    g[0] = 1.0 + 0j
    # running sum over j <= k of (rho + 2j - i lam) Gamma_j
    s_all = 0j
    # parity-split running sums; j = k + 1 - 2l with l >= 1 shares parity with k + 1
    s_par = [0j, 0j]
    for k in range(K):
        w = (rho + 2 * k - il) * g[k]
        s_all += w
        s_par[k & 1] += w
        rhs = 0.5 * m1 * s_all + m2 * s_par[(k + 1) & 1]
        lhs = (k + 1) * (k + 1 - il)
        if variant == 1:
            lhs -= m2 * (rho + 2 * (k + 1) - il)
        if lhs == 0:
            return g, k + 1
        val = rhs / lhs
        if not (math.isfinite(val.real) and math.isfinite(val.imag)):
            return g, k + 1
        g[k + 1] = val
    return g, -1


def mode_series_coefficients(m1, m2, P, Q, lam, K):
    """Coefficients of the e^{-2t}-expansion of the mode solution ~ e^{(i lam - rho) t}.

    The radial equation u'' + A u' + (B + lam^2 + rho^2) u = 0 is expanded
    with A = 2 rho + sum a_k x^k, B = sum b_k x^k, x = e^{-2t}, where
    a_k = 2 m1 + 4 m2 [k even] and b_k = 4 k (P (-1)^{k+1} - Q).
    Returns ``(coeffs, bad_k)`` as :func:`hc_coefficients`.
    """
    rho = 0.5 * (m1 + 2 * m2)
    il = 1j * lam
    mu = il - rho
    g = [0j] * (K + 1)
    g[0] = 1.0 + 0j
    for n in range(1, K + 1):
        acc = 0j
        for j in range(n):
            d = n - j
            a = 2.0 * m1 + (4.0 * m2 if d % 2 == 0 else 0.0)
            b = 4.0 * d * (P * (1.0 if d % 2 == 1 else -1.0) - Q)
            acc += g[j] * (a * (mu - 2 * j) + b)
        lhs = 4.0 * n * (n - il)
        if lhs == 0:
            return g, n
        val = -acc / lhs
        if not (math.isfinite(val.real) and math.isfinite(val.imag)):
            return g, n
        g[n] = val
    return g, -1


def hyp2f1_sum(a, b, c, z, tol, cap):
    """Direct summation of 2F1(a, b; c; z) for real 0 <= z < 1.

    Returns ``(value, n_terms, tail, converged)``. Terms are rescaled by a
    tracked power of e once they exceed 1e280 so that huge intermediate
    partial sums do not overflow.
    """
    total = 1.0 + 0j
    term = 1.0 + 0j
    log_scale = 0.0
    tail = 0.0
    if z == 0.0:
        return total, 1, 0.0, True
    for k in range(cap):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        if abs(term) > 1e280:
            term *= 1e-280
            total *= 1e-280
            log_scale += 280.0 * math.log(10.0)
        total += term
        nxt = abs((a + k + 1) * (b + k + 1) / ((c + k + 1) * (k + 2))) * z
        if nxt < 1.0:
            tail = abs(term) * nxt / (1.0 - nxt)
            if k > 2 and tail <= tol * abs(total):
                if log_scale:
                    total *= math.exp(log_scale)
                return total, k + 2, tail, True
        else:
            tail = math.inf
    if log_scale:
        total *= math.exp(log_scale)
    return total, cap + 1, tail, False


def _coefficients(m1, m2, P, Q, t):
    th = math.tanh(t)
    ch = math.cosh(t)
    sh = math.sinh(t)
    A = m1 / th + 2.0 * m2 / math.tanh(2.0 * t)
    B = P / (ch * ch) - Q / (sh * sh)
    return A, B


def integrate_radial(m1, m2, P, Q, kappa, t0, u0, du0, stops, rtol, atol, h0,
                     max_steps):
    """Adaptive DOP853 integration of u'' + A u' + (B + kappa) u = 0.

    Integrates from ``t0`` through the monotone sequence ``stops`` (forward
    or backward), landing exactly on each stop. Error control uses a single
    scale shared by u and u', so the tolerance is relative to the size of
    the state vector rather than to each component.

    Returns ``(u, du, n_accepted, n_rejected, status)``; on failure the
    output lists are truncated to the stops reached.
    """
    Cn = _tab.C
    An = _tab.A
    Bn = _tab.B
    E3 = _tab.E3
    E5 = _tab.E5
    ns = _tab.N_STAGES

    def rhs(t, u, v):
        A, B = _coefficients(m1, m2, P, Q, t)
        return v, -(A * v + (B + kappa) * u)

    out_u = []
    out_du = []
    t = t0
    u = complex(u0)
    v = complex(du0)
    if len(stops) == 0:
        return out_u, out_du, 0, 0, OK
    direction = 1.0 if stops[-1] >= t0 else -1.0
    h_abs = abs(h0)
    n_acc = 0
    n_rej = 0
    fu, fv = rhs(t, u, v)
    ku = [0j] * (ns + 1)
    kv = [0j] * (ns + 1)
    for stop in stops:
        while (stop - t) * direction > 0.0:
            min_step = 10.0 * abs(math.nextafter(t, direction * math.inf) - t)
            if h_abs < min_step:
                return out_u, out_du, n_acc, n_rej, STEP_COLLAPSE
            rejected = False
            while True:
                if n_acc + n_rej >= max_steps:
                    return out_u, out_du, n_acc, n_rej, MAX_STEPS
                remaining = (stop - t) * direction
                land = h_abs >= remaining
                h = remaining * direction if land else h_abs * direction
                t_new = stop if land else t + h
                ku[0] = fu
                kv[0] = fv
                for s in range(1, ns):
                    a = An[s]
                    du_ = 0j
                    dv_ = 0j
                    for j in range(s):
                        du_ += a[j] * ku[j]
                        dv_ += a[j] * kv[j]
                    ku[s], kv[s] = rhs(t + Cn[s] * h, u + h * du_, v + h * dv_)
                su = 0j
                sv = 0j
                for j in range(ns):
                    su += Bn[j] * ku[j]
                    sv += Bn[j] * kv[j]
                u_new = u + h * su
                v_new = v + h * sv
                fu_new, fv_new = rhs(t_new, u_new, v_new)
                ku[ns] = fu_new
                kv[ns] = fv_new
                scale = atol + rtol * max(abs(u), abs(v), abs(u_new), abs(v_new))
                e5u = e5v = e3u = e3v = 0j
                for j in range(ns + 1):
                    e5u += E5[j] * ku[j]
                    e5v += E5[j] * kv[j]
                    e3u += E3[j] * ku[j]
                    e3v += E3[j] * kv[j]
                # divide before squaring: tiny states would underflow scale**2
                err5 = (abs(e5u) / scale) ** 2 + (abs(e5v) / scale) ** 2
                err3 = (abs(e3u) / scale) ** 2 + (abs(e3v) / scale) ** 2
                if err5 == 0.0 and err3 == 0.0:
                    err = 0.0
                else:
                    err = abs(h) * err5 / math.sqrt((err5 + 0.01 * err3) * 2.0)
                if not math.isfinite(err):
                    return out_u, out_du, n_acc, n_rej, NON_FINITE
                if err < 1.0:
                    if err == 0.0:
                        factor = _MAX_FACTOR
                    else:
                        factor = min(_MAX_FACTOR, _SAFETY * err ** _ERR_EXP)
                    if rejected:
                        factor = min(1.0, factor)
                    # a truncated landing step says little about the next one
                    if not land:
                        h_abs *= factor
                    n_acc += 1
                    break
                h_abs *= max(_MIN_FACTOR, _SAFETY * err ** _ERR_EXP)
                n_rej += 1
                rejected = True
                if h_abs < min_step:
                    return out_u, out_du, n_acc, n_rej, STEP_COLLAPSE
            t = t_new
            u = u_new
            v = v_new
            fu = fu_new
            fv = fv_new
        out_u.append(u)
        out_du.append(v)
    return out_u, out_du, n_acc, n_rej, OK
