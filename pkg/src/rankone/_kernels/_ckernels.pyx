# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the routines in ``_pykernels``.

Signatures, return conventions and status codes match the pure-Python module
exactly; see its docstrings for the mathematics.
"""

from libc.math cimport sqrt, hypot, tanh, cosh, sinh, fabs, exp, log, isfinite, nextafter, INFINITY

from . import _dop853 as _tab

DEF NS = 12

cdef double _C[NS]
cdef double _A[NS][NS]
cdef double _B[NS]
cdef double _E3[NS + 1]
cdef double _E5[NS + 1]

OK = 0
STEP_COLLAPSE = 1
MAX_STEPS = 2
NON_FINITE = 3


cdef void _load_tableau():
    cdef int s, j
    for s in range(NS):
        _C[s] = _tab.C[s]
        _B[s] = _tab.B[s]
        for j in range(NS):
            _A[s][j] = 0.0
        for j in range(s):
            _A[s][j] = _tab.A[s][j]
    for s in range(NS + 1):
        _E3[s] = _tab.E3[s]
        _E5[s] = _tab.E5[s]


_load_tableau()


cdef inline double _cabs(double complex z) nogil:
    return hypot(z.real, z.imag)


cdef inline bint _cfinite(double complex z) nogil:
    return isfinite(z.real) and isfinite(z.imag)


def hc_coefficients(int m1, int m2, lam, int K, int variant):
    cdef double rho = 0.5 * (m1 + 2 * m2)
    cdef double complex il = 1j * complex(lam)
    cdef double complex s_all = 0
    cdef double complex s_par0 = 0
    cdef double complex s_par1 = 0
    cdef double complex w, rhs, lhs, val
    cdef int k
    g = [0j] * (K + 1)
    cdef double complex gk = 1.0
    g[0] = 1.0 + 0j
    for k in range(K):
        w = (rho + 2 * k - il) * gk
        s_all = s_all + w
        if k & 1:
            s_par1 = s_par1 + w
        else:
            s_par0 = s_par0 + w
        rhs = 0.5 * m1 * s_all + m2 * (s_par1 if (k + 1) & 1 else s_par0)
        lhs = (k + 1) * (k + 1 - il)
        if variant == 1:
            lhs = lhs - m2 * (rho + 2 * (k + 1) - il)
        if lhs == 0:
            return g, k + 1
        val = rhs / lhs
        if not _cfinite(val):
            return g, k + 1
        g[k + 1] = val
        gk = val
    return g, -1


def mode_series_coefficients(int m1, int m2, double P, double Q, lam, int K):
    cdef double rho = 0.5 * (m1 + 2 * m2)
    cdef double complex il = 1j * complex(lam)
    cdef double complex mu = il - rho
    cdef double complex acc, lhs, val
    cdef double a, b
    cdef int n, j, d
    cdef double complex[::1] buf
    import numpy as _np
    g = [0j] * (K + 1)
    arr = _np.zeros(K + 1, dtype=_np.complex128)
    buf = arr
    buf[0] = 1.0
    g[0] = 1.0 + 0j
    for n in range(1, K + 1):
        acc = 0
        for j in range(n):
            d = n - j
            a = 2.0 * m1 + (4.0 * m2 if d % 2 == 0 else 0.0)
            b = 4.0 * d * (P * (1.0 if d % 2 == 1 else -1.0) - Q)
            acc = acc + buf[j] * (a * (mu - 2 * j) + b)
        lhs = 4.0 * n * (n - il)
        if lhs == 0:
            return g, n
        val = -acc / lhs
        if not _cfinite(val):
            return g, n
        buf[n] = val
        g[n] = val
    return g, -1


def hyp2f1_sum(a, b, c, double z, double tol, int cap):
    cdef double complex ca = complex(a)
    cdef double complex cb = complex(b)
    cdef double complex cc = complex(c)
    cdef double complex total = 1.0
    cdef double complex term = 1.0
    cdef double log_scale = 0.0
    cdef double tail = 0.0
    cdef double nxt
    cdef int k
    if z == 0.0:
        return complex(total), 1, 0.0, True
    for k in range(cap):
        term = term * ((ca + k) * (cb + k) / ((cc + k) * (k + 1)) * z)
        if _cabs(term) > 1e280:
            term = term * 1e-280
            total = total * 1e-280
            log_scale += 280.0 * log(10.0)
        total = total + term
        nxt = _cabs((ca + k + 1) * (cb + k + 1) / ((cc + k + 1) * (k + 2))) * z
        if nxt < 1.0:
            tail = _cabs(term) * nxt / (1.0 - nxt)
            if k > 2 and tail <= tol * _cabs(total):
                if log_scale != 0.0:
                    total = total * exp(log_scale)
                return complex(total), k + 2, tail, True
        else:
            tail = INFINITY
    if log_scale != 0.0:
        total = total * exp(log_scale)
    return complex(total), cap + 1, tail, False


cdef inline void _rhs(double m1, double m2, double P, double Q, double complex kappa,
                      double t, double complex u, double complex v,
                      double complex* fu, double complex* fv) nogil:
    cdef double ch = cosh(t)
    cdef double sh = sinh(t)
    cdef double A = m1 / tanh(t) + 2.0 * m2 / tanh(2.0 * t)
    cdef double B = P / (ch * ch) - Q / (sh * sh)
    fu[0] = v
    fv[0] = -(A * v + (B + kappa) * u)


cdef int _integrate(double m1, double m2, double P, double Q, double complex kappa,
                    double t0, double complex u0, double complex du0,
                    double* stops, int nstops, double rtol, double atol, double h0,
                    long max_steps, double complex* out_u, double complex* out_du,
                    long* n_acc_out, long* n_rej_out, int* n_done) nogil:
    cdef double complex ku[NS + 1]
    cdef double complex kv[NS + 1]
    cdef double t = t0
    cdef double complex u = u0
    cdef double complex v = du0
    cdef double complex fu, fv, fu_new, fv_new, u_new, v_new
    cdef double complex du_, dv_, su, sv, e5u, e5v, e3u, e3v
    cdef double direction, h_abs, h, t_new, remaining, min_step, scale
    cdef double err5, err3, err, factor, stop
    cdef bint land, rejected
    cdef long n_acc = 0
    cdef long n_rej = 0
    cdef int i, s, j
    n_done[0] = 0
    if nstops == 0:
        n_acc_out[0] = 0
        n_rej_out[0] = 0
        return 0
    direction = 1.0 if stops[nstops - 1] >= t0 else -1.0
    h_abs = fabs(h0)
    _rhs(m1, m2, P, Q, kappa, t, u, v, &fu, &fv)
    for i in range(nstops):
        stop = stops[i]
        while (stop - t) * direction > 0.0:
            min_step = 10.0 * fabs(nextafter(t, direction * INFINITY) - t)
            if h_abs < min_step:
                n_acc_out[0] = n_acc
                n_rej_out[0] = n_rej
                return 1
            rejected = False
            while True:
                if n_acc + n_rej >= max_steps:
                    n_acc_out[0] = n_acc
                    n_rej_out[0] = n_rej
                    return 2
                remaining = (stop - t) * direction
                land = h_abs >= remaining
                if land:
                    h = remaining * direction
                    t_new = stop
                else:
                    h = h_abs * direction
                    t_new = t + h
                ku[0] = fu
                kv[0] = fv
                for s in range(1, NS):
                    du_ = 0
                    dv_ = 0
                    for j in range(s):
                        du_ = du_ + _A[s][j] * ku[j]
                        dv_ = dv_ + _A[s][j] * kv[j]
                    _rhs(m1, m2, P, Q, kappa, t + _C[s] * h, u + h * du_, v + h * dv_,
                         &ku[s], &kv[s])
                su = 0
                sv = 0
                for j in range(NS):
                    su = su + _B[j] * ku[j]
                    sv = sv + _B[j] * kv[j]
                u_new = u + h * su
                v_new = v + h * sv
                _rhs(m1, m2, P, Q, kappa, t_new, u_new, v_new, &fu_new, &fv_new)
                ku[NS] = fu_new
                kv[NS] = fv_new
                scale = _cabs(u)
                if _cabs(v) > scale:
                    scale = _cabs(v)
                if _cabs(u_new) > scale:
                    scale = _cabs(u_new)
                if _cabs(v_new) > scale:
                    scale = _cabs(v_new)
                scale = atol + rtol * scale
                e5u = 0
                e5v = 0
                e3u = 0
                e3v = 0
                for j in range(NS + 1):
                    e5u = e5u + _E5[j] * ku[j]
                    e5v = e5v + _E5[j] * kv[j]
                    e3u = e3u + _E3[j] * ku[j]
                    e3v = e3v + _E3[j] * kv[j]
                err5 = (_cabs(e5u) / scale) ** 2 + (_cabs(e5v) / scale) ** 2
                err3 = (_cabs(e3u) / scale) ** 2 + (_cabs(e3v) / scale) ** 2
                if err5 == 0.0 and err3 == 0.0:
                    err = 0.0
                else:
                    err = fabs(h) * err5 / sqrt((err5 + 0.01 * err3) * 2.0)
                if not isfinite(err):
                    n_acc_out[0] = n_acc
                    n_rej_out[0] = n_rej
                    return 3
                if err < 1.0:
                    if err == 0.0:
                        factor = 10.0
                    else:
                        factor = 0.9 * err ** (-1.0 / 8.0)
                        if factor > 10.0:
                            factor = 10.0
                    if rejected and factor > 1.0:
                        factor = 1.0
                    if not land:
                        h_abs *= factor
                    n_acc += 1
                    break
                factor = 0.9 * err ** (-1.0 / 8.0)
                if factor < 0.2:
                    factor = 0.2
                h_abs *= factor
                n_rej += 1
                rejected = True
                if h_abs < min_step:
                    n_acc_out[0] = n_acc
                    n_rej_out[0] = n_rej
                    return 1
            t = t_new
            u = u_new
            v = v_new
            fu = fu_new
            fv = fv_new
        out_u[i] = u
        out_du[i] = v
        n_done[0] = i + 1
    n_acc_out[0] = n_acc
    n_rej_out[0] = n_rej
    return 0


def integrate_radial(m1, m2, double P, double Q, kappa, double t0, u0, du0, stops,
                     double rtol, double atol, double h0, long max_steps):
    import numpy as _np
    cdef double[::1] st = _np.ascontiguousarray(stops, dtype=_np.float64)
    cdef int n = st.shape[0]
    ou = _np.zeros(max(n, 1), dtype=_np.complex128)
    odu = _np.zeros(max(n, 1), dtype=_np.complex128)
    cdef double complex[::1] bu = ou
    cdef double complex[::1] bdu = odu
    cdef long n_acc = 0
    cdef long n_rej = 0
    cdef int done = 0
    cdef int status
    cdef double cm1 = m1
    cdef double cm2 = m2
    cdef double complex ck = complex(kappa)
    cdef double complex cu0 = complex(u0)
    cdef double complex cdu0 = complex(du0)
    with nogil:
        status = _integrate(cm1, cm2, P, Q, ck, t0, cu0, cdu0, &st[0] if n > 0 else NULL,
                            n, rtol, atol, h0, max_steps, &bu[0], &bdu[0],
                            &n_acc, &n_rej, &done)
    return list(ou[:done]), list(odu[:done]), n_acc, n_rej, status
