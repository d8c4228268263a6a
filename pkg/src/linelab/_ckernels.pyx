# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled numeric kernels; see _pykernels.py for the reference version."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, hypot, floor, pow, fabs, NAN

cnp.import_array()

BACKEND = "cython"

cdef double _BUMP_MAXDISP = 0.5 * exp(-2.0)
cdef long _NONE = -(1 << 62)


cdef inline double c_phi(double a, double b, double c, double d, double x) noexcept nogil:
    cdef double s, t, L, yl, r
    if x <= a:
        return c + (x - a)
    if x >= b:
        return d + (x - b)
    if a == c and b == d:
        return x
    if b - a == d - c:
        return x + (c - a)
    s = x - a
    t = b - x
    L = d - c
    yl = (1.0 / t - 1.0 / s) * L
    r = hypot(2.0, yl)
    if yl <= 0.0:
        return c + 2.0 * L / (r + 2.0 - yl)
    return d - 2.0 * L / (r + 2.0 + yl)


cdef inline double c_dphi(double a, double b, double c, double d, double x) noexcept nogil:
    cdef double s, t, L, yl, r, sp, tp, ratio
    if x <= a or x >= b:
        return 1.0
    if b - a == d - c:
        return 1.0
    s = x - a
    t = b - x
    L = d - c
    yl = (1.0 / t - 1.0 / s) * L
    r = hypot(2.0, yl)
    if yl <= 0.0:
        sp = 2.0 * L / (r + 2.0 - yl)
        tp = L - sp
    else:
        tp = 2.0 * L / (r + 2.0 + yl)
        sp = L - tp
    ratio = (sp / s) * (tp / t)
    return ratio * ratio * (s * s + t * t) / (sp * sp + tp * tp)


cdef inline double c_bump_disp(double a, double b, double x) noexcept nogil:
    cdef double L, g
    if x <= a or x >= b:
        return 0.0
    L = b - a
    g = -0.5 * L / (b - x) - 0.5 * L / (x - a)
    return 0.5 * L * exp(g)


cdef inline double c_bump(double a, double b, double x) noexcept nogil:
    if x <= a or x >= b:
        return x
    return x + c_bump_disp(a, b, x)


cdef inline double c_bump_d(double a, double b, double x) noexcept nogil:
    cdef double L, s, r, g
    if x <= a or x >= b:
        return 1.0
    L = b - a
    s = x - a
    r = b - x
    g = -0.5 * L / r - 0.5 * L / s
    if g < -700.0:
        return 1.0
    return 1.0 + exp(g) * 0.25 * L * L * (1.0 / (s * s) - 1.0 / (r * r))


cdef double c_bump_inv(double a, double b, double y) noexcept nogil:
    cdef double L, lo, hi, x, F, xn, sc
    cdef int it
    if y <= a or y >= b:
        return y
    L = b - a
    lo = y - _BUMP_MAXDISP * L * 1.0000001
    if lo < a:
        lo = a
    hi = y
    x = y - c_bump_disp(a, b, y)
    if not (lo < x and x < hi):
        x = 0.5 * (lo + hi)
    for it in range(200):
        F = x + c_bump_disp(a, b, x) - y
        if F == 0.0:
            return x
        if F > 0.0:
            hi = x
        else:
            lo = x
        xn = x - F / c_bump_d(a, b, x)
        if not (lo < xn and xn < hi):
            xn = 0.5 * (lo + hi)
        sc = fabs(x)
        if sc < 1.0:
            sc = 1.0
        if fabs(xn - x) <= 4.4e-16 * sc or hi - lo <= 4.4e-16 * sc:
            return xn
        x = xn
    return x


cdef double c_bump_pow(long pw, double x) noexcept nogil:
    cdef long k
    if pw > 0:
        for k in range(pw):
            x = c_bump(-1.0, 1.0, x)
    else:
        for k in range(-pw):
            x = c_bump_inv(-1.0, 1.0, x)
    return x


cdef double c_bump_pow_d(long pw, double x) noexcept nogil:
    cdef double d = 1.0
    cdef long k
    if pw > 0:
        for k in range(pw):
            d *= c_bump_d(-1.0, 1.0, x)
            x = c_bump(-1.0, 1.0, x)
    else:
        for k in range(-pw):
            x = c_bump_inv(-1.0, 1.0, x)
            d /= c_bump_d(-1.0, 1.0, x)
    return d


cdef double c_bump_pow_disp(long pw, double x) noexcept nogil:
    cdef double tot = 0.0, dd, xn
    cdef long k
    if pw > 0:
        for k in range(pw):
            dd = c_bump_disp(-1.0, 1.0, x)
            tot += dd
            x += dd
    else:
        for k in range(-pw):
            xn = c_bump_inv(-1.0, 1.0, x)
            tot -= c_bump_disp(-1.0, 1.0, xn)
            x = xn
    return tot


cdef inline double c_gfun(double n, double q) noexcept nogil:
    if q == 1.0:
        return 1.0 / (n + 1.0)
    return pow(n + 1.0, -q)


cdef inline double c_cell_lo(long m, long p, double q) noexcept nogil:
    if p == 0:
        return -(m - 1.0)
    if p < 0:
        return -m + c_gfun(<double>(-p), q)
    return m - c_gfun(<double>(p - 1), q)


cdef inline double c_cell_hi(long m, long p, double q) noexcept nogil:
    if p == 0:
        return m - 1.0
    if p < 0:
        return -m + c_gfun(<double>(-p - 1), q)
    return m - c_gfun(<double>p, q)


cdef long c_locate(long m, double x, double q, double cap) noexcept nogil:
    cdef double e, nf
    cdef long side, n, p
    if -(m - 1.0) <= x and x <= m - 1.0:
        return 0
    if x < 0.0:
        e = x + m
        side = -1
    else:
        e = m - x
        side = 1
    if e <= 0.0:
        return _NONE
    nf = pow(1.0 / e, 1.0 / q) - 1.0
    if not (nf <= cap):
        return _NONE
    n = <long>floor(nf)
    if n < 0:
        n = 0
    p = side * (n + 1)
    while x < c_cell_lo(m, p, q):
        p -= 1
    while x > c_cell_hi(m, p, q):
        p += 1
    if fabs(<double>p) > cap + 1.0:
        return _NONE
    return p


cdef double c_stage(long i, long m, long pw, double q, double cap, bint strict, double x) noexcept nogil:
    cdef double fm, lo, hi, a0, b0, u, v
    cdef long p
    if pw == 0:
        return x
    if m == 1:
        return c_bump_pow(pw, x)
    fm = <double>m
    if x <= -fm or x >= fm:
        return x
    p = c_locate(m, x, q, cap)
    if p == _NONE:
        return NAN if strict else x
    lo = c_cell_lo(m, p, q)
    hi = c_cell_hi(m, p, q)
    if i == m:
        return c_phi(lo, hi, c_cell_lo(m, p + pw, q), c_cell_hi(m, p + pw, q), x)
    if p == 0:
        return c_stage(i, m - 1, pw, q, cap, strict, x)
    a0 = -(fm - 1.0)
    b0 = fm - 1.0
    u = c_phi(lo, hi, a0, b0, x)
    v = c_stage(i, m - 1, pw, q, cap, strict, u)
    if v != v:
        return v
    return c_phi(a0, b0, lo, hi, v)


cdef double c_stage_d(long i, long m, long pw, double q, double cap, bint strict, double x) noexcept nogil:
    cdef double fm, lo, hi, a0, b0, u, du, v, dv
    cdef long p
    if pw == 0:
        return 1.0
    if m == 1:
        return c_bump_pow_d(pw, x)
    fm = <double>m
    if x <= -fm or x >= fm:
        return 1.0
    p = c_locate(m, x, q, cap)
    if p == _NONE:
        return NAN if strict else 1.0
    lo = c_cell_lo(m, p, q)
    hi = c_cell_hi(m, p, q)
    if i == m:
        return c_dphi(lo, hi, c_cell_lo(m, p + pw, q), c_cell_hi(m, p + pw, q), x)
    if p == 0:
        return c_stage_d(i, m - 1, pw, q, cap, strict, x)
    a0 = -(fm - 1.0)
    b0 = fm - 1.0
    u = c_phi(lo, hi, a0, b0, x)
    du = c_dphi(lo, hi, a0, b0, x)
    v = c_stage(i, m - 1, pw, q, cap, strict, u)
    dv = c_stage_d(i, m - 1, pw, q, cap, strict, u)
    if v != v or dv != dv:
        return NAN
    return c_dphi(a0, b0, lo, hi, v) * dv * du


cdef double c_stage_disp(long i, long m, long pw, double q, double cap, bint strict, double x) noexcept nogil:
    cdef double fm, lo, hi, a0, b0, u, du, dist
    cdef long p
    if pw == 0:
        return 0.0
    if m == 1:
        return c_bump_pow_disp(pw, x)
    fm = <double>m
    if x <= -fm or x >= fm:
        return 0.0
    p = c_locate(m, x, q, cap)
    if p == _NONE:
        return NAN if strict else 0.0
    lo = c_cell_lo(m, p, q)
    hi = c_cell_hi(m, p, q)
    if i == m:
        return c_phi(lo, hi, c_cell_lo(m, p + pw, q), c_cell_hi(m, p + pw, q), x) - x
    if p == 0:
        return c_stage_disp(i, m - 1, pw, q, cap, strict, x)
    a0 = -(fm - 1.0)
    b0 = fm - 1.0
    u = c_phi(lo, hi, a0, b0, x)
    du = c_stage_disp(i, m - 1, pw, q, cap, strict, u)
    if du == 0.0 or du != du:
        return du
    dist = u - a0
    if b0 - u < dist:
        dist = b0 - u
    if fabs(du) <= 1e-3 * dist:
        return c_dphi(a0, b0, lo, hi, u + 0.5 * du) * du
    return c_phi(a0, b0, lo, hi, u + du) - x


# ---------------------------------------------------------------- python API

def phi(double a, double b, double c, double d, double x):
    return c_phi(a, b, c, d, x)


def dphi(double a, double b, double c, double d, double x):
    return c_dphi(a, b, c, d, x)


def bump(double a, double b, double x):
    return c_bump(a, b, x)


def bump_d(double a, double b, double x):
    return c_bump_d(a, b, x)


def bump_disp(double a, double b, double x):
    return c_bump_disp(a, b, x)


def bump_inv(double a, double b, double y):
    return c_bump_inv(a, b, y)


def gfun(double n, double q):
    return c_gfun(n, q)


def cell_lo(long m, long p, double q):
    return c_cell_lo(m, p, q)


def cell_hi(long m, long p, double q):
    return c_cell_hi(m, p, q)


def locate(long m, double x, double q, double cap):
    cdef long p = c_locate(m, x, q, cap)
    if p == _NONE:
        return None
    return p


def stage(long i, long m, long pw, double q, double cap, bint strict, double x):
    return c_stage(i, m, pw, q, cap, strict, x)


def stage_d(long i, long m, long pw, double q, double cap, bint strict, double x):
    return c_stage_d(i, m, pw, q, cap, strict, x)


def stage_disp(long i, long m, long pw, double q, double cap, bint strict, double x):
    return c_stage_disp(i, m, pw, q, cap, strict, x)


def _prep(xs):
    return np.ascontiguousarray(xs, dtype=np.float64)


def phi_array(double a, double b, double c, double d, xs):
    cdef double[::1] xv = _prep(xs)
    out = np.empty(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t k
    with nogil:
        for k in range(xv.shape[0]):
            ov[k] = c_phi(a, b, c, d, xv[k])
    return out


def dphi_array(double a, double b, double c, double d, xs):
    cdef double[::1] xv = _prep(xs)
    out = np.empty(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t k
    with nogil:
        for k in range(xv.shape[0]):
            ov[k] = c_dphi(a, b, c, d, xv[k])
    return out


def bump_array(double a, double b, xs):
    cdef double[::1] xv = _prep(xs)
    out = np.empty(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t k
    with nogil:
        for k in range(xv.shape[0]):
            ov[k] = c_bump(a, b, xv[k])
    return out


def bump_d_array(double a, double b, xs):
    cdef double[::1] xv = _prep(xs)
    out = np.empty(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t k
    with nogil:
        for k in range(xv.shape[0]):
            ov[k] = c_bump_d(a, b, xv[k])
    return out


def bump_disp_array(double a, double b, xs):
    cdef double[::1] xv = _prep(xs)
    out = np.empty(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t k
    with nogil:
        for k in range(xv.shape[0]):
            ov[k] = c_bump_disp(a, b, xv[k])
    return out


def bump_inv_array(double a, double b, xs):
    cdef double[::1] xv = _prep(xs)
    out = np.empty(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t k
    with nogil:
        for k in range(xv.shape[0]):
            ov[k] = c_bump_inv(a, b, xv[k])
    return out


def stage_array(long i, long m, long pw, double q, double cap, bint strict, xs):
    cdef double[::1] xv = _prep(xs)
    out = np.empty(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t k
    with nogil:
        for k in range(xv.shape[0]):
            ov[k] = c_stage(i, m, pw, q, cap, strict, xv[k])
    return out


def stage_d_array(long i, long m, long pw, double q, double cap, bint strict, xs):
    cdef double[::1] xv = _prep(xs)
    out = np.empty(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t k
    with nogil:
        for k in range(xv.shape[0]):
            ov[k] = c_stage_d(i, m, pw, q, cap, strict, xv[k])
    return out


def stage_disp_array(long i, long m, long pw, double q, double cap, bint strict, xs):
    cdef double[::1] xv = _prep(xs)
    out = np.empty(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t k
    with nogil:
        for k in range(xv.shape[0]):
            ov[k] = c_stage_disp(i, m, pw, q, cap, strict, xv[k])
    return out
