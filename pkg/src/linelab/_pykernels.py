"""Pure-Python numeric kernels.

This module mirrors ``_ckernels.pyx`` function for function.  It is the
fallback used when the compiled extension is missing or when
``LINELAB_PURE_PYTHON=1`` is set.  Keep the two in lockstep; the parity
tests compare them on random inputs.
"""

import math

import numpy as np

BACKEND = "python"

_INF = math.inf
_NAN = math.nan
_BUMP_MAXDISP = math.exp(-2.0) * 0.5  # max displacement of the bump on a unit-length interval


# ---------------------------------------------------------------- chart maps

def phi(a, b, c, d, x):
    """Equivariant map [a,b] -> [c,d], extended by translations outside."""
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
    r = math.hypot(2.0, yl)
    if yl <= 0.0:
        return c + 2.0 * L / (r + 2.0 - yl)
    return d - 2.0 * L / (r + 2.0 + yl)


def dphi(a, b, c, d, x):
    if x <= a or x >= b:
        return 1.0
    if b - a == d - c:
        return 1.0
    s = x - a
    t = b - x
    L = d - c
    yl = (1.0 / t - 1.0 / s) * L
    r = math.hypot(2.0, yl)
    if yl <= 0.0:
        sp = 2.0 * L / (r + 2.0 - yl)
        tp = L - sp
    else:
        tp = 2.0 * L / (r + 2.0 + yl)
        sp = L - tp
    ratio = (sp / s) * (tp / t)
    return ratio * ratio * (s * s + t * t) / (sp * sp + tp * tp)


# ---------------------------------------------------------------- bump maps

def bump_disp(a, b, x):
    if x <= a or x >= b:
        return 0.0
    L = b - a
    g = -0.5 * L / (b - x) - 0.5 * L / (x - a)
    return 0.5 * L * math.exp(g)


def bump(a, b, x):
    if x <= a or x >= b:
        return x
    return x + bump_disp(a, b, x)


def bump_d(a, b, x):
    if x <= a or x >= b:
        return 1.0
    L = b - a
    s = x - a
    r = b - x
    g = -0.5 * L / r - 0.5 * L / s
    if g < -700.0:
        return 1.0
    return 1.0 + math.exp(g) * 0.25 * L * L * (1.0 / (s * s) - 1.0 / (r * r))


def bump_inv(a, b, y):
    if y <= a or y >= b:
        return y
    L = b - a
    lo = y - _BUMP_MAXDISP * L * 1.0000001
    if lo < a:
        lo = a
    hi = y
    x = y - bump_disp(a, b, y)
    if not (lo < x < hi):
        x = 0.5 * (lo + hi)
    for _ in range(200):
        F = x + bump_disp(a, b, x) - y
        if F == 0.0:
            return x
        if F > 0.0:
            hi = x
        else:
            lo = x
        xn = x - F / bump_d(a, b, x)
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= 4.4e-16 * max(1.0, abs(x)) or hi - lo <= 4.4e-16 * max(1.0, abs(x)):
            return xn
        x = xn
    return x


def _bump_pow(pw, x):
    if pw > 0:
        for _ in range(pw):
            x = bump(-1.0, 1.0, x)
    else:
        for _ in range(-pw):
            x = bump_inv(-1.0, 1.0, x)
    return x


def _bump_pow_d(pw, x):
    d = 1.0
    if pw > 0:
        for _ in range(pw):
            d *= bump_d(-1.0, 1.0, x)
            x = bump(-1.0, 1.0, x)
    else:
        for _ in range(-pw):
            x = bump_inv(-1.0, 1.0, x)
            d /= bump_d(-1.0, 1.0, x)
    return d


def _bump_pow_disp(pw, x):
    tot = 0.0
    if pw > 0:
        for _ in range(pw):
            dd = bump_disp(-1.0, 1.0, x)
            tot += dd
            x += dd
    else:
        for _ in range(-pw):
            xn = bump_inv(-1.0, 1.0, x)
            tot -= bump_disp(-1.0, 1.0, xn)
            x = xn
    return tot


# ---------------------------------------------------------------- stage cells

def gfun(n, q):
    """Distance of the n-th breakpoint from the stage end."""
    if q == 1.0:
        return 1.0 / (n + 1.0)
    return (n + 1.0) ** (-q)


def cell_lo(m, p, q):
    if p == 0:
        return -(m - 1.0)
    if p < 0:
        return -m + gfun(-p, q)
    return m - gfun(p - 1, q)


def cell_hi(m, p, q):
    if p == 0:
        return m - 1.0
    if p < 0:
        return -m + gfun(-p - 1, q)
    return m - gfun(p, q)


def locate(m, x, q, cap):
    """Cell index of x at stage m, or None past the piece cap.

    Assumes -m < x < m.
    """
    if -(m - 1.0) <= x <= m - 1.0:
        return 0
    if x < 0.0:
        e = x + m
        side = -1
    else:
        e = m - x
        side = 1
    if e <= 0.0:
        return None
    nf = (1.0 / e) ** (1.0 / q) - 1.0
    if not nf <= cap:
        return None
    n = int(math.floor(nf))
    if n < 0:
        n = 0
    p = side * (n + 1)
    while x < cell_lo(m, p, q):
        p -= 1
    while x > cell_hi(m, p, q):
        p += 1
    if abs(p) > cap + 1:
        return None
    return p


# ---------------------------------------------------------------- stage maps

def stage(i, m, pw, q, cap, strict, x):
    if pw == 0:
        return x
    if m == 1:
        return _bump_pow(pw, x)
    fm = float(m)
    if x <= -fm or x >= fm:
        return x
    p = locate(m, x, q, cap)
    if p is None:
        return _NAN if strict else x
    lo = cell_lo(m, p, q)
    hi = cell_hi(m, p, q)
    if i == m:
        return phi(lo, hi, cell_lo(m, p + pw, q), cell_hi(m, p + pw, q), x)
    if p == 0:
        return stage(i, m - 1, pw, q, cap, strict, x)
    a0 = -(fm - 1.0)
    b0 = fm - 1.0
    u = phi(lo, hi, a0, b0, x)
    v = stage(i, m - 1, pw, q, cap, strict, u)
    if v != v:
        return v
    return phi(a0, b0, lo, hi, v)


def stage_d(i, m, pw, q, cap, strict, x):
    if pw == 0:
        return 1.0
    if m == 1:
        return _bump_pow_d(pw, x)
    fm = float(m)
    if x <= -fm or x >= fm:
        return 1.0
    p = locate(m, x, q, cap)
    if p is None:
        return _NAN if strict else 1.0
    lo = cell_lo(m, p, q)
    hi = cell_hi(m, p, q)
    if i == m:
        return dphi(lo, hi, cell_lo(m, p + pw, q), cell_hi(m, p + pw, q), x)
    if p == 0:
        return stage_d(i, m - 1, pw, q, cap, strict, x)
    a0 = -(fm - 1.0)
    b0 = fm - 1.0
    u = phi(lo, hi, a0, b0, x)
    du = dphi(lo, hi, a0, b0, x)
    v = stage(i, m - 1, pw, q, cap, strict, u)
    dv = stage_d(i, m - 1, pw, q, cap, strict, u)
    if v != v or dv != dv:
        return _NAN
    return dphi(a0, b0, lo, hi, v) * dv * du


def stage_disp(i, m, pw, q, cap, strict, x):
    if pw == 0:
        return 0.0
    if m == 1:
        return _bump_pow_disp(pw, x)
    fm = float(m)
    if x <= -fm or x >= fm:
        return 0.0
    p = locate(m, x, q, cap)
    if p is None:
        return _NAN if strict else 0.0
    lo = cell_lo(m, p, q)
    hi = cell_hi(m, p, q)
    if i == m:
        return phi(lo, hi, cell_lo(m, p + pw, q), cell_hi(m, p + pw, q), x) - x
    if p == 0:
        return stage_disp(i, m - 1, pw, q, cap, strict, x)
    a0 = -(fm - 1.0)
    b0 = fm - 1.0
    u = phi(lo, hi, a0, b0, x)
    du = stage_disp(i, m - 1, pw, q, cap, strict, u)
    if du == 0.0 or du != du:
        return du
    dist = min(u - a0, b0 - u)
    if abs(du) <= 1e-3 * dist:
        # midpoint rule keeps tiny displacements from cancelling away
        return dphi(a0, b0, lo, hi, u + 0.5 * du) * du
    return phi(a0, b0, lo, hi, u + du) - x


# ---------------------------------------------------------------- array forms

def _map(fn, xs, *args):
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    out = np.empty_like(xs)
    for k in range(xs.shape[0]):
        out[k] = fn(*args, float(xs[k]))
    return out


def phi_array(a, b, c, d, xs):
    return _map(phi, xs, a, b, c, d)


def dphi_array(a, b, c, d, xs):
    return _map(dphi, xs, a, b, c, d)


def bump_array(a, b, xs):
    return _map(bump, xs, a, b)


def bump_d_array(a, b, xs):
    return _map(bump_d, xs, a, b)


def bump_disp_array(a, b, xs):
    return _map(bump_disp, xs, a, b)


def bump_inv_array(a, b, xs):
    return _map(bump_inv, xs, a, b)


def stage_array(i, m, pw, q, cap, strict, xs):
    return _map(stage, xs, i, m, pw, q, cap, strict)


def stage_d_array(i, m, pw, q, cap, strict, xs):
    return _map(stage_d, xs, i, m, pw, q, cap, strict)


def stage_disp_array(i, m, pw, q, cap, strict, xs):
    return _map(stage_disp, xs, i, m, pw, q, cap, strict)
