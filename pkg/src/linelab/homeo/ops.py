"""Functional front end: evaluate, differentiate, invert, compose, iterate."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..config import DEFAULT_TOL
from ..errors import NonDifferentiablePoint, NonFinite
from .nodes import Compose, HomeoExpr, Identity, Inverse, StageMap, Translation


def evaluate(f: HomeoExpr, x: float) -> float:
    if math.isinf(x) and not isinstance(f, (Identity, Translation)):
        raise NonFinite("only identity and translations are evaluated at infinity")
    y = f.eval(float(x))
    if math.isnan(y) or (math.isfinite(x) and math.isinf(y)):
        raise NonFinite(f"non-finite value at x={x!r}")
    return y


def deriv(f: HomeoExpr, x: float) -> float:
    d = f.deriv(float(x))
    if not (d > 0 and math.isfinite(d)):
        raise NonFinite(f"derivative {d!r} at x={x!r}")
    return d


def invert(f: HomeoExpr) -> HomeoExpr:
    return Inverse(f)


def compose(fs: Sequence[HomeoExpr]) -> HomeoExpr:
    return Compose(tuple(fs))


def power(f: HomeoExpr, n: int) -> HomeoExpr:
    """The n-th iterate; negative n iterates the inverse."""
    n = int(n)
    if n == 0:
        return Identity()
    if isinstance(f, StageMap):
        return f.with_power(f.power * n)
    if isinstance(f, Translation):
        return Translation(f.c * n)
    g = f if n > 0 else Inverse(f)
    return g if abs(n) == 1 else Compose((g,) * abs(n))


def one_sided_derivative(f: HomeoExpr, x: float, side: int, h0: float, levels: int = 3) -> float:
    """One-sided difference quotient with Richardson extrapolation.

    ``side = +1`` looks right of x, ``-1`` left.  Steps are h0, h0/2, ...
    (``levels`` of them); the Richardson table removes the O(h) and O(h^2)
    error terms.
    """
    fx = f.eval(x)
    row = []
    h = h0
    for _ in range(levels):
        row.append((f.eval(x + side * h) - fx) / (side * h))
        h *= 0.5
    table = row
    k = 1
    while len(table) > 1:
        table = [(2**k * table[j + 1] - table[j]) / (2**k - 1) for j in range(len(table) - 1)]
        k += 1
    return table[0]


def central_derivative(f: HomeoExpr, x: float, h: float = 1e-3) -> float:
    """Central difference with one Richardson step (error O(h^4))."""
    d1 = (f.eval(x + h) - f.eval(x - h)) / (2 * h)
    h2 = h / 2
    d2 = (f.eval(x + h2) - f.eval(x - h2)) / (2 * h2)
    return (4 * d2 - d1) / 3


def check_differentiable(f: HomeoExpr, x: float, h0: float, tol: float = DEFAULT_TOL.tau_deriv) -> float:
    """Return the common one-sided derivative or raise NonDifferentiablePoint."""
    left = one_sided_derivative(f, x, -1, h0)
    right = one_sided_derivative(f, x, +1, h0)
    if abs(left - right) > tol:
        raise NonDifferentiablePoint(x, left, right)
    return 0.5 * (left + right)


def is_increasing(f: HomeoExpr, lo: float, hi: float, n: int = 1001) -> bool:
    xs = np.linspace(lo, hi, n)
    ys = f.eval_array(xs)
    return bool(np.all(np.diff(ys) > 0))


def roundtrip_residual(f: HomeoExpr, ys) -> float:
    ys = np.asarray(ys, dtype=float)
    xs = f.inverse_eval_array(ys)
    return float(np.max(np.abs(f.eval_array(xs) - ys)))


def piecewise_linear(knots, extend: str = "identity") -> HomeoExpr:
    """Increasing PL map through ``knots`` [(x0, y0), ...].

    Knots may be Fractions or floats; slopes and offsets are computed in
    exact rational arithmetic before rounding.  With ``extend="identity"``
    both end knots must lie on the diagonal and the map is the identity
    outside them.  With ``extend="affine"`` the end slopes continue to
    infinity.
    """
    from fractions import Fraction

    from ..intervals import IntervalQ
    from .nodes import Affine, Piecewise

    pts = [(Fraction(x), Fraction(y)) for x, y in knots]
    if len(pts) < 2:
        raise ValueError("need at least two knots")
    pieces = []
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        if not (x1 > x0 and y1 > y0):
            raise ValueError("knots must be strictly increasing in both coordinates")
        s = (y1 - y0) / (x1 - x0)
        pieces.append((IntervalQ(float(x0), float(x1)), Affine(float(s), float(y0 - s * x0))))
    if extend == "affine":
        inf = float("inf")
        pieces.insert(0, (IntervalQ(-inf, pieces[0][0].lo), pieces[0][1]))
        pieces.append((IntervalQ(pieces[-1][0].hi, inf), pieces[-1][1]))
    elif extend != "identity":
        raise ValueError(f"unknown extension {extend!r}")
    return Piecewise(tuple(pieces))
