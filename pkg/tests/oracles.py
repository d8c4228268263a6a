"""Independent exact-arithmetic oracles used by the tests."""

from __future__ import annotations

import math
from fractions import Fraction as Fr

import numpy as np


class ExactPL:
    """Increasing PL map through rational knots, identity outside them."""

    def __init__(self, knots):
        self.knots = [(Fr(x), Fr(y)) for x, y in knots]
        (x0, y0), (xn, yn) = self.knots[0], self.knots[-1]
        assert x0 == y0 and xn == yn

    def __call__(self, x):
        x = Fr(x)
        ks = self.knots
        if x <= ks[0][0] or x >= ks[-1][0]:
            return x
        for (x0, y0), (x1, y1) in zip(ks, ks[1:]):
            if x0 <= x <= x1:
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        raise AssertionError

    def moved_components(self):
        """Maximal open intervals where f(x) != x, as exact (lo, hi, sign)."""
        ks = self.knots
        fixed = []  # sorted fixed points / segments as (lo, hi)
        for (x0, y0), (x1, y1) in zip(ks, ks[1:]):
            d0, d1 = y0 - x0, y1 - x1
            if d0 == 0 and d1 == 0:
                fixed.append((x0, x1))
                continue
            if d0 == 0:
                fixed.append((x0, x0))
            if d1 == 0:
                fixed.append((x1, x1))
            if d0 * d1 < 0:
                z = x0 + (x1 - x0) * d0 / (d0 - d1)
                fixed.append((z, z))
        fixed.sort()
        comps = []
        for (a, b), (c, d) in zip(fixed, fixed[1:]):
            if c > b:
                mid = (b + c) / 2
                comps.append((b, c, 1 if self(mid) > mid else -1))
        return comps


def exact_crossed(f: ExactPL, g: ExactPL) -> bool:
    """Some component of one map has an end sent strictly inside by the other."""
    for u, v in ((f, g), (g, f)):
        for lo, hi, _ in u.moved_components():
            for e in (lo, hi):
                y = v(e)
                if lo < y < hi:
                    return True
    return False


def random_rational_pl(rng: np.random.Generator, lo=Fr(0), hi=Fr(1), max_knots=4, den=12, p_fix=0.3):
    """Random increasing PL map on [lo, hi] with small-denominator knots."""
    n = int(rng.integers(1, max_knots + 1))
    span = hi - lo

    def grid_points(k):
        pts = set()
        while len(pts) < k:
            pts.add(Fr(int(rng.integers(1, den)), den))
        return sorted(lo + span * p for p in pts)

    xs = grid_points(n)
    ys = grid_points(n)
    for i in range(n):
        if rng.random() < p_fix:
            ys[i] = xs[i]
    ys = sorted(ys)
    pairs = [(lo, lo)]
    for x, y in zip(xs, ys):
        if x > pairs[-1][0] and y > pairs[-1][1]:
            pairs.append((x, y))
    pairs.append((hi, hi))
    return ExactPL(pairs)


def bump_value(x, a=-1.0, b=1.0):
    """Closed-form exponential bump, evaluated with math only."""
    if not a < x < b:
        return x
    L = b - a
    return x + (L / 2) * math.exp(-L / (2 * (x - a)) - L / (2 * (b - x)))


def kopell_root_quadratic():
    """alpha(1 + alpha) = 1  =>  alpha = (sqrt(5) - 1) / 2."""
    return (math.sqrt(5.0) - 1.0) / 2.0
