"""Expression-tree nodes for increasing homeomorphisms of the real line.

Every node is an immutable dataclass exposing scalar and array evaluation,
an analytic derivative, a numerically stable displacement ``f(x) - x`` and
inverse evaluation.  Nodes that know their moved set in closed form also
implement :meth:`HomeoExpr.moved_set`.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import ClassVar, NamedTuple, Sequence

import numpy as np

from ..errors import DegenerateInterval, NonFinite, PieceDepthExceeded
from ..intervals import IntervalQ
from ..kernels import K as _K


class Comp(NamedTuple):
    """Open moved interval (lo, hi) with the sign of f(x) - x.

    ``lo_genuine`` is False when lo is a clip boundary rather than a fixed
    point of the map (same for hi).
    """

    lo: float
    hi: float
    sign: int
    lo_genuine: bool
    hi_genuine: bool


@dataclass
class MovedSet:
    comps: list
    pruned: list = field(default_factory=list)  # (lo, hi) regions below resolution

    def flipped(self) -> "MovedSet":
        return MovedSet([c._replace(sign=-c.sign) for c in self.comps], list(self.pruned))


def _clip_comp(a, b, sign, lo, hi):
    """Clip the genuine component (a, b) to [lo, hi]; None if it misses."""
    ca = max(a, lo)
    cb = min(b, hi)
    if not ca < cb:
        return None
    return Comp(ca, cb, sign, a >= lo, b <= hi)


def _as_array(xs) -> np.ndarray:
    return np.ascontiguousarray(xs, dtype=np.float64)


class HomeoExpr:
    """Base class; subclasses are frozen dataclasses."""

    op: ClassVar[str] = "?"

    def __call__(self, x):
        return self.eval(x)

    def eval(self, x: float) -> float:  # pragma: no cover - abstract
        raise NotImplementedError

    def deriv(self, x: float) -> float:  # pragma: no cover - abstract
        raise NotImplementedError

    def displacement(self, x: float) -> float:
        return self.eval(x) - x

    def inverse_eval(self, y: float) -> float:
        return solve_inverse(self, y)

    def eval_array(self, xs) -> np.ndarray:
        xs = _as_array(xs)
        return np.fromiter((self.eval(float(x)) for x in xs), dtype=np.float64, count=xs.shape[0])

    def deriv_array(self, xs) -> np.ndarray:
        xs = _as_array(xs)
        return np.fromiter((self.deriv(float(x)) for x in xs), dtype=np.float64, count=xs.shape[0])

    def displacement_array(self, xs) -> np.ndarray:
        xs = _as_array(xs)
        return self.eval_array(xs) - xs

    def inverse_eval_array(self, ys) -> np.ndarray:
        ys = _as_array(ys)
        return np.fromiter((self.inverse_eval(float(y)) for y in ys), dtype=np.float64, count=ys.shape[0])

    def moved_set(self, lo: float, hi: float, resolution: float) -> MovedSet | None:
        """Closed-form moved components in [lo, hi], or None if unknown."""
        return None

    def children(self) -> tuple:
        return ()


def solve_inverse(f: HomeoExpr, y: float, tol: float = 0.0, max_iter: int = 400) -> float:
    """Solve f(x) = y for increasing f.

    Brackets by doubling steps away from x = y, then runs Newton steps that
    fall back to bisection whenever they leave the bracket.
    """
    if not math.isfinite(y):
        return y
    x0 = y
    f0 = f.eval(x0)
    if f0 == y:
        return x0
    step = 1.0
    if f0 > y:
        hi = x0
        while True:
            lo = x0 - step
            if f.eval(lo) <= y:
                break
            step *= 2.0
            if step > 1e300:
                raise NonFinite(f"cannot bracket inverse at y={y!r}")
    else:
        lo = x0
        while True:
            hi = x0 + step
            if f.eval(hi) >= y:
                break
            step *= 2.0
            if step > 1e300:
                raise NonFinite(f"cannot bracket inverse at y={y!r}")
    x = 0.5 * (lo + hi)
    for _ in range(max_iter):
        fx = f.eval(x) - y
        if fx == 0.0:
            return x
        if fx > 0.0:
            hi = x
        else:
            lo = x
        d = f.deriv(x)
        xn = x - fx / d if d > 0 and math.isfinite(d) else 0.5 * (lo + hi)
        if not lo < xn < hi:
            xn = 0.5 * (lo + hi)
        scale = max(1.0, abs(x))
        if abs(xn - x) <= tol + 4.4e-16 * scale or hi - lo <= 4.4e-16 * scale:
            return xn
        x = xn
    return x


# ---------------------------------------------------------------- leaves


@dataclass(frozen=True)
class Identity(HomeoExpr):
    op: ClassVar[str] = "identity"

    def eval(self, x):
        return x

    def deriv(self, x):
        return 1.0

    def displacement(self, x):
        return 0.0

    def inverse_eval(self, y):
        return y

    def eval_array(self, xs):
        return _as_array(xs).copy()

    def deriv_array(self, xs):
        return np.ones_like(_as_array(xs))

    def displacement_array(self, xs):
        return np.zeros_like(_as_array(xs))

    def inverse_eval_array(self, ys):
        return _as_array(ys).copy()

    def moved_set(self, lo, hi, resolution):
        return MovedSet([])


@dataclass(frozen=True)
class Translation(HomeoExpr):
    c: float
    op: ClassVar[str] = "translation"

    def __post_init__(self):
        c = float(self.c)
        if not math.isfinite(c):
            raise ValueError("translation amount must be finite")
        object.__setattr__(self, "c", c)

    def eval(self, x):
        return x + self.c

    def deriv(self, x):
        return 1.0

    def displacement(self, x):
        return self.c

    def inverse_eval(self, y):
        return y - self.c

    def eval_array(self, xs):
        return _as_array(xs) + self.c

    def deriv_array(self, xs):
        return np.ones_like(_as_array(xs))

    def displacement_array(self, xs):
        return np.full(_as_array(xs).shape, self.c)

    def inverse_eval_array(self, ys):
        return _as_array(ys) - self.c

    def moved_set(self, lo, hi, resolution):
        if self.c == 0.0:
            return MovedSet([])
        return MovedSet([Comp(lo, hi, 1 if self.c > 0 else -1, False, False)])


@dataclass(frozen=True)
class Affine(HomeoExpr):
    """x -> slope * x + offset with slope > 0."""

    slope: float
    offset: float
    op: ClassVar[str] = "affine"

    def __post_init__(self):
        s = float(self.slope)
        o = float(self.offset)
        if not (s > 0 and math.isfinite(s) and math.isfinite(o)):
            raise ValueError("affine maps need a finite positive slope and finite offset")
        object.__setattr__(self, "slope", s)
        object.__setattr__(self, "offset", o)

    def eval(self, x):
        return self.slope * x + self.offset

    def deriv(self, x):
        return self.slope

    def displacement(self, x):
        return (self.slope - 1.0) * x + self.offset

    def inverse_eval(self, y):
        return (y - self.offset) / self.slope

    def eval_array(self, xs):
        return self.slope * _as_array(xs) + self.offset

    def deriv_array(self, xs):
        return np.full(_as_array(xs).shape, self.slope)

    def displacement_array(self, xs):
        return (self.slope - 1.0) * _as_array(xs) + self.offset

    def inverse_eval_array(self, ys):
        return (_as_array(ys) - self.offset) / self.slope

    @property
    def fixed_point(self):
        if self.slope == 1.0:
            return None
        return self.offset / (1.0 - self.slope)

    def moved_set(self, lo, hi, resolution):
        if self.slope == 1.0:
            return Translation(self.offset).moved_set(lo, hi, resolution)
        p = self.fixed_point
        up = 1 if self.slope > 1.0 else -1
        comps = []
        c = _clip_comp(-math.inf, p, -up, lo, hi)
        if c is not None:
            comps.append(c)
        c = _clip_comp(p, math.inf, up, lo, hi)
        if c is not None:
            comps.append(c)
        return MovedSet(comps)


@dataclass(frozen=True)
class ExpBump(HomeoExpr):
    """The bump map x + exp(1/(x-1) - 1/(x+1)) moved affinely onto ``interval``.

    It fixes both endpoints with derivative 1, pushes every interior point to
    the right, and is the identity outside the interval.
    """

    interval: IntervalQ
    op: ClassVar[str] = "expbump"

    def __post_init__(self):
        iv = self.interval if isinstance(self.interval, IntervalQ) else IntervalQ.from_json(self.interval)
        iv.require_finite("ExpBump interval")
        object.__setattr__(self, "interval", iv)

    @property
    def _ab(self):
        return self.interval.lo, self.interval.hi

    def eval(self, x):
        a, b = self._ab
        return _K.bump(a, b, x) if math.isfinite(x) else x

    def deriv(self, x):
        a, b = self._ab
        return _K.bump_d(a, b, x)

    def displacement(self, x):
        a, b = self._ab
        return _K.bump_disp(a, b, x)

    def inverse_eval(self, y):
        a, b = self._ab
        return _K.bump_inv(a, b, y) if math.isfinite(y) else y

    def eval_array(self, xs):
        return _K.bump_array(*self._ab, _as_array(xs))

    def deriv_array(self, xs):
        return _K.bump_d_array(*self._ab, _as_array(xs))

    def displacement_array(self, xs):
        return _K.bump_disp_array(*self._ab, _as_array(xs))

    def inverse_eval_array(self, ys):
        return _K.bump_inv_array(*self._ab, _as_array(ys))

    def moved_set(self, lo, hi, resolution):
        a, b = self._ab
        c = _clip_comp(a, b, 1, lo, hi)
        return MovedSet([c] if c is not None else [])


@dataclass(frozen=True)
class YoccozChart(HomeoExpr):
    """Chart-factorised map sending ``source`` onto ``target``.

    With psi(x) = 1/(b-x) - 1/(x-a) on (a, b) the map is the target chart
    inverse after the source chart.  It has slope 1 at both endpoints and is
    extended by translations outside the source interval.
    """

    source: IntervalQ
    target: IntervalQ
    op: ClassVar[str] = "yoccoz"

    def __post_init__(self):
        for name in ("source", "target"):
            iv = getattr(self, name)
            if not isinstance(iv, IntervalQ):
                iv = IntervalQ.from_json(iv)
            if not iv.finite:
                raise DegenerateInterval(f"YoccozChart {name} must be finite")
            object.__setattr__(self, name, iv)

    @property
    def _abcd(self):
        return self.source.lo, self.source.hi, self.target.lo, self.target.hi

    def eval(self, x):
        return _K.phi(*self._abcd, x)

    def deriv(self, x):
        return _K.dphi(*self._abcd, x)

    def inverse_eval(self, y):
        a, b, c, d = self._abcd
        return _K.phi(c, d, a, b, y)

    def eval_array(self, xs):
        return _K.phi_array(*self._abcd, _as_array(xs))

    def deriv_array(self, xs):
        return _K.dphi_array(*self._abcd, _as_array(xs))

    def inverse_eval_array(self, ys):
        a, b, c, d = self._abcd
        return _K.phi_array(c, d, a, b, _as_array(ys))

    def inverse_eval_array(self, ys):
        a, b, c, d = self._abcd
        return _K.phi_array(c, d, a, b, _as_array(ys))


# ---------------------------------------------------------------- stage maps


@dataclass(frozen=True)
class StageMap(HomeoExpr):
    """The i-th map of the K-stage commuting family, raised to ``power``.

    Evaluation finds the containing cell in closed form and applies the
    chart conjugation of the previous stage, so the cost is O(K) whatever
    the depth of the cell.  Cells past ``piece_cap`` are narrower than
    1/piece_cap**2; there the map is treated as the identity unless
    ``strict`` is set, in which case PieceDepthExceeded is raised.
    """

    i: int
    K: int
    power: int = 1
    exponent: float = 1.0
    piece_cap: int = 10_000_000
    strict: bool = False
    op: ClassVar[str] = "stage"

    def __post_init__(self):
        for name in ("i", "K", "power", "piece_cap"):
            v = getattr(self, name)
            if int(v) != v:
                raise ValueError(f"StageMap.{name} must be an integer")
            object.__setattr__(self, name, int(v))
        if not 1 <= self.i <= self.K:
            raise ValueError(f"StageMap needs 1 <= i <= K, got i={self.i}, K={self.K}")
        if self.piece_cap < 1:
            raise ValueError("piece_cap must be positive")
        object.__setattr__(self, "exponent", float(self.exponent))
        if not self.exponent > 0:
            raise ValueError("exponent must be positive")

    @property
    def _args(self):
        return self.i, self.K, self.power, self.exponent, float(self.piece_cap), bool(self.strict)

    def _check(self, v, x):
        if v != v:
            raise PieceDepthExceeded(x, self.piece_cap)
        return v

    def _check_array(self, out, xs):
        if self.strict and np.isnan(out).any():
            k = int(np.flatnonzero(np.isnan(out))[0])
            raise PieceDepthExceeded(float(xs[k]), self.piece_cap)
        return out

    def eval(self, x):
        if not math.isfinite(x):
            return x
        return self._check(_K.stage(*self._args, x), x)

    def deriv(self, x):
        return self._check(_K.stage_d(*self._args, x), x)

    def displacement(self, x):
        return self._check(_K.stage_disp(*self._args, x), x)

    def inverse_eval(self, y):
        return self.with_power(-self.power).eval(y)

    def eval_array(self, xs):
        xs = _as_array(xs)
        return self._check_array(_K.stage_array(*self._args, xs), xs)

    def deriv_array(self, xs):
        xs = _as_array(xs)
        return self._check_array(_K.stage_d_array(*self._args, xs), xs)

    def displacement_array(self, xs):
        xs = _as_array(xs)
        return self._check_array(_K.stage_disp_array(*self._args, xs), xs)

    def inverse_eval_array(self, ys):
        return self.with_power(-self.power).eval_array(ys)

    def with_power(self, power: int) -> "StageMap":
        return StageMap(self.i, self.K, power, self.exponent, self.piece_cap, self.strict)

    @property
    def support(self) -> IntervalQ:
        return IntervalQ(-self.i, self.i) if self.i == self.K else IntervalQ(-self.K, self.K)

    def moved_set(self, lo, hi, resolution):
        if self.power == 0:
            return MovedSet([])
        sign = 1 if self.power > 0 else -1
        comps: list = []
        pruned: list = []
        _stage_moved(self.i, self.K, sign, self.exponent, lo, hi, resolution, comps, pruned)
        return MovedSet(comps, pruned)


def _stage_moved(i, m, sign, q, lo, hi, res, comps, pruned):
    """Append moved components of the stage-m extension of f_i inside [lo, hi].

    Components come out sorted left to right.  Cells narrower than ``res``
    are skipped and their span is recorded in ``pruned``.
    """
    fm = float(m)
    lo = max(lo, -fm)
    hi = min(hi, fm)
    if not lo < hi:
        return
    if m == i:
        c = _clip_comp(-fm, fm, sign, lo, hi)
        if c is not None:
            comps.append(c)
        return
    a0, b0 = -(fm - 1.0), fm - 1.0
    if lo < a0:
        start = -1 if hi >= a0 else _K.locate(m, hi, q, 1e15)
        if start is None:
            pruned.append((lo, hi))
        else:
            cells = _collar(i, m, sign, q, start, -1, lo, min(hi, a0), res, pruned)
            for chunk in reversed(cells):
                comps.extend(chunk)
    if hi > a0 and lo < b0:
        _stage_moved(i, m - 1, sign, q, max(lo, a0), min(hi, b0), res, comps, pruned)
    if hi > b0:
        start = 1 if lo <= b0 else _K.locate(m, lo, q, 1e15)
        if start is None:
            pruned.append((lo, hi))
        else:
            for chunk in _collar(i, m, sign, q, start, 1, max(lo, b0), hi, res, pruned):
                comps.extend(chunk)


def _collar(i, m, sign, q, p, step, lo, hi, res, pruned):
    """Walk collar cells outward from cell p; one list of comps per cell."""
    fm = float(m)
    a0, b0 = -(fm - 1.0), fm - 1.0
    out = []
    while True:
        cl, ch = _K.cell_lo(m, p, q), _K.cell_hi(m, p, q)
        if ch <= lo or cl >= hi:
            return out
        if ch - cl < res:
            span = (max(-fm, lo), min(ch, hi)) if step < 0 else (max(cl, lo), min(fm, hi))
            if span[0] < span[1]:
                pruned.append(span)
            return out
        ul = _K.phi(cl, ch, a0, b0, max(cl, lo))
        uh = _K.phi(cl, ch, a0, b0, min(ch, hi))
        sub: list = []
        subpr: list = []
        scale = (ch - cl) / (b0 - a0)
        _stage_moved(i, m - 1, sign, q, ul, uh, res / scale, sub, subpr)
        chunk = []
        for c in sub:
            clo = _K.phi(a0, b0, cl, ch, c.lo)
            chi = _K.phi(a0, b0, cl, ch, c.hi)
            if clo < chi:
                chunk.append(Comp(clo, chi, c.sign, c.lo_genuine, c.hi_genuine))
        for u, v in subpr:
            pruned.append((_K.phi(a0, b0, cl, ch, u), _K.phi(a0, b0, cl, ch, v)))
        out.append(chunk)
        p += step


# ---------------------------------------------------------------- combinators


@dataclass(frozen=True)
class Compose(HomeoExpr):
    """compose([g, f]) evaluates g(f(x)): the last part acts first."""

    parts: tuple
    op: ClassVar[str] = "compose"

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise ValueError("compose needs at least one map")
        object.__setattr__(self, "parts", parts)

    def children(self):
        return self.parts

    def eval(self, x):
        for f in reversed(self.parts):
            x = f.eval(x)
        return x

    def deriv(self, x):
        d = 1.0
        for f in reversed(self.parts):
            d *= f.deriv(x)
            x = f.eval(x)
        return d

    def displacement(self, x):
        tot = 0.0
        for f in reversed(self.parts):
            dx = f.displacement(x)
            tot += dx
            x = x + dx
        return tot

    def inverse_eval(self, y):
        for f in self.parts:
            y = f.inverse_eval(y)
        return y

    def eval_array(self, xs):
        xs = _as_array(xs)
        for f in reversed(self.parts):
            xs = f.eval_array(xs)
        return xs

    def deriv_array(self, xs):
        xs = _as_array(xs)
        d = np.ones_like(xs)
        for f in reversed(self.parts):
            d = d * f.deriv_array(xs)
            xs = f.eval_array(xs)
        return d

    def displacement_array(self, xs):
        xs = _as_array(xs)
        tot = np.zeros_like(xs)
        for f in reversed(self.parts):
            dx = f.displacement_array(xs)
            tot = tot + dx
            xs = xs + dx
        return tot

    def inverse_eval_array(self, ys):
        ys = _as_array(ys)
        for f in self.parts:
            ys = f.inverse_eval_array(ys)
        return ys

    def moved_set(self, lo, hi, resolution):
        if len(self.parts) == 1:
            return self.parts[0].moved_set(lo, hi, resolution)
        first = self.parts[0]
        if isinstance(first, StageMap) and all(
            isinstance(p, StageMap) and p.with_power(1) == first.with_power(1) for p in self.parts
        ):
            total = sum(p.power for p in self.parts)
            return first.with_power(total).moved_set(lo, hi, resolution)
        return None


@dataclass(frozen=True)
class Inverse(HomeoExpr):
    child: HomeoExpr
    op: ClassVar[str] = "inverse"

    def children(self):
        return (self.child,)

    def eval(self, x):
        return self.child.inverse_eval(x)

    def deriv(self, x):
        return 1.0 / self.child.deriv(self.child.inverse_eval(x))

    def displacement(self, y):
        return -self.child.displacement(self.child.inverse_eval(y))

    def inverse_eval(self, y):
        return self.child.eval(y)

    def eval_array(self, xs):
        return self.child.inverse_eval_array(xs)

    def deriv_array(self, xs):
        return 1.0 / self.child.deriv_array(self.child.inverse_eval_array(xs))

    def displacement_array(self, ys):
        return -self.child.displacement_array(self.child.inverse_eval_array(ys))

    def inverse_eval_array(self, ys):
        return self.child.eval_array(ys)

    def moved_set(self, lo, hi, resolution):
        ms = self.child.moved_set(lo, hi, resolution)
        return None if ms is None else ms.flipped()


@dataclass(frozen=True)
class Piecewise(HomeoExpr):
    """Pieces ``(interval, map)`` tiling a window; identity outside the hull.

    On each interval the piece's own map is used.  Adjacent intervals must
    share endpoints and values must agree there, including the identity at
    finite hull ends.
    """

    pieces: tuple
    op: ClassVar[str] = "piecewise"
    tau_cont: ClassVar[float] = 1e-9

    def __post_init__(self):
        pieces = tuple(
            (iv if isinstance(iv, IntervalQ) else IntervalQ.from_json(iv), f) for iv, f in self.pieces
        )
        if not pieces:
            raise ValueError("piecewise needs at least one piece")
        for (i1, _), (i2, _) in zip(pieces, pieces[1:]):
            if i1.hi != i2.lo:
                raise ValueError(f"piece intervals must abut: {i1} then {i2}")
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "_los", tuple(iv.lo for iv, _ in pieces))
        self._check_continuity()

    def _check_continuity(self):
        tol = self.tau_cont
        for (i1, f1), (_, f2) in zip(self.pieces, self.pieces[1:]):
            x = i1.hi
            if abs(f1.eval(x) - f2.eval(x)) > tol * max(1.0, abs(x)):
                raise ValueError(f"piecewise map is discontinuous at {x!r}")
        first_iv, first = self.pieces[0]
        last_iv, last = self.pieces[-1]
        if first_iv.lo_finite and abs(first.eval(first_iv.lo) - first_iv.lo) > tol * max(1.0, abs(first_iv.lo)):
            raise ValueError("piecewise map must fix its left hull end")
        if last_iv.hi_finite and abs(last.eval(last_iv.hi) - last_iv.hi) > tol * max(1.0, abs(last_iv.hi)):
            raise ValueError("piecewise map must fix its right hull end")

    def children(self):
        return tuple(f for _, f in self.pieces)

    @property
    def hull(self) -> IntervalQ:
        return IntervalQ(self.pieces[0][0].lo, self.pieces[-1][0].hi)

    def _index(self, x):
        if x < self.pieces[0][0].lo or x > self.pieces[-1][0].hi:
            return None
        k = bisect.bisect_right(self._los, x) - 1
        return max(0, min(k, len(self.pieces) - 1))

    def eval(self, x):
        k = self._index(x)
        return x if k is None else self.pieces[k][1].eval(x)

    def deriv(self, x):
        k = self._index(x)
        return 1.0 if k is None else self.pieces[k][1].deriv(x)

    def displacement(self, x):
        k = self._index(x)
        return 0.0 if k is None else self.pieces[k][1].displacement(x)

    def _image_his(self):
        his = getattr(self, "_img_his", None)
        if his is None:
            his = np.array([f.eval(iv.hi) if iv.hi_finite else math.inf for iv, f in self.pieces])
            object.__setattr__(self, "_img_his", his)
        return his

    def inverse_eval(self, y):
        lo = self.pieces[0][0].lo
        hi = self.pieces[-1][0].hi
        if y < lo or y > hi:
            return y
        k = min(int(np.searchsorted(self._image_his(), y, side="left")), len(self.pieces) - 1)
        return self.pieces[k][1].inverse_eval(y)

    def inverse_eval_array(self, ys):
        ys = _as_array(ys)
        out = ys.copy()
        inside = (ys >= self.pieces[0][0].lo) & (ys <= self.pieces[-1][0].hi)
        idx = np.clip(np.searchsorted(self._image_his(), ys, side="left"), 0, len(self.pieces) - 1)
        for k in np.unique(idx[inside]):
            sel = inside & (idx == k)
            out[sel] = self.pieces[k][1].inverse_eval_array(ys[sel])
        return out

    def _dispatch(self, xs, method, outside):
        xs = _as_array(xs)
        out = outside(xs)
        idx = np.searchsorted(np.asarray(self._los), xs, side="right") - 1
        inside = (xs >= self.pieces[0][0].lo) & (xs <= self.pieces[-1][0].hi)
        idx = np.clip(idx, 0, len(self.pieces) - 1)
        hit = idx[inside]
        if hit.size and hit[0] == hit[-1] and np.all(hit == hit[0]):
            out[inside] = getattr(self.pieces[hit[0]][1], method)(xs[inside])
            return out
        for k in np.unique(hit):
            sel = inside & (idx == k)
            out[sel] = getattr(self.pieces[k][1], method)(xs[sel])
        return out

    def eval_array(self, xs):
        return self._dispatch(xs, "eval_array", lambda v: v.copy())

    def deriv_array(self, xs):
        return self._dispatch(xs, "deriv_array", np.ones_like)

    def displacement_array(self, xs):
        return self._dispatch(xs, "displacement_array", np.zeros_like)

    def moved_set(self, lo, hi, resolution):
        comps: list = []
        pruned: list = []
        for iv, f in self.pieces:
            plo = max(lo, iv.lo)
            phi_ = min(hi, iv.hi)
            if not plo < phi_:
                continue
            ms = f.moved_set(plo, phi_, resolution)
            if ms is None:
                return None
            pruned.extend(ms.pruned)
            for c in ms.comps:
                c = self._snap(c, iv)
                if c is not None:
                    comps.append(c)
        return MovedSet(self._merge(comps), pruned)

    def _bp_fixed(self, x):
        return abs(self.displacement(x)) <= 1e-12 * max(1.0, abs(x))

    def _snap(self, c, iv):
        tol = 1e-12
        a, b, s, ga, gb = c
        if abs(a - iv.lo) <= tol * max(1.0, abs(a)):
            a = iv.lo
        if abs(b - iv.hi) <= tol * max(1.0, abs(b)):
            b = iv.hi
        if not a < b:
            return None
        if a == iv.lo:
            ga = self._bp_fixed(a)
        if b == iv.hi:
            gb = self._bp_fixed(b)
        return Comp(a, b, s, ga, gb)

    def _merge(self, comps):
        out: list = []
        for c in comps:
            if out and out[-1].hi == c.lo and not out[-1].hi_genuine and not c.lo_genuine and out[-1].sign == c.sign:
                prev = out.pop()
                c = Comp(prev.lo, c.hi, c.sign, prev.lo_genuine, c.hi_genuine)
            out.append(c)
        return out


def as_expr_list(fs: Sequence[HomeoExpr]) -> tuple:
    out = tuple(fs)
    for f in out:
        if not isinstance(f, HomeoExpr):
            raise TypeError(f"not a HomeoExpr: {f!r}")
    return out
