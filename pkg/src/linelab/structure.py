"""Fixed sets, crossed pairs and freeness of finitely generated actions."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import GridTooCoarse, Inconclusive
from .homeo import Compose, HomeoExpr, Inverse
from .intervals import IntervalQ, as_interval
from .numfmt import round_sig
from .words import letter_expr, letters, sort_key, word_str


@dataclass(frozen=True)
class FixedPiece:
    """Closed stretch of fixed points; ``lo == hi`` for an isolated one."""

    lo: float
    hi: float

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def to_json(self):
        return [round_sig(self.lo), round_sig(self.hi)]


@dataclass(frozen=True)
class MovedComponent:
    """Open interval on which f(x) - x has the constant sign ``sign``."""

    lo: float
    hi: float
    sign: int
    lo_genuine: bool = True  # False when lo is where the window cut the component
    hi_genuine: bool = True
    lo_err: float = 0.0  # location uncertainty of each end
    hi_err: float = 0.0

    @property
    def sign_name(self) -> str:
        return "above" if self.sign > 0 else "below"

    @property
    def interval(self) -> IntervalQ:
        return IntervalQ(self.lo, self.hi)

    def to_json(self):
        return {
            "interval": [round_sig(self.lo), round_sig(self.hi)],
            "sign": self.sign_name,
            "ends_fixed": [self.lo_genuine, self.hi_genuine],
            "end_errors": [round_sig(self.lo_err), round_sig(self.hi_err)],
        }


@dataclass
class FixedSetReport:
    window: IntervalQ
    fixed_intervals: list
    complement_components: list
    method: str
    resolution: float
    unresolved: list = field(default_factory=list)
    advisories: list = field(default_factory=list)

    def tiles(self):
        """Fixed pieces and moved components in left-to-right order."""
        items = [(p.lo, 0, p) for p in self.fixed_intervals] + [(c.lo, 1, c) for c in self.complement_components]
        items.sort(key=lambda t: (t[0], t[1]))
        return [t[2] for t in items]

    @property
    def has_fixed_point(self) -> bool:
        return bool(self.fixed_intervals)

    def fixed_points_inside(self) -> bool:
        """True if some fixed point lies in the open window."""
        w = self.window
        return any(p.hi > w.lo and p.lo < w.hi for p in self.fixed_intervals)

    def is_identity(self) -> bool:
        return not self.complement_components

    def to_json(self):
        return {
            "window": self.window.to_json(),
            "method": self.method,
            "resolution": round_sig(self.resolution),
            "fixed_intervals": [p.to_json() for p in self.fixed_intervals],
            "complement_components": [c.to_json() for c in self.complement_components],
            "unresolved": [[round_sig(a), round_sig(b)] for a, b in self.unresolved],
            "advisories": list(self.advisories),
        }


# ---------------------------------------------------------------- fixed sets


def _tile(window, comps):
    """Fixed pieces between sorted moved components."""
    fixed = []
    cur = window.lo
    prev = None
    for c in comps:
        if c.lo > cur:
            fixed.append(FixedPiece(cur, c.lo))
        elif prev is not None and prev.hi == c.lo:
            fixed.append(FixedPiece(c.lo, c.lo))
        elif prev is None and c.lo_genuine:
            fixed.append(FixedPiece(c.lo, c.lo))
        cur = c.hi
        prev = c
    if cur < window.hi:
        fixed.append(FixedPiece(cur, window.hi))
    elif prev is not None and prev.hi_genuine:
        fixed.append(FixedPiece(cur, cur))
    return fixed


def _analytic(f, window, resolution):
    ms = f.moved_set(window.lo, window.hi, resolution)
    if ms is None:
        return None
    comps = [
        MovedComponent(c.lo, c.hi, c.sign, c.lo_genuine, c.hi_genuine, 0.0, 0.0)
        for c in sorted(ms.comps, key=lambda c: c.lo)
    ]
    unresolved = _merge_spans(ms.pruned)
    return comps, unresolved


def _merge_spans(spans):
    out = []
    for a, b in sorted(spans):
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


def _bisect(pred, a, b, width):
    """Shrink [a, b] with pred(a) False and pred(b) True to the given width."""
    while b - a > width:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        if pred(m):
            b = m
        else:
            a = m
    return a, b


def _scan(f, window, grid, tol):
    lo, hi = window.lo, window.hi
    xs = np.linspace(lo, hi, grid)
    D = f.displacement_array(xs)
    if not np.all(np.isfinite(D)):
        raise ArithmeticError("non-finite displacement on the scan grid")
    eps = tol.eps_fix
    dr = tol.delta_root
    cls = np.where(np.abs(D) <= eps, 0, np.sign(D)).astype(int)
    disp = lambda x: f.displacement(x)  # noqa: E731
    is_fixed = lambda x: abs(disp(x)) <= eps  # noqa: E731
    advisories = []

    # fixed pieces as (lo, hi, lo_err, hi_err)
    pieces = []
    n = len(xs)
    j = 0
    while j < n:
        if cls[j] != 0:
            j += 1
            continue
        k = j
        while k + 1 < n and cls[k + 1] == 0:
            k += 1
        if k > j:
            a, ae = xs[j], 0.0
            if j > 0:
                l, r = _bisect(is_fixed, xs[j - 1], xs[j], dr)
                a, ae = r, r - l
            b, be = xs[k], 0.0
            if k < n - 1:
                l, r = _bisect(lambda x: not is_fixed(x), xs[k], xs[k + 1], dr)
                b, be = l, r - l
            pieces.append((a, b, ae, be))
        else:
            x, e = xs[j], 0.0
            if 0 < j < n - 1 and cls[j - 1] * cls[j + 1] < 0:
                s0 = cls[j - 1]
                l, r = _bisect(lambda x: disp(x) * s0 < 0, xs[j - 1], xs[j + 1], dr)
                x, e = 0.5 * (l + r), 0.5 * (r - l)
            pieces.append((x, x, e, e))
        j = k + 1
    changes = []
    for j in range(n - 1):
        if cls[j] * cls[j + 1] < 0:
            s0 = cls[j]
            l, r = _bisect(lambda x: disp(x) * s0 < 0, xs[j], xs[j + 1], dr)
            x = 0.5 * (l + r)
            pieces.append((x, x, 0.5 * (r - l), 0.5 * (r - l)))
            changes.append(j)
    for u, v in zip(changes, changes[1:]):
        if v == u + 1:
            msg = f"sign changes in adjacent cells near x={xs[v]:.6g}; refine the grid"
            advisories.append(msg)
            warnings.warn(GridTooCoarse(msg), stacklevel=3)
    pieces = sorted((float(a), float(b), float(ae), float(be)) for a, b, ae, be in pieces)

    fixed = [FixedPiece(a, b) for a, b, _, _ in pieces]
    comps = []
    edges = [(lo, lo, None, 0.0)] + [(a, b, ae, be) for a, b, ae, be in pieces] + [(hi, hi, None, 0.0)]
    for (a0, b0, _, be0), (a1, b1, ae1, _) in zip(edges, edges[1:]):
        if not b0 < a1:
            continue
        inner = (xs > b0) & (xs < a1)
        signs = cls[inner]
        signs = signs[signs != 0]
        if signs.size:
            sg = int(signs[0])
            if np.any(signs != sg):
                advisories.append(f"mixed signs on ({b0:.6g}, {a1:.6g})")
        else:
            sg = 1 if disp(0.5 * (b0 + a1)) > 0 else -1
        lo_gen = bool(b0 != lo or any(p[0] == lo for p in pieces))
        hi_gen = bool(a1 != hi or any(p[1] == hi for p in pieces))
        comps.append(MovedComponent(float(b0), float(a1), sg, lo_gen, hi_gen, be0 if lo_gen else 0.0, ae1 if (hi_gen and ae1) else 0.0))
    return fixed, comps, advisories


def fixed_set(
    f: HomeoExpr,
    window,
    grid: int = 2001,
    *,
    method: str = "auto",
    resolution: float | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> FixedSetReport:
    """Fixed points of f in a finite window.

    ``method="analytic"`` uses closed-form moved sets (available for most
    node kinds); ``"scan"`` samples f(x) - x on ``grid`` points, bisects
    each sign change to ``tol.delta_root`` and merges plateaus where
    ``|f(x) - x| <= tol.eps_fix``.  ``"auto"`` tries the analytic route
    first.  Bump-type maps are flat to machine precision near their ends,
    so the analytic route is the reliable one there.
    """
    window = as_interval(window).require_finite("window")
    if grid < 2:
        raise ValueError("grid must have at least two points")
    if resolution is None:
        resolution = window.length * 1e-6
    if method in ("auto", "analytic"):
        got = _analytic(f, window, resolution)
        if got is not None:
            comps, unresolved = got
            fixed = _tile(window, comps)
            adv = []
            if unresolved:
                adv.append(f"{len(unresolved)} region(s) finer than resolution {resolution:.3g} treated as fixed")
            return FixedSetReport(window, fixed, comps, "analytic", resolution, unresolved, adv)
        if method == "analytic":
            raise ValueError(f"no closed-form moved set for {type(f).__name__}")
    elif method != "scan":
        raise ValueError(f"unknown method {method!r}")
    fixed, comps, adv = _scan(f, window, grid, tol)
    return FixedSetReport(window, fixed, comps, "scan", (window.hi - window.lo) / (grid - 1), [], adv)


# ---------------------------------------------------------------- crossings


@dataclass(frozen=True)
class CrossWitness:
    pair: tuple  # (name of the map whose component is used, name of the map that pushes)
    interval: IntervalQ
    endpoint: str  # "lo" or "hi"
    endpoint_value: float
    sent_value: float
    interval_clipped: bool = False  # far end was cut by the window

    def to_json(self):
        return {
            "pair": list(self.pair),
            "interval": [round_sig(self.interval.lo), round_sig(self.interval.hi)],
            "endpoint": self.endpoint,
            "endpoint_value": round_sig(self.endpoint_value),
            "sent_value": round_sig(self.sent_value),
            "interval_clipped": self.interval_clipped,
        }


def _cross_one(rep, g, names, tol):
    """Witness that g sends a fixed end of one of rep's components inside it."""
    thin = []
    comps = rep.complement_components
    if not comps:
        return None, thin
    ends = []
    for c in comps:
        if c.lo_genuine and math.isfinite(c.lo):
            ends.append((c, "lo", c.lo, c.lo_err))
        if c.hi_genuine and math.isfinite(c.hi):
            ends.append((c, "hi", c.hi, c.hi_err))
    if not ends:
        return None, thin
    vals = g.eval_array(np.array([e[2] for e in ends]))
    for (c, which, x, err), y in zip(ends, vals):
        y = float(y)
        margin = tol.eps_fix + c.lo_err + c.hi_err
        dlo = y - c.lo
        dhi = c.hi - y
        if dlo > margin and dhi > margin:
            return CrossWitness(names, c.interval, which, x, y, not (c.lo_genuine and c.hi_genuine)), thin
        near = min(abs(dlo), abs(dhi))
        if near <= tol.tau_coinc * max(1.0, abs(x)):
            continue  # g fixes the end or swaps it with the other end
        if dlo > -margin and dhi > -margin:
            thin.append((names, c.lo, c.hi, which, x, y))
    return None, thin


def is_crossed(
    f: HomeoExpr,
    g: HomeoExpr,
    window,
    *,
    names: tuple = ("f", "g"),
    grid: int = 2001,
    method: str = "auto",
    tol: Tolerances = DEFAULT_TOL,
    reports: tuple | None = None,
) -> CrossWitness | None:
    """First crossing witness for the pair, trying f's components then g's.

    Only ends that are genuine fixed points are tested; ends at infinity or
    cut off by the window are never sent inside.  Raises Inconclusive when
    no witness exists but some image lands within the tolerance band of an
    end.
    """
    window = as_interval(window).require_finite("window")
    if reports is None:
        reports = (
            fixed_set(f, window, grid, method=method, tol=tol),
            fixed_set(g, window, grid, method=method, tol=tol),
        )
    thin_all = []
    for rep, other, nm in ((reports[0], g, names), (reports[1], f, names[::-1])):
        w, thin = _cross_one(rep, other, nm, tol)
        if w is not None:
            return w
        thin_all.extend(thin)
    if thin_all:
        nm, a, b, which, x, y = thin_all[0]
        raise Inconclusive(f"{nm[1]} sends {x!r} to {y!r}, within the tolerance band of ({a!r}, {b!r})")
    return None


def fix_conjugation_check(
    f: HomeoExpr,
    g: HomeoExpr,
    window,
    samples: int = 100,
    *,
    tol: Tolerances = DEFAULT_TOL,
    report: FixedSetReport | None = None,
) -> bool:
    """Check that g f g^-1 fixes g(x) for sampled fixed points x of f."""
    window = as_interval(window)
    rep = report or fixed_set(f, window, tol=tol)
    pts = [p.lo for p in rep.fixed_intervals if p.is_point]
    spans = [p for p in rep.fixed_intervals if not p.is_point]
    if spans:
        total = sum(p.hi - p.lo for p in spans)
        for p in spans:
            k = max(2, int(round(samples * (p.hi - p.lo) / total)))
            pts.extend(np.linspace(p.lo, p.hi, k).tolist())
    if not pts:
        return True
    conj = Compose((g, f, Inverse(g)))
    gx = g.eval_array(np.array(pts))
    res = np.abs(conj.eval_array(gx) - gx)
    return bool(np.all(res <= tol.eps_fix))


# ---------------------------------------------------------------- freeness


@dataclass(frozen=True)
class FreeResult:
    free: bool
    word: tuple | None
    words_checked: int
    word_len: int

    def __bool__(self):
        return self.free

    def to_json(self):
        return {
            "free_up_to_length": self.word_len if self.free else None,
            "free": self.free,
            "word": word_str(self.word) if self.word is not None else None,
            "words_checked": self.words_checked,
        }


def _has_fixed_point(D, eps):
    if np.any(np.abs(D) <= eps):
        return True
    return bool(np.any(np.sign(D[:-1]) != np.sign(D[1:])))


def is_free_action(
    gens: Mapping[str, HomeoExpr],
    window,
    word_len: int = 6,
    *,
    grid: int = 257,
    tol: Tolerances = DEFAULT_TOL,
) -> FreeResult:
    """Search reduced words up to ``word_len`` for a fixed point in the window.

    Words acting as the identity on the grid (sup |w(x) - x| <= eps_fix) are
    skipped as trivial.  Returns the canonical-order first offending word.
    """
    window = as_interval(window).require_finite("window")
    names = list(gens)
    xs = np.linspace(window.lo, window.hi, grid)
    exprs = {a: letter_expr(a, gens) for a in letters(names)}
    checked = 0
    for length in range(1, word_len + 1):
        bad = []
        stack = [((), xs, np.zeros_like(xs))]
        while stack:
            word, ys, tot = stack.pop()
            if len(word) == length:
                checked += 1
                # summed displacements keep tiny moves exact but drift on long
                # words, so a word is trivial if either measure says so
                moved = min(np.max(np.abs(tot)), np.max(np.abs(ys - xs)))
                if moved > tol.eps_fix and _has_fixed_point(tot, tol.eps_fix):
                    bad.append(word)
                continue
            for a in exprs:
                if word and word[0][0] == a[0] and word[0][1] == -a[1]:
                    continue
                e = exprs[a]
                stack.append(((a,) + word, e.eval_array(ys), tot + e.displacement_array(ys)))
        if bad:
            best = min(bad, key=lambda w: sort_key(w, names))
            return FreeResult(False, best, checked, word_len)
    return FreeResult(True, None, checked, word_len)


def common_fixed_set(
    gens: Sequence[HomeoExpr],
    window,
    *,
    grid: int = 2001,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple:
    """Fix of the group generated by ``gens`` as window minus sorted open gaps.

    A point is fixed by the group iff every generator fixes it, so the gaps
    are the merged moved components of the generators.  Returns
    ``(gaps, reports)`` with gaps as (lo, hi) pairs.
    """
    window = as_interval(window)
    reports = [fixed_set(g, window, grid, tol=tol) for g in gens]
    spans = [(c.lo, c.hi) for r in reports for c in r.complement_components]
    gaps = []
    for a, b in sorted(spans):
        if gaps and a < gaps[-1][1]:
            gaps[-1] = (gaps[-1][0], max(gaps[-1][1], b))
        else:
            gaps.append((a, b))
    return gaps, reports
