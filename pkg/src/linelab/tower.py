"""Infinite towers: validation, constructive search, lexicographic families,
the Kopell threshold and mass-pump certificates.

A tower is a list of levels (I_i, f_i) with I_1 strictly inside I_2 and so
on, where each f_i fixes the two ends of I_i and nothing in between.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .config import DEFAULT_BUDGET, DEFAULT_TOL, Budget, Tolerances
from .errors import (
    BudgetExhausted,
    DisjointnessFailure,
    NoSeedElement,
    OrderViolation,
    SeriesViolation,
)
from .homeo import HomeoExpr, Inverse, from_json, power, to_json
from .intervals import IntervalQ, as_interval
from .numfmt import round_sig
from .structure import common_fixed_set, fixed_set
from .words import commutator, reduce_word, reduced_words, word_expr, word_str


# ---------------------------------------------------------------- data


@dataclass(frozen=True)
class TowerLevel:
    interval: IntervalQ
    expr: HomeoExpr
    name: str
    sign: int = 1  # sign of f(x) - x inside the interval

    def to_json(self):
        return {
            "interval": self.interval.to_json(),
            "name": self.name,
            "sign": "above" if self.sign > 0 else "below",
            "map": to_json(self.expr),
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            IntervalQ.from_json(obj["interval"]),
            from_json(obj["map"]),
            str(obj.get("name", "")),
            1 if obj.get("sign", "above") == "above" else -1,
        )


@dataclass
class Tower:
    levels: list
    base: IntervalQ | None = None  # I_0 for the nilpotent procedure

    def __len__(self):
        return len(self.levels)

    def intervals(self):
        return [lv.interval for lv in self.levels]

    def to_json(self):
        out = {"schema": 1, "levels": [lv.to_json() for lv in self.levels]}
        if self.base is not None:
            out["base"] = self.base.to_json()
        return out

    @classmethod
    def from_json(cls, obj):
        base = obj.get("base")
        return cls(
            [TowerLevel.from_json(lv) for lv in obj["levels"]],
            None if base is None else IntervalQ.from_json(base),
        )


@dataclass
class LevelCheck:
    index: int
    name: str
    interval: IntervalQ
    end_residuals: tuple
    ends_fixed: bool
    interior_clear: bool
    interior_sign: int
    min_sampled_push: float
    nested: bool | None
    nested_in_interior: bool | None
    reasons: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.reasons

    def to_json(self):
        return {
            "level": self.index,
            "name": self.name,
            "interval": self.interval.to_json(),
            "end_residuals": [round_sig(r) for r in self.end_residuals],
            "ends_fixed": self.ends_fixed,
            "interior_clear": self.interior_clear,
            "interior_sign": "above" if self.interior_sign > 0 else "below",
            "min_sampled_push": round_sig(self.min_sampled_push),
            "nested": self.nested,
            "nested_in_interior": self.nested_in_interior,
            "passed": self.passed,
            "reasons": list(self.reasons),
        }


@dataclass
class TowerReport:
    checks: list
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def to_json(self):
        return {"passed": self.passed, "eps_fix": self.tolerance, "levels": [c.to_json() for c in self.checks]}


# ---------------------------------------------------------------- validation


def _check_level(k, lv, tol, samples):
    a, b = lv.interval.lo, lv.interval.hi
    f = lv.expr
    ra = abs(f.eval(a) - a)
    rb = abs(f.eval(b) - b)
    reasons = []
    ends_fixed = ra <= tol.eps_fix and rb <= tol.eps_fix
    if not ends_fixed:
        reasons.append("endpoint not fixed")
    rep = fixed_set(f, lv.interval, tol=tol)
    inner = [p for p in rep.fixed_intervals if p.hi > a and p.lo < b]
    clear = not inner and len(rep.complement_components) == 1
    sign = rep.complement_components[0].sign if rep.complement_components else 0
    if not clear:
        reasons.append("fixed points inside the interval")
    # sampled margin away from the ends; bump-type maps are flat to machine
    # precision right next to their fixed points
    pad = 0.05 * (b - a)
    xs = np.linspace(a + pad, b - pad, samples)
    push = f.displacement_array(xs) * (sign if sign else 1)
    min_push = float(np.min(push))
    if clear and not min_push > 0:
        reasons.append("sampled displacement vanishes inside the interval")
    return LevelCheck(k, lv.name, lv.interval, (ra, rb), ends_fixed, clear, sign, min_push, None, None, reasons)


def validate_tower(t: Tower, *, tol: Tolerances = DEFAULT_TOL, samples: int = 1000) -> TowerReport:
    """Re-derive every level's fixed structure and check strict nesting."""
    checks = []
    prev = t.base
    for k, lv in enumerate(t.levels, start=1):
        c = _check_level(k, lv, tol, samples)
        if prev is not None:
            c.nested = lv.interval.contains_interval(prev) and lv.interval != prev
            c.nested_in_interior = lv.interval.in_interior(prev)
            if not c.nested:
                c.reasons.append("not strictly nested in the next level" if k > 1 else "base not inside level 1")
        checks.append(c)
        prev = lv.interval
    return TowerReport(checks, tol.eps_fix)


# ---------------------------------------------------------------- search


def _component_containing(f, window, lo, hi, tol):
    """Bounded moved component of f strictly containing [lo, hi], or None."""
    rep = fixed_set(f, window, tol=tol)
    for c in rep.complement_components:
        if c.lo < lo and hi < c.hi:
            if c.lo_genuine and c.hi_genuine:
                return c
            return None
    return None


def _gens_of(gens):
    if hasattr(gens, "generators"):
        return dict(gens.generators)
    return dict(gens)


def _find_pusher(gens, names, window, cur, budget, tol, deadline, require_right_push):
    for word in reduced_words(names, budget.word_len):
        if time.monotonic() > deadline:
            return None, "wall-clock budget spent"
        w = word_expr(word, gens)
        if require_right_push and not w.eval(cur.hi) > cur.hi + tol.eps_fix:
            continue
        # cheap screen: a pusher moves every sampled point of cur the same way
        d = w.displacement_array(np.linspace(cur.lo, cur.hi, 65))
        if np.any(np.abs(d) <= tol.eps_fix) or not (np.all(d > 0) or np.all(d < 0)):
            continue
        # no sampled fixed point in the whole window: no bounded component
        dw = w.displacement_array(np.linspace(window.lo, window.hi, 257))
        if np.all(np.abs(dw) > tol.eps_fix) and (np.all(dw > 0) or np.all(dw < 0)):
            continue
        c = _component_containing(w, window, cur.lo, cur.hi, tol)
        if c is not None:
            return (word, w, c), None
    return None, f"no pusher among words of length <= {budget.word_len}"


def search_tower(
    gens,
    window=None,
    budget: Budget = DEFAULT_BUDGET,
    *,
    tol: Tolerances = DEFAULT_TOL,
) -> Tower:
    """Grow a tower from a seed component by repeatedly finding a pusher.

    The seed is the widest bounded moved component of the first generator
    that has one.  A pusher is the first word in canonical order with no
    fixed point on the current interval whose moved component around it is
    bounded inside the window; that component becomes the next level.  The
    search stops once a level covers the window.
    """
    gmap = _gens_of(gens)
    if window is None:
        window = gens.window
    window = as_interval(window).require_finite("window")
    names = list(gmap)
    deadline = time.monotonic() + budget.wall_clock
    seed = None
    for n in names:
        rep = fixed_set(gmap[n], window, tol=tol)
        bounded = [c for c in rep.complement_components if c.lo_genuine and c.hi_genuine]
        if bounded:
            c = max(bounded, key=lambda c: c.hi - c.lo)
            seed = TowerLevel(IntervalQ(c.lo, c.hi), gmap[n], n, c.sign)
            break
    if seed is None:
        raise NoSeedElement("no generator has a bounded moved component in the window")
    tower = Tower([seed])
    while not tower.levels[-1].interval.contains_interval(window):
        if len(tower) >= budget.levels:
            raise BudgetExhausted(f"level budget {budget.levels} reached", tower)
        cur = tower.levels[-1].interval
        found, why = _find_pusher(gmap, names, window, cur, budget, tol, deadline, False)
        if found is None:
            raise BudgetExhausted(why, tower)
        word, w, c = found
        tower.levels.append(TowerLevel(IntervalQ(c.lo, c.hi), w, word_str(word), c.sign))
    return tower


def check_series(gmap, a_names, b_names, window, *, word_len=4, grid=257, tol=DEFAULT_TOL):
    """Spot-check [B, B] <= A: each generator commutator must act like an A-word."""
    xs = np.linspace(window.lo, window.hi, grid)
    a_words = [()] + list(reduced_words(a_names, word_len)) if a_names else [()]
    a_disp = [word_expr(w, gmap).displacement_array(xs) for w in a_words]
    for u, v in itertools.combinations(b_names, 2):
        com = reduce_word(commutator(((u, 1),), ((v, 1),)))
        d = word_expr(com, gmap).displacement_array(xs)
        if not any(np.max(np.abs(d - da)) <= tol.eps_fix for da in a_disp):
            raise SeriesViolation(f"commutator [{u}, {v}] matches no word of A up to length {word_len}")


def search_tower_nilpotent(
    gens,
    window=None,
    budget: Budget = DEFAULT_BUDGET,
    *,
    a_names: Sequence[str] | None = None,
    b_names: Sequence[str] | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> Tower:
    """Tower over a declared pair A <| B with [B, B] <= A.

    I_0 is the widest bounded component of the complement of Fix(A); each
    pusher is a B-word h with h(b_i) > b_i and no fixed point on I_i.  The
    returned tower carries I_0 as ``base``.
    """
    gmap = _gens_of(gens)
    if window is None:
        window = gens.window
    window = as_interval(window).require_finite("window")
    if a_names is None or b_names is None:
        a_names, b_names = gens.series_pair(window)
    a_names = list(a_names)
    b_names = list(b_names)
    for n in a_names + b_names:
        if n not in gmap:
            raise SeriesViolation(f"unknown generator {n!r} in series")
    check_series(gmap, a_names, b_names, window, word_len=min(budget.word_len, 4), tol=tol)
    if not a_names:
        raise NoSeedElement("A is trivial")
    gaps, reps = common_fixed_set([gmap[n] for n in a_names], window, tol=tol)
    bounded = []
    for a, b in gaps:
        lo_ok = a > window.lo or any(c.lo == a and c.lo_genuine for r in reps for c in r.complement_components)
        hi_ok = b < window.hi or any(c.hi == b and c.hi_genuine for r in reps for c in r.complement_components)
        if lo_ok and hi_ok:
            bounded.append((a, b))
    if not bounded:
        raise NoSeedElement("no component of the complement of Fix(A) has finite ends in the window")
    a0, b0 = max(bounded, key=lambda g: g[1] - g[0])
    base = IntervalQ(a0, b0)
    tower = Tower([], base)
    cur = base
    deadline = time.monotonic() + budget.wall_clock
    bmap = {n: gmap[n] for n in b_names}
    while not cur.contains_interval(window):
        if len(tower) >= budget.levels:
            raise BudgetExhausted(f"level budget {budget.levels} reached", tower)
        found, why = _find_pusher(bmap, b_names, window, cur, budget, tol, deadline, True)
        if found is None:
            raise BudgetExhausted(why, tower)
        word, w, c = found
        cur = IntervalQ(c.lo, c.hi)
        tower.levels.append(TowerLevel(cur, w, word_str(word), c.sign))
    return tower


# ---------------------------------------------------------------- lex family


def colex_key(w):
    """Order with the last index most significant (outermost map first)."""
    return tuple(reversed(w))


@dataclass
class LexFamily:
    base: IntervalQ
    maps: list
    box: list  # inclusive (lo, hi) per index
    intervals: dict  # index tuple -> (lo, hi)
    shift_residual: float
    order_checked: bool

    def ordered(self):
        return sorted(self.intervals, key=colex_key)

    def to_json(self):
        return {
            "schema": 1,
            "base": self.base.to_json(),
            "box": [list(b) for b in self.box],
            "shift_residual": round_sig(self.shift_residual),
            "intervals": [
                {"index": list(w), "interval": [round_sig(self.intervals[w][0]), round_sig(self.intervals[w][1])]}
                for w in self.ordered()
            ],
        }


def _apply_powers(hs, w, x):
    for h, l in zip(hs, w):
        if l:
            x = power(h, l).eval(x)
    return x


def build_lex_family(
    base,
    hs: Sequence[HomeoExpr],
    box,
    *,
    shift_tol: float = 1e-8,
    tol: Tolerances = DEFAULT_TOL,
) -> LexFamily:
    """Intervals h_k^{l_k} ... h_1^{l_1}(I_0) over an index box.

    Checks that consecutive intervals in order (last index most
    significant) have disjoint interiors and that h_j shifts index j by
    one.  Raises OrderViolation with the offending index pair.
    """
    base = as_interval(base).require_finite("base interval")
    hs = list(hs)
    k = len(hs)
    if k < 3:
        raise ValueError("a lexicographic family needs at least three maps")
    if isinstance(box, (tuple, list)) and len(box) == 2 and all(isinstance(v, int) for v in box):
        box = [tuple(box)] * k
    box = [(int(a), int(b)) for a, b in box]
    if len(box) != k:
        raise ValueError("box must give one range per map")
    probe = np.linspace(base.lo, base.hi, 33)
    for j, h in enumerate(hs, start=1):
        if not np.all(h.eval_array(probe) > probe):
            raise ValueError(f"h_{j} does not push every point of the base interval to the right")
    ranges = [range(a, b + 1) for a, b in box]
    fam = {}
    for w in itertools.product(*ranges):
        fam[w] = (_apply_powers(hs, w, base.lo), _apply_powers(hs, w, base.hi))
    order = sorted(fam, key=colex_key)
    for w1, w2 in zip(order, order[1:]):
        lo1, hi1 = fam[w1]
        lo2, hi2 = fam[w2]
        slack = tol.tau_inv * max(1.0, abs(hi1))
        if not (lo1 < hi1 and hi1 <= lo2 + slack and lo2 < hi2):
            raise OrderViolation(f"L{w1} and L{w2} are not disjoint and in order", (w1, w2))
    resid = 0.0
    for w in order:
        for j, h in enumerate(hs):
            w2 = tuple(v + (1 if i == j else 0) for i, v in enumerate(w))
            if w2 not in fam:
                continue
            img = (h.eval(fam[w][0]), h.eval(fam[w][1]))
            r = max(abs(img[0] - fam[w2][0]), abs(img[1] - fam[w2][1]))
            if r > shift_tol:
                raise OrderViolation(f"h_{j + 1}(L{w}) misses L{w2} by {r:.3g}", (w, w2))
            resid = max(resid, r)
    return LexFamily(base, hs, box, fam, resid, True)


# ---------------------------------------------------------------- Kopell


def kopell_residual(alpha: float, k: int) -> float:
    return alpha * (1.0 + alpha) ** (k - 2) - 1.0


def kopell_alpha_threshold(k: int) -> float:
    """Positive root of alpha (1 + alpha)^(k-2) = 1, bisected to the last bit."""
    if int(k) != k or k < 3:
        raise ValueError("k must be an integer >= 3")
    lo, hi = 0.0, 1.0
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if kopell_residual(mid, k) < 0:
            lo = mid
        else:
            hi = mid
    return lo if abs(kopell_residual(lo, k)) <= abs(kopell_residual(hi, k)) else hi


def kopell_min_k(alpha: float) -> int:
    """Smallest k >= 3 with alpha (1 + alpha)^(k-2) >= 1."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    k = max(3, int(math.ceil(2.0 - math.log(alpha) / math.log1p(alpha))))
    while k > 3 and kopell_residual(alpha, k - 1) >= 0:
        k -= 1
    while kopell_residual(alpha, k) < 0:
        k += 1
    return k


# ---------------------------------------------------------------- mass pump


@dataclass
class MassPumpCertificate:
    level: int
    base: IntervalQ  # the open interior of I_N is the pumped set
    container: IntervalQ
    iterates: int
    images: list  # (lo, hi) of f^i(I_N), i = 0..iterates
    orientation: str  # "forward" or "inverse"

    @property
    def multiplier(self) -> int:
        return self.iterates + 1

    def mass_lower_bound(self, base_mass: float) -> float:
        """Lower bound for mu(I_{N+1}) given mu(int I_N) for invariant mu."""
        return self.multiplier * base_mass

    def audit(self, measure) -> dict:
        """Check the certificate's arithmetic against a candidate measure."""
        m0 = measure.mass(self.base.lo, self.base.hi)
        masses = [measure.mass(a, b) for a, b in self.images]
        total = measure.mass(self.container.lo, self.container.hi)
        return {
            "base_mass": m0,
            "image_masses": masses,
            "container_mass": total,
            "bound": self.mass_lower_bound(m0),
            "consistent": total + 1e-9 * max(1.0, total) >= sum(masses),
        }

    def to_json(self):
        return {
            "schema": 1,
            "level": self.level,
            "base": self.base.to_json(),
            "container": self.container.to_json(),
            "iterates": self.iterates,
            "multiplier": self.multiplier,
            "orientation": self.orientation,
            "images": [[round_sig(a), round_sig(b)] for a, b in self.images],
            "claim": f"mu(I_{self.level + 1}) >= {self.multiplier} * mu(int I_{self.level}) for any invariant mu",
        }


def mass_pump(t: Tower, N: int, K: int, *, tol: Tolerances = DEFAULT_TOL) -> MassPumpCertificate:
    """Iterate level N+1's map on I_N and certify K+1 disjoint images inside I_{N+1}.

    Levels are numbered from 1.  Images may touch at an end point (the
    pumped set is the open interior) but must not overlap.
    """
    if not 1 <= N < len(t.levels):
        raise ValueError(f"need 1 <= N < number of levels ({len(t.levels)})")
    if K < 0:
        raise ValueError("K must be >= 0")
    base = t.levels[N - 1].interval
    top = t.levels[N]
    f = top.expr
    mid = 0.5 * (base.lo + base.hi)
    orient = "forward"
    if f.displacement(mid) < 0:
        f = Inverse(f)
        orient = "inverse"
    a, b = base.lo, base.hi
    images = [(a, b)]
    for i in range(1, K + 1):
        a2, b2 = f.eval(a), f.eval(b)
        slack = tol.tau_coinc * max(1.0, abs(b))
        if not (a2 > a and b2 > b and a2 < b2):
            raise DisjointnessFailure(f"image {i} is not strictly to the right of image {i - 1}", (i - 1, i))
        if b > a2 + slack:
            raise DisjointnessFailure(f"images {i - 1} and {i} overlap", (i - 1, i))
        a, b = a2, b2
        images.append((a, b))
    box = top.interval
    if not (box.lo <= images[0][0] and images[-1][1] <= box.hi):
        raise DisjointnessFailure("images leave the next level", (0, K))
    return MassPumpCertificate(N, base, box, K, images, orient)
