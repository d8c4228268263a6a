"""Invariant Radon measures for actions on the line.

Four measure families are provided, each exposing ``mass(lo, hi)`` for the
closed interval [lo, hi]:

* ``DiracComb``: finitely many atoms with weights.
* ``OrbitCounting``: counting measure on a computed orbit.
* ``StieltjesFromMap``: mass = phi(hi) - phi(lo) for a nondecreasing phi.
* ``LebesguePullback``: mass = H(hi) - H(lo) for a homeomorphism H.

``classify_action`` runs the case analysis for a group spec and returns the
measure together with residuals and diagnostics.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_BUDGET, DEFAULT_TOL, Budget, Tolerances
from .errors import (
    BudgetExhausted,
    DegenerateTau,
    GapsNotInvariant,
    HasFixedPoints,
    Inconclusive,
    NoSeedElement,
    NotFree,
    OrbitAccumulates,
    WindowEscape,
)
from .homeo import (
    Affine,
    Compose,
    HomeoExpr,
    Inverse,
    Piecewise,
    Translation,
    piecewise_linear,
    power,
    to_json,
)
from .intervals import IntervalQ, as_interval
from .numfmt import round_sig
from .structure import common_fixed_set, fixed_set, is_crossed, is_free_action

# ---------------------------------------------------------------- measures


class RadonMeasure:
    kind = "abstract"

    def mass(self, lo: float, hi: float) -> float:
        raise NotImplementedError

    def to_json(self):
        raise NotImplementedError


@dataclass
class DiracComb(RadonMeasure):
    points: tuple
    weights: tuple = ()
    kind = "dirac_comb"

    def __post_init__(self):
        pts = [float(p) for p in self.points]
        w = [float(x) for x in self.weights] if self.weights else [1.0] * len(pts)
        if len(w) != len(pts):
            raise ValueError("points and weights differ in length")
        if any(x < 0 for x in w):
            raise ValueError("weights must be nonnegative")
        order = sorted(range(len(pts)), key=pts.__getitem__)
        self.points = tuple(pts[i] for i in order)
        self.weights = tuple(w[i] for i in order)
        self._cum = np.concatenate([[0.0], np.cumsum(self.weights)])

    def mass(self, lo, hi):
        if hi < lo:
            return 0.0
        i = bisect.bisect_left(self.points, lo)
        j = bisect.bisect_right(self.points, hi)
        return float(self._cum[j] - self._cum[i])

    def to_json(self):
        return {
            "kind": self.kind,
            "points": [round_sig(p) for p in self.points],
            "weights": [round_sig(w) for w in self.weights],
        }


@dataclass
class OrbitCounting(DiracComb):
    """Counting measure on orbit points, each of weight ``normalization``."""

    seed: float = 0.0
    normalization: float = 1.0
    kind = "orbit_counting"

    def __post_init__(self):
        self.weights = (self.normalization,) * len(self.points)
        super().__post_init__()

    def to_json(self):
        out = super().to_json()
        out.pop("weights")
        out.update(seed=round_sig(self.seed), normalization=round_sig(self.normalization))
        return out


@dataclass
class CollapseMap:
    """Nondecreasing map that is constant on each closed gap and has slope 1 elsewhere.

    ``phi(x) = x - (total length of gap parts to the left of x)``, shifted so
    that ``phi(origin) = 0``.
    """

    gaps: tuple
    origin: float = 0.0

    def __post_init__(self):
        gaps = sorted((float(a), float(b)) for a, b in self.gaps)
        for (a1, b1), (a2, b2) in zip(gaps, gaps[1:]):
            if a2 < b1:
                raise ValueError("gaps must be disjoint")
        for a, b in gaps:
            if not b > a:
                raise ValueError("gaps must have positive length")
        self.gaps = tuple(gaps)
        self._los = [a for a, _ in gaps]
        self._cum = [0.0]
        for a, b in gaps:
            self._cum.append(self._cum[-1] + (b - a))
        self._shift = 0.0
        self._shift = self._raw(self.origin)

    def _raw(self, x):
        k = bisect.bisect_right(self._los, x)  # gaps starting at or before x
        if k == 0:
            return x
        a, b = self.gaps[k - 1]
        if x <= b:
            return a - self._cum[k - 1]
        return x - self._cum[k]

    def eval(self, x: float) -> float:
        return self._raw(x) - self._shift

    def eval_array(self, xs):
        return np.array([self.eval(float(x)) for x in np.asarray(xs, dtype=float)])

    def to_json(self):
        return {
            "op": "collapse",
            "gaps": [[round_sig(a), round_sig(b)] for a, b in self.gaps],
            "origin": round_sig(self.origin),
        }


@dataclass
class StieltjesFromMap(RadonMeasure):
    phi: object  # anything with a nondecreasing .eval
    kind = "stieltjes"

    def mass(self, lo, hi):
        if hi < lo:
            return 0.0
        return float(self.phi.eval(hi) - self.phi.eval(lo))

    def to_json(self):
        p = self.phi
        return {"kind": self.kind, "phi": p.to_json() if hasattr(p, "gaps") else to_json(p)}


@dataclass
class LebesguePullback(RadonMeasure):
    h: HomeoExpr
    kind = "lebesgue_pullback"

    def mass(self, lo, hi):
        if hi < lo:
            return 0.0
        return float(self.h.eval(hi) - self.h.eval(lo))

    def to_json(self):
        return {"kind": self.kind, "h": to_json(self.h)}


def measure_interval(mu: RadonMeasure, interval) -> float:
    iv = as_interval(interval).require_finite("interval")
    return mu.mass(iv.lo, iv.hi)


def invariance_residual(mu: RadonMeasure, g: HomeoExpr, probes) -> float:
    """max |mu(g[a, b]) - mu([a, b])| over probe intervals."""
    worst = 0.0
    for a, b in probes:
        worst = max(worst, abs(mu.mass(g.eval(a), g.eval(b)) - mu.mass(a, b)))
    return worst


def probe_intervals(window, gens=(), n: int = 64, seed: int = 0, avoid=(), margin: float = 0.0):
    """Seeded random probe intervals whose images under every map stay in the window.

    Interval ends closer than ``margin`` to a point of ``avoid`` are
    redrawn, which keeps atoms of a comb away from the probe boundaries.
    """
    window = as_interval(window).require_finite("window")
    rng = np.random.default_rng(seed)
    avoid = np.sort(np.asarray(list(avoid), dtype=float))
    out = []
    tries = 0
    while len(out) < n and tries < 200 * n:
        tries += 1
        a, b = np.sort(rng.uniform(window.lo, window.hi, 2))
        if b - a < 1e-6 * window.length:
            continue
        ends = [a, b]
        for g in gens:
            ends += [g.eval(a), g.eval(b)]
        if not all(window.lo <= e <= window.hi for e in ends):
            continue
        if margin > 0 and avoid.size:
            near = np.min(np.abs(avoid[:, None] - np.array(ends)[None, :]))
            if near < margin:
                continue
        out.append((float(a), float(b)))
    return out


# ---------------------------------------------------------------- translation numbers


@dataclass
class TranslationNumber:
    value: float
    error: float
    iterates: int
    x0: float
    tail: list = field(default_factory=list)

    def to_json(self):
        return {
            "value": round_sig(self.value),
            "error": round_sig(self.error),
            "iterates": self.iterates,
            "x0": round_sig(self.x0),
        }


def translation_number(
    f: HomeoExpr,
    x0: float = 0.0,
    n_max: int = 10_000,
    *,
    window=None,
    tol: Tolerances = DEFAULT_TOL,
) -> TranslationNumber:
    """lim (f^n(x0) - x0)/n with an error bar from the tail oscillation.

    The running averages over the last quarter of the orbit are compared;
    the error bar is four times their spread, plus rounding slack.  When a
    window is given f must be fixed-point free on it.
    """
    if n_max < 4:
        raise ValueError("n_max must be at least 4")
    if window is not None:
        rep = fixed_set(f, window, tol=tol)
        if rep.has_fixed_point:
            raise HasFixedPoints(f"map has fixed points in {rep.window}")
    x = float(x0)
    disp = []
    d0 = f.displacement(x)
    if abs(d0) <= tol.eps_fix:
        raise HasFixedPoints(f"x0 = {x0!r} is (numerically) fixed")
    sign = 1.0 if d0 > 0 else -1.0
    for _ in range(n_max):
        d = f.displacement(x)
        if not math.isfinite(d):
            raise WindowEscape("orbit left the representable range")
        if d * sign <= 0 or abs(d) <= 1e-3 * tol.eps_fix * abs(d0):
            raise HasFixedPoints("orbit stalls: the map has a fixed point ahead of x0")
        disp.append(d)
        x = x + d
        if abs(x) > 1e15:
            raise WindowEscape("orbit left the representable range")
    csum = np.cumsum(disp)
    n = np.arange(1, n_max + 1)
    avg = csum / n
    tail = avg[3 * n_max // 4 :]
    value = math.fsum(disp) / n_max
    spread = float(np.max(tail) - np.min(tail))
    err = 4.0 * spread + 4.0 * np.finfo(float).eps * (abs(value) + abs(x) / n_max)
    step = max(1, len(tail) // 64)
    return TranslationNumber(value, float(err), n_max, float(x0), [float(v) for v in tail[::step]])


# ---------------------------------------------------------------- conjugacy (subcase 2a)


def _orbit(f, x0, n):
    out = [x0]
    for _ in range(n):
        out.append(f.eval(out[-1]))
    return out


def orbit_ratio(g0: HomeoExpr, g1: HomeoExpr, x0: float, q_max: int = 20_000):
    """Bracket rho >= 0 with g1 ~ g0^rho from orbit order alone.

    Both maps must push to the right.  For a free action conjugate to
    translations, g1^q(x0) > g0^p(x0) exactly when q*rho > p, so a
    Stern-Brocot descent over p/q gives rational bounds of width about
    1/q_max^2.  Returns (lo, hi) as floats.
    """
    o0 = [x0]
    o1 = [x0]

    def p0(p):
        while len(o0) <= p:
            o0.append(g0.eval(o0[-1]))
        return o0[p]

    def p1(q):
        while len(o1) <= q:
            o1.append(g1.eval(o1[-1]))
        return o1[q]

    def cmp(p, q):  # sign of q*rho - p
        u, v = p1(q), p0(p)
        return (u > v) - (u < v)

    # integer part
    y = p1(1)
    n = 0
    while p0(n + 1) <= y:
        n += 1
        if n > 10 * q_max:
            raise DegenerateTau("ratio is too large to bracket")
    if p0(n) == y:
        return float(n), float(n)
    la, lb, ra, rb = n, 1, n + 1, 1
    while lb + rb <= q_max:
        ma, mb = la + ra, lb + rb
        c = cmp(ma, mb)
        if c == 0:
            return ma / mb, ma / mb
        if c > 0:
            la, lb = ma, mb
        else:
            ra, rb = ma, mb
    return la / lb, ra / rb


@dataclass
class ConjugacyReport:
    base: str
    x0: float
    translation_numbers: dict
    ratios: dict  # name -> (value, half_width)
    fundamental_domain: tuple
    knots: int
    free_words_checked: int

    def to_json(self):
        return {
            "base_generator": self.base,
            "x0": round_sig(self.x0),
            "translation_numbers": {k: v.to_json() for k, v in self.translation_numbers.items()},
            "ratios": {k: [round_sig(v), round_sig(e)] for k, (v, e) in self.ratios.items()},
            "fundamental_domain": [round_sig(self.fundamental_domain[0]), round_sig(self.fundamental_domain[1])],
            "knots": self.knots,
            "free_words_checked": self.free_words_checked,
        }


def conjugacy_to_translation(
    gens,
    window,
    *,
    word_len: int = 4,
    n_max: int = 10_000,
    orbit_points: int = 1000,
    q_max: int = 20_000,
    x0: float | None = None,
    free=None,
    tol: Tolerances = DEFAULT_TOL,
):
    """Lebesgue pullback for a free action, with a ``ConjugacyReport``.

    The generator with the largest translation number is the base g0.  The
    other generators' ratios to g0 come from orbit order.  Their orbits of
    x0, folded into the fundamental domain [x0, g0(x0)), give knots of a PL
    coordinate on that domain; g0-equivariance spreads it over the window.
    """
    window = as_interval(window).require_finite("window")
    gmap = dict(gens.generators) if hasattr(gens, "generators") else dict(gens)
    if free is None:
        free = is_free_action(gmap, window, word_len, tol=tol)
    if not free:
        raise NotFree("action is not free", free.word)
    if x0 is None:
        x0 = window.mid
    taus = {n: translation_number(g, x0, n_max, tol=tol) for n, g in gmap.items() if not _is_identity(g)}
    if not taus or max(abs(t.value) for t in taus.values()) <= 1e-6:
        raise DegenerateTau("all translation numbers vanish")
    base = max(taus, key=lambda n: abs(taus[n].value))
    tau0 = taus[base].value
    g0 = gmap[base] if tau0 > 0 else Inverse(gmap[base])
    t0 = abs(tau0)
    x1 = g0.eval(x0)
    g0_inv = Inverse(g0)

    # fractional coordinates of folded orbit points
    fracs = [0.0]
    pos = [x0]
    ratios = {}
    for n, t in taus.items():
        if n == base:
            continue
        sgn = 1.0 if (t.value > 0) == (tau0 > 0) else -1.0
        g = gmap[n] if t.value > 0 else Inverse(gmap[n])
        lo, hi = orbit_ratio(g0, g, x0, q_max)
        rho = 0.5 * (lo + hi)
        ratios[n] = (sgn * rho, 0.5 * (hi - lo))
        for direction, step in ((1, g), (-1, Inverse(g))):
            y = x0
            for b in range(1, orbit_points + 1):
                y = step.eval(y)
                while y >= x1:
                    y = g0_inv.eval(y)
                while y < x0:
                    y = g0.eval(y)
                fr = (direction * b * rho) % 1.0
                fracs.append(fr)
                pos.append(y)
    order = np.argsort(fracs, kind="stable")
    knots = [(x0, 0.0)]
    for i in order:
        fr, y = fracs[i], pos[i]
        if fr <= knots[-1][1] / t0 + 1e-12 or fr >= 1.0 - 1e-12:
            continue
        if not y > knots[-1][0]:
            raise NotFree("orbit order disagrees with the translation ratios", None)
        knots.append((y, fr * t0))
    if not x1 > knots[-1][0]:
        raise NotFree("orbit order disagrees with the translation ratios", None)
    knots.append((x1, t0))
    h_fd = piecewise_linear(knots, extend="affine")

    # spread over the window by g0-equivariance: H(g0^k y) = H(y) + k*t0
    pieces = []
    k_lo = 0
    left = x0
    while left > window.lo:
        left = g0_inv.eval(left)
        k_lo -= 1
    k_hi = 0
    right = x1
    while right < window.hi:
        right = g0.eval(right)
        k_hi += 1
    edges = [left]
    for _ in range(k_lo, k_hi + 1):
        edges.append(g0.eval(edges[-1]))
    for j, k in enumerate(range(k_lo, k_hi + 1)):
        part = h_fd if k == 0 else Compose((Translation(k * t0), h_fd, power(g0, -k)))
        pieces.append((IntervalQ(edges[j], edges[j + 1]), part))
    inf = float("inf")
    s_left = t0 / (x1 - x0)
    y_l = pieces[0][1].eval(edges[0])
    y_r = pieces[-1][1].eval(edges[-1])
    pieces.insert(0, (IntervalQ(-inf, edges[0]), Affine(s_left, y_l - s_left * edges[0])))
    pieces.append((IntervalQ(edges[-1], inf), Affine(s_left, y_r - s_left * edges[-1])))
    H = Piecewise(tuple(pieces))
    rep = ConjugacyReport(base, x0, taus, ratios, (x0, x1), len(knots), free.words_checked)
    return LebesguePullback(H), rep


def _is_identity(g):
    from .homeo import Identity

    return isinstance(g, Identity)


# ---------------------------------------------------------------- subcase 2b


def collapse_and_measure(
    gaps,
    gens,
    window,
    *,
    quotient: HomeoExpr | None = None,
    tol: Tolerances = DEFAULT_TOL,
):
    """Collapse the closed gaps of Fix(Gamma) and pull back Lebesgue measure.

    Every generator and its inverse must map each gap onto a gap (images
    leaving the window are not checked).  ``quotient`` optionally
    straightens the induced action on the collapsed line.  Returns
    ``(CollapseMap, StieltjesFromMap)``; the measure gives mass 0 to every
    gap closure.
    """
    window = as_interval(window).require_finite("window")
    gmap = dict(gens.generators) if hasattr(gens, "generators") else dict(gens)
    gaps = sorted((float(a), float(b)) for a, b in gaps)
    for n, g in gmap.items():
        for label, m in ((n, g), (f"{n}^-1", Inverse(g))):
            for a, b in gaps:
                ia, ib = m.eval(a), m.eval(b)
                if not (window.lo <= ia and ib <= window.hi):
                    continue
                if not any(
                    abs(ia - c) <= tol.eps_fix * max(1.0, abs(c)) and abs(ib - d) <= tol.eps_fix * max(1.0, abs(d))
                    for c, d in gaps
                ):
                    raise GapsNotInvariant(f"{label} does not map gap ({a!r}, {b!r}) onto a gap", label, (a, b))
    phi = CollapseMap(tuple(gaps), window.lo)
    if quotient is not None:
        phi = _Composed(quotient, phi)
    return phi, StieltjesFromMap(phi)


@dataclass
class _Composed:
    outer: HomeoExpr
    inner: CollapseMap

    @property
    def gaps(self):
        return self.inner.gaps

    def eval(self, x):
        return self.outer.eval(self.inner.eval(x))

    def to_json(self):
        return {"op": "compose", "parts": [to_json(self.outer), self.inner.to_json()]}


# ---------------------------------------------------------------- subcase 2c


def _orbit_points(gmap, y, word_len, scale, tol):
    """Orbit of y under words of length <= word_len, merged at tau_coinc."""
    maps = []
    for g in gmap.values():
        maps += [g, Inverse(g)]
    levels = [np.array([y])]
    frontier = np.array([y])
    seen = np.array([y])
    for _ in range(word_len):
        new = np.concatenate([m.eval_array(frontier) for m in maps]) if frontier.size else frontier
        new = new[np.isfinite(new)]
        allp = np.unique(np.concatenate([seen, new]))
        keep = np.concatenate([[True], np.diff(allp) > tol.tau_coinc * scale])
        allp = allp[keep]
        frontier = np.setdiff1d(allp, seen)
        # drop near duplicates of old points
        if frontier.size and seen.size:
            idx = np.searchsorted(seen, frontier)
            lo_d = np.abs(frontier - seen[np.clip(idx - 1, 0, seen.size - 1)])
            hi_d = np.abs(seen[np.clip(idx, 0, seen.size - 1)] - frontier)
            frontier = frontier[np.minimum(lo_d, hi_d) > tol.tau_coinc * scale]
        seen = allp
        levels.append(seen)
    return levels


def _min_spacing(pts, window):
    p = pts[(pts >= window.lo) & (pts <= window.hi)]
    if p.size < 2:
        return math.inf
    return float(np.min(np.diff(p)))


def discrete_orbit_measure(
    gens,
    y: float,
    window,
    *,
    word_len: int = 6,
    tol: Tolerances = DEFAULT_TOL,
) -> DiracComb:
    """Counting measure on the orbit of y inside the window.

    The orbit is enumerated by word length.  It is declared accumulating
    when its minimum spacing in the window drops below ``eps_sep`` or is
    still shrinking between half the word budget and the full budget.
    """
    window = as_interval(window).require_finite("window")
    gmap = dict(gens.generators) if hasattr(gens, "generators") else dict(gens)
    scale = max(1.0, abs(window.lo), abs(window.hi))
    levels = _orbit_points(gmap, float(y), word_len, scale, tol)
    full = levels[-1]
    s_full = _min_spacing(full, window)
    s_half = _min_spacing(levels[max(1, word_len // 2)], window)
    if s_full < tol.eps_sep:
        raise OrbitAccumulates(f"orbit spacing {s_full:.3g} below eps_sep")
    if s_full < s_half * (1 - 1e-9):
        raise OrbitAccumulates(f"orbit spacing still shrinking ({s_half:.3g} -> {s_full:.3g})")
    pts = _grow_orbit(gmap, full, window, scale, tol)
    return OrbitCounting(tuple(float(p) for p in pts), seed=float(y))


def _grow_orbit(gmap, pts, window, scale, tol, max_points=100_000):
    """Keep applying generators until no new orbit point appears near the window."""
    maps = []
    for g in gmap.values():
        maps += [g, Inverse(g)]
    lo, hi = window.lo - window.length, window.hi + window.length
    seen = np.unique(pts[(pts >= lo) & (pts <= hi)])
    frontier = seen
    while frontier.size and seen.size < max_points:
        new = np.concatenate([m.eval_array(frontier) for m in maps])
        new = new[np.isfinite(new) & (new >= lo) & (new <= hi)]
        if not new.size:
            break
        idx = np.clip(np.searchsorted(seen, new), 1, max(seen.size - 1, 1))
        near = np.minimum(np.abs(new - seen[idx - 1]), np.abs(new - seen[np.minimum(idx, seen.size - 1)]))
        new = np.unique(new[near > tol.tau_coinc * scale])
        if not new.size:
            break
        seen = np.union1d(seen, new)
        frontier = new
    return seen[(seen >= window.lo) & (seen <= window.hi)]


# ---------------------------------------------------------------- classification


@dataclass
class Classification:
    case: str  # case1, subcase2a, subcase2b, subcase2c, unclassified
    reason: str
    measure: RadonMeasure | None = None
    minimal_set: dict | None = None
    residuals: dict = field(default_factory=dict)
    crossings: list = field(default_factory=list)
    tower: object = None
    certificate: object = None
    details: dict = field(default_factory=dict)

    @property
    def classified(self) -> bool:
        return self.case != "unclassified"

    def to_json(self):
        return {
            "case": self.case,
            "reason": self.reason,
            "measure": None if self.measure is None else self.measure.to_json(),
            "minimal_set": self.minimal_set,
            "residuals": {k: round_sig(v) for k, v in self.residuals.items()},
            "crossings": [c.to_json() for c in self.crossings],
            "tower": None if self.tower is None else self.tower.to_json(),
            "mass_pump": None if self.certificate is None else self.certificate.to_json(),
            "details": self.details,
        }


def _residuals(mu, gmap, window, avoid=(), margin=0.0, n=64, seed=0):
    out = {}
    for name, g in gmap.items():
        probes = probe_intervals(window, [g], n, seed, avoid, margin)
        out[name] = invariance_residual(mu, g, probes) if probes else 0.0
    return out


def classify_action(spec, window=None, budget: Budget | None = None, *, tol: Tolerances | None = None) -> Classification:
    """Case analysis for a finitely generated action (see the README)."""
    gmap = dict(spec.generators)
    window = as_interval(window if window is not None else spec.window).require_finite("window")
    budget = budget or getattr(spec, "budget", DEFAULT_BUDGET)
    tol = tol or getattr(spec, "tolerances", DEFAULT_TOL)
    names = list(gmap)
    reports = {n: fixed_set(g, window, tol=tol) for n, g in gmap.items()}

    # crossed pairs rule out every classified case
    crossings = []
    inconclusive = []
    for i, u in enumerate(names):
        for v in names[i + 1 :]:
            try:
                w = is_crossed(gmap[u], gmap[v], window, names=(u, v), tol=tol, reports=(reports[u], reports[v]))
            except Inconclusive as exc:
                inconclusive.append(f"{u},{v}: {exc}")
                continue
            if w is not None:
                crossings.append(w)
    if crossings:
        return Classification("unclassified", "crossed elements present", crossings=crossings)
    details = {"inconclusive_crossings": inconclusive} if inconclusive else {}

    # case 1: a global fixed point in the open window
    gaps, _ = common_fixed_set(list(gmap.values()), window, tol=tol)
    x_fix = _interior_fixed_point(gaps, window)
    if x_fix is not None:
        mu = DiracComb((x_fix,))
        res = _residuals(mu, gmap, window, [x_fix], 1e-6 * window.length)
        return Classification(
            "case1", "global fixed point", mu, {"kind": "point", "status": "candidate", "point": round_sig(x_fix)},
            res, details=details,
        )

    # subcase 2a: free action
    free = is_free_action(gmap, window, budget.word_len, tol=tol)
    if free:
        mu, rep = conjugacy_to_translation(gmap, window, n_max=budget.iterates, free=free, tol=tol)
        res = _residuals(mu, gmap, window)
        rational = all(abs(v - round(v)) < 1e-9 or _small_denominator(v) for v, _ in rep.ratios.values())
        details.update(conjugacy=rep.to_json())
        return Classification(
            "subcase2a", "free action", mu,
            {"kind": "discrete_orbit" if rational else "line", "status": "candidate"}, res, details=details,
        )

    # an infinite tower rules out every invariant Radon measure
    towered = _tower_case(gmap, window, budget, tol, details)
    if towered is not None:
        return towered

    # Gamma: generators with a fixed point in the open window
    gamma = [n for n in names if reports[n].fixed_points_inside()]
    details["gamma"] = gamma
    if not gamma:
        return Classification("unclassified", "not free, yet no generator has a fixed point in the window", details=details)
    g_gaps, _ = common_fixed_set([gmap[n] for n in gamma], window, tol=tol)
    pieces = _fixed_pieces(g_gaps, window)
    interior = [(a, b) for a, b in pieces if b > window.lo and a < window.hi and not (b == window.lo or a == window.hi)]
    if not interior:
        return Classification("unclassified", "Fix(Gamma) has no interior point and no tower was found", details=details)
    if any(b > a for a, b in interior):
        try:
            phi, mu = collapse_and_measure(g_gaps, gmap, window, tol=tol)
        except GapsNotInvariant as exc:
            return Classification("unclassified", f"gaps of Fix(Gamma) not invariant: {exc}", details=details)
        res = _residuals(mu, gmap, window)
        details["gaps"] = [[round_sig(a), round_sig(b)] for a, b in g_gaps]
        return Classification(
            "subcase2b", "Fix(Gamma) contains intervals", mu,
            {"kind": "perfect_or_line", "status": "candidate"}, res, details=details,
        )
    pts = [a for a, _ in interior]
    y = pts[0]
    try:
        mu = discrete_orbit_measure(gmap, y, window, word_len=budget.word_len, tol=tol)
    except OrbitAccumulates as exc:
        return Classification("unclassified", f"orbit of a Fix(Gamma) point accumulates: {exc}", details=details)
    res = _residuals(mu, gmap, window, mu.points, 0.25 * tol.eps_sep)
    details["fix_gamma_points"] = [round_sig(p) for p in pts]
    return Classification(
        "subcase2c", "Fix(Gamma) is countable", mu,
        {"kind": "discrete_orbit", "status": "candidate", "seed": round_sig(y), "atoms": len(mu.points)},
        res, details=details,
    )


def _small_denominator(v, qmax=1000):
    from fractions import Fraction

    f = Fraction(v).limit_denominator(qmax)
    return abs(float(f) - v) < 1e-9


def _interior_fixed_point(gaps, window):
    """A common fixed point strictly inside the window, or None."""
    for a, b in _fixed_pieces(gaps, window):
        lo, hi = max(a, window.lo), min(b, window.hi)
        if lo < hi:
            return float(0.5 * (lo + hi))
        if lo == hi and window.lo < lo < window.hi:
            return float(lo)
    return None


def _fixed_pieces(gaps, window):
    out = []
    cur = window.lo
    for a, b in gaps:
        if a >= cur:
            out.append((cur, a))
        cur = max(cur, b)
    if cur <= window.hi:
        out.append((cur, window.hi))
    return out


def _tower_case(gmap, window, budget, tol, details):
    """Classification carrying a tower and mass pump, or None if the search fails."""
    from .tower import mass_pump, search_tower

    try:
        t = search_tower(gmap, window, budget, tol=tol)
    except (BudgetExhausted, NoSeedElement) as exc:
        details["tower_search"] = str(exc)
        return None
    cert = None
    if len(t) >= 2:
        try:
            cert = mass_pump(t, 1, min(100, budget.iterates), tol=tol)
        except Exception as exc:  # the certificate is supporting evidence only
            details["mass_pump_error"] = str(exc)
    return Classification(
        "unclassified", "infinite tower found, so no invariant Radon measure exists",
        tower=t, certificate=cert, details=details,
    )


# ---------------------------------------------------------------- (de)serialization


def _phi_from_json(obj):
    from .homeo import from_json

    if obj.get("op") == "collapse":
        return CollapseMap(tuple(tuple(g) for g in obj["gaps"]), float(obj.get("origin", 0.0)))
    if obj.get("op") == "compose" and len(obj.get("parts", [])) == 2 and obj["parts"][1].get("op") == "collapse":
        return _Composed(from_json(obj["parts"][0]), _phi_from_json(obj["parts"][1]))
    return from_json(obj)


def measure_from_json(obj) -> RadonMeasure:
    from .homeo import from_json

    kind = obj.get("kind")
    if kind == "dirac_comb":
        return DiracComb(tuple(obj["points"]), tuple(obj.get("weights", ())))
    if kind == "orbit_counting":
        return OrbitCounting(tuple(obj["points"]), seed=float(obj.get("seed", 0.0)), normalization=float(obj.get("normalization", 1.0)))
    if kind == "stieltjes":
        return StieltjesFromMap(_phi_from_json(obj["phi"]))
    if kind == "lebesgue_pullback":
        return LebesguePullback(from_json(obj["h"]))
    raise ValueError(f"unknown measure kind {kind!r}")
