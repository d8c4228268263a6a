"""Chart-factorised interval maps and the commuting stage family built from them.

``yoccoz_map(I, J)`` is the composite of the chart of I with the inverse
chart of J, where the chart of [a, b] is x -> 1/(b-x) - 1/(x-a).  It sends
I onto J, has slope 1 at both ends and satisfies the cocycle rule
phi_{J,K} o phi_{I,J} = phi_{I,K} by construction.

``build_counterexample(K)`` returns K commuting C^1 maps f_1..f_K, where
f_k fixes exactly +-k on [-k, k], and ``verify_counterexample`` re-checks
every claimed property numerically.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import DegenerateInterval
from .homeo import HomeoExpr, StageGeometry, StageMap, YoccozChart, from_json, one_sided_derivative, to_json
from .intervals import IntervalQ, as_interval
from .numfmt import round_sig
from .tower import Tower, TowerLevel, mass_pump, validate_tower


def chart(interval, x: float) -> float:
    """Reference chart of (a, b) onto the real line."""
    iv = as_interval(interval)
    return 1.0 / (iv.hi - x) - 1.0 / (x - iv.lo)


@dataclass(frozen=True)
class YoccozMap:
    source: IntervalQ
    target: IntervalQ

    def __post_init__(self):
        for name in ("source", "target"):
            iv = as_interval(getattr(self, name))
            if not iv.finite:
                raise DegenerateInterval(f"{name} interval must be finite")
            object.__setattr__(self, name, iv)

    @property
    def expr(self) -> YoccozChart:
        return YoccozChart(self.source, self.target)

    def __call__(self, x):
        e = self.expr
        return e.eval_array(x) if np.ndim(x) else e.eval(x)

    def deriv(self, x):
        e = self.expr
        return e.deriv_array(x) if np.ndim(x) else e.deriv(x)

    def inverse(self, y):
        return YoccozMap(self.target, self.source)(y)

    def then(self, other: "YoccozMap") -> "YoccozMap":
        """other o self, defined when self.target == other.source."""
        if self.target != other.source:
            raise ValueError("maps do not chain")
        return YoccozMap(self.source, other.target)


def yoccoz_map(I, J) -> YoccozMap:
    return YoccozMap(as_interval(I), as_interval(J))


def cocycle_residual(I, J, K, xs) -> float:
    """max |phi_{J,K}(phi_{I,J}(x)) - phi_{I,K}(x)| over xs."""
    xs = np.asarray(xs, dtype=float)
    two = yoccoz_map(J, K)(yoccoz_map(I, J)(xs))
    one = yoccoz_map(I, K)(xs)
    return float(np.max(np.abs(two - one)))


def sup_derivative_deviation(I, J, samples: int = 2001) -> float:
    """Sampled sup of |phi'_{I,J} - 1| over I."""
    iv = as_interval(I)
    xs = np.linspace(iv.lo, iv.hi, samples)
    return float(np.max(np.abs(yoccoz_map(I, J).deriv(xs) - 1.0)))


# ---------------------------------------------------------------- the stage family


@dataclass
class CounterexampleBuild:
    K: int
    maps: dict  # name -> HomeoExpr
    exponent: float = 1.0
    piece_cap: int = 10_000_000
    extensions: list = field(default_factory=list)

    @property
    def names(self):
        return list(self.maps)

    @property
    def geometries(self):
        return [StageGeometry(m, self.exponent) for m in range(2, self.K + 1)]

    @property
    def window(self) -> IntervalQ:
        return IntervalQ(-self.K, self.K)

    def tower(self) -> Tower:
        return Tower([TowerLevel(IntervalQ(-k, k), self.maps[f"f{k}"], f"f{k}") for k in range(1, self.K + 1)])

    def group_spec(self):
        from .groupspec import GroupSpec

        return GroupSpec(
            f"stage-family-K{self.K}",
            dict(self.maps),
            self.window,
            series=[list(self.maps)],
        )

    def to_json(self):
        return {
            "schema": 1,
            "kind": "counterexample-build",
            "K": self.K,
            "exponent": repr(self.exponent),
            "piece_cap": self.piece_cap,
            "window": self.window.to_json(),
            "stages": [g.to_json() for g in self.geometries],
            "maps": [{"name": n, "map": to_json(f)} for n, f in self.maps.items()],
            "extensions": self.extensions,
        }

    @classmethod
    def from_json(cls, obj) -> "CounterexampleBuild":
        from .errors import SpecError

        if obj.get("kind") != "counterexample-build":
            raise SpecError("kind: expected 'counterexample-build'")
        try:
            K = int(obj["K"])
        except (KeyError, TypeError, ValueError):
            raise SpecError("K: expected an integer") from None
        maps = {}
        for j, entry in enumerate(obj.get("maps", [])):
            maps[str(entry["name"])] = from_json(entry["map"], f"maps[{j}].map")
        if len(maps) != K:
            raise SpecError(f"maps: expected {K} maps, found {len(maps)}")
        return cls(K, maps, float(obj.get("exponent", 1.0)), int(obj.get("piece_cap", 10_000_000)), list(obj.get("extensions", [])))


def _extension_records(K):
    out = []
    for m in range(2, K + 1):
        for i in range(1, m):
            out.append(
                {
                    "map": f"f{i}",
                    "stage": m,
                    "core": f"[{-(m - 1)}, {m - 1}]: f{i}",
                    "left": f"[a_(n+1), a_n]: f{m}^-(n+1) f{i} f{m}^(n+1)",
                    "right": f"[b_n, b_(n+1)]: f{m}^(n+1) f{i} f{m}^-(n+1)",
                }
            )
    return out


def build_counterexample(K: int, exponent: float = 1.0, piece_cap: int = 10_000_000) -> CounterexampleBuild:
    """Stage family f_1..f_K on [-K, K], identity outside.

    f_1 is the exponential bump on [-1, 1].  f_m sends the stage-m core
    [-(m-1), m-1] and each ladder cell to the next cell on the right by
    chart maps; the earlier maps are extended to [-m, m] by conjugating
    with powers of f_m.
    """
    if int(K) != K or K < 2:
        raise ValueError("K must be an integer >= 2")
    K = int(K)
    for m in range(2, K + 1):
        StageGeometry(m, exponent).check_gap_ratio()
    maps = {f"f{i}": StageMap(i, K, 1, exponent, piece_cap) for i in range(1, K + 1)}
    return CounterexampleBuild(K, maps, float(exponent), int(piece_cap), _extension_records(K))


# ---------------------------------------------------------------- verification


@dataclass
class CheckRow:
    check: str
    location: str
    residual: float
    tolerance: float
    passed: bool

    def to_json(self):
        return {
            "check": self.check,
            "location": self.location,
            "residual": round_sig(self.residual),
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    K: int
    rows: list
    settings: dict

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def failed(self, check: str | None = None):
        return [r for r in self.rows if not r.passed and (check is None or r.check == check)]

    def worst(self, check: str) -> float:
        return max((r.residual for r in self.rows if r.check == check), default=0.0)

    def to_json(self):
        summary = {}
        for r in self.rows:
            s = summary.setdefault(r.check, {"rows": 0, "failed": 0, "worst": 0.0, "tolerance": r.tolerance})
            s["rows"] += 1
            s["failed"] += 0 if r.passed else 1
            s["worst"] = round_sig(max(s["worst"], r.residual))
        return {
            "schema": 1,
            "K": self.K,
            "passed": self.passed,
            "settings": self.settings,
            "summary": summary,
            "rows": [r.to_json() for r in self.rows],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "location", "residual", "tolerance", "pass"])
        for r in self.rows:
            w.writerow([r.check, r.location, repr(round_sig(r.residual)), repr(r.tolerance), "true" if r.passed else "false"])
        return buf.getvalue()


def _stratified(lo, hi, n, rng):
    return lo + (np.arange(n) + rng.uniform(0.0, 1.0, n)) * ((hi - lo) / n)


def _commutativity_rows(maps, K, samples, seed, tol_comm):
    rng = np.random.default_rng(seed)
    xs = _stratified(-(K - 1), K - 1, samples, rng)
    rows = []
    names = list(maps)
    images = {n: maps[n].eval_array(xs) for n in names}
    for i, u in enumerate(names):
        for v in names[i + 1 :]:
            uv = maps[u].eval_array(images[v])
            vu = maps[v].eval_array(images[u])
            err = np.abs(uv - vu)
            bad = ~np.isfinite(err)
            err = np.where(bad, np.inf, err)
            j = int(np.argmax(err))
            r = float(err[j])
            rows.append(CheckRow("commutativity", f"{u},{v} x={round_sig(float(xs[j]))}", r, tol_comm, r <= tol_comm))
    return rows


def _junction_rows(maps, K, exponent, n_check, tol_d):
    rows = []
    for m in range(2, K + 1):
        geo = StageGeometry(m, exponent)
        pts = []
        for n in range(n_check + 1):
            for x, p_left in ((geo.a(n), -(n + 1)), (geo.b(n), n)):
                w = min(np.diff(geo.cell_bounds(p_left))[0], np.diff(geo.cell_bounds(p_left + 1))[0])
                pts.append((x, w, n))
        for i in range(1, m + 1):
            name = f"f{i}"
            if name not in maps:
                continue
            f = maps[name]
            worst, where = 0.0, ""
            for x, w, n in pts:
                h0 = w / 2**10
                d = abs(one_sided_derivative(f, x, 1, h0) - one_sided_derivative(f, x, -1, h0))
                if not np.isfinite(d):
                    d = np.inf
                if d >= worst:
                    worst, where = d, f"x={round_sig(x)} (n={n})"
            rows.append(CheckRow("junction_c1", f"{name} stage {m} {where}", float(worst), tol_d, worst <= tol_d))
    return rows


def _endpoint_rows(maps, K, tol_end):
    rows = []
    for k in range(1, K + 1):
        f = maps.get(f"f{k}")
        if f is None:
            continue
        for x, side in ((-k, 1), (k, -1)):
            d = one_sided_derivative(f, float(x), side, 2**-10, 3)
            r = abs(d - 1.0) if np.isfinite(d) else np.inf
            rows.append(CheckRow("endpoint_derivative", f"f{k} x={x}", float(r), tol_end, r <= tol_end))
            fr = abs(f.eval(float(x)) - x)
            rows.append(CheckRow("endpoint_fixed", f"f{k} x={x}", float(fr), DEFAULT_TOL.eps_fix, fr <= DEFAULT_TOL.eps_fix))
    return rows


def _coherence_rows(maps, K, exponent, tol_inv):
    """f_m^-1 f_i f_m agrees with f_i next to cell boundaries of stage m."""
    rows = []
    for m in range(2, K + 1):
        fm = maps.get(f"f{m}")
        if fm is None:
            continue
        geo = StageGeometry(m, exponent)
        xs = []
        for n in range(0, 20):
            for p in (-(n + 1), n + 1):
                lo, hi = geo.cell_bounds(p)
                xs += [lo + 1e-3 * (hi - lo), hi - 1e-3 * (hi - lo)]
        xs = np.array(xs)
        for i in range(1, m):
            fi = maps.get(f"f{i}")
            if fi is None:
                continue
            lhs = fm.inverse_eval_array(fi.eval_array(fm.eval_array(xs)))
            err = np.abs(lhs - fi.eval_array(xs))
            err = np.where(np.isfinite(err), err, np.inf)
            j = int(np.argmax(err))
            rows.append(
                CheckRow("conjugation_coherence", f"f{i} via f{m} x={round_sig(float(xs[j]))}", float(err[j]), tol_inv, err[j] <= tol_inv)
            )
    return rows


def verify_counterexample(
    build: CounterexampleBuild,
    *,
    samples: int = 1000,
    n_check: int = 40,
    seed: int = 0,
    pump_iterates: int = 100,
    tol_comm: float = 1e-8,
    tol_end: float = 1e-6,
    tol: Tolerances = DEFAULT_TOL,
) -> VerificationReport:
    """Re-check the stage family: commutativity, C^1 junctions, endpoint
    slopes, conjugation coherence, tower validity and mass pumps."""
    maps = build.maps
    K = build.K
    rows = []
    rows += _commutativity_rows(maps, K, samples, seed, tol_comm)
    rows += _junction_rows(maps, K, build.exponent, n_check, tol.tau_deriv)
    rows += _endpoint_rows(maps, K, tol_end)
    rows += _coherence_rows(maps, K, build.exponent, tol.tau_inv)
    t = build.tower()
    rep = validate_tower(t, tol=tol, samples=samples)
    for c in rep.checks:
        r = max(c.end_residuals)
        rows.append(CheckRow("tower_level", f"level {c.index} {c.name} {c.interval}", float(r), tol.eps_fix, c.passed))
    for N in range(1, K):
        try:
            cert = mass_pump(t, N, pump_iterates, tol=tol)
            gap = min(b - a for a, b in cert.images)
            rows.append(CheckRow("mass_pump", f"level {N} images={cert.multiplier}", 0.0, 0.0, gap > 0))
        except Exception as exc:
            rows.append(CheckRow("mass_pump", f"level {N}: {exc}", float("inf"), 0.0, False))
    settings = {
        "samples": samples,
        "n_check": n_check,
        "seed": seed,
        "pump_iterates": pump_iterates,
        "sample_range": [-(K - 1), K - 1],
        "endpoint_steps": "h0=2^-10, 3 dyadic levels, Richardson",
        "junction_steps": "h0=(adjacent cell width)/2^10, 3 dyadic levels, Richardson",
    }
    return VerificationReport(K, rows, settings)


def sweep_rows(build: CounterexampleBuild, n: int = 2001):
    """CSV-ready rows (map, x, f(x), f'(x)) on a uniform grid of [-K, K]."""
    xs = np.linspace(-build.K, build.K, n)
    out = []
    for name, f in build.maps.items():
        ys = f.eval_array(xs)
        ds = f.deriv_array(xs)
        out += [(name, float(x), float(y), float(d)) for x, y, d in zip(xs, ys, ds)]
    return out
