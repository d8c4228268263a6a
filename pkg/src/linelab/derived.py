"""Finite-rank countable closed sets and their derived sets.

A set is a finite union of separated clusters.  A cluster is either a single
point or a convergent sequence ``p + s/(n+1), n >= start`` together with its
limit ``p``.  Each sequence point may carry a scaled copy of an inner
cluster (sequences of sequences).  Removing isolated points is then an exact
operation on the tree:

* a single point disappears;
* a plain sequence collapses to its limit;
* a sequence of copies keeps its shape, each copy losing its own isolated
  points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import RankCapExceeded

RANK_CAP = 32


@dataclass(frozen=True)
class Cluster:
    point: float
    scale: float | None = None  # None for a single point
    start: int = 0
    inner: "Cluster | None" = None

    def __post_init__(self):
        if self.scale is None and self.inner is not None:
            raise ValueError("a single point cannot carry inner copies")
        if self.scale is not None and self.scale == 0:
            raise ValueError("sequence scale must be nonzero")
        if self.start < 0:
            raise ValueError("sequence start must be >= 0")
        if self.inner is not None and self.inner.scale is None:
            object.__setattr__(self, "inner", None)

    @property
    def is_point(self) -> bool:
        return self.scale is None

    def radius(self) -> float:
        """Largest distance from the anchor to a point of the cluster."""
        if self.scale is None:
            return 0.0
        r = abs(self.scale) / (self.start + 1)
        if self.inner is not None:
            r += 0.25 * self._gap(self.start)  # copy radius is a quarter gap
        return r

    def _gap(self, n: int) -> float:
        return abs(self.scale) * (1.0 / (n + 1) - 1.0 / (n + 2))

    def _copy_scale(self, n: int) -> float:
        # copies sit well inside a quarter of the gap to the next sequence point
        return self._gap(n) / (4.0 * max(self.inner.radius(), 1e-300)) if self.inner is not None else 0.0

    def seq_point(self, n: int) -> float:
        return self.point + self.scale / (n + 1)

    def height(self) -> int:
        """Number of derived steps until the cluster is gone."""
        if self.scale is None:
            return 1
        return 2 if self.inner is None else self.inner.height() + 1

    def derive(self) -> "Cluster | None":
        if self.scale is None:
            return None
        if self.inner is None:
            return Cluster(self.point)
        return Cluster(self.point, self.scale, self.start, self.inner.derive())

    def sample(self, n_max: int) -> list:
        """Points of the cluster using sequence indices up to n_max."""
        pts = [self.point]
        if self.scale is None:
            return pts
        for n in range(self.start, n_max + 1):
            x = self.seq_point(n)
            if self.inner is None:
                pts.append(x)
            else:
                c = self._copy_scale(n)
                for y in self.inner.sample(n_max):
                    pts.append(x + c * (y - self.inner.point))
        return pts

    def meets(self, lo: float, hi: float, n_max: int = 10_000) -> bool:
        """Whether the cluster has a point in [lo, hi] (sequence checked to n_max)."""
        if lo <= self.point <= hi:
            return True
        if self.scale is None:
            return False
        pad = 0.0
        for n in range(self.start, n_max + 1):
            x = self.seq_point(n)
            if self.inner is not None:
                pad = self._copy_scale(n) * self.inner.radius()
            if x + pad >= lo and x - pad <= hi:
                if self.inner is None:
                    return True
                c = self._copy_scale(n)
                if any(lo <= x + c * (y - self.inner.point) <= hi for y in self.inner.sample(50)):
                    return True
        return False

    def to_json(self):
        if self.scale is None:
            return {"point": self.point}
        out = {"point": self.point, "scale": self.scale, "start": self.start}
        if self.inner is not None:
            out["inner"] = self.inner.to_json()
        return out

    @classmethod
    def from_json(cls, obj) -> "Cluster":
        inner = obj.get("inner")
        return cls(
            float(obj["point"]),
            None if obj.get("scale") is None else float(obj["scale"]),
            int(obj.get("start", 0)),
            None if inner is None else cls.from_json(inner),
        )


def _hull(c: Cluster):
    r = c.radius()
    return c.point - r, c.point + r


@dataclass
class DerivedSetSequence:
    base: tuple
    levels: list = field(default_factory=list)

    def __post_init__(self):
        self.base = tuple(self.base)
        hulls = sorted(_hull(c) for c in self.base)
        for (_, b1), (a2, _) in zip(hulls, hulls[1:]):
            if not b1 < a2:
                raise ValueError("clusters must be pairwise separated")
        if not self.levels:
            self.levels = [self.base]

    @property
    def current(self) -> tuple:
        return self.levels[-1]

    @property
    def is_empty(self) -> bool:
        return not self.current

    def rank(self) -> int:
        """Derived steps needed to empty the base set."""
        return max((c.height() for c in self.base), default=0)

    def to_json(self):
        return {
            "base": [c.to_json() for c in self.base],
            "levels": [[c.to_json() for c in lvl] for lvl in self.levels],
        }


def derived_set_step(s: DerivedSetSequence) -> DerivedSetSequence:
    """Append the set of non-isolated points of the current level."""
    if len(s.levels) > RANK_CAP:
        raise RankCapExceeded(f"derived sequence longer than {RANK_CAP}")
    nxt = tuple(d for d in (c.derive() for c in s.current) if d is not None)
    return DerivedSetSequence(s.base, list(s.levels) + [nxt])


def iterate_to_empty(s: DerivedSetSequence) -> DerivedSetSequence:
    while not s.is_empty:
        s = derived_set_step(s)
    return s
