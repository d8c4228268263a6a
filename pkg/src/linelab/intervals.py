"""Closed intervals of the extended real line."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateInterval
from .numfmt import format_number, parse_number


@dataclass(frozen=True)
class IntervalQ:
    """Closed interval ``[lo, hi]`` with ``lo < hi``; either end may be infinite."""

    lo: float
    hi: float

    def __post_init__(self):
        lo = parse_number(self.lo)
        hi = parse_number(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if lo == math.inf or hi == -math.inf:
            raise DegenerateInterval(f"bad endpoints [{lo}, {hi}]")
        if not lo < hi:
            raise DegenerateInterval(f"need lo < hi, got [{lo}, {hi}]")

    @property
    def lo_finite(self) -> bool:
        return math.isfinite(self.lo)

    @property
    def hi_finite(self) -> bool:
        return math.isfinite(self.hi)

    @property
    def finite(self) -> bool:
        return self.lo_finite and self.hi_finite

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        if not self.finite:
            raise DegenerateInterval("midpoint of an unbounded interval")
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def interior_contains(self, x: float) -> bool:
        return self.lo < x < self.hi

    def contains_interval(self, other: "IntervalQ") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def in_interior(self, other: "IntervalQ") -> bool:
        """True if ``other`` sits inside the open interior of self."""
        return self.lo < other.lo and other.hi < self.hi

    def intersect(self, other: "IntervalQ") -> "IntervalQ | None":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo < hi:
            return IntervalQ(lo, hi)
        return None

    def require_finite(self, what: str = "interval") -> "IntervalQ":
        if not self.finite:
            raise DegenerateInterval(f"{what} must be finite, got {self}")
        return self

    def to_json(self):
        return [format_number(self.lo), format_number(self.hi)]

    @classmethod
    def from_json(cls, obj) -> "IntervalQ":
        if isinstance(obj, dict):
            return cls(obj["lo"], obj["hi"])
        lo, hi = obj
        return cls(lo, hi)

    def __str__(self):
        return f"[{format_number(self.lo)}, {format_number(self.hi)}]"


def as_interval(obj) -> IntervalQ:
    if isinstance(obj, IntervalQ):
        return obj
    return IntervalQ.from_json(obj)
