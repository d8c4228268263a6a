"""Breakpoint ladders for the staged counterexample.

A stage-``m`` map lives on ``[-m, m]``.  Its core is ``[-(m-1), m-1]`` and
the two collars are cut into cells by the ladders

    a_n = -m + g(n),   b_n = m - g(n),   g(n) = (n + 1) ** (-exponent),

so ``a_0 = -(m-1)`` and ``a_n`` decreases to ``-m``.  Cell ``p`` (an integer)
is the core for ``p = 0``, ``[a_{n+1}, a_n]`` for ``p = -(n+1)`` and
``[b_n, b_{n+1}]`` for ``p = n+1``.  Cells are ordered left to right by p.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..intervals import IntervalQ
from ..kernels import K as _K


@dataclass(frozen=True)
class StageGeometry:
    stage: int
    exponent: float = 1.0

    def __post_init__(self):
        if int(self.stage) != self.stage or self.stage < 2:
            raise ValueError("stage geometry needs an integer stage >= 2")
        if not self.exponent > 0:
            raise ValueError("exponent must be positive")
        object.__setattr__(self, "stage", int(self.stage))
        object.__setattr__(self, "exponent", float(self.exponent))

    def g(self, n: int) -> float:
        return _K.gfun(float(n), self.exponent)

    def a(self, n: int) -> float:
        return -self.stage + self.g(n)

    def b(self, n: int) -> float:
        return self.stage - self.g(n)

    @property
    def core(self) -> IntervalQ:
        return IntervalQ(-(self.stage - 1), self.stage - 1)

    def cell(self, p: int) -> IntervalQ:
        return IntervalQ(_K.cell_lo(self.stage, p, self.exponent), _K.cell_hi(self.stage, p, self.exponent))

    def cell_bounds(self, p: int) -> tuple[float, float]:
        return _K.cell_lo(self.stage, p, self.exponent), _K.cell_hi(self.stage, p, self.exponent)

    def locate(self, x: float, cap: float = 1e7):
        """Index of the cell containing x, or None beyond the cap or outside (-m, m)."""
        m = self.stage
        if not -m < x < m:
            return None
        return _K.locate(m, float(x), self.exponent, float(cap))

    def gap_ratio(self, n: int) -> float:
        """(a_{n-1} - a_n) / (a_n - a_{n+1}); tends to 1."""
        return (self.g(n - 1) - self.g(n)) / (self.g(n) - self.g(n + 1))

    def check_gap_ratio(self, n_max: int = 40) -> float:
        """Largest |ratio - 1| over the last quarter of 1..n_max; must shrink."""
        devs = [abs(self.gap_ratio(n) - 1.0) for n in range(1, n_max + 1)]
        for u, v in zip(devs, devs[1:]):
            if v > u:
                raise ValueError("gap ratio is not converging monotonically to 1")
        tail = devs[3 * len(devs) // 4 :]
        return max(tail)

    def breakpoints(self, n_max: int) -> list[float]:
        """Left and right ladder points a_0..a_n_max and b_0..b_n_max."""
        return [self.a(n) for n in range(n_max + 1)] + [self.b(n) for n in range(n_max + 1)]

    def to_json(self):
        return {"stage": self.stage, "exponent": repr(self.exponent)}
