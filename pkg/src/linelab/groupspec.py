"""GroupSpec documents: named generators, declared subgroups, window, budgets.

JSON layout::

    {
      "schema": 1,
      "name": "demo",
      "generators": [{"name": "f1", "map": {...HomeoExpr...}}, ...],
      "window": ["-4", "4"],
      "subgroups": {"A": ["f1"], "B": ["f1", "f2"]},     # optional
      "series": [["f1"], ["f1", "f2"]],                 # optional H_1 <| H_2 <| ...
      "budget": {"word_len": 6, "levels": 8, ...},      # optional
      "tolerances": {"eps_fix": 1e-9, ...}              # optional
    }

A counterexample build document (``"kind": "counterexample-build"``) is
accepted wherever a GroupSpec is expected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .config import DEFAULT_BUDGET, DEFAULT_TOL, Budget, Tolerances
from .errors import SpecError
from .homeo import HomeoExpr, from_json, to_json
from .intervals import IntervalQ


@dataclass
class GroupSpec:
    name: str
    generators: dict
    window: IntervalQ
    subgroups: dict = field(default_factory=dict)
    series: list = field(default_factory=list)
    budget: Budget = DEFAULT_BUDGET
    tolerances: Tolerances = DEFAULT_TOL

    def __post_init__(self):
        if not self.generators:
            raise SpecError("generators: at least one generator is required")
        for n, g in self.generators.items():
            if not isinstance(g, HomeoExpr):
                raise SpecError(f"generators.{n}: not an expression")
        if not self.window.finite:
            raise SpecError("window: must be finite")
        for key, members in self.subgroups.items():
            for m in members:
                if m not in self.generators:
                    raise SpecError(f"subgroups.{key}: unknown generator {m!r}")
        for k, members in enumerate(self.series):
            for m in members:
                if m not in self.generators:
                    raise SpecError(f"series[{k}]: unknown generator {m!r}")

    @property
    def names(self) -> list:
        return list(self.generators)

    def with_window(self, window) -> "GroupSpec":
        return GroupSpec(self.name, self.generators, IntervalQ.from_json(window) if not isinstance(window, IntervalQ) else window,
                         self.subgroups, self.series, self.budget, self.tolerances)

    def with_budget(self, budget: Budget) -> "GroupSpec":
        return GroupSpec(self.name, self.generators, self.window, self.subgroups, self.series, budget, self.tolerances)

    def series_pair(self, window=None):
        """Names (A, B) for the nilpotent tower procedure.

        Declared subgroups A and B win.  Otherwise the series H_1 <| H_2 ...
        is scanned for the least m whose fixed set misses the open window;
        m = 1 gives A = <first moving generator of H_1>, B = H_1, and m > 1
        gives A = H_{m-1}, B = H_m.
        """
        from .structure import common_fixed_set

        if "A" in self.subgroups and "B" in self.subgroups:
            return list(self.subgroups["A"]), list(self.subgroups["B"])
        if not self.series:
            raise SpecError("no subgroups A/B or series declared")
        window = window or self.window
        for m, members in enumerate(self.series, start=1):
            gaps, reps = common_fixed_set([self.generators[n] for n in members], window, tol=self.tolerances)
            if _covers_interior(gaps, window):
                if m == 1:
                    for n, r in zip(members, reps):
                        if r.complement_components:
                            return [n], list(members)
                    raise SpecError("series[0]: no generator moves a point of the window")
                return list(self.series[m - 2]), list(members)
        raise SpecError("every declared series member has a fixed point in the window")

    def to_json(self):
        out = {
            "schema": 1,
            "name": self.name,
            "generators": [{"name": n, "map": to_json(g)} for n, g in self.generators.items()],
            "window": self.window.to_json(),
            "budget": self.budget.to_json(),
            "tolerances": self.tolerances.to_json(),
        }
        if self.subgroups:
            out["subgroups"] = {k: list(v) for k, v in self.subgroups.items()}
        if self.series:
            out["series"] = [list(s) for s in self.series]
        return out

    @classmethod
    def from_json(cls, obj) -> "GroupSpec":
        if not isinstance(obj, dict):
            raise SpecError("$: expected a JSON object")
        if obj.get("kind") == "counterexample-build":
            from .yoccoz import CounterexampleBuild

            return CounterexampleBuild.from_json(obj).group_spec()
        gens_raw = obj.get("generators")
        if not isinstance(gens_raw, list) or not gens_raw:
            raise SpecError("generators: expected a nonempty list")
        gens = {}
        for k, entry in enumerate(gens_raw):
            path = f"generators[{k}]"
            if not isinstance(entry, dict) or "name" not in entry or "map" not in entry:
                raise SpecError(f"{path}: expected {{'name': ..., 'map': ...}}")
            name = str(entry["name"])
            if name in gens:
                raise SpecError(f"{path}.name: duplicate generator name {name!r}")
            gens[name] = from_json(entry["map"], f"{path}.map")
        if "window" not in obj:
            raise SpecError("window: missing")
        try:
            window = IntervalQ.from_json(obj["window"])
        except Exception as exc:
            raise SpecError(f"window: {exc}") from None
        subgroups = obj.get("subgroups", {}) or {}
        if not isinstance(subgroups, dict):
            raise SpecError("subgroups: expected an object of name lists")
        series = obj.get("series", []) or []
        if not isinstance(series, list):
            raise SpecError("series: expected a list of name lists")
        try:
            budget = Budget.from_json(obj.get("budget", {}) or {})
        except (KeyError, ValueError, TypeError) as exc:
            raise SpecError(f"budget: {exc}") from None
        try:
            tol = Tolerances.from_json(obj.get("tolerances", {}) or {})
        except (KeyError, ValueError, TypeError) as exc:
            raise SpecError(f"tolerances: {exc}") from None
        return cls(
            str(obj.get("name", "unnamed")),
            gens,
            window,
            {str(k): [str(m) for m in v] for k, v in subgroups.items()},
            [[str(m) for m in s] for s in series],
            budget,
            tol,
        )


def _covers_interior(gaps, window) -> bool:
    """True when one gap spans the whole open window (no interior fixed point)."""
    return any(a <= window.lo and b >= window.hi for a, b in gaps)


def loads(text: str) -> GroupSpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return GroupSpec.from_json(obj)


def load(path) -> GroupSpec:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
