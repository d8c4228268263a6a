"""Numerical tolerances and search budgets."""

from dataclasses import asdict, dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    tau_inv: float = 1e-10  # inverse round trip
    tau_cont: float = 1e-9  # value continuity at breakpoints
    tau_deriv: float = 1e-5  # one-sided derivative agreement
    eps_fix: float = 1e-9  # |f(x) - x| below this counts as fixed
    delta_root: float = 1e-12  # bisection width for isolated zeros
    tau_coinc: float = 1e-12  # two values this close are the same point
    tau_meas: float = 1e-6  # measure invariance
    eps_sep: float = 1e-6  # orbit points closer than this accumulate

    def to_json(self):
        return asdict(self)

    @classmethod
    def from_json(cls, obj):
        names = {f.name for f in fields(cls)}
        unknown = set(obj) - names
        if unknown:
            raise KeyError(f"unknown tolerance fields: {sorted(unknown)}")
        return replace(cls(), **{k: float(v) for k, v in obj.items()})


@dataclass(frozen=True)
class Budget:
    word_len: int = 6
    levels: int = 8
    iterates: int = 10_000
    samples: int = 1_000
    wall_clock: float = 60.0  # seconds

    def to_json(self):
        return asdict(self)

    @classmethod
    def from_json(cls, obj):
        names = {f.name for f in fields(cls)}
        unknown = set(obj) - names
        if unknown:
            raise KeyError(f"unknown budget fields: {sorted(unknown)}")
        conv = {k: (float(v) if k == "wall_clock" else int(v)) for k, v in obj.items()}
        return replace(cls(), **conv)


DEFAULT_TOL = Tolerances()
DEFAULT_BUDGET = Budget()
