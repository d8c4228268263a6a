"""Deterministic JSON/CSV writers and the analysis report."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .numfmt import round_sig

SCHEMA = 1


def clean(obj):
    """JSON-ready copy: floats rounded to 12 significant digits, non-finite as strings."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return round_sig(x)
    if hasattr(obj, "to_json"):
        return clean(obj.to_json())
    return obj


def dumps(obj) -> str:
    return json.dumps(clean(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(obj))


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(round_sig(v))
    return v


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(csv_text(header, rows))


@dataclass
class AnalysisReport:
    spec_name: str
    window: object
    budget: object
    tolerances: object
    fixed_sets: dict
    crossings: list  # rows: {"pair", "crossed", "witness", "note"}
    tower: object = None
    tower_validation: object = None
    tower_note: str = ""
    classification: object = None
    timings: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        c = self.classification
        return 0 if c is not None and c.classified else 2

    def to_json(self, include_timings: bool = False):
        c = self.classification
        out = {
            "schema": SCHEMA,
            "spec": self.spec_name,
            "window": self.window.to_json(),
            "budget": self.budget.to_json(),
            "tolerances": self.tolerances.to_json(),
            "fixed_sets": {n: _fixed_summary(r) for n, r in self.fixed_sets.items()},
            "crossings": self.crossings,
            "tower": None if self.tower is None else self.tower.to_json(),
            "tower_validation": None if self.tower_validation is None else self.tower_validation.to_json(),
            "tower_note": self.tower_note,
            "classification": None if c is None else c.to_json(),
            "outcome": None if c is None else _outcome(c),
        }
        if include_timings:
            out["timings"] = self.timings
        return out

    def summary_lines(self):
        c = self.classification
        lines = [f"group: {self.spec_name}", f"window: {self.window}"]
        crossed = [r for r in self.crossings if r["crossed"]]
        lines.append(f"crossed pairs: {len(crossed)} of {len(self.crossings)}")
        if self.tower is not None:
            ivs = ([self.tower.base] if self.tower.base is not None else []) + self.tower.intervals()
            base = "base I_0 and " if self.tower.base is not None else ""
            lines.append(f"tower: {base}{len(self.tower)} levels " + " < ".join(str(iv) for iv in ivs))
        elif self.tower_note:
            lines.append(f"tower: none ({self.tower_note})")
        if c is not None:
            lines.append(f"classification: {_outcome(c)} ({c.reason})")
            if c.residuals:
                worst = max(c.residuals.values())
                lines.append(f"worst invariance residual: {worst:.3e} (tau_meas {self.tolerances.tau_meas:g})")
            if c.certificate is not None:
                cj = c.certificate.to_json()
                lines.append(f"mass pump: {cj['claim']}")
        return lines


def _outcome(c):
    if c.case == "unclassified" and c.tower is not None:
        return "no invariant Radon measure (budget-bounded)"
    return c.case


def _fixed_summary(rep):
    return {
        "method": rep.method,
        "fixed_pieces": len(rep.fixed_intervals),
        "moved_components": len(rep.complement_components),
        "components": [c.to_json() for c in rep.complement_components[:50]],
        "truncated": len(rep.complement_components) > 50,
        "advisories": list(rep.advisories),
    }
