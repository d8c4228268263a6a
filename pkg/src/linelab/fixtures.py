"""Small reference groups with known answers, one per branch of the case analysis.

``python -m linelab.fixtures DIR`` writes each as a GroupSpec JSON file.
"""

from __future__ import annotations

import math
import os
import sys

import numpy as np

from .groupspec import GroupSpec
from .homeo import (
    Compose,
    ExpBump,
    Identity,
    Inverse,
    Piecewise,
    Translation,
    YoccozChart,
    piecewise_linear,
)
from .intervals import IntervalQ


def global_fixed_point() -> GroupSpec:
    """One PL map fixing 0 (and +-4) inside the window [-3, 3]."""
    f = piecewise_linear([(-4, -4), (-2, -1), (0, 0), (1, 2), (4, 4)])
    return GroupSpec("global-fixed-point", {"f": f}, IntervalQ(-3, 3))


def translations(*shifts) -> GroupSpec:
    shifts = shifts or (1.0,)
    gens = {f"t{j + 1}": Translation(float(c)) for j, c in enumerate(shifts)}
    return GroupSpec("translations", gens, IntervalQ(-10, 10))


def chart_conjugator(pieces: int = 24, half_width: float = 40.0, seed: int = 7) -> Piecewise:
    """Nonlinear C^1 homeomorphism: chart maps between two random partitions."""
    rng = np.random.default_rng(seed)
    xs = np.sort(np.concatenate([[-half_width, half_width], rng.uniform(-half_width, half_width, pieces - 1)]))
    ys = np.sort(np.concatenate([[-half_width, half_width], rng.uniform(-half_width, half_width, pieces - 1)]))
    return Piecewise(
        tuple(
            (
                IntervalQ(float(xs[i]), float(xs[i + 1])),
                YoccozChart(IntervalQ(float(xs[i]), float(xs[i + 1])), IntervalQ(float(ys[i]), float(ys[i + 1]))),
            )
            for i in range(pieces)
        )
    )


def conjugated_translations(shifts=(1.0, math.sqrt(2.0)), window=(-30.0, 30.0)) -> GroupSpec:
    """h0 T_c h0^-1 for each shift c, with h0 from ``chart_conjugator``."""
    h0 = chart_conjugator()
    gens = {f"g{j + 1}": Compose((h0, Translation(float(c)), Inverse(h0))) for j, c in enumerate(shifts)}
    return GroupSpec("conjugated-translations", gens, IntervalQ(*window))


def gap_layout(irregular: int = 6, pad: int = 4, fixed_len: float = 1.0, tail_gap: float = 0.5):
    """Positions s_k of fixed blocks [s_k, s_k + fixed_len] and gap lengths G_k."""
    M = irregular + pad
    ks = range(-M - 3, M + 4)
    G = {k: (tail_gap + 0.35 * math.sin(1.7 * k + 0.4) if abs(k) <= irregular else tail_gap) for k in ks}
    s = {0: 0.0}
    for k in range(0, M + 3):
        s[k + 1] = s[k] + fixed_len + G[k]
    for k in range(0, -M - 3, -1):
        s[k - 1] = s[k] - fixed_len - G[k - 1]
    return s, G, M


def gap_collapse(irregular: int = 6, pad: int = 4) -> GroupSpec:
    """Fixed blocks of equal length separated by irregular gaps.

    ``g`` moves each block to the next by a translation and each gap to the
    next by a chart map; ``gamma`` is a bump on every gap.  Collapsing the
    gaps turns g into a translation, so the collapse measure is invariant.
    """
    L = 1.0
    s, G, M = gap_layout(irregular, pad, L)
    inf = float("inf")
    tail = L + G[M + 5] if (M + 5) in G else L + 0.5
    pieces = [(IntervalQ(-inf, s[-M]), Translation(tail))]
    for k in range(-M, M):
        blk = IntervalQ(s[k], s[k] + L)
        gap = IntervalQ(s[k] + L, s[k + 1])
        nxt = IntervalQ(s[k + 1] + L, s[k + 2])
        pieces.append((blk, Translation(s[k + 1] - s[k])))
        pieces.append((gap, YoccozChart(gap, nxt)))
    pieces.append((IntervalQ(s[M], inf), Translation(tail)))
    g = Piecewise(tuple(pieces))
    bumps = []
    for k in range(-M - 2, M + 2):
        bumps.append((IntervalQ(s[k], s[k] + L), Identity()))
        bumps.append((IntervalQ(s[k] + L, s[k + 1]), ExpBump(IntervalQ(s[k] + L, s[k + 1]))))
    gamma = Piecewise(tuple(bumps))
    window = IntervalQ(s[-M + 2], s[M - 2])
    return GroupSpec("gap-collapse", {"g": g, "gamma": gamma}, window)


def discrete_orbit(n: int = 8) -> GroupSpec:
    """Translation by 1 together with bumps on every [k, k+1]: Fix(Gamma) = Z."""
    pieces = tuple((IntervalQ(k, k + 1), ExpBump(IntervalQ(k, k + 1))) for k in range(-n - 2, n + 2))
    return GroupSpec("discrete-orbit", {"t": Translation(1.0), "b": Piecewise(pieces)}, IntervalQ(-n + 0.5, n - 0.5))


def crossed_pl() -> GroupSpec:
    """f moves only (0, 1); g sends 0 to 1/2, inside that component."""
    f = piecewise_linear([(0, 0), (0.5, 0.75), (1, 1)])
    g = piecewise_linear([(-2, -2), (0, 0.5), (2, 2)])
    return GroupSpec("crossed-pl", {"f": f, "g": g}, IntervalQ(-2, 2))


def stage_family(K: int = 4) -> GroupSpec:
    from .yoccoz import build_counterexample

    return build_counterexample(K).group_spec()


ALL = {
    "global_fixed_point": global_fixed_point,
    "translations": translations,
    "conjugated_translations": conjugated_translations,
    "gap_collapse": gap_collapse,
    "discrete_orbit": discrete_orbit,
    "crossed_pl": crossed_pl,
    "stage_family_k4": stage_family,
}


def write_all(directory: str):
    from .report import write_json

    os.makedirs(directory, exist_ok=True)
    for name, make in ALL.items():
        write_json(os.path.join(directory, f"{name}.json"), make().to_json())


if __name__ == "__main__":
    write_all(sys.argv[1] if len(sys.argv) > 1 else "specs")
