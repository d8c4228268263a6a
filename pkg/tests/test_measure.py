import json
import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from linelab import fixtures
from linelab.errors import GapsNotInvariant, HasFixedPoints, NotFree, OrbitAccumulates, WindowEscape
from linelab.homeo import Affine, Compose, ExpBump, Identity, Inverse, Translation, piecewise_linear
from linelab.intervals import IntervalQ
from linelab.measure import (
    CollapseMap,
    DiracComb,
    LebesguePullback,
    OrbitCounting,
    StieltjesFromMap,
    classify_action,
    collapse_and_measure,
    conjugacy_to_translation,
    discrete_orbit_measure,
    invariance_residual,
    measure_from_json,
    measure_interval,
    orbit_ratio,
    probe_intervals,
    translation_number,
)


def test_comb_counts_atoms_in_closed_interval():
    mu = DiracComb(tuple(range(-5, 6)))
    assert measure_interval(mu, (0, 2.5)) == 3
    assert mu.mass(0.5, 0.7) == 0
    assert mu.mass(2, 1) == 0


def test_comb_validation():
    with pytest.raises(ValueError):
        DiracComb((0.0, 1.0), (1.0,))
    with pytest.raises(ValueError):
        DiracComb((0.0,), (-1.0,))
    mu = DiracComb((2.0, 0.0), (3.0, 1.0))
    assert mu.points == (0.0, 2.0) and mu.weights == (1.0, 3.0)


def test_lebesgue_not_invariant_under_dilation():
    mu = StieltjesFromMap(Identity())
    assert invariance_residual(mu, Affine(2.0, 0.0), [(0.0, 1.0)]) == pytest.approx(1.0)
    assert invariance_residual(mu, Translation(3.0), [(0.0, 1.0), (-2.0, 5.0)]) == pytest.approx(0.0, abs=1e-15)


def test_collapse_map_values():
    phi = CollapseMap(((-1.0, 1.0),), 0.0)
    mu = StieltjesFromMap(phi)
    assert measure_interval(mu, (-2, 2)) == 2
    assert phi.eval(-1.0) == phi.eval(0.3) == phi.eval(1.0)
    mu2 = StieltjesFromMap(CollapseMap(((0.0, 1.0),)))
    assert measure_interval(mu2, (-1, 2)) == 2
    assert mu2.mass(0.0, 1.0) == 0.0
    with pytest.raises(ValueError):
        CollapseMap(((0, 2), (1, 3)))
    with pytest.raises(ValueError):
        CollapseMap(((1, 1),))


@given(
    st.lists(st.floats(-20, 20), min_size=2, max_size=10, unique=True),
    st.floats(-30, 30), st.floats(-30, 30), st.floats(-30, 30),
)
def test_collapse_measure_is_additive_and_monotone(ends, a, b, c):
    ends = sorted(ends)
    gaps = tuple(zip(ends[0::2], ends[1::2]))
    assume(all(hi > lo for lo, hi in gaps))
    mu = StieltjesFromMap(CollapseMap(gaps, -30.0))
    a, b, c = sorted((a, b, c))
    assert mu.mass(a, c) == pytest.approx(mu.mass(a, b) + mu.mass(b, c), abs=1e-12)
    assert 0.0 <= mu.mass(a, b) <= b - a + 1e-12


@given(st.lists(st.floats(-10, 10), min_size=1, max_size=20), st.floats(-12, 12), st.floats(-12, 12), st.floats(-12, 12))
def test_comb_is_additive_away_from_atoms(pts, a, b, c):
    mu = DiracComb(tuple(pts))
    a, b, c = sorted((a, b, c))
    assume(b not in mu.points)
    assert mu.mass(a, c) == mu.mass(a, b) + mu.mass(b, c)


def test_measure_json_roundtrip():
    h = Compose((Affine(2.0, 1.0), ExpBump(IntervalQ(0, 1))))
    for mu in (
        DiracComb((0.0, 1.5), (1.0, 2.0)),
        OrbitCounting((0.0, 1.0, 2.0), seed=1.0),
        StieltjesFromMap(CollapseMap(((0.0, 1.0), (2.0, 2.5)), -3.0)),
        LebesguePullback(h),
    ):
        back = measure_from_json(json.loads(json.dumps(mu.to_json())))
        assert back.to_json() == mu.to_json()
        assert back.mass(-0.5, 2.25) == pytest.approx(mu.mass(-0.5, 2.25))
    with pytest.raises(ValueError):
        measure_from_json({"kind": "nope"})


def test_probe_intervals_stay_in_window():
    g = Translation(1.0)
    probes = probe_intervals((0, 10), [g], n=32, seed=3)
    assert len(probes) == 32
    assert probes == probe_intervals((0, 10), [g], n=32, seed=3)
    for a, b in probes:
        assert 0 <= a < b and b + 1 <= 10


# ---------------------------------------------------------------- translation numbers


def test_translation_number_of_translation_is_exact():
    t = translation_number(Translation(0.7), 0.0, 1000)
    assert t.value == pytest.approx(0.7, abs=1e-15)
    assert t.error <= 1e-12


def test_translation_number_is_conjugacy_invariant():
    conj = Compose((Affine(1.0, 5.0), Translation(1.0), Inverse(Affine(1.0, 5.0))))
    assert translation_number(conj).value == pytest.approx(1.0, abs=1e-12)
    h = fixtures.chart_conjugator()
    nonlinear = Compose((h, Translation(1.0), Inverse(h)))
    # the offset h(x) - x is bounded, so the average converges like 1/n
    t = translation_number(nonlinear, 0.0, 10_000)
    assert abs(t.value - 1.0) <= 1e-3
    assert abs(t.value - 1.0) <= t.error


def test_translation_number_detects_fixed_points():
    with pytest.raises(HasFixedPoints):
        translation_number(ExpBump(IntervalQ(-1, 1)), 0.0, 100, window=(-2, 2))
    # without a window the orbit has to stall against the fixed point
    pl = piecewise_linear([(-1, -1), (0, 0.5), (1, 1)])
    with pytest.raises(HasFixedPoints):
        translation_number(pl, 0.0, 1000)
    with pytest.raises(HasFixedPoints):
        translation_number(Affine(2.0, 0.0), 1.0, 100, window=(-3, 3))
    with pytest.raises(WindowEscape):
        translation_number(Affine(2.0, 1.0), 1.0, 100)


def test_orbit_ratio_brackets_irrational():
    lo, hi = orbit_ratio(Translation(1.0), Translation(math.sqrt(2)), 0.0, 1000)
    assert lo <= math.sqrt(2) <= hi
    assert hi - lo < 1e-5


# ---------------------------------------------------------------- conjugacy


def test_conjugacy_of_translations_is_lebesgue_up_to_scale():
    spec = fixtures.translations(1.0, 0.5)
    mu, rep = conjugacy_to_translation(spec.generators, spec.window)
    assert rep.base == "t1"
    assert rep.ratios["t2"][0] == pytest.approx(0.5, abs=1e-6)
    assert mu.mass(0.0, 2.0) == pytest.approx(2.0, abs=1e-6)


def test_conjugacy_refuses_non_free_action():
    with pytest.raises(NotFree):
        conjugacy_to_translation({"b": ExpBump(IntervalQ(-1, 1)), "t": Translation(1.0)}, (-3, 3))


# ---------------------------------------------------------------- collapse


def test_collapse_rejects_non_invariant_gaps():
    with pytest.raises(GapsNotInvariant) as info:
        collapse_and_measure([(0.0, 1.0)], {"t": Translation(0.5)}, (-3, 3))
    assert info.value.generator == "t"


def test_collapse_of_gap_fixture_gives_zero_mass_on_gaps():
    spec = fixtures.gap_collapse()
    from linelab.structure import common_fixed_set

    gaps, _ = common_fixed_set([spec.generators["gamma"]], spec.window)
    phi, mu = collapse_and_measure(gaps, spec.generators, spec.window)
    assert all(mu.mass(a, b) == 0.0 for a, b in gaps)
    # blocks of length one each carry unit mass
    a, b = gaps[0][1], gaps[1][0]
    assert mu.mass(a, b) == pytest.approx(1.0)


# ---------------------------------------------------------------- discrete orbits


def test_discrete_orbit_integers():
    mu = discrete_orbit_measure({"t": Translation(1.0)}, 0.0, (-3.5, 3.5))
    assert mu.points == (-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0)


def test_discrete_orbit_half_integers():
    mu = discrete_orbit_measure({"a": Translation(1.0), "b": Translation(0.5)}, 0.0, (-2.2, 2.2))
    assert len(mu.points) == 9


def test_dense_orbit_accumulates():
    with pytest.raises(OrbitAccumulates):
        discrete_orbit_measure({"a": Translation(1.0), "b": Translation(math.sqrt(2))}, 0.0, (-3, 3))


# ---------------------------------------------------------------- case analysis


@pytest.mark.parametrize(
    "name, case",
    [
        ("global_fixed_point", "case1"),
        ("translations", "subcase2a"),
        ("conjugated_translations", "subcase2a"),
        ("gap_collapse", "subcase2b"),
        ("discrete_orbit", "subcase2c"),
        ("crossed_pl", "unclassified"),
    ],
)
def test_fixture_cases(name, case):
    c = classify_action(fixtures.ALL[name]())
    assert c.case == case
    if c.measure is not None:
        assert max(c.residuals.values()) <= 1e-6


def test_crossed_classification_lists_witness():
    c = classify_action(fixtures.crossed_pl())
    assert c.crossings and c.crossings[0].pair in (("f", "g"), ("g", "f"))
    assert c.tower is None


def test_global_fixed_point_measure_is_dirac():
    c = classify_action(fixtures.global_fixed_point())
    assert c.measure.points == (0.0,)
    assert c.minimal_set["point"] == 0.0
