from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from linelab.derived import Cluster, DerivedSetSequence, derived_set_step, iterate_to_empty
from linelab.errors import Inconclusive, RankCapExceeded
from linelab.homeo import Affine, Compose, ExpBump, Identity, StageMap, Translation, piecewise_linear
from linelab.intervals import IntervalQ
from linelab.structure import (
    common_fixed_set,
    fix_conjugation_check,
    fixed_set,
    is_crossed,
    is_free_action,
)

from oracles import ExactPL, exact_crossed, random_rational_pl


def test_bump_fixed_structure():
    rep = fixed_set(ExpBump(IntervalQ(-1, 1)), (-2, 2))
    assert [(p.lo, p.hi) for p in rep.fixed_intervals] == [(-2, -1), (1, 2)]
    (c,) = rep.complement_components
    assert (c.lo, c.hi, c.sign_name) == (-1, 1, "above")
    assert c.lo_genuine and c.hi_genuine


@pytest.mark.parametrize("method", ["analytic", "scan"])
def test_pl_fixed_points_both_methods(method):
    f = piecewise_linear([(0, 0), (Fr(1, 4), Fr(3, 8)), (Fr(1, 2), Fr(1, 2)), (Fr(3, 4), Fr(5, 8)), (1, 1)])
    rep = fixed_set(f, (-1, 2), method=method)
    comps = [(c.lo, c.hi, c.sign) for c in rep.complement_components]
    # the scan locates ends to the root tolerance, the analytic route exactly
    assert [s for *_, s in comps] == [1, -1]
    flat = [x for a, b, _ in comps for x in (a, b)]
    assert flat == pytest.approx([0, 0.5, 0.5, 1], abs=1e-7)


def test_translation_has_no_fixed_points():
    rep = fixed_set(Translation(0.3), (-5, 5))
    assert not rep.has_fixed_point
    (c,) = rep.complement_components
    assert not c.lo_genuine and not c.hi_genuine


def test_identity_is_all_fixed():
    rep = fixed_set(Identity(), (0, 1))
    assert rep.is_identity()


def test_affine_fixed_point():
    rep = fixed_set(Affine(2.0, -1.0), (-3, 3))
    pts = [p.lo for p in rep.fixed_intervals if p.is_point]
    assert pts == [pytest.approx(1.0)]


def test_stage_map_fixes_exactly_plus_minus_k_in_its_interval():
    rep = fixed_set(StageMap(2, 4), (-2, 2))
    assert len(rep.complement_components) == 1
    c = rep.complement_components[0]
    assert (c.lo, c.hi) == (-2, 2)


def test_crossed_witness_and_none():
    f = piecewise_linear([(0, 0), (0.5, 0.75), (1, 1)])
    w = is_crossed(f, Translation(0.5), (-2, 2))
    assert w is not None and w.endpoint == "lo" and w.sent_value == 0.5
    assert is_crossed(StageMap(1, 2), StageMap(2, 2), (-2, 2)) is None


def test_crossed_ignores_window_cut_ends():
    # Translation has no genuine ends; the bump moves (0, 1) but T(5) sends 0 far away
    assert is_crossed(ExpBump(IntervalQ(0, 1)), Translation(5.0), (-1, 2)) is None


def test_crossed_inconclusive_band():
    f = piecewise_linear([(0, 0), (0.5, 0.75), (1, 1)])
    g = Translation(5e-10)
    with pytest.raises(Inconclusive):
        is_crossed(f, g, (-2, 2))


@given(st.integers(0, 10_000))
def test_crossed_matches_exact_oracle(seed):
    rng = np.random.default_rng(seed)
    f = random_rational_pl(rng)
    g = random_rational_pl(rng, Fr(-1, 2), Fr(3, 2))
    try:
        w = is_crossed(piecewise_linear(f.knots), piecewise_linear(g.knots), (-1, 2))
    except Inconclusive:
        return
    assert (w is not None) == exact_crossed(f, g)


def test_oracle_sanity():
    f = ExactPL([(0, 0), (Fr(1, 2), Fr(3, 4)), (1, 1)])
    assert f.moved_components() == [(0, 1, 1)]
    g = ExactPL([(-1, -1), (0, Fr(1, 2)), (2, 2)])
    assert exact_crossed(f, g)


def test_freeness():
    free = is_free_action({"a": Translation(1.0), "b": Translation(2**0.5)}, (-5, 5), 4)
    assert free and free.words_checked > 0
    res = is_free_action({"f1": StageMap(1, 2), "f2": StageMap(2, 2)}, (-2, 2), 3)
    assert not res and res.to_json()["word"] == "f1"


def test_conjugation_preserves_fixed_points():
    assert fix_conjugation_check(StageMap(1, 3), StageMap(2, 3), (-3, 3))
    f = piecewise_linear([(0, 0), (0.5, 0.75), (1, 1)])
    assert fix_conjugation_check(f, Affine(1.5, 0.2), (-2, 2))


def test_common_fixed_set_merges_gaps():
    gaps, reps = common_fixed_set([ExpBump(IntervalQ(0, 1)), ExpBump(IntervalQ(0.5, 2))], (-1, 3))
    assert gaps == [(0, 2)]
    assert len(reps) == 2


# ---------------------------------------------------------------- derived sets


def test_derived_sets_of_nested_sequences():
    point = Cluster(5.0)
    seq = Cluster(0.0, 1.0)
    seq2 = Cluster(-10.0, 1.0, 0, Cluster(0.0, 1.0))
    s = DerivedSetSequence((point, seq, seq2))
    assert s.rank() == 3
    s1 = derived_set_step(s)
    assert [c.is_point for c in s1.current] == [True, False]
    s_end = iterate_to_empty(s)
    assert len(s_end.levels) == 4 and s_end.is_empty


def test_derived_set_cap():
    c = Cluster(0.0)
    for _ in range(40):
        c = Cluster(0.0, 1.0, 0, c)
    s = DerivedSetSequence((c,))
    with pytest.raises(RankCapExceeded):
        iterate_to_empty(s)


def test_cluster_samples_and_json():
    c = Cluster(1.0, 0.5, 2)
    pts = c.sample(5)
    assert pts[0] == 1.0 and pts[1] == pytest.approx(1 + 0.5 / 3)
    assert Cluster.from_json(c.to_json()) == c
    assert c.meets(1.1, 1.2)
    assert not c.meets(2.0, 3.0)
