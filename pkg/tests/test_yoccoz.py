import csv
import io
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from linelab.errors import DegenerateInterval, SpecError
from linelab.homeo import ExpBump
from linelab.intervals import IntervalQ
from linelab.yoccoz import (
    CounterexampleBuild,
    build_counterexample,
    chart,
    cocycle_residual,
    sup_derivative_deviation,
    verify_counterexample,
    yoccoz_map,
)


def _interval(draw_lo, width):
    return IntervalQ(draw_lo, draw_lo + width)


intervals = st.builds(_interval, st.floats(-50, 50), st.floats(0.05, 20))


def test_chart_is_increasing_bijection_on_interval():
    xs = np.linspace(0.001, 0.999, 501)
    ys = [chart((0, 1), x) for x in xs]
    assert all(u < v for u, v in zip(ys, ys[1:]))
    assert chart((0, 1), 0.5) == 0.0
    assert ys[0] < -900 and ys[-1] > 900


def test_map_sends_ends_and_midpoint():
    m = yoccoz_map((0, 1), (2, 5))
    assert m(0.5) == pytest.approx(3.5)
    assert m(1e-12) == pytest.approx(2.0, abs=1e-9)
    assert m.inverse(m(0.3)) == pytest.approx(0.3, abs=1e-12)


def test_map_between_translates_is_translation():
    m = yoccoz_map((0, 1), (3, 4))
    xs = np.linspace(0.01, 0.99, 50)
    assert np.allclose(m(xs), xs + 3, atol=1e-12)
    assert sup_derivative_deviation((0, 1), (3, 4)) == pytest.approx(0.0, abs=1e-9)


@given(intervals, intervals, intervals, st.floats(0.01, 0.99))
def test_cocycle_property(I, J, K, t):
    x = I.lo + t * I.length
    assert cocycle_residual(I, J, K, [x]) <= 1e-9 * max(1.0, abs(K.lo), abs(K.hi))


@given(intervals, st.floats(0.01, 0.99))
def test_identity_on_same_interval(I, t):
    x = I.lo + t * I.length
    assert yoccoz_map(I, I)(x) == pytest.approx(x, abs=1e-12 * max(1.0, abs(x)))


@given(intervals, intervals, st.floats(0.01, 0.99))
def test_derivative_is_positive_and_matches_difference_quotient(I, J, t):
    m = yoccoz_map(I, J)
    x = I.lo + t * I.length
    h = 1e-6 * I.length
    fd = (m(x + h) - m(x - h)) / (2 * h)
    assert m.deriv(x) > 0
    assert m.deriv(x) == pytest.approx(fd, rel=1e-4)


def test_then_composes_and_checks_chaining():
    a = yoccoz_map((0, 1), (1, 3))
    b = yoccoz_map((1, 3), (-2, 0))
    assert a.then(b)(0.4) == pytest.approx(b(a(0.4)), abs=1e-12)
    with pytest.raises(ValueError):
        b.then(a)


def test_derivative_deviation_grows_with_length_mismatch():
    devs = [sup_derivative_deviation((0, 1), (0, 1 + e)) for e in (0.01, 0.1, 1.0)]
    assert devs[0] < devs[1] < devs[2]


def test_unbounded_intervals_rejected():
    with pytest.raises(DegenerateInterval):
        yoccoz_map((0, "inf"), (0, 1))


# ---------------------------------------------------------------- stage family


@pytest.fixture(scope="module")
def build3():
    return build_counterexample(3)


def test_build_shape(build3):
    assert build3.names == ["f1", "f2", "f3"]
    assert build3.window == IntervalQ(-3, 3)
    assert len(build3.extensions) == 3
    assert [lv.interval for lv in build3.tower().levels] == [IntervalQ(-k, k) for k in (1, 2, 3)]


def test_build_rejects_small_k():
    with pytest.raises(ValueError):
        build_counterexample(1)


def test_build_json_roundtrip(build3):
    obj = json.loads(json.dumps(build3.to_json()))
    back = CounterexampleBuild.from_json(obj)
    xs = np.linspace(-3, 3, 101)
    for n in build3.names:
        assert np.array_equal(back.maps[n].eval_array(xs), build3.maps[n].eval_array(xs))
    with pytest.raises(SpecError):
        CounterexampleBuild.from_json({**obj, "kind": "other"})
    with pytest.raises(SpecError):
        CounterexampleBuild.from_json({**obj, "maps": obj["maps"][:2]})


def test_verification_passes(build3):
    rep = verify_counterexample(build3, samples=200, n_check=10)
    assert rep.passed, [r.to_json() for r in rep.failed()]
    checks = {r.check for r in rep.rows}
    assert {"commutativity", "junction_c1", "endpoint_derivative", "tower_level", "mass_pump"} <= checks
    assert rep.worst("commutativity") <= 1e-8


def test_verification_csv(build3):
    rep = verify_counterexample(build3, samples=50, n_check=5)
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert rows[0] == ["check", "location", "residual", "tolerance", "pass"]
    assert len(rows) == len(rep.rows) + 1


def test_tampered_build_fails_commutativity(build3):
    maps = dict(build3.maps)
    maps["f2"] = ExpBump(IntervalQ(-2, 2))
    bad = CounterexampleBuild(3, maps)
    rep = verify_counterexample(bad, samples=200, n_check=10)
    assert not rep.passed
    assert rep.failed("commutativity")


def test_verification_is_deterministic(build3):
    a = verify_counterexample(build3, samples=100, n_check=5, seed=4).to_json()
    b = verify_counterexample(build3, samples=100, n_check=5, seed=4).to_json()
    assert a == b
