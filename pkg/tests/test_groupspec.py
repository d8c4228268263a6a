import json

import pytest

from linelab import fixtures
from linelab.config import Budget
from linelab.errors import SpecError
from linelab.groupspec import GroupSpec, load, loads
from linelab.homeo import Translation
from linelab.intervals import IntervalQ


def _doc(**extra):
    doc = {
        "name": "t",
        "generators": [{"name": "a", "map": {"op": "translation", "c": "1/2"}}],
        "window": ["-3", "3"],
    }
    doc.update(extra)
    return doc


@pytest.mark.parametrize("name", sorted(fixtures.ALL))
def test_fixture_json_roundtrip(name):
    spec = fixtures.ALL[name]()
    text = json.dumps(spec.to_json(), sort_keys=True)
    again = loads(text)
    assert json.dumps(again.to_json(), sort_keys=True) == text


def test_loads_minimal_document():
    spec = loads(json.dumps(_doc()))
    assert spec.names == ["a"] and spec.window == IntervalQ(-3, 3)
    assert spec.generators["a"].eval(0.0) == 0.5


def test_load_from_file(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps(_doc()))
    assert load(p).name == "t"


def test_decode_error_reports_position():
    with pytest.raises(SpecError, match=r"line 2, column \d+"):
        loads('{"name": "x",\n "generators": [,]}')


@pytest.mark.parametrize(
    "patch, where",
    [
        ({"generators": []}, "generators"),
        ({"generators": [{"name": "a"}]}, "generators[0]"),
        ({"generators": [{"name": "a", "map": {"op": "translation", "c": 1}}] * 2}, "duplicate"),
        ({"window": ["0", "inf"]}, "window"),
        ({"window": ["2", "1"]}, "window"),
        ({"budget": {"depth": 2}}, "budget"),
        ({"tolerances": {"eps": 1}}, "tolerances"),
        ({"subgroups": {"A": ["zz"]}}, "subgroups.A"),
        ({"series": [["a", "zz"]]}, "series[0]"),
    ],
)
def test_invalid_documents_name_the_field(patch, where):
    with pytest.raises(SpecError) as info:
        GroupSpec.from_json(_doc(**patch))
    assert where in str(info.value)


def test_not_an_object():
    with pytest.raises(SpecError):
        GroupSpec.from_json([1, 2])


def test_series_pair_prefers_declared_subgroups():
    spec = GroupSpec("s", {"a": Translation(1.0), "b": Translation(2.0)}, IntervalQ(-1, 1), subgroups={"A": ["a"], "B": ["a", "b"]})
    assert spec.series_pair() == (["a"], ["a", "b"])


def test_series_pair_from_series():
    spec = fixtures.stage_family(3)
    assert spec.series_pair() == (["f1"], ["f1", "f2", "f3"])
    with pytest.raises(SpecError):
        fixtures.translations().series_pair()


def test_with_window_and_budget():
    spec = fixtures.translations()
    assert spec.with_window(IntervalQ(0, 1)).window == IntervalQ(0, 1)
    assert spec.with_budget(Budget(word_len=2)).budget.word_len == 2


def test_build_documents_load_as_specs():
    from linelab.yoccoz import build_counterexample

    spec = GroupSpec.from_json(build_counterexample(3).to_json())
    assert spec.names == ["f1", "f2", "f3"] and spec.series == [["f1", "f2", "f3"]]
