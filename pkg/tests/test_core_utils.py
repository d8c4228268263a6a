import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from linelab.config import DEFAULT_BUDGET, DEFAULT_TOL, Budget, Tolerances
from linelab.errors import DegenerateInterval
from linelab.intervals import IntervalQ, as_interval
from linelab.numfmt import format_number, parse_number, round_sig
from linelab.words import commutator, parse_word, reduce_word, reduced_words, sort_key, word_str


def test_parse_number_forms():
    assert parse_number("1/3") == 1 / 3
    assert parse_number("-inf") == -math.inf
    assert parse_number(2) == 2.0
    assert parse_number(Fraction(1, 4)) == 0.25
    for bad in ("nan", True, None, "x"):
        with pytest.raises(ValueError):
            parse_number(bad)


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_format_number_roundtrips(x):
    assert parse_number(format_number(x)) == x


def test_round_sig():
    assert round_sig(0.1234567890123456) == 0.123456789012
    assert round_sig(0.0) == 0.0 and round_sig(7) == 7


def test_interval_basics():
    iv = IntervalQ("-1/2", 2)
    assert iv.lo == -0.5 and iv.length == 2.5 and iv.mid == 0.75
    assert iv.contains(2) and not iv.interior_contains(2)
    assert IntervalQ(-3, 3).in_interior(iv)
    assert iv.intersect(IntervalQ(1, 5)) == IntervalQ(1, 2)
    assert iv.intersect(IntervalQ(3, 5)) is None
    assert IntervalQ.from_json(iv.to_json()) == iv
    assert as_interval((0, 1)) == IntervalQ(0, 1)
    with pytest.raises(DegenerateInterval):
        IntervalQ(2, 1)
    assert not IntervalQ("-inf", 0).finite


def test_config_json_rejects_unknown_keys():
    assert Tolerances.from_json(DEFAULT_TOL.to_json()) == DEFAULT_TOL
    assert Budget.from_json({"word_len": 3}).word_len == 3
    with pytest.raises(KeyError):
        Tolerances.from_json({"eps": 1})
    with pytest.raises(KeyError):
        Budget.from_json({"depth": 1})
    assert DEFAULT_BUDGET.word_len == 6 and DEFAULT_BUDGET.iterates == 10_000


def test_words_canonical_order_and_count():
    ws = list(reduced_words(["a", "b"], 2))
    assert [word_str(w) for w in ws[:4]] == ["a", "a^-1", "b", "b^-1"]
    assert len(ws) == 4 + 4 * 3
    assert ws == sorted(ws, key=lambda w: sort_key(w, ["a", "b"]))
    assert parse_word(word_str(ws[7])) == ws[7]
    assert word_str(()) == "id"


def test_commutator_reduces():
    u, v = (("a", 1),), (("b", 1),)
    c = commutator(u, v)
    assert len(c) == 4
    assert reduce_word(c + tuple((n, -e) for n, e in reversed(c))) == ()
