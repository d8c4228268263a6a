"""Reduced words over named generators.

A word is a tuple of letters ``(name, +1 | -1)``.  The word ``(l1, ..., lk)``
denotes ``l1 o l2 o ... o lk``: the last letter acts first, as in
:func:`linelab.homeo.compose`.  Canonical order is by length, then
letter by letter with generators in declaration order and ``+1`` before
``-1``.
"""

from __future__ import annotations

import re
from typing import Iterator, Mapping, Sequence

from .homeo import Compose, HomeoExpr, Identity, Inverse

Letter = tuple  # (name, exponent)


def letters(names: Sequence[str]) -> list:
    out = []
    for n in names:
        out.append((n, 1))
        out.append((n, -1))
    return out


def reduced_words(names: Sequence[str], max_len: int, min_len: int = 1) -> Iterator[tuple]:
    """All reduced words with min_len <= length <= max_len in canonical order."""
    alphabet = letters(names)
    for length in range(max(min_len, 1), max_len + 1):
        yield from _words_of_length(alphabet, length)


def _words_of_length(alphabet, length, prefix=()):
    if len(prefix) == length:
        yield prefix
        return
    for a in alphabet:
        if prefix and prefix[-1][0] == a[0] and prefix[-1][1] == -a[1]:
            continue
        yield from _words_of_length(alphabet, length, prefix + (a,))


def sort_key(word, names: Sequence[str]):
    pos = {n: k for k, n in enumerate(names)}
    return (len(word), tuple((pos[n], 0 if e > 0 else 1) for n, e in word))


def word_str(word) -> str:
    if not word:
        return "id"
    return " ".join(n if e == 1 else f"{n}^{e}" for n, e in word)


_TOKEN = re.compile(r"^([A-Za-z_][\w.]*)(?:\^(-?\d+))?$")


def parse_word(text: str) -> tuple:
    text = text.strip()
    if text in ("", "id"):
        return ()
    out = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad word token {tok!r}")
        e = int(m.group(2) or 1)
        step = 1 if e > 0 else -1
        out.extend([(m.group(1), step)] * abs(e))
    return tuple(out)


def letter_expr(letter, gens: Mapping[str, HomeoExpr]) -> HomeoExpr:
    name, e = letter
    f = gens[name]
    return f if e > 0 else Inverse(f)


def word_expr(word, gens: Mapping[str, HomeoExpr]) -> HomeoExpr:
    if not word:
        return Identity()
    parts = tuple(letter_expr(a, gens) for a in word)
    return parts[0] if len(parts) == 1 else Compose(parts)


def commutator(u, v) -> tuple:
    """[u, v] = u v u^-1 v^-1 as a (not necessarily reduced) word."""
    inv = lambda w: tuple((n, -e) for n, e in reversed(w))  # noqa: E731
    return tuple(u) + tuple(v) + inv(u) + inv(v)


def reduce_word(word) -> tuple:
    out: list = []
    for a in word:
        if out and out[-1][0] == a[0] and out[-1][1] == -a[1]:
            out.pop()
        else:
            out.append(a)
    return tuple(out)
