"""Number parsing and formatting shared by the JSON readers and writers."""

import math
from fractions import Fraction


def parse_number(v) -> float:
    """Accept floats, ints, decimal strings, ``"a/b"`` fractions and ``"inf"``."""
    if isinstance(v, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, Fraction):
        return float(v)
    if isinstance(v, str):
        s = v.strip()
        low = s.lower()
        if low in ("inf", "+inf", "infinity", "+infinity"):
            return math.inf
        if low in ("-inf", "-infinity"):
            return -math.inf
        if "/" in s:
            return float(Fraction(s))
        out = float(s)
        if math.isnan(out):
            raise ValueError("NaN is not a valid number")
        return out
    raise ValueError(f"cannot read a number from {v!r}")


def format_number(x: float) -> str:
    """Shortest round-tripping decimal string."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(float(x))


def round_sig(x, digits=12):
    """Round a float to ``digits`` significant digits for stable reports."""
    if not isinstance(x, float) or not math.isfinite(x) or x == 0.0:
        return x
    return float(f"{x:.{digits - 1}e}")
