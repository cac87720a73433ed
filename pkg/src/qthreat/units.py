"""SI-suffixed number parsing and unit-explicit formatting."""

from __future__ import annotations

import math
import re

PREFIXES = {"": 1.0, "k": 1e3, "K": 1e3, "M": 1e6, "G": 1e9, "T": 1e12, "P": 1e15, "E": 1e18}
_NUMBER = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([kKMGTPE]?)\s*(Hz|H/s|s)?\s*$")


def parse_si(text: str | float) -> float:
    """``"66.7M"``, ``"50GHz"``, ``"1e12"`` -> float."""
    if isinstance(text, (int, float)):
        return float(text)
    match = _NUMBER.match(text)
    if not match:
        raise ValueError(f"not a number: {text!r}")
    return float(match.group(1)) * PREFIXES[match.group(2)]


def parse_int_expr(text: str) -> int:
    """Integers as decimal, ``0x`` hex, or powers ``2^k`` / ``2**k`` (optionally ``-1``)."""
    s = text.strip().replace(" ", "")
    match = re.fullmatch(r"(\d+)(?:\^|\*\*)(\d+)([-+]\d+)?", s)
    if match:
        return int(match.group(1)) ** int(match.group(2)) + int(match.group(3) or 0)
    return int(s, 0)


_ENG = [(1e18, "E"), (1e15, "P"), (1e12, "T"), (1e9, "G"), (1e6, "M"), (1e3, "k"), (1.0, "")]


def format_si(value: float, unit: str) -> str:
    """Three significant digits with an SI prefix: ``1.38e10, "H/s"`` -> ``"13.8 GH/s"``."""
    if value is None or not math.isfinite(value):
        return f"inf {unit}" if value == math.inf else f"n/a {unit}"
    if value == 0:
        return f"0 {unit}"
    magnitude = abs(value)
    for scale, prefix in _ENG:
        if magnitude >= scale:
            if magnitude / scale >= 1000 and prefix == "E":
                return f"{value:.3g} {unit}"
            return f"{value / scale:.3g} {prefix}{unit}"
    return f"{value:.3g} {unit}"


def format_duration(seconds: float) -> str:
    if not math.isfinite(seconds):
        return "inf"
    for scale, unit in ((365.25 * 86400, "years"), (86400, "days"), (3600, "h"), (60, "min")):
        if seconds >= scale:
            return f"{seconds / scale:.3g} {unit}"
    return f"{seconds:.3g} s"
