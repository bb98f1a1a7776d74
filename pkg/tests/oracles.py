"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterator, Optional, Tuple

import mpmath


def naive_partitions(n: int, largest: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """All partitions of n as non-increasing tuples (plain recursion on the largest part)."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in naive_partitions(n - first, first):
            yield (first,) + rest


def is_power(v: int, s: int) -> bool:
    r = round(v ** (1.0 / s))
    return any((r + d) ** s == v for d in (-1, 0, 1) if r + d >= 1)


def admissible(part: Tuple[int, ...], max_parts=None, max_mult=None, s=1) -> bool:
    if max_parts is not None and len(part) > max_parts:
        return False
    if max_mult is not None and part and max(Counter(part).values()) > max_mult:
        return False
    return all(is_power(v, s) for v in part)


def brute_count(n: int, max_parts=None, max_mult=None, s=1) -> int:
    return sum(1 for p in naive_partitions(n) if admissible(p, max_parts, max_mult, s))


def golden_section_min(f, lo, hi, dps=50, iters=400):
    """Golden-section minimiser in mpmath arithmetic."""
    with mpmath.workdps(dps):
        lo, hi = mpmath.mpf(lo), mpmath.mpf(hi)
        g = (mpmath.sqrt(5) - 1) / 2
        c, d = hi - g * (hi - lo), lo + g * (hi - lo)
        fc, fd = f(c), f(d)
        for _ in range(iters):
            if fc < fd:
                hi, d, fd = d, c, fc
                c = hi - g * (hi - lo)
                fc = f(c)
            else:
                lo, c, fc = c, d, fd
                d = lo + g * (hi - lo)
                fd = f(d)
        return (lo + hi) / 2


def rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def spread(values) -> float:
    values = list(values)
    mean = sum(values) / len(values)
    return (max(values) - min(values)) / abs(mean)


LN10 = math.log(10.0)
