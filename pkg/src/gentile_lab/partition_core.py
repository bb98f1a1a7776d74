"""Exact counting and enumeration of restricted integer partitions.

Every count is an arbitrary-precision Python ``int``.  Parts are positive
(the ground level carries no quanta), so ``n = 0`` has exactly one, empty,
partition.  Restrictions:

* ``max_parts`` (N): at most N summands;
* ``max_multiplicity`` (M): no part value repeated more than M times;
* ``power`` (s): every part has the form ``m**s`` with ``m >= 1``.

Counts are produced from dense dynamic-programming tables indexed by the
total ``0..n``; tables are memoised per restriction signature in a small
thread-safe LRU cache so that sweeps over ``n`` reuse them.
"""

from __future__ import annotations

import math
import threading
from collections import OrderedDict
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from .errors import DomainError, EnumerationCapError

__all__ = [
    "DEFAULT_ENUMERATION_CAP",
    "PartitionConstraint",
    "CountResult",
    "count",
    "count_unrestricted",
    "count_max_parts",
    "count_max_multiplicity",
    "count_power",
    "enumerate_partitions",
    "partition_numbers_pentagonal",
    "log_int",
    "clear_cache",
]

DEFAULT_ENUMERATION_CAP = 40
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class PartitionConstraint:
    """A counting query: partitions of ``n`` under optional restrictions."""

    n: int
    max_parts: Optional[int] = None
    max_multiplicity: Optional[int] = None
    power: int = 1

    def __post_init__(self) -> None:
        _check_nonneg_int(self.n, "n")
        if self.max_parts is not None:
            _check_pos_int(self.max_parts, "max_parts")
        if self.max_multiplicity is not None:
            _check_pos_int(self.max_multiplicity, "max_multiplicity")
        _check_pos_int(self.power, "power")


@dataclass(frozen=True)
class CountResult:
    """Exact count together with its natural logarithm."""

    exact: int
    log_value: float

    @classmethod
    def from_int(cls, value: int) -> "CountResult":
        return cls(exact=value, log_value=log_int(value))

    def __int__(self) -> int:
        return self.exact


def log_int(value: int) -> float:
    """Natural log of a non-negative integer without float conversion.

    The top 64 bits are extracted by shifting, so arbitrarily large
    integers never overflow.  Returns ``-inf`` for zero.
    """
    if value < 0:
        raise DomainError("log of a negative count")
    if value == 0:
        return -math.inf
    shift = value.bit_length() - 64
    if shift <= 0:
        return math.log(value)
    return math.log(value >> shift) + shift * _LN2


def _check_nonneg_int(value, name: str) -> None:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise DomainError(f"{name} must be a non-negative integer, got {value!r}")


def _check_pos_int(value, name: str) -> None:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise DomainError(f"{name} must be a positive integer, got {value!r}")


def _part_values(limit: int, power: int) -> List[int]:
    values = []
    m = 1
    while m**power <= limit:
        values.append(m**power)
        m += 1
    return values


# ---------------------------------------------------------------------------
# DP tables.  Each builder returns [count(0), count(1), ..., count(n_max)].
# ---------------------------------------------------------------------------


def _table_unbounded(n_max: int, values: Sequence[int]) -> List[int]:
    table = [1] + [0] * n_max
    for v in values:
        for e in range(v, n_max + 1):
            table[e] += table[e - v]
    return table


def _table_bounded_multiplicity(n_max: int, values: Sequence[int], mult: int) -> List[int]:
    # new[e] = sum_{j=0..M} old[e - j v], evaluated as a sliding window
    table = [1] + [0] * n_max
    for v in values:
        span = (mult + 1) * v
        new = table[:]
        for e in range(v, n_max + 1):
            acc = table[e] + new[e - v]
            if e >= span:
                acc -= table[e - span]
            new[e] = acc
        table = new
    return table


def _table_at_most_parts(n_max: int, max_parts: int) -> List[int]:
    """Partitions into at most ``max_parts`` parts, via exact part counts.

    ``q_k(e) = q_{k-1}(e - 1) + q_k(e - k)``: either some part equals 1
    (remove it) or every part is at least 2 (subtract 1 from each).
    """
    total = [1] + [0] * n_max
    prev = [1] + [0] * n_max  # q_0
    for k in range(1, min(max_parts, n_max) + 1):
        cur = [0] * (n_max + 1)
        for e in range(k, n_max + 1):
            cur[e] = prev[e - 1] + cur[e - k]
        for e in range(k, n_max + 1):
            total[e] += cur[e]
        prev = cur
    return total


def _table_general(
    n_max: int, values: Sequence[int], max_parts: int, mult: Optional[int]
) -> List[int]:
    # dp[k][e]: partitions of e into exactly k parts from the values seen so far
    cap = min(max_parts, n_max)
    dp = [[0] * (n_max + 1) for _ in range(cap + 1)]
    dp[0][0] = 1
    for v in values:
        if mult is None:
            for k in range(1, cap + 1):
                row, below = dp[k], dp[k - 1]
                for e in range(v, n_max + 1):
                    row[e] += below[e - v]
            continue
        old = [row[:] for row in dp]
        span = (mult + 1) * v
        for k in range(1, cap + 1):
            row, below = dp[k], dp[k - 1]
            drop = old[k - mult - 1] if k > mult else None
            for e in range(v, n_max + 1):
                acc = old[k][e] + below[e - v]
                if drop is not None and e >= span:
                    acc -= drop[e - span]
                row[e] = acc
    return [sum(dp[k][e] for k in range(cap + 1)) for e in range(n_max + 1)]


def _table_largest_part_at_most(n_max: int, largest: int) -> List[int]:
    """Partitions whose largest part is at most ``largest`` (conjugation oracle)."""
    return _table_unbounded(n_max, range(1, min(largest, n_max) + 1))


def _table_no_part_divisible_by(n_max: int, divisor: int) -> List[int]:
    """Partitions with no part divisible by ``divisor`` (Glaisher oracle)."""
    return _table_unbounded(
        n_max, [v for v in range(1, n_max + 1) if v % divisor]
    )


def partition_numbers_pentagonal(n_max: int) -> List[int]:
    """p(0..n_max) from Euler's pentagonal-number recurrence."""
    _check_nonneg_int(n_max, "n_max")
    p = [1] + [0] * n_max
    for e in range(1, n_max + 1):
        acc = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > e:
                break
            sign = 1 if k % 2 else -1
            acc += sign * p[e - g1]
            g2 = g1 + k
            if g2 <= e:
                acc += sign * p[e - g2]
            k += 1
        p[e] = acc
    return p


# ---------------------------------------------------------------------------
# Cache
# ---------------------------------------------------------------------------


class _TableCache:
    def __init__(self, maxsize: int = 128) -> None:
        self._maxsize = maxsize
        self._tables: "OrderedDict[tuple, List[int]]" = OrderedDict()
        self._lock = threading.Lock()

    def get(self, key: tuple, n: int, build: Callable[[int], List[int]]) -> List[int]:
        with self._lock:
            table = self._tables.get(key)
            if table is not None and len(table) > n:
                self._tables.move_to_end(key)
                return table
        table = build(n)
        with self._lock:
            current = self._tables.get(key)
            if current is None or len(current) < len(table):
                self._tables[key] = table
            self._tables.move_to_end(key)
            while len(self._tables) > self._maxsize:
                self._tables.popitem(last=False)
        return table

    def clear(self) -> None:
        with self._lock:
            self._tables.clear()


_CACHE = _TableCache()


def clear_cache() -> None:
    _CACHE.clear()


def _normalise(n: int, max_parts, max_mult, power: int) -> Tuple[Optional[int], Optional[int]]:
    # restrictions that cannot bind at this n are dropped so tables are shared
    if max_parts is not None and max_parts >= n:
        max_parts = None
    if max_mult is not None and max_mult >= n:
        max_mult = None
    return max_parts, max_mult


def _count_exact(n: int, max_parts: Optional[int], max_mult: Optional[int], power: int) -> int:
    if n == 0:
        return 1
    max_parts, max_mult = _normalise(n, max_parts, max_mult, power)
    key = (power, max_parts, max_mult)
    if max_parts is None and max_mult is None:
        build = lambda m: _table_unbounded(m, _part_values(m, power))
    elif max_parts is None:
        build = lambda m: _table_bounded_multiplicity(m, _part_values(m, power), max_mult)
    elif max_mult is None and power == 1:
        build = lambda m: _table_at_most_parts(m, max_parts)
    else:
        build = lambda m: _table_general(m, _part_values(m, power), max_parts, max_mult)
    return _CACHE.get(key, n, build)[n]


# ---------------------------------------------------------------------------
# Public counting API
# ---------------------------------------------------------------------------


def count(constraint: PartitionConstraint) -> CountResult:
    """Count partitions satisfying every restriction in ``constraint``."""
    c = constraint
    return CountResult.from_int(_count_exact(c.n, c.max_parts, c.max_multiplicity, c.power))


def count_unrestricted(n: int) -> CountResult:
    """p(n), the number of partitions of ``n``; p(0) = 1."""
    return count(PartitionConstraint(n))


def count_max_parts(n: int, max_parts: int) -> CountResult:
    """Partitions of ``n`` into at most ``max_parts`` summands."""
    return count(PartitionConstraint(n, max_parts=max_parts))


def count_max_multiplicity(n: int, max_multiplicity: int) -> CountResult:
    """Partitions of ``n`` in which no part occurs more than ``max_multiplicity`` times."""
    return count(PartitionConstraint(n, max_multiplicity=max_multiplicity))


def count_power(
    n: int,
    s: int,
    *,
    max_parts: Optional[int] = None,
    max_multiplicity: Optional[int] = None,
) -> CountResult:
    """Partitions of ``n`` into s-th powers, optionally restricted.

    Both restrictions may be active at once; with ``s = 1`` this reduces to
    the other counting functions.
    """
    return count(PartitionConstraint(n, max_parts, max_multiplicity, s))


def enumerate_partitions(
    n: int,
    *,
    max_parts: Optional[int] = None,
    max_multiplicity: Optional[int] = None,
    power: int = 1,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> List[Tuple[int, ...]]:
    """List every admissible partition of ``n`` exactly once.

    Partitions are tuples with non-increasing parts, produced in reverse
    lexicographic order, e.g. ``[(3,), (2, 1), (1, 1, 1)]`` for ``n = 3``.

    Raises
    ------
    EnumerationCapError
        If ``n`` exceeds ``cap``.
    """
    constraint = PartitionConstraint(n, max_parts, max_multiplicity, power)
    if n > cap:
        raise EnumerationCapError(f"n = {n} exceeds the enumeration cap {cap}")
    values = _part_values(n, power)[::-1]
    parts_budget = n if max_parts is None else max_parts
    mult_budget = n if max_multiplicity is None else max_multiplicity
    return list(_generate(constraint.n, values, 0, parts_budget, mult_budget))


def _generate(
    remaining: int, values: Sequence[int], start: int, parts_left: int, mult: int
) -> Iterator[Tuple[int, ...]]:
    if remaining == 0:
        yield ()
        return
    for i in range(start, len(values)):
        v = values[i]
        if v > remaining:
            continue
        top = min(mult, remaining // v, parts_left)
        for j in range(top, 0, -1):
            head = (v,) * j
            for tail in _generate(remaining - j * v, values, i + 1, parts_left - j, mult):
                yield head + tail
