"""Mapping between a finite-N Bose system and a Gentile system with cap M.

The maps are leading-order relations (constant prefactors dropped), so the
validator never compares M values against a closed form; it scores the
entropy residual ``|S_fin - S_frac|`` with ``S_frac`` evaluated at the
mapped M rounded to an integer.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import List, Optional

from . import asymptotics as asy
from .asymptotics import SpectrumModel
from .errors import DomainError, InfeasibleError
from .partition_core import count_power
from .thermo import microcanonical_temperature

__all__ = [
    "DEFAULT_M_CAP",
    "DEFAULT_MAX_DP_N",
    "ROUTES",
    "RouteEntropies",
    "EquivalenceReport",
    "map_m_micro",
    "map_m_grand",
    "map_m_power",
    "log_map_m_micro",
    "log_map_m_grand",
    "log_map_m_power",
    "max_dp_n",
    "validate_equivalence",
]

DEFAULT_M_CAP = 1e9
DEFAULT_MAX_DP_N = 5000
MAX_DP_ENV = "GENTILE_LAB_MAX_DP_N"
ROUTES = ("exact", "asymptotic")
_BEST_M_SCAN_LIMIT = 400
_LAMBDA_1 = math.pi / math.sqrt(6.0)


def _positive(value: float, name: str) -> float:
    value = float(value)
    if not value > 0.0 or not math.isfinite(value):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return value


def _exp(x: float) -> float:
    return math.exp(x) if x < 709.0 else math.inf


def log_map_m_micro(n: float, N: float) -> float:
    return _LAMBDA_1 * _positive(N, "N") / math.sqrt(_positive(n, "n"))


def map_m_micro(n: float, N: float) -> float:
    """Microcanonical map ``M = exp(pi N / sqrt(6 n))``."""
    return _exp(log_map_m_micro(n, N))


def log_map_m_grand(N: float, T: float) -> float:
    N = _positive(N, "N")
    return N / _positive(T, "T") - math.log(N)


def map_m_grand(N: float, T: float) -> float:
    """Grand-canonical map ``M = exp(N/T) / N``."""
    return _exp(log_map_m_grand(N, T))


def log_map_m_power(n: float, N: float, model: Optional[SpectrumModel] = None) -> float:
    n = _positive(n, "n")
    N = _positive(N, "N")
    model = model or SpectrumModel()
    s, lam = model.s, model.lambda_s
    log_root = (
        (1.0 - s) / (1.0 + s) * math.log(n)
        + (s - 1.0) * math.log(N)
        + lam * n ** (-s / (1.0 + s)) * N**s
    )
    return s * log_root


def map_m_power(n: float, N: float, model: Optional[SpectrumModel] = None) -> float:
    """Power-spectrum map ``M = [n**((1-s)/(1+s)) N**(s-1) exp(lambda_s N**s / n**(s/(1+s)))]**s``."""
    return _exp(log_map_m_power(n, N, model))


def max_dp_n() -> int:
    """Exact-counting size limit, overridable through ``GENTILE_LAB_MAX_DP_N``."""
    raw = os.environ.get(MAX_DP_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_DP_N
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"{MAX_DP_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise DomainError(f"{MAX_DP_ENV} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class RouteEntropies:
    s_fin: float
    s_frac: float
    residual: float
    relative_residual: float

    @classmethod
    def build(cls, s_fin: float, s_frac: float) -> "RouteEntropies":
        residual = abs(s_fin - s_frac)
        relative = residual / abs(s_fin) if s_fin != 0.0 else (0.0 if residual == 0.0 else math.inf)
        return cls(s_fin, s_frac, residual, relative)


@dataclass(frozen=True)
class EquivalenceReport:
    """Outcome of one equivalence check.

    ``s_fin``/``s_frac``/``residual``/``relative_residual`` belong to the
    requested route; ``exact`` and ``asymptotic`` hold both routes where
    available (exact is ``None`` on the asymptotic route).
    """

    n: int
    N: int
    s: int
    route: str
    temperature: float
    mapped_m: float
    log_mapped_m: float
    m_used: Optional[int]
    rounding_delta: Optional[float]
    m_clamped: bool
    s_fin: float
    s_frac: float
    residual: float
    relative_residual: float
    exact: Optional[RouteEntropies]
    asymptotic: RouteEntropies
    best_m_exact: Optional[int] = None
    notes: List[str] = field(default_factory=list)


def _exact_entropies(n: int, N: int, s: int, m_used: Optional[int]) -> RouteEntropies:
    s_fin = count_power(n, s, max_parts=N).log_value
    s_frac = count_power(n, s, max_multiplicity=m_used).log_value
    return RouteEntropies.build(s_fin, s_frac)


def _asymptotic_entropies(n: int, N: int, model: SpectrumModel, m_used: Optional[int]) -> RouteEntropies:
    s_fin = asy.log_gamma_fin(n, N, model)
    s_frac = asy.log_gamma_frac(n, math.inf if m_used is None else m_used, model)
    return RouteEntropies.build(s_fin, s_frac)


def _best_m_exact(n: int, N: int, s: int, mapped_m: float) -> Optional[int]:
    # diagnostic: residual-minimising M within +-50% of the mapped value
    lo = max(1, int(math.floor(0.5 * mapped_m)))
    hi = min(max(n, 1), int(math.ceil(1.5 * mapped_m)))
    if hi < lo or hi - lo > _BEST_M_SCAN_LIMIT:
        return None
    s_fin = count_power(n, s, max_parts=N).log_value
    best, best_res = None, math.inf
    for m in range(lo, hi + 1):
        res = abs(s_fin - count_power(n, s, max_multiplicity=m).log_value)
        if res < best_res:
            best, best_res = m, res
    return best


def validate_equivalence(
    n: int,
    N: int,
    s: int = 1,
    route: str = "exact",
    *,
    m_cap: float = DEFAULT_M_CAP,
    scan_best_m: bool = True,
) -> EquivalenceReport:
    """Map ``(n, N, s)`` to M and measure how well the entropies agree.

    Raises
    ------
    InfeasibleError
        Exact route with ``n`` above :func:`max_dp_n`.
    """
    for name, value in (("n", n), ("N", N), ("s", s)):
        if isinstance(value, bool) or int(value) != value or value < 1:
            raise DomainError(f"{name} must be a positive integer, got {value!r}")
    n, N, s = int(n), int(N), int(s)
    if route not in ROUTES:
        raise DomainError(f"route must be one of {ROUTES}, got {route!r}")
    if route == "exact" and n > max_dp_n():
        raise InfeasibleError(f"n = {n} exceeds the exact-counting limit {max_dp_n()} ({MAX_DP_ENV})")

    model = SpectrumModel(float(s))
    log_m = log_map_m_power(n, N, model)
    mapped = _exp(log_m)
    notes: List[str] = []
    if log_m > math.log(m_cap):
        m_used, delta, clamped = None, None, True
        notes.append(f"mapped M exceeds cap {m_cap:g}; Gentile side treated as unrestricted Bose")
    else:
        m_used = max(1, int(math.floor(mapped + 0.5)))
        delta, clamped = m_used - mapped, False

    asym = _asymptotic_entropies(n, N, model, m_used)
    exact = _exact_entropies(n, N, s, m_used) if route == "exact" else None
    chosen = exact if route == "exact" else asym
    best = None
    if route == "exact" and scan_best_m and not clamped:
        best = _best_m_exact(n, N, s, mapped)

    return EquivalenceReport(
        n=n,
        N=N,
        s=s,
        route=route,
        temperature=microcanonical_temperature(n, model),
        mapped_m=mapped,
        log_mapped_m=log_m,
        m_used=m_used,
        rounding_delta=delta,
        m_clamped=clamped,
        s_fin=chosen.s_fin,
        s_frac=chosen.s_frac,
        residual=chosen.residual,
        relative_residual=chosen.relative_residual,
        exact=exact,
        asymptotic=asym,
        best_m_exact=best,
        notes=notes,
    )
