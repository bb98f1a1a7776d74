"""Ensemble thermodynamics of Gentile gases and finite oscillator systems.

Units: the level spacing is the unit of energy and temperature.  Grand
canonical sums run over ``eps_j = j**s`` for ``j = 0, 1, 2, ...``; the
canonical N-oscillator system uses levels ``1..N``.  ``M = math.inf``
denotes Bose-Einstein statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .asymptotics import SpectrumModel
from .errors import BracketError, ConvergenceError, DomainError, TruncationError

__all__ = [
    "INF",
    "DEFAULT_LEVEL_TRUNCATION",
    "DEFAULT_MAX_LEVELS",
    "GentileGas",
    "ThermoState",
    "occupation",
    "level_sums",
    "solve_fugacity",
    "energy_grand",
    "canonical_log_partition",
    "canonical_energy",
    "bose_energy_infinite",
    "energy_delta_finite",
    "energy_delta_finite_leading",
    "energy_delta_gentile",
    "fugacity_delta_gentile",
    "microcanonical_temperature",
    "microcanonical_energy",
]

INF = math.inf
DEFAULT_LEVEL_TRUNCATION = 1e-14
DEFAULT_MAX_LEVELS = 10_000_000
RESIDUAL_TOLERANCE = 1e-10

# below this |(M+1) x| the Gentile occupation is evaluated from its Laurent series
_SERIES_CUTOFF = 1e-2
_TAIL_START_X = 40.0


def _check_temperature(T: float) -> float:
    T = float(T)
    if not T > 0.0 or not math.isfinite(T):
        raise DomainError(f"temperature must be positive and finite, got {T!r}")
    return T


def _check_occupation_cap(M: float) -> float:
    M = float(M)
    if not M >= 1.0:
        raise DomainError(f"maximum occupation must be >= 1 or inf, got {M!r}")
    return M


def _bose(x: np.ndarray) -> np.ndarray:
    """``1 / (e**x - 1)`` without overflow; ``x`` must be non-zero."""
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        pos = np.exp(-np.abs(x)) / -np.expm1(-np.abs(x))
        neg = 1.0 / np.expm1(x)
    return np.where(x > 0, pos, neg)


def _gentile(x: np.ndarray, M: float) -> np.ndarray:
    if math.isinf(M):
        if np.any(x <= 0):
            raise DomainError("Bose occupation requires eps > mu")
        return _bose(x)
    m1 = M + 1.0
    y = m1 * x
    small = np.abs(y) < _SERIES_CUTOFF
    safe_x = np.where(small, 1.0, x)
    out = _bose(safe_x) - m1 * _bose(m1 * safe_x)
    x2 = x * x
    # 1/(e^x-1) = 1/x - 1/2 + x/12 - x^3/720 + x^5/30240 - ...
    series = (
        M / 2.0
        + (1.0 - m1**2) * x / 12.0
        - (1.0 - m1**4) * x * x2 / 720.0
        + (1.0 - m1**6) * x * x2 * x2 / 30240.0
    )
    return np.where(small, series, out)


def occupation(eps, mu, T: float, M: float = INF):
    """Mean occupation of a level under Gentile statistics.

    ``f_M = 1/(e**x - 1) - (M+1)/(e**((M+1) x) - 1)`` with ``x = (eps - mu)/T``.
    ``M = 1`` is Fermi-Dirac and ``M = inf`` Bose-Einstein.  At ``x = 0``
    the removable singularity is filled with ``M/2``.

    Accepts scalars or arrays; returns a float for scalar input.
    """
    T = _check_temperature(T)
    M = _check_occupation_cap(M)
    x = (np.asarray(eps, dtype=float) - np.asarray(mu, dtype=float)) / T
    f = _gentile(np.atleast_1d(x), M)
    return float(f[0]) if np.ndim(x) == 0 else f.reshape(np.shape(x))


@dataclass(frozen=True)
class ThermoState:
    """A solved grand-canonical state (``fugacity = exp(mu / T)``)."""

    temperature: float
    fugacity: float
    particle_number: float
    energy: float
    log_fugacity: float
    max_occupation: float = INF

    @property
    def chemical_potential(self) -> float:
        return self.log_fugacity * self.temperature


@dataclass(frozen=True)
class GentileGas:
    """Gentile gas on a power-law spectrum; convenience wrapper over the module functions."""

    max_occupation: float = INF
    spectrum: SpectrumModel = field(default_factory=SpectrumModel)
    level_truncation: float = DEFAULT_LEVEL_TRUNCATION
    max_levels: int = DEFAULT_MAX_LEVELS

    def occupation(self, eps, mu, T: float):
        return occupation(eps, mu, T, self.max_occupation)

    def solve(self, N_target: float, T: float) -> ThermoState:
        return solve_fugacity(
            N_target, T, self.max_occupation, self.spectrum,
            level_truncation=self.level_truncation, max_levels=self.max_levels,
        )

    def energy(self, state: ThermoState) -> float:
        return energy_grand(
            state, self.max_occupation, self.spectrum,
            level_truncation=self.level_truncation, max_levels=self.max_levels,
        )


def _log_tail_integral(a: float, X: float) -> float:
    # ln of an upper bound on Gamma(a, X); valid for X >= 2 (a - 1)
    return (a - 1.0) * math.log(X) - X + math.log(2.0)


def level_sums(
    log_z: float,
    T: float,
    M: float = INF,
    spectrum: Optional[SpectrumModel] = None,
    *,
    level_truncation: float = DEFAULT_LEVEL_TRUNCATION,
    max_levels: int = DEFAULT_MAX_LEVELS,
) -> Tuple[float, float]:
    """Particle number and energy ``(sum_j f_j, sum_j eps_j f_j)``.

    Levels ``j >= J`` are dropped once a rigorous bound on their contribution
    (Bose occupation, integral comparison) is below ``level_truncation``
    times the retained sum.
    """
    T = _check_temperature(T)
    M = _check_occupation_cap(M)
    s = (spectrum or SpectrumModel()).s
    if math.isinf(M) and not log_z < 0.0:
        raise DomainError("Bose fugacity must be below 1 when the ground level is at zero")
    start_x = max(_TAIL_START_X + log_z, _TAIL_START_X)
    J = int(math.ceil((T * start_x) ** (1.0 / s))) + 2
    while True:
        if J > max_levels:
            raise TruncationError(
                f"level sum not certified within {max_levels} levels (T={T}, log_z={log_z}, s={s})"
            )
        eps = np.arange(J, dtype=float) ** s
        f = _gentile(eps / T - log_z, M)
        number = float(np.sum(f))
        energy = float(np.sum(eps * f))
        X = J**s / T
        xJ = X - log_z
        denom = -math.expm1(-xJ)
        a = 1.0 / s
        log_n = log_z + a * math.log(T) - math.log(s) + _log_tail_integral(a, X)
        log_e = log_z + (1.0 + a) * math.log(T) - math.log(s) + _log_tail_integral(1.0 + a, X)
        tail_n = (math.exp(-xJ) + math.exp(log_n)) / denom
        tail_e = (J**s * math.exp(-xJ) + math.exp(log_e)) / denom
        if tail_n <= level_truncation * number and tail_e <= level_truncation * energy:
            return number, energy
        J *= 2


def solve_fugacity(
    N_target: float,
    T: float,
    M: float = INF,
    spectrum: Optional[SpectrumModel] = None,
    *,
    level_truncation: float = DEFAULT_LEVEL_TRUNCATION,
    max_levels: int = DEFAULT_MAX_LEVELS,
) -> ThermoState:
    """Fugacity reproducing ``N_target`` particles at temperature ``T``.

    The total occupation is strictly increasing in ``ln z``, so the root is
    bracketed (geometric growth) and then polished with Brent's method.
    For Bose statistics ``z`` stays in ``(0, 1)``; for finite ``M`` it may
    exceed 1.

    Raises
    ------
    BracketError
        If no sign change is found.
    ConvergenceError
        If the final residual exceeds ``1e-10 * N_target``.
    """
    N_target = float(N_target)
    if not N_target > 0.0 or not math.isfinite(N_target):
        raise DomainError(f"particle number must be positive, got {N_target!r}")
    T = _check_temperature(T)
    M = _check_occupation_cap(M)
    spectrum = spectrum or SpectrumModel()
    kw = dict(level_truncation=level_truncation, max_levels=max_levels)

    def excess(t: float) -> float:
        return level_sums(t, T, M, spectrum, **kw)[0] - N_target

    if math.isinf(M):
        hi = -min(1.0, 0.5 / N_target)
        for _ in range(200):
            if excess(hi) > 0.0:
                break
            hi *= 0.5
        else:
            raise BracketError(f"could not bracket Bose fugacity from above (N={N_target}, T={T})")
    else:
        hi = 1.0
        for _ in range(200):
            if excess(hi) > 0.0:
                break
            hi = 2.0 * hi + 1.0
        else:
            raise BracketError(f"could not bracket fugacity from above (N={N_target}, T={T}, M={M})")
    step = 1.0
    lo = hi - step
    for _ in range(200):
        if excess(lo) < 0.0:
            break
        step *= 2.0
        lo = hi - step
    else:
        raise BracketError(f"could not bracket fugacity from below (N={N_target}, T={T}, M={M})")

    t = brentq(excess, lo, hi, xtol=1e-300, rtol=1e-15, maxiter=1000)
    number, energy = level_sums(t, T, M, spectrum, **kw)
    residual = abs(number - N_target)
    if residual > RESIDUAL_TOLERANCE * N_target:
        raise ConvergenceError(
            f"fugacity solve residual {residual:.3e} exceeds {RESIDUAL_TOLERANCE:g}*N "
            f"(N={N_target}, T={T}, M={M}, log_z={t!r}, bracket=[{lo!r}, {hi!r}])"
        )
    return ThermoState(
        temperature=T,
        fugacity=math.exp(t),
        particle_number=number,
        energy=energy,
        log_fugacity=t,
        max_occupation=M,
    )


def energy_grand(
    state: ThermoState,
    M: Optional[float] = None,
    spectrum: Optional[SpectrumModel] = None,
    *,
    level_truncation: float = DEFAULT_LEVEL_TRUNCATION,
    max_levels: int = DEFAULT_MAX_LEVELS,
) -> float:
    """``sum_j eps_j f_M(eps_j)`` at the state's fugacity and temperature."""
    M = state.max_occupation if M is None else M
    return level_sums(
        state.log_fugacity, state.temperature, M, spectrum,
        level_truncation=level_truncation, max_levels=max_levels,
    )[1]


# ---------------------------------------------------------------------------
# Canonical N-oscillator system
# ---------------------------------------------------------------------------


def _check_count(N) -> int:
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    return int(N)


def canonical_log_partition(N: int, T: float) -> float:
    """``ln Z_N = -sum_{j=1}^{N} ln(1 - exp(-j/T))``."""
    N = _check_count(N)
    T = _check_temperature(T)
    j = np.arange(1, N + 1, dtype=float)
    return float(-np.sum(np.log1p(-np.exp(-j / T))))


def canonical_energy(N: int, T: float) -> float:
    """``E_N = sum_{j=1}^{N} j / (exp(j/T) - 1)``, i.e. ``T**2 d ln Z_N / dT``."""
    N = _check_count(N)
    T = _check_temperature(T)
    j = np.arange(1, N + 1, dtype=float)
    return float(np.sum(j * _bose(j / T)))


def _bose_tail(start: int, T: float, tol: float) -> float:
    """``sum_{j >= start} j / (exp(j/T) - 1)`` with a geometric tail bound."""
    J = max(start + 16, int(math.ceil(T * 60.0)) + start)
    q = math.exp(-1.0 / T)
    while True:
        j = np.arange(start, J, dtype=float)
        total = float(np.sum(j * _bose(j / T)))
        # j/(e^{j/T}-1) <= j q^j / (1 - q^J) for j >= J
        bound = q**J * (J / (1.0 - q) + q / (1.0 - q) ** 2) / -math.expm1(-J / T)
        if bound <= tol * abs(total) or (total == 0.0 and bound == 0.0):
            return total
        J *= 2
        if J > DEFAULT_MAX_LEVELS:
            raise TruncationError(f"Bose energy tail not certified (T={T}, start={start})")


def bose_energy_infinite(T: float, *, tol: float = DEFAULT_LEVEL_TRUNCATION) -> float:
    """``E_inf = sum_{j>=1} j / (exp(j/T) - 1)``."""
    return _bose_tail(1, _check_temperature(T), tol)


def energy_delta_finite(N: int, T: float, *, tol: float = DEFAULT_LEVEL_TRUNCATION) -> float:
    """``E_N - E_inf``: minus the energy carried by the levels above ``N``."""
    N = _check_count(N)
    return -_bose_tail(N + 1, _check_temperature(T), tol)


def energy_delta_finite_leading(N: int, T: float) -> float:
    """Leading asymptotic magnitude ``N exp(-N/T) / (exp(1/T) - 1)``."""
    N = _check_count(N)
    T = _check_temperature(T)
    return N * math.exp(-N / T) / math.expm1(1.0 / T)


def _gentile_and_bose(N_target, T, M, spectrum, kw) -> Tuple[ThermoState, ThermoState]:
    M = _check_occupation_cap(M)
    bose = solve_fugacity(N_target, T, INF, spectrum, **kw)
    gent = solve_fugacity(N_target, T, M, spectrum, **kw)
    return gent, bose


def energy_delta_gentile(
    N_target: float,
    T: float,
    M: float,
    spectrum: Optional[SpectrumModel] = None,
    **kw,
) -> float:
    """``E_M - E_Bose`` for Gentile and Bose gases at the same ``(N, T)``."""
    gent, bose = _gentile_and_bose(N_target, T, M, spectrum, kw)
    return gent.energy - bose.energy


def fugacity_delta_gentile(
    N_target: float,
    T: float,
    M: float,
    spectrum: Optional[SpectrumModel] = None,
    **kw,
) -> float:
    """``z_M - z_Bose`` at the same ``(N, T)``."""
    gent, bose = _gentile_and_bose(N_target, T, M, spectrum, kw)
    return gent.fugacity - bose.fugacity


# ---------------------------------------------------------------------------
# Microcanonical equation of state
# ---------------------------------------------------------------------------


def microcanonical_temperature(E: float, spectrum: Optional[SpectrumModel] = None) -> float:
    """``T = E**(s/(1+s)) / lambda_s``; for ``s = 1``, ``T = sqrt(6E)/pi``."""
    E = float(E)
    if not E > 0.0:
        raise DomainError(f"energy must be positive, got {E!r}")
    spectrum = spectrum or SpectrumModel()
    s = spectrum.s
    return E ** (s / (1.0 + s)) / spectrum.lambda_s


def microcanonical_energy(T: float, spectrum: Optional[SpectrumModel] = None) -> float:
    """Inverse of :func:`microcanonical_temperature`; ``pi**2 T**2 / 6`` for ``s = 1``."""
    T = _check_temperature(T)
    spectrum = spectrum or SpectrumModel()
    s = spectrum.s
    return (spectrum.lambda_s * T) ** ((1.0 + s) / s)
