"""Closed-form microstate asymptotics for power-law spectra.

For single-particle levels ``eps_m = m**s`` the logarithm of the generating
function is expanded as ``C(s) / beta**(1/s) + ln(beta) / 2``, with

    C(s)      = Gamma(1 + 1/s) * zeta(1 + 1/s)
    lambda_s  = (C(s) / s) ** (s / (s + 1))

and the microstate count follows from the saddle point of
``S(beta) = beta * E + ln Z(beta)``.  Everything here works in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from scipy.special import zeta as _zeta

from .errors import ConvergenceError, DomainError

__all__ = [
    "S_MIN",
    "S_MAX",
    "ASYMPTOTIC_SWITCH_X",
    "SpectrumModel",
    "SaddlePoint",
    "log_hardy_ramanujan",
    "log_microstates",
    "log_gamma_fin",
    "log_gamma_frac",
    "frac_rescaling_factor",
    "entropy_beta",
    "incomplete_gamma_upper",
    "incomplete_gamma_asymptotic",
    "saddle_point",
]

S_MIN = 0.2
S_MAX = 10.0

# Gamma(a, x) uses the asymptotic series for x > max(ASYMPTOTIC_SWITCH_X, 2a).
# At x = 30 the optimally truncated series is accurate to ~1e-12 relative.
ASYMPTOTIC_SWITCH_X = 30.0
_CF_EPS = 1e-16
_CF_TINY = 1e-300
_MAX_ITER = 10_000


@dataclass(frozen=True)
class SpectrumModel:
    """Power-law spectrum ``eps_m = m**s`` (energy unit chosen so a = 1)."""

    s: float = 1.0
    c_s: float = field(init=False)
    lambda_s: float = field(init=False)

    def __post_init__(self) -> None:
        s = float(self.s)
        if not math.isfinite(s) or not (S_MIN <= s <= S_MAX):
            raise DomainError(f"spectrum exponent s must lie in [{S_MIN}, {S_MAX}], got {self.s!r}")
        c_s = math.gamma(1.0 + 1.0 / s) * float(_zeta(1.0 + 1.0 / s, 1.0))
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "c_s", c_s)
        object.__setattr__(self, "lambda_s", (c_s / s) ** (s / (s + 1.0)))


@dataclass(frozen=True)
class SaddlePoint:
    beta0: float
    energy: float


def _model(model: Optional[SpectrumModel]) -> SpectrumModel:
    return SpectrumModel(1.0) if model is None else model


def _positive(value: float, name: str) -> float:
    value = float(value)
    if not value > 0.0:
        raise DomainError(f"{name} must be positive, got {value!r}")
    return value


def log_hardy_ramanujan(n: float) -> float:
    """``ln[exp(pi*sqrt(2n/3)) / (4*sqrt(3)*n)]``."""
    n = _positive(n, "n")
    return math.pi * math.sqrt(2.0 / 3.0) * math.sqrt(n) - math.log(4.0 * math.sqrt(3.0) * n)


def _log_prefactor(model: SpectrumModel) -> float:
    s = model.s
    return (
        math.log(model.lambda_s)
        - 0.5 * (s + 1.0) * math.log(2.0 * math.pi)
        + 0.5 * math.log(s / (s + 1.0))
    )


def log_microstates(E: float, model: Optional[SpectrumModel] = None) -> float:
    """Saddle-point ``ln Gamma(E)`` for the unrestricted spectrum."""
    E = _positive(E, "E")
    model = _model(model)
    s = model.s
    return (
        _log_prefactor(model)
        - (3.0 * s + 1.0) / (2.0 * (s + 1.0)) * math.log(E)
        + model.lambda_s * (s + 1.0) * E ** (1.0 / (s + 1.0))
    )


def log_gamma_fin(n: float, N: float, model: Optional[SpectrumModel] = None) -> float:
    """Log microstate count with at most ``N`` particles.

    Subtracts ``n**(s/(s+1)) * N**(1-s) * exp(-lambda_s * N**s * n**(-s/(s+1))) / (lambda_s * s)``
    from :func:`log_microstates`; for ``s = 1`` this is the Erdos-Lehner form.
    """
    n = _positive(n, "n")
    N = _positive(N, "N")
    model = _model(model)
    s, lam = model.s, model.lambda_s
    scale = n ** (s / (s + 1.0))
    exponent = -lam * N**s / scale
    correction = scale * N ** (1.0 - s) * math.exp(exponent) / (lam * s) if exponent > -745.0 else 0.0
    return log_microstates(n, model) - correction


def frac_rescaling_factor(M: float, s: float = 1.0, *, paper_literal: bool = False) -> float:
    """Factor ``(1 - (M+1)**(-1/s))**(s/(s+1))`` rescaling the Bose entropy.

    ``paper_literal=True`` returns the ``s = 1`` variant with ``1/sqrt(M)``
    in place of ``1/(M+1)``, which vanishes at ``M = 1``.
    """
    M = _positive(M, "M")
    if M < 1.0:
        raise DomainError(f"M must be at least 1, got {M!r}")
    if paper_literal:
        if s != 1.0:
            raise DomainError("the literal bounded-multiplicity variant exists only for s = 1")
        return math.sqrt(1.0 - 1.0 / math.sqrt(M)) if math.isfinite(M) else 1.0
    if not math.isfinite(M):
        return 1.0
    return (1.0 - (M + 1.0) ** (-1.0 / s)) ** (s / (s + 1.0))


def log_gamma_frac(
    n: float,
    M: float,
    model: Optional[SpectrumModel] = None,
    *,
    paper_literal: bool = False,
) -> float:
    """Log microstate count when every level holds at most ``M`` quanta-carrying particles.

    Both the exponent and the prefactor of :func:`log_microstates` are
    multiplied by :func:`frac_rescaling_factor`.  ``M = math.inf`` is the
    Bose limit.  Returns ``-inf`` where the literal variant degenerates.
    """
    n = _positive(n, "n")
    model = _model(model)
    factor = frac_rescaling_factor(M, model.s, paper_literal=paper_literal)
    if factor == 0.0:
        return -math.inf
    s = model.s
    if paper_literal:
        return (
            math.pi * math.sqrt(2.0 / 3.0) * math.sqrt(n) * factor
            - math.log(4.0 * math.sqrt(3.0) * n)
            + math.log(factor)
        )
    return (
        _log_prefactor(model)
        + math.log(factor)
        - (3.0 * s + 1.0) / (2.0 * (s + 1.0)) * math.log(n)
        + model.lambda_s * factor * (s + 1.0) * n ** (1.0 / (s + 1.0))
    )


def entropy_beta(
    beta: float,
    E: float,
    model: Optional[SpectrumModel] = None,
    N: Optional[float] = None,
    *,
    log_term: bool = True,
) -> float:
    """``S(beta) = beta*E + C(s)/beta**(1/s) + ln(beta)/2``.

    With ``N`` the finite-particle term ``Gamma(1/s, beta*N**s) / (s*beta**(1/s))``
    is subtracted.  ``log_term=False`` drops ``ln(beta)/2``, leaving the
    part whose stationary point is :func:`saddle_point`.
    """
    beta = _positive(beta, "beta")
    E = _positive(E, "E")
    model = _model(model)
    s = model.s
    inv = beta ** (-1.0 / s)
    value = beta * E + model.c_s * inv
    if log_term:
        value += 0.5 * math.log(beta)
    if N is not None:
        N = _positive(N, "N")
        value -= inv / s * incomplete_gamma_upper(1.0 / s, beta * N**s)
    return value


def saddle_point(E: float, model: Optional[SpectrumModel] = None) -> SaddlePoint:
    """Stationary point ``beta0 = (C(s)/(s*E))**(s/(s+1)) = lambda_s * E**(-s/(s+1))``."""
    E = _positive(E, "E")
    model = _model(model)
    s = model.s
    return SaddlePoint(beta0=model.lambda_s * E ** (-s / (s + 1.0)), energy=E)


# ---------------------------------------------------------------------------
# Upper incomplete gamma
# ---------------------------------------------------------------------------


def incomplete_gamma_upper(a: float, x: float) -> float:
    """Upper incomplete gamma ``Gamma(a, x) = int_x^inf t**(a-1) e**(-t) dt``.

    Three branches: the power series of the lower function for ``x < a + 1``,
    a modified-Lentz continued fraction up to ``max(30, 2a)``, and the
    asymptotic series beyond that.
    """
    a = _positive(a, "a")
    x = float(x)
    if not x >= 0.0:
        raise DomainError(f"x must be non-negative, got {x!r}")
    if x == 0.0:
        return math.gamma(a)
    if x > max(ASYMPTOTIC_SWITCH_X, 2.0 * a):
        return incomplete_gamma_asymptotic(a, x)
    if x < a + 1.0:
        return math.gamma(a) - _lower_series(a, x)
    return _upper_continued_fraction(a, x)


def incomplete_gamma_asymptotic(a: float, x: float, terms: Optional[int] = None) -> float:
    """``x**(a-1) e**(-x) * sum_k (a-1)(a-2)...(a-k) / x**k``.

    With ``terms=None`` the divergent series is cut at its smallest term;
    ``terms=1`` gives the leading behaviour ``x**(a-1) e**(-x)``.
    """
    a = _positive(a, "a")
    x = _positive(x, "x")
    log_lead = (a - 1.0) * math.log(x) - x
    if log_lead < -745.0:
        return 0.0
    total, term = 1.0, 1.0
    k = 1
    limit = _MAX_ITER if terms is None else terms
    while k < limit:
        nxt = term * (a - k) / x
        if terms is None and (abs(nxt) >= abs(term) or abs(nxt) < _CF_EPS * abs(total)):
            if abs(nxt) < abs(term):
                total += nxt
            break
        total += nxt
        term = nxt
        if term == 0.0:
            break
        k += 1
    return math.exp(log_lead) * total


def _lower_series(a: float, x: float) -> float:
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _CF_EPS:
            return total * math.exp(-x + a * math.log(x))
    raise ConvergenceError(f"lower incomplete gamma series did not converge (a={a}, x={x})")


def _upper_continued_fraction(a: float, x: float) -> float:
    b = x + 1.0 - a
    c = 1.0 / _CF_TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = b + an / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return math.exp(-x + a * math.log(x)) * h
    raise ConvergenceError(f"incomplete gamma continued fraction did not converge (a={a}, x={x})")
