"""Mixing-time and oracle-call budgets for the exact and chord-approximated walks.

Degenerate regime: when ``m2 == M2`` the contraction factor at
``T = pi/(2 sqrt(M2))`` is ``cos(pi/2) = 0`` and the logarithmic step counts
collapse.  Budgets flag this instead of reporting a meaningless count.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

from .errors import ContractViolation
from .integrator import MAX_ADJUST_ITERATIONS
from .manifolds import CurvatureBounds

# Contraction factors at or below this are treated as exactly zero.
ZERO_COS = 1e-12
# Slack for ceilings of quantities that are integers up to rounding.
CEIL_SLACK = 1e-9


def _ceil(x: float) -> int:
    return math.ceil(x - CEIL_SLACK * max(1.0, abs(x)))


def chord_constants(b: CurvatureBounds) -> tuple[float, float]:
    """Accuracy constants ``(alpha, beta)`` of the chord oracle."""
    return b.alpha, b.beta


def error_constant(alpha: float, beta: float) -> float:
    """``1 + (pi/2) alpha + (pi/2)^2 beta``: integrator error per unit theta/sqrt(M2)."""
    return 1.0 + 0.5 * math.pi * alpha + (0.5 * math.pi) ** 2 * beta


def kappa(b: CurvatureBounds) -> float:
    """Contraction gap ``1 - cos(pi sqrt(m2) / (2 sqrt(M2)))`` at the longest step."""
    return 1.0 - math.cos(0.5 * math.pi * math.sqrt(b.m2 / b.M2))


def mixing_time_bound(b: CurvatureBounds, T: float, eps: float, D: Optional[float] = None) -> int:
    """Steps until the exact walk is within ``eps`` of uniform in Wasserstein distance.

    ``ceil(log(eps / D) / log(cos(sqrt(m2) T)))`` with ``D`` defaulting to the
    diameter bound pi/sqrt(m2).  Returns 0 when ``eps >= D`` or the cosine vanishes.
    """
    if not 0.0 < T <= b.t_max * (1.0 + 1e-12):
        raise ContractViolation(f"T must lie in (0, {b.t_max:.6g}], got {T!r}")
    if not eps > 0:
        raise ContractViolation("eps must be positive")
    D = b.d_bound if D is None else float(D)
    if eps >= D:
        return 0
    c = math.cos(math.sqrt(b.m2) * T)
    if c <= ZERO_COS:
        return 0
    return max(0, _ceil(math.log(eps / D) / math.log(c)))


@dataclass(frozen=True)
class AccuracyBudget:
    theta_eps: float
    I_eps: int
    I_raw: float
    degenerate: bool

    def __iter__(self):
        return iter((self.theta_eps, self.I_eps))


def accuracy_budget(b: CurvatureBounds, alpha: float, beta: float, eps: float) -> AccuracyBudget:
    """Chord angle ``theta(eps)`` and step count ``I(eps)`` for eps-accurate sampling."""
    if not eps > 0:
        raise ContractViolation("eps must be positive")
    if not (alpha > 0 and beta > 0):
        raise ContractViolation("alpha and beta must be positive")
    sqrt_m2, sqrt_M2 = math.sqrt(b.m2), math.sqrt(b.M2)
    theta = eps * sqrt_M2 * kappa(b) / (2.0 * error_constant(alpha, beta))
    c = math.cos(0.5 * math.pi * sqrt_m2 / sqrt_M2)
    if c <= ZERO_COS:
        return AccuracyBudget(theta, 1, 0.0, True)
    i_raw = math.log(eps * sqrt_m2 / (2.0 * math.pi)) / math.log(c)
    return AccuracyBudget(theta, max(0, _ceil(i_raw)), i_raw, False)


def min_chord(b: CurvatureBounds, theta: float, variant: str = "geometric") -> float:
    """Smallest chord at angle ``theta``.

    ``"geometric"`` is the inscribed-sphere chord ``2 sin(theta)/sqrt(M2)``;
    ``"linear"`` is the weaker ``theta/(2 sqrt(M2))``.
    """
    if variant == "geometric":
        return 2.0 * math.sin(theta) / math.sqrt(b.M2)
    if variant == "linear":
        return theta / (2.0 * math.sqrt(b.M2))
    raise ValueError(f"unknown chord variant {variant!r}")


def integrator_call_bound(b: CurvatureBounds, T: float, theta: float, variant: str = "geometric") -> int:
    """Oracle calls of one integration: full chords plus the capped final bisection."""
    return _ceil(T / min_chord(b, theta, variant)) + MAX_ADJUST_ITERATIONS


def oracle_call_budget(b: CurvatureBounds, eps: float, variant: str = "geometric") -> int:
    """Total oracle calls ``I(eps) * (ceil(T_max / min_chord) + cap)`` at ``theta(eps)``."""
    acc = accuracy_budget(b, b.alpha, b.beta, eps)
    return acc.I_eps * integrator_call_bound(b, b.t_max, acc.theta_eps, variant)


@dataclass(frozen=True)
class BudgetReport:
    kappa: float
    theta_eps: float
    I_eps: int
    N_eps: int
    t_mix: int
    N_eps_linear: int
    min_chord: float
    min_chord_linear: float
    degenerate: bool
    alpha: float
    beta: float

    def to_dict(self) -> dict:
        return asdict(self)


def budget_report(b: CurvatureBounds, eps: float, T: Optional[float] = None, D: Optional[float] = None) -> BudgetReport:
    """All budgets for tolerance ``eps``; ``T`` defaults to pi/(2 sqrt(M2))."""
    T = b.t_max if T is None else T
    acc = accuracy_budget(b, b.alpha, b.beta, eps)
    return BudgetReport(
        kappa=kappa(b),
        theta_eps=acc.theta_eps,
        I_eps=acc.I_eps,
        N_eps=oracle_call_budget(b, eps, "geometric"),
        t_mix=mixing_time_bound(b, T, eps, D),
        N_eps_linear=oracle_call_budget(b, eps, "linear"),
        min_chord=min_chord(b, acc.theta_eps, "geometric"),
        min_chord_linear=min_chord(b, acc.theta_eps, "linear"),
        degenerate=acc.degenerate,
        alpha=b.alpha,
        beta=b.beta,
    )
