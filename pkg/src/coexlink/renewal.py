"""Distribution of the number of idle gaps completed inside a random window.

The observed packet lasts an exponential time T.  After removing a busy-time
budget ``offset`` from it, we ask how many full idle periods the interferer
fits into the remaining window max(T - offset, 0).  Two counting conventions
matter: the window may open at a random instant inside an idle period
(equilibrium: first gap is a residual life) or exactly at the start of one
(ordinary: all gaps are full draws).

Both PMFs come out geometric in the idle-gap Laplace transform evaluated at
the packet rate, damped by exp(-rate * offset):

    equilibrium: p(0) = 1 - gR*d,  p(n) = d * gR * (1 - g) * g^(n-1)
    ordinary:    p(0) = 1 - g*d,   p(n) = d * (1 - g) * g^n

with g the idle Laplace transform at the packet rate, gR the residual-life
one, and d the damping factor.  For an exponential idle law g == gR and the
two conventions coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .dist import IdleTimeModel

# PMF mass below this is indistinguishable from 0 at double precision and
# only adds subnormal noise to tail sums.
_PMF_FLOOR = 1e-300


class CountKind(Enum):
    EQUILIBRIUM = "equilibrium"
    ORDINARY = "ordinary"


@dataclass(frozen=True)
class RenewalPmfSpec:
    """Frozen inputs for one counting distribution.

    ``packet_rate`` is the exponential rate of the window length and
    ``offset`` the busy-time budget subtracted from it (seconds).
    """

    idle: IdleTimeModel
    packet_rate: float
    offset: float
    kind: CountKind

    def __post_init__(self) -> None:
        if not (math.isfinite(self.packet_rate) and self.packet_rate > 0.0):
            raise ValueError("packet_rate must be finite and positive")
        if not (math.isfinite(self.offset) and self.offset >= 0.0):
            raise ValueError("offset must be finite and nonnegative")
        if not isinstance(self.kind, CountKind):
            raise TypeError("kind must be a CountKind")


def _factors(spec: RenewalPmfSpec) -> tuple[float, float, float]:
    g = spec.idle.laplace(spec.packet_rate)
    g_res = spec.idle.residual_laplace(spec.packet_rate)
    damp = math.exp(-spec.packet_rate * spec.offset)
    return g, g_res, damp


def _clean(p: float) -> float:
    if p < _PMF_FLOOR:
        return 0.0
    return p


def pmf(spec: RenewalPmfSpec, n: int) -> float:
    """Probability of exactly ``n`` completed idle gaps in the window."""
    if n < 0 or n != int(n):
        raise ValueError(f"count must be a nonnegative integer, got {n!r}")
    g, g_res, damp = _factors(spec)
    if spec.kind is CountKind.EQUILIBRIUM:
        if n == 0:
            return 1.0 - g_res * damp
        return _clean(damp * g_res * (1.0 - g) * g ** (n - 1))
    if n == 0:
        return 1.0 - g * damp
    return _clean(damp * (1.0 - g) * g**n)


def pmf_equilibrium(idle: IdleTimeModel, packet_rate: float, offset: float, n: int) -> float:
    return pmf(RenewalPmfSpec(idle, packet_rate, offset, CountKind.EQUILIBRIUM), n)


def pmf_ordinary(idle: IdleTimeModel, packet_rate: float, offset: float, n: int) -> float:
    return pmf(RenewalPmfSpec(idle, packet_rate, offset, CountKind.ORDINARY), n)


def pmf_values(spec: RenewalPmfSpec, n_max: int) -> list[float]:
    """PMF at 0..n_max with the geometric powers built incrementally."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    g, g_res, damp = _factors(spec)
    if spec.kind is CountKind.EQUILIBRIUM:
        out = [1.0 - g_res * damp]
        term = damp * g_res * (1.0 - g)
    else:
        out = [1.0 - g * damp]
        term = damp * (1.0 - g) * g
    for _ in range(n_max):
        out.append(_clean(term))
        term *= g
    return out


def pmf_tail_index(spec: RenewalPmfSpec, epsilon: float, hard_cap: int = 10_000_000) -> int:
    """Smallest n_max whose cumulative PMF reaches 1 - epsilon.

    The left-out tail is a plain geometric series, so the index solves
    g^k <= epsilon directly; the loop form is kept in the tests as the
    brute-force cross-check, not here.
    """
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    g, g_res, damp = _factors(spec)
    head = g_res * damp if spec.kind is CountKind.EQUILIBRIUM else g * damp
    # Tail beyond n terms: head * g^n for n >= 1; the n = 0 term alone leaves
    # mass head.
    if head <= epsilon:
        return 0
    if g <= 0.0:
        return 1
    n = math.ceil((math.log(epsilon) - math.log(head)) / math.log(g))
    n = max(n, 1)
    # Guard against log round-off at the boundary.
    while n <= hard_cap and head * g**n > epsilon:
        n += 1
    if n > hard_cap:
        raise RuntimeError(
            f"renewal tail index exceeded hard cap {hard_cap}; "
            f"epsilon={epsilon!r} is too tight for g={g!r}"
        )
    return n
