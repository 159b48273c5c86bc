"""Collision-time distribution of an exponential-length packet.

A packet of exponential duration T lands on the channel while the interferer
alternates between busy and idle periods.  The collision time is the total
overlap with busy periods during the packet.  Conditioning on the number of
idle gaps that fit into the non-colliding part of the window turns the CDF
into a geometric series over the on-time convolution CDFs:

    off start: F0(x) = 1 - e^(-s*x) * gR * (1 - (1-g) * sum_n g^(n-1) * Hn(x))
    on  start: F1(x) = (1 - e^(-s*x))
                       + e^(-s*x) * (1-g) * sum_n g^(n-1) * HnR(x)

with s the packet rate, g / gR the idle-gap and residual-idle Laplace
transforms at s, Hn the CDF of n full on-times and HnR the CDF of a residual
on-time plus n-1 full ones.  The 1 - e^(-s*x) terms carry the probability
that the packet itself ends within the collision budget x.  Both series
truncate after n_max terms with error below g^n_max.

The stationary curve mixes the two with the activity factor:
F(x) = alpha*F1(x) + (1-alpha)*F0(x); F(x) = 0 for x < 0 and F has an atom at
x = 0 (the no-collision probability).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .dist import CoexistenceScenario, activity_factor
from .renewal import CountKind, RenewalPmfSpec, pmf_tail_index

logger = logging.getLogger(__name__)

# Floating error visibly above this after clamping indicates a real bug, not
# round-off; keep it tighter than any acceptance tolerance.
_CLAMP_SLACK = 1e-9


def _series_terms(scenario: CoexistenceScenario, epsilon: float) -> tuple[float, float, int]:
    s = scenario.packet_rate
    g = scenario.idle.laplace(s)
    g_res = scenario.idle.residual_laplace(s)
    # g^(n+1) <= epsilon at the returned index, so n+1 series terms bound the
    # truncation error of either curve by epsilon.
    spec = RenewalPmfSpec(scenario.idle, s, 0.0, CountKind.ORDINARY)
    n_terms = pmf_tail_index(spec, epsilon) + 1
    return g, g_res, n_terms


def _weighted_cdf_sum(scenario, x, n_terms: int, g: float, residual: bool) -> np.ndarray:
    """sum_{n=1..n_terms} (1-g) g^(n-1) * CDF_n(x), CDF picked by ``residual``."""
    acc = np.zeros_like(x)
    weight = 1.0 - g
    busy = scenario.busy
    for n in range(1, n_terms + 1):
        cdf = busy.residual_sum_cdf(n, x) if residual else busy.sum_cdf(n, x)
        acc += weight * cdf
        weight *= g
    return acc


def _clamp(values: np.ndarray, label: str) -> np.ndarray:
    worst = max(float(np.max(values - 1.0, initial=0.0)), float(np.max(-values, initial=0.0)))
    if worst > _CLAMP_SLACK:
        logger.debug("%s exceeded [0,1] by %.3e before clamping", label, worst)
    return np.clip(values, 0.0, 1.0)


def ctd_off_start(scenario: CoexistenceScenario, x, epsilon: float = 1e-9):
    """CDF of the collision time given the packet starts in an idle period."""
    g, g_res, n_terms = _series_terms(scenario, epsilon)
    xa = np.asarray(x, dtype=float)
    xc = np.maximum(xa, 0.0)
    damp = np.exp(-scenario.packet_rate * xc)
    inner = 1.0 - _weighted_cdf_sum(scenario, xc, n_terms, g, residual=False)
    vals = 1.0 - damp * g_res * inner
    vals = np.where(xa < 0.0, 0.0, vals)
    return _clamp(vals, "off-start CDF")


def ctd_on_start(scenario: CoexistenceScenario, x, epsilon: float = 1e-9):
    """CDF of the collision time given the packet starts in a busy period."""
    g, _, n_terms = _series_terms(scenario, epsilon)
    xa = np.asarray(x, dtype=float)
    xc = np.maximum(xa, 0.0)
    damp = np.exp(-scenario.packet_rate * xc)
    series = _weighted_cdf_sum(scenario, xc, n_terms, g, residual=True)
    vals = (1.0 - damp) + damp * series
    vals = np.where(xa < 0.0, 0.0, vals)
    return _clamp(vals, "on-start CDF")


def ctd_mixture(scenario: CoexistenceScenario, x, epsilon: float = 1e-9):
    """Stationary collision-time CDF, the activity-factor mixture of the two starts."""
    alpha = activity_factor(scenario)
    return alpha * ctd_on_start(scenario, x, epsilon) + (1.0 - alpha) * ctd_off_start(
        scenario, x, epsilon
    )


@dataclass(frozen=True)
class CtdCurve:
    """Collision-time CDF evaluated on a grid.

    ``omega0``/``omega1`` hold the idle-start and busy-start conditionals and
    ``omega`` their stationary mixture.  The curve is 0 left of the grid.
    """

    scenario: CoexistenceScenario
    grid: np.ndarray
    omega0: np.ndarray
    omega1: np.ndarray
    omega: np.ndarray
    epsilon: float

    @property
    def alpha(self) -> float:
        return activity_factor(self.scenario)


def coverage_point(scenario: CoexistenceScenario, coverage: float = 1e-4,
                   epsilon: float = 1e-9) -> float:
    """Smallest x with mixture CDF >= 1 - coverage, found by bisection.

    The collision time never exceeds the packet length, so the CDF dominates
    1 - e^(-rate*x) and -log(coverage)/rate brackets the answer from above.
    """
    if not (0.0 < coverage < 1.0):
        raise ValueError("coverage must lie in (0, 1)")
    target = 1.0 - coverage
    hi = -math.log(coverage) / scenario.packet_rate
    lo = 0.0
    if float(ctd_mixture(scenario, 0.0, epsilon)) >= target:
        return 0.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if float(ctd_mixture(scenario, mid, epsilon)) >= target:
            hi = mid
        else:
            lo = mid
    return hi


def default_grid(scenario: CoexistenceScenario, points: int = 512,
                 coverage: float = 1e-4, epsilon: float = 1e-9) -> np.ndarray:
    """Uniform grid on [0, min(8 packet means, the coverage point)]."""
    if points < 2:
        raise ValueError("grid needs at least 2 points")
    x_hi = min(8.0 * scenario.packet_mean, coverage_point(scenario, coverage, epsilon))
    if x_hi <= 0.0:
        x_hi = scenario.packet_mean
    return np.linspace(0.0, x_hi, points)


def ctd_curve(scenario: CoexistenceScenario, grid=None, points: int = 512,
              epsilon: float = 1e-9) -> CtdCurve:
    """Evaluate all three CDFs on ``grid`` (or the default one)."""
    if not (0.0 < epsilon <= 1e-6):
        raise ValueError("epsilon must lie in (0, 1e-6]")
    if grid is None:
        grid = default_grid(scenario, points=points, epsilon=epsilon)
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValueError("grid must be a nonempty 1-d array")
    if not np.all(np.isfinite(grid)):
        raise ValueError("grid must be finite")
    if np.any(np.diff(grid) < 0.0) or grid[0] < 0.0:
        raise ValueError("grid must be nondecreasing and nonnegative")
    omega0 = ctd_off_start(scenario, grid, epsilon)
    omega1 = ctd_on_start(scenario, grid, epsilon)
    alpha = activity_factor(scenario)
    omega = alpha * omega1 + (1.0 - alpha) * omega0
    return CtdCurve(scenario, grid, omega0, omega1, omega, epsilon)
