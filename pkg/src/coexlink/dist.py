"""Busy/idle duration models of the interfering traffic, plus the scenario bundle.

The interferer alternates between busy (transmitting) and idle periods drawn
independently from the models below.  Each on-time model exposes the CDF of a
sum of n full periods and of a residual period followed by n-1 full ones; the
idle models expose Laplace transforms, which is all the analytic machinery
downstream needs.  Every model also knows how to sample itself and its
stationary residual so the Monte Carlo engine stays in lockstep with the math.

All durations are in seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import gamma_lower_reg

_WEIGHT_TOL = 1e-12


def _require_positive(value: float, name: str) -> None:
    if not (math.isfinite(value) and value > 0.0):
        raise ValueError(f"{name} must be finite and positive, got {value!r}")


@dataclass(frozen=True)
class ConstantOnTime:
    """Fixed-length busy period (e.g. a constant frame duration)."""

    duration: float

    def __post_init__(self) -> None:
        _require_positive(self.duration, "duration")

    @property
    def mean(self) -> float:
        return self.duration

    def sum_cdf(self, n: int, x):
        """CDF of the sum of ``n`` full busy periods, a unit step at n*duration."""
        x = np.asarray(x, dtype=float)
        if n == 0:
            return (x >= 0.0).astype(float)
        return (x >= n * self.duration).astype(float)

    def residual_sum_cdf(self, n: int, x):
        """CDF of one stationary residual period plus ``n - 1`` full ones.

        The residual of a constant duration is Uniform(0, duration), so the
        CDF ramps linearly across [(n-1)*duration, n*duration].
        """
        x = np.asarray(x, dtype=float)
        if n == 0:
            return (x >= 0.0).astype(float)
        lo = (n - 1) * self.duration
        return np.clip((x - lo) / self.duration, 0.0, 1.0)

    def sample(self, rng: np.random.Generator, size=None):
        if size is None:
            return self.duration
        return np.full(size, self.duration)

    def residual_sample(self, rng: np.random.Generator, size=None):
        return rng.uniform(0.0, self.duration, size)


@dataclass(frozen=True)
class ExponentialOnTime:
    """Memoryless busy period with the given rate (1/mean, in 1/s)."""

    rate: float

    def __post_init__(self) -> None:
        _require_positive(self.rate, "rate")

    @property
    def mean(self) -> float:
        return 1.0 / self.rate

    def sum_cdf(self, n: int, x):
        """Erlang-n CDF, i.e. the regularized lower incomplete gamma P(n, rate*x)."""
        x = np.asarray(x, dtype=float)
        if n == 0:
            return (x >= 0.0).astype(float)
        # np.maximum also maps x <= 0 to P(n, 0) = 0, the correct CDF value.
        return gamma_lower_reg(float(n), np.maximum(self.rate * x, 0.0))

    def residual_sum_cdf(self, n: int, x):
        # Memoryless: the stationary residual has the original distribution.
        return self.sum_cdf(n, x)

    def sample(self, rng: np.random.Generator, size=None):
        return rng.exponential(self.mean, size)

    def residual_sample(self, rng: np.random.Generator, size=None):
        return rng.exponential(self.mean, size)


@dataclass(frozen=True)
class ExponentialIdle:
    """Memoryless idle gap with the given rate (1/mean, in 1/s)."""

    rate: float

    def __post_init__(self) -> None:
        _require_positive(self.rate, "rate")

    @property
    def mean(self) -> float:
        return 1.0 / self.rate

    def laplace(self, s: float) -> float:
        """E[exp(-s*X)] for s >= 0."""
        if s < 0.0:
            raise ValueError("laplace transform argument must be nonnegative")
        return self.rate / (s + self.rate)

    def residual_laplace(self, s: float) -> float:
        """Laplace transform of the stationary residual life.

        Equals (1 - laplace(s)) / (s * mean); for an exponential this reduces
        to the original transform, and the closed form below makes s = 0 safe.
        """
        return self.laplace(s)

    def sample(self, rng: np.random.Generator, size=None):
        return rng.exponential(self.mean, size)

    def residual_sample(self, rng: np.random.Generator, size=None):
        return rng.exponential(self.mean, size)


@dataclass(frozen=True)
class HyperexponentialIdle:
    """Mixture of exponential idle gaps, the long-tailed measured-traffic model.

    ``weights`` are the phase probabilities (must sum to one) and ``means``
    the phase means in seconds.
    """

    weights: tuple[float, ...]
    means: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(self, "means", tuple(float(m) for m in self.means))
        if len(self.weights) != len(self.means) or not self.weights:
            raise ValueError("weights and means must be equal-length, nonempty")
        for i, (w, m) in enumerate(zip(self.weights, self.means)):
            _require_positive(w, f"weights[{i}]")
            _require_positive(m, f"means[{i}]")
        total = math.fsum(self.weights)
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise ValueError(f"weights must sum to 1, got {total!r}")

    @property
    def mean(self) -> float:
        return math.fsum(w * m for w, m in zip(self.weights, self.means))

    def laplace(self, s: float) -> float:
        if s < 0.0:
            raise ValueError("laplace transform argument must be nonnegative")
        return math.fsum(
            w / (1.0 + s * m) for w, m in zip(self.weights, self.means)
        )

    def residual_laplace(self, s: float) -> float:
        if s < 0.0:
            raise ValueError("laplace transform argument must be nonnegative")
        acc = math.fsum(
            w * m / (1.0 + s * m) for w, m in zip(self.weights, self.means)
        )
        return acc / self.mean

    def _phase_means(self) -> np.ndarray:
        return np.asarray(self.means, dtype=float)

    def sample(self, rng: np.random.Generator, size=None):
        idx = rng.choice(len(self.weights), size=size, p=np.asarray(self.weights))
        return rng.exponential(self._phase_means()[idx])

    def residual_sample(self, rng: np.random.Generator, size=None):
        # Stationary residual of a mixture: phase i is picked proportionally
        # to the time spent in it (w_i * m_i), then the residual within an
        # exponential phase is again exponential.
        probs = np.asarray(
            [w * m / self.mean for w, m in zip(self.weights, self.means)]
        )
        probs = probs / probs.sum()
        idx = rng.choice(len(self.weights), size=size, p=probs)
        return rng.exponential(self._phase_means()[idx])


OnTimeModel = ConstantOnTime | ExponentialOnTime
IdleTimeModel = ExponentialIdle | HyperexponentialIdle


@dataclass(frozen=True)
class CoexistenceScenario:
    """Everything that defines one coexistence setup.

    ``packet_rate`` is the exponential rate (1/s) of the observed link's
    packet duration; ``bit_time`` is its per-bit airtime in seconds.
    """

    busy: OnTimeModel
    idle: IdleTimeModel
    packet_rate: float
    bit_time: float = 4e-6

    def __post_init__(self) -> None:
        _require_positive(self.packet_rate, "packet_rate")
        _require_positive(self.bit_time, "bit_time")
        if not isinstance(self.busy, (ConstantOnTime, ExponentialOnTime)):
            raise TypeError(f"unsupported busy model: {type(self.busy).__name__}")
        if not isinstance(self.idle, (ExponentialIdle, HyperexponentialIdle)):
            raise TypeError(f"unsupported idle model: {type(self.idle).__name__}")

    @property
    def packet_mean(self) -> float:
        return 1.0 / self.packet_rate


def activity_factor(scenario: CoexistenceScenario) -> float:
    """Long-run fraction of time the interferer is busy."""
    busy = scenario.busy.mean
    idle = scenario.idle.mean
    return busy / (busy + idle)
