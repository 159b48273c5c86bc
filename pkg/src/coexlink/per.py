"""Packet error rate of the observed link under Rayleigh-faded interference.

Bits that overlap a collision see an instantaneous signal-to-interference
ratio snr/g where g is the interferer's exponential fading power (mean
``mean_inr``); bits outside collisions are error-free in the
interference-limited model (optionally, `noise_bits` switches on a fixed
AWGN-only success probability for them).  Averaging the per-bit success
(1 - ber)^bits over the fading gives the expected success probability of a
bits-long collision window; combining those with the collision-time CDF of
`ctd` yields the PER:

    PER = 1 - sum_l success(l) * (F(l*bit_time) - F((l-1)*bit_time))

Three evaluation routes for success(l):
  * quadrature - adaptive integration over the fading density, the oracle;
  * closed form ("qn") - an 8-term exponential-polynomial fit of the
    Gaussian Q-function turns the average into a finite sum of modified
    Bessel K terms, practical for small l (accuracy validated for snr in
    [0, 30] dB and mean_inr in [-10, 20] dB);
  * gumbel - the l-th power of the per-bit success is approximated by a
    Gumbel CDF in log-fading space, then moment-matched to a Gamma law whose
    fading average is a single Bessel K; usable for large l (l*coeff > 2).

The hybrid route uses the closed form up to ``ell_switch`` bits and the
Gumbel path beyond, which is the intended production setting.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np
from scipy import integrate, special

from .ctd import coverage_point, ctd_mixture
from .dist import CoexistenceScenario
from .specfun import erf_inv, gaussian_q

# Coefficients of the Q-function fit Q(x) ~ exp(-x^2/2) * sum_j b_j x^j on
# x >= 0, degree 7, b_0 pinned to Q(0) = 0.5.  Regenerate with
# scripts/fit_qn_table.py; max |fit - Q| is 8.5e-6 on [0, 8].
QN_COEFFS = (
    0.5,
    -0.39868966149686474,
    0.24761635363745924,
    -0.12493426015626176,
    0.04894655204803919,
    -0.013386193572306802,
    0.0021805904429288104,
    -0.0001550149131660018,
)

# The closed-form term count grows like C(bits + 8, 8); past this the route
# is slower than quadrature and round-off starts to accumulate.
QN_MAX_BITS = 12

# Gumbel mean offset used by the moment match (Euler-Mascheroni, 4 places).
E0 = 0.5772

_LOG2 = math.log(2.0)


class PerMethod(Enum):
    QUADRATURE = "quadrature"
    CLOSED_FORM = "qn"
    GUMBEL_GAMMA = "gumbel"
    HYBRID = "hybrid"


class GumbelDomainError(ValueError):
    """Raised when bits * coeff <= 2, outside the Gumbel construction's domain."""


class NumericsWarning(UserWarning):
    """A result needed clamping by more than round-off."""


@dataclass(frozen=True)
class Modulation:
    """Bit error rate model ber(snr) = coeff * Q(sqrt(gain * snr)).

    Defaults are coherent BPSK (coeff 1, gain 2); QPSK per bit is the same
    curve.  ``coeff`` may not exceed 2 so ber stays within [0, 1].
    """

    coeff: float = 1.0
    gain: float = 2.0

    def __post_init__(self) -> None:
        if not (0.0 < self.coeff <= 2.0):
            raise ValueError("coeff must lie in (0, 2]")
        if not (math.isfinite(self.gain) and self.gain > 0.0):
            raise ValueError("gain must be finite and positive")


def ber_awgn(modulation: Modulation, snr: float):
    """Bit error rate without interference."""
    if np.any(np.asarray(snr) < 0.0):
        raise ValueError("snr must be nonnegative")
    return modulation.coeff * gaussian_q(np.sqrt(modulation.gain * np.asarray(snr, dtype=float)))


def _validate_link(snr: float, mean_inr: float) -> None:
    if not (math.isfinite(snr) and snr >= 0.0):
        raise ValueError("snr must be finite and nonnegative")
    if not (math.isfinite(mean_inr) and mean_inr > 0.0):
        raise ValueError("mean_inr must be finite and positive")


def _validate_bits(bits: int) -> None:
    if bits != int(bits) or bits < 0:
        raise ValueError(f"bits must be a nonnegative integer, got {bits!r}")


def success_prob_quadrature(modulation: Modulation, snr: float, mean_inr: float,
                            bits: int) -> float:
    """Fading average of (1 - ber)^bits by adaptive quadrature (the oracle).

    The fading power is mapped to u = g/(1+g) so the integral runs over a
    finite interval.
    """
    _validate_link(snr, mean_inr)
    _validate_bits(bits)
    if bits == 0:
        return 1.0
    coeff, gain = modulation.coeff, modulation.gain
    base = gain * snr

    def integrand(u: float) -> float:
        if u >= 1.0:
            return 0.0
        g = u / (1.0 - u)
        if g == 0.0:
            q = 0.0 if snr > 0.0 else 0.5
        else:
            q = 0.5 * math.erfc(math.sqrt(base / g) / math.sqrt(2.0))
        expo = -g / mean_inr
        weight = math.exp(expo) if expo > -745.0 else 0.0
        return (1.0 - coeff * q) ** bits * weight / mean_inr / (1.0 - u) ** 2

    val, _ = integrate.quad(integrand, 0.0, 1.0, limit=400, epsabs=1e-14, epsrel=1e-12)
    return min(max(val, 0.0), 1.0)


@lru_cache(maxsize=64)
def _qn_partitions(r: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-order expansion table for the closed form.

    Expanding (sum_j b_j x^j)^r over multisets of r coefficient picks gives,
    for each multiset, the total polynomial degree f and the multinomial
    weight times the coefficient product.  Returns (f values, weights).
    """
    degs = []
    weights = []
    for combo in combinations_with_replacement(range(len(QN_COEFFS)), r):
        counts = [0] * len(QN_COEFFS)
        for j in combo:
            counts[j] += 1
        mult = math.factorial(r)
        coeff = 1.0
        for j, kj in enumerate(counts):
            if kj:
                mult //= math.factorial(kj)
                coeff *= QN_COEFFS[j] ** kj
        degs.append(sum(j * kj for j, kj in enumerate(counts)))
        weights.append(mult * coeff)
    return np.asarray(degs, dtype=float), np.asarray(weights, dtype=float)


def success_prob_closed_form(modulation: Modulation, snr: float, mean_inr: float,
                             bits: int) -> float:
    """Bessel-sum evaluation of the fading average for small bit counts.

    Binomial expansion in powers of coeff*Q plus the Q-function fit reduce
    every term to a power-weighted Bessel K of the fading mean.
    """
    _validate_link(snr, mean_inr)
    _validate_bits(bits)
    if bits == 0:
        return 1.0
    if bits > QN_MAX_BITS:
        raise ValueError(f"closed form supports at most {QN_MAX_BITS} bits, got {bits}")
    if snr == 0.0:
        # Q(0) = 1/2 regardless of fading.
        return (1.0 - 0.5 * modulation.coeff) ** bits
    coeff, gain = modulation.coeff, modulation.gain
    base = gain * snr
    pieces = [np.asarray([1.0])]
    for r in range(1, bits + 1):
        degs, weights = _qn_partitions(r)
        delta = (2.0 - degs) / 4.0
        order = 2.0 * delta
        arg = math.sqrt(2.0 * r * base / mean_inr)
        bessel = special.kv(order, arg)
        terms = (
            math.comb(bits, r)
            * (-coeff) ** r
            * weights
            * 2.0 ** (1.0 - delta)
            * (r * base * mean_inr) ** delta
            * base ** (1.0 - 2.0 * delta)
            * bessel
            / mean_inr
        )
        pieces.append(terms)
    total = math.fsum(np.concatenate(pieces).tolist())
    # The fit bias allows overshoot of order 1e-5 near saturation; anything
    # beyond that means the expansion itself misbehaved.
    if total < -1e-4 or total > 1.0 + 1e-4:
        warnings.warn(
            f"closed-form success probability {total!r} clamped to [0, 1]",
            NumericsWarning,
            stacklevel=2,
        )
    return min(max(total, 0.0), 1.0)


def _gumbel_gamma_array(modulation: Modulation, snr: float, mean_inr: float,
                        bits: np.ndarray) -> np.ndarray:
    """Vectorized Gumbel-Gamma success probabilities; callers check the domain."""
    coeff, gain = modulation.coeff, modulation.gain
    bits = np.asarray(bits, dtype=float)
    loc = (2.0 / gain) * erf_inv(1.0 - 2.0 / (bits * coeff)) ** 2
    scale = (2.0 / gain) * erf_inv(1.0 - 2.0 / (bits * coeff * math.e)) ** 2 - loc
    shape = 6.0 * (loc + scale * E0) ** 2 / (math.pi**2 * scale**2)
    theta = (loc + scale * E0) / shape
    if snr == 0.0:
        # z -> 0 limit of the matched-Gamma average.
        return np.zeros_like(bits)
    z = snr / (mean_inr * theta)
    root = 2.0 * np.sqrt(z)
    log_fail = (
        _LOG2
        - special.gammaln(shape)
        + 0.5 * shape * np.log(z)
        + np.log(special.kve(shape, root))
        - root
    )
    out = -np.expm1(log_fail)
    # kve overflows once shape*log(shape) is extreme; there the matched Gamma
    # concentrates at its mean and the average is 1 - E[exp(-z/T)] ~ z/shape.
    bad = ~np.isfinite(out)
    if np.any(bad):
        out[bad] = np.clip(z / np.maximum(shape[bad] - 1.0, 1.0), 0.0, 1.0)
    return np.clip(out, 0.0, 1.0)


def success_prob_gumbel_gamma(modulation: Modulation, snr: float, mean_inr: float,
                              bits: int) -> float:
    """Gumbel-matched Gamma evaluation; needs bits * coeff > 2."""
    _validate_link(snr, mean_inr)
    _validate_bits(bits)
    if bits == 0:
        return 1.0
    if bits * modulation.coeff <= 2.0:
        raise GumbelDomainError(
            f"gumbel route needs bits * coeff > 2, got {bits} * {modulation.coeff}; "
            "use the qn or quadrature route for short windows"
        )
    return float(_gumbel_gamma_array(modulation, snr, mean_inr, np.asarray([bits]))[0])


def success_prob(modulation: Modulation, snr: float, mean_inr: float, bits: int,
                 method: PerMethod = PerMethod.HYBRID, ell_switch: int = 8) -> float:
    """Success probability of a ``bits``-long collision window, by any route."""
    if method is PerMethod.QUADRATURE:
        return success_prob_quadrature(modulation, snr, mean_inr, bits)
    if method is PerMethod.CLOSED_FORM:
        return success_prob_closed_form(modulation, snr, mean_inr, bits)
    if method is PerMethod.GUMBEL_GAMMA:
        return success_prob_gumbel_gamma(modulation, snr, mean_inr, bits)
    if bits <= ell_switch:
        return success_prob_closed_form(modulation, snr, mean_inr, bits)
    return success_prob_gumbel_gamma(modulation, snr, mean_inr, bits)


@dataclass(frozen=True)
class PerSpec:
    """Inputs of one PER evaluation.

    ``snr`` and ``mean_inr`` are linear ratios.  ``ell_max`` caps the number
    of bit slots the collision CDF is resolved into; when None it is sized so
    the ignored CDF tail is below ``tail_cut``.  ``noise_bits``, when set to
    the packet bit count, adds AWGN-only errors on the non-colliding bits.
    """

    scenario: CoexistenceScenario
    modulation: Modulation
    snr: float
    mean_inr: float
    ell_switch: int = 8
    ell_max: int | None = None
    epsilon: float = 1e-9
    tail_cut: float = 1e-6
    noise_bits: int | None = None

    def __post_init__(self) -> None:
        _validate_link(self.snr, self.mean_inr)
        if not (1 <= self.ell_switch <= QN_MAX_BITS):
            raise ValueError(f"ell_switch must lie in [1, {QN_MAX_BITS}]")
        if self.ell_max is not None and self.ell_max < 1:
            raise ValueError("ell_max must be >= 1 when given")
        if not (0.0 < self.tail_cut < 1.0):
            raise ValueError("tail_cut must lie in (0, 1)")
        if self.noise_bits is not None and self.noise_bits < 0:
            raise ValueError("noise_bits must be nonnegative when given")


@dataclass(frozen=True)
class PerResult:
    per: float
    tail_mass: float
    ell_max: int


def resolve_ell_max(spec: PerSpec) -> int:
    if spec.ell_max is not None:
        return spec.ell_max
    x_tail = coverage_point(spec.scenario, spec.tail_cut, spec.epsilon)
    ell = max(1, math.ceil(x_tail / spec.scenario.bit_time))
    # ceil in floats can still land the top slot an ulp short of x_tail,
    # which matters when the coverage point sits on a CDF jump.
    while ell * spec.scenario.bit_time < x_tail:
        ell += 1
    return ell


def _collision_weights(spec: PerSpec) -> tuple[np.ndarray, float, int]:
    """(per-slot CDF increments, ignored tail mass, ell_max).

    Slot l holds F(l*bit_time) - F((l-1)*bit_time); slot 0 is the
    no-collision atom F(0).
    """
    ell_max = resolve_ell_max(spec)
    grid = np.arange(ell_max + 1) * spec.scenario.bit_time
    cdf = ctd_mixture(spec.scenario, grid, spec.epsilon)
    increments = np.diff(cdf, prepend=0.0)
    return increments, float(1.0 - cdf[-1]), ell_max


def _slot_weights(spec: PerSpec, ell_max: int) -> np.ndarray | None:
    """AWGN success factor per slot, or None in the interference-limited model."""
    if spec.noise_bits is None:
        return None
    clear = 1.0 - float(ber_awgn(spec.modulation, spec.snr))
    exponents = np.maximum(spec.noise_bits - np.arange(ell_max + 1), 0)
    return clear**exponents


def _success_table(spec: PerSpec, method: PerMethod, ell_max: int) -> np.ndarray:
    values = np.ones(ell_max + 1)
    mod, snr, inr = spec.modulation, spec.snr, spec.mean_inr
    if method is PerMethod.CLOSED_FORM or method is PerMethod.HYBRID:
        top = ell_max if method is PerMethod.CLOSED_FORM else min(spec.ell_switch, ell_max)
        for ell in range(1, top + 1):
            values[ell] = success_prob_closed_form(mod, snr, inr, ell)
        if method is PerMethod.CLOSED_FORM or top == ell_max:
            return values
        tail_bits = np.arange(top + 1, ell_max + 1)
    else:
        tail_bits = np.arange(1, ell_max + 1)
    if tail_bits[0] * mod.coeff <= 2.0:
        raise GumbelDomainError(
            f"gumbel route invalid for slot {int(tail_bits[0])} "
            f"(needs bits * coeff > 2, coeff={mod.coeff}); "
            "raise ell_switch or pick another method"
        )
    values[tail_bits[0]:] = _gumbel_gamma_array(mod, snr, inr, tail_bits)
    return values


def _per_quadrature(spec: PerSpec, increments: np.ndarray) -> float:
    """One fading integral for the whole packet.

    Success summed over slots first: sum_l w_l * increments_l * q(g)^l is a
    polynomial in the per-bit success q(g), so a single adaptive quadrature
    over the fading density replaces one integral per slot.
    """
    weights = _slot_weights(spec, increments.size - 1)
    poly = increments if weights is None else increments * weights
    coeff, gain = spec.modulation.coeff, spec.modulation.gain
    base = gain * spec.snr
    mean_inr = spec.mean_inr
    polyval = np.polynomial.polynomial.polyval

    def integrand(u: float) -> float:
        if u >= 1.0:
            return 0.0
        g = u / (1.0 - u)
        if g == 0.0:
            qfun = 0.0 if spec.snr > 0.0 else 0.5
        else:
            qfun = 0.5 * math.erfc(math.sqrt(base / g) / math.sqrt(2.0))
        expo = -g / mean_inr
        fade = math.exp(expo) if expo > -745.0 else 0.0
        return float(polyval(1.0 - coeff * qfun, poly)) * fade / mean_inr / (1.0 - u) ** 2

    success, _ = integrate.quad(integrand, 0.0, 1.0, limit=400, epsabs=1e-12, epsrel=1e-10)
    return success


def packet_error_rate(spec: PerSpec, method: PerMethod = PerMethod.HYBRID) -> PerResult:
    """PER by the chosen route; the ignored CDF tail counts as errors."""
    if method is PerMethod.CLOSED_FORM and resolve_ell_max(spec) > QN_MAX_BITS:
        raise ValueError(
            f"qn route cannot cover {resolve_ell_max(spec)} slots "
            f"(limit {QN_MAX_BITS}); use hybrid or quadrature"
        )
    increments, tail_mass, ell_max = _collision_weights(spec)
    if method is PerMethod.QUADRATURE:
        success = _per_quadrature(spec, increments)
    else:
        table = _success_table(spec, method, ell_max)
        weights = _slot_weights(spec, ell_max)
        if weights is not None:
            table = table * weights
        success = math.fsum((table * increments).tolist())
    per = 1.0 - success
    if per < -1e-4 or per > 1.0 + 1e-4:
        warnings.warn(f"PER {per!r} clamped to [0, 1]", NumericsWarning, stacklevel=2)
    return PerResult(min(max(per, 0.0), 1.0), tail_mass, ell_max)


@dataclass(frozen=True)
class PerCurve:
    """PER swept over the mean INR, one value array per requested route."""

    scenario: CoexistenceScenario
    modulation: Modulation
    snr: float
    mean_inr: np.ndarray
    values: dict[str, np.ndarray]
    tail_mass: float
    ell_max: int


def per_curve(scenario: CoexistenceScenario, modulation: Modulation, snr: float,
              mean_inr_values, methods=(PerMethod.HYBRID,), *, ell_switch: int = 8,
              ell_max: int | None = None, epsilon: float = 1e-9,
              tail_cut: float = 1e-6, noise_bits: int | None = None) -> PerCurve:
    grid = np.asarray(mean_inr_values, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("mean_inr_values must be a nonempty 1-d array")
    values: dict[str, np.ndarray] = {}
    tail = 0.0
    top = 1
    for method in methods:
        row = np.empty(grid.size)
        for i, inr in enumerate(grid):
            spec = PerSpec(scenario, modulation, snr, float(inr),
                           ell_switch=ell_switch, ell_max=ell_max,
                           epsilon=epsilon, tail_cut=tail_cut, noise_bits=noise_bits)
            result = packet_error_rate(spec, method)
            row[i] = result.per
            tail, top = result.tail_mass, result.ell_max
        values[method.value] = row
    return PerCurve(scenario, modulation, snr, grid, values, tail, top)
