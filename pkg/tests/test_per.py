import math

import numpy as np
import pytest

from coexlink.ctd import ctd_mixture
from coexlink.per import (
    QN_MAX_BITS,
    GumbelDomainError,
    Modulation,
    PerMethod,
    PerResult,
    PerSpec,
    ber_awgn,
    packet_error_rate,
    per_curve,
    resolve_ell_max,
    success_prob,
    success_prob_closed_form,
    success_prob_gumbel_gamma,
    success_prob_quadrature,
)
from coexlink.presets import preset_scenario

BPSK = Modulation()


class TestModulation:
    def test_defaults_are_bpsk(self):
        assert BPSK.coeff == 1.0
        assert BPSK.gain == 2.0

    def test_validation(self):
        with pytest.raises(ValueError):
            Modulation(coeff=0.0)
        with pytest.raises(ValueError):
            Modulation(coeff=2.5)
        with pytest.raises(ValueError):
            Modulation(gain=-1.0)

    def test_ber_awgn_frozen_point(self):
        # Q(sqrt(2 * 10^0.909)), frozen from the tail-probability definition
        assert float(ber_awgn(BPSK, 10**0.909)) == pytest.approx(
            2.820938254161439e-05, rel=1e-12
        )

    def test_ber_awgn_zero_snr(self):
        assert float(ber_awgn(BPSK, 0.0)) == pytest.approx(0.5)
        assert float(ber_awgn(Modulation(coeff=2.0), 0.0)) == pytest.approx(1.0)
        with pytest.raises(ValueError):
            ber_awgn(BPSK, -1.0)


class TestSuccessProbRoutes:
    def test_zero_bits_always_succeed(self):
        for method in PerMethod:
            assert success_prob(BPSK, 10.0, 1.0, 0, method) == 1.0

    def test_quadrature_frozen_points(self):
        # frozen from this quadrature at tight tolerances; guards regressions
        assert success_prob_quadrature(BPSK, 10.0, 1.0, 1) == pytest.approx(
            0.9991041185830453, rel=1e-10
        )
        assert success_prob_quadrature(BPSK, 10.0, 10.0, 4) == pytest.approx(
            0.7801486355661746, rel=1e-10
        )

    def test_zero_snr_closed_forms(self):
        # ber is exactly coeff/2 whatever the fading does
        for bits in (1, 3, 8):
            exact = (1.0 - 0.5 * BPSK.coeff) ** bits
            assert success_prob_closed_form(BPSK, 0.0, 1.0, bits) == exact
            assert success_prob_quadrature(BPSK, 0.0, 1.0, bits) == pytest.approx(
                exact, rel=1e-9
            )

    @pytest.mark.parametrize("snr", [0.5, 10.0, 31.6])
    @pytest.mark.parametrize("mean_inr", [0.1, 1.0, 10.0])
    def test_closed_form_tracks_quadrature(self, snr, mean_inr):
        # fit-limited agreement; the underlying fit is good to ~1e-5
        for bits in range(1, QN_MAX_BITS + 1):
            q = success_prob_quadrature(BPSK, snr, mean_inr, bits)
            c = success_prob_closed_form(BPSK, snr, mean_inr, bits)
            assert c == pytest.approx(q, abs=2e-5)

    def test_closed_form_refuses_long_windows(self):
        with pytest.raises(ValueError):
            success_prob_closed_form(BPSK, 10.0, 1.0, QN_MAX_BITS + 1)

    @pytest.mark.parametrize("bits", [16, 64, 256])
    @pytest.mark.parametrize("snr,mean_inr", [(10.0, 1.0), (10.0, 10.0)])
    def test_gumbel_tracks_quadrature(self, bits, snr, mean_inr):
        q = success_prob_quadrature(BPSK, snr, mean_inr, bits)
        g = success_prob_gumbel_gamma(BPSK, snr, mean_inr, bits)
        assert g == pytest.approx(q, rel=0.05)

    def test_gumbel_domain_guard(self):
        with pytest.raises(GumbelDomainError):
            success_prob_gumbel_gamma(BPSK, 10.0, 1.0, 2)
        assert 0.0 < success_prob_gumbel_gamma(BPSK, 10.0, 1.0, 3) < 1.0
        # a raised coeff shifts the boundary down
        assert 0.0 < success_prob_gumbel_gamma(Modulation(coeff=2.0), 10.0, 1.0, 2) < 1.0

    def test_gumbel_zero_snr_limit(self):
        assert success_prob_gumbel_gamma(BPSK, 0.0, 1.0, 16) == 0.0

    def test_hybrid_dispatch(self):
        args = (BPSK, 10.0, 2.0)
        assert success_prob(*args, 5, PerMethod.HYBRID, ell_switch=8) == (
            success_prob_closed_form(*args, 5)
        )
        assert success_prob(*args, 9, PerMethod.HYBRID, ell_switch=8) == (
            success_prob_gumbel_gamma(*args, 9)
        )

    def test_quadrature_monotone(self):
        # success falls with window length and interference, rises with snr
        vals = [success_prob_quadrature(BPSK, 10.0, 1.0, b) for b in (1, 4, 16, 64)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        by_inr = [success_prob_quadrature(BPSK, 10.0, i, 8) for i in (0.1, 1.0, 10.0)]
        assert all(a > b for a, b in zip(by_inr, by_inr[1:]))
        by_snr = [success_prob_quadrature(BPSK, s, 1.0, 8) for s in (1.0, 10.0, 100.0)]
        assert all(a < b for a, b in zip(by_snr, by_snr[1:]))

    def test_link_validation(self):
        with pytest.raises(ValueError):
            success_prob_quadrature(BPSK, -1.0, 1.0, 4)
        with pytest.raises(ValueError):
            success_prob_quadrature(BPSK, 1.0, 0.0, 4)
        with pytest.raises(ValueError):
            success_prob_quadrature(BPSK, 1.0, 1.0, -2)


@pytest.fixture(scope="module")
def per_setup():
    return preset_scenario("alpha_0.3_0.5"), BPSK


class TestPacketErrorRate:
    def test_result_shape(self, per_setup):
        scenario, mod = per_setup
        spec = PerSpec(scenario, mod, 10.0, 3.16)
        result = packet_error_rate(spec, PerMethod.QUADRATURE)
        assert isinstance(result, PerResult)
        assert 0.0 <= result.per <= 1.0
        assert 0.0 <= result.tail_mass <= spec.tail_cut
        assert result.ell_max == resolve_ell_max(spec)

    def test_quadrature_equals_slotwise_sum(self, per_setup):
        # swapping the fading integral and the slot sum must be exact
        scenario, mod = per_setup
        spec = PerSpec(scenario, mod, 10.0, 3.16, ell_max=6)
        combined = packet_error_rate(spec, PerMethod.QUADRATURE).per
        grid = np.arange(7) * scenario.bit_time
        increments = np.diff(ctd_mixture(scenario, grid, spec.epsilon), prepend=0.0)
        direct = math.fsum(
            increments[ell] * success_prob_quadrature(mod, 10.0, 3.16, ell)
            for ell in range(7)
        )
        assert combined == pytest.approx(1.0 - direct, abs=1e-8)

    def test_hybrid_close_to_quadrature(self, per_setup):
        scenario, mod = per_setup
        spec = PerSpec(scenario, mod, 10.0, 3.16)
        quad = packet_error_rate(spec, PerMethod.QUADRATURE).per
        hybrid = packet_error_rate(spec, PerMethod.HYBRID).per
        assert hybrid == pytest.approx(quad, abs=0.02)

    def test_truncation_counts_as_errors(self, per_setup):
        scenario, mod = per_setup
        coarse = packet_error_rate(
            PerSpec(scenario, mod, 10.0, 3.16, ell_max=2), PerMethod.QUADRATURE
        )
        fine = packet_error_rate(
            PerSpec(scenario, mod, 10.0, 3.16, tail_cut=1e-9), PerMethod.QUADRATURE
        )
        assert coarse.per >= fine.per
        assert coarse.tail_mass > fine.tail_mass

    def test_qn_route_requires_short_packets(self, per_setup):
        scenario, mod = per_setup
        spec = PerSpec(scenario, mod, 10.0, 3.16)  # resolves to thousands of slots
        with pytest.raises(ValueError):
            packet_error_rate(spec, PerMethod.CLOSED_FORM)
        short = PerSpec(scenario, mod, 10.0, 3.16, ell_max=12)
        assert 0.0 <= packet_error_rate(short, PerMethod.CLOSED_FORM).per <= 1.0

    def test_gumbel_route_needs_viable_first_slot(self, per_setup):
        scenario, mod = per_setup
        spec = PerSpec(scenario, mod, 10.0, 3.16, ell_max=16)
        with pytest.raises(GumbelDomainError):
            packet_error_rate(spec, PerMethod.GUMBEL_GAMMA)

    def test_noise_bits_zero_is_interference_limited(self, per_setup):
        scenario, mod = per_setup
        plain = PerSpec(scenario, mod, 10.0, 3.16)
        with_zero = PerSpec(scenario, mod, 10.0, 3.16, noise_bits=0)
        for method in (PerMethod.QUADRATURE, PerMethod.HYBRID):
            assert packet_error_rate(plain, method).per == packet_error_rate(
                with_zero, method
            ).per

    def test_noise_bits_single_slot_identity(self, per_setup):
        # hand-assembled two-term expansion for a one-slot resolution
        scenario, mod = per_setup
        n_bits = 496
        spec = PerSpec(scenario, mod, 10.0, 3.16, ell_max=1, noise_bits=n_bits)
        result = packet_error_rate(spec, PerMethod.HYBRID)
        clear = 1.0 - float(ber_awgn(mod, 10.0))
        cdf = ctd_mixture(scenario, np.arange(2) * scenario.bit_time, spec.epsilon)
        expected = 1.0 - (
            cdf[0] * clear**n_bits
            + (cdf[1] - cdf[0])
            * success_prob_closed_form(mod, 10.0, 3.16, 1)
            * clear ** (n_bits - 1)
        )
        assert result.per == pytest.approx(expected, abs=1e-14)

    def test_noise_bits_add_errors(self, per_setup):
        scenario, mod = per_setup
        base = PerSpec(scenario, mod, 2.0, 3.16)
        noisy = PerSpec(scenario, mod, 2.0, 3.16, noise_bits=496)
        assert (
            packet_error_rate(noisy, PerMethod.QUADRATURE).per
            > packet_error_rate(base, PerMethod.QUADRATURE).per
        )

    def test_spec_validation(self, per_setup):
        scenario, mod = per_setup
        with pytest.raises(ValueError):
            PerSpec(scenario, mod, 10.0, 3.16, ell_switch=0)
        with pytest.raises(ValueError):
            PerSpec(scenario, mod, 10.0, 3.16, ell_switch=QN_MAX_BITS + 1)
        with pytest.raises(ValueError):
            PerSpec(scenario, mod, 10.0, 3.16, tail_cut=0.0)
        with pytest.raises(ValueError):
            PerSpec(scenario, mod, 10.0, 3.16, ell_max=0)
        with pytest.raises(ValueError):
            PerSpec(scenario, mod, 10.0, 3.16, noise_bits=-1)
        with pytest.raises(ValueError):
            PerSpec(scenario, mod, -1.0, 3.16)
        with pytest.raises(ValueError):
            PerSpec(scenario, mod, 10.0, 0.0)


class TestPerCurve:
    def test_sweep_layout(self, per_setup):
        scenario, mod = per_setup
        inr = 10 ** (np.array([-5.0, 0.0, 5.0, 10.0]) / 10.0)
        curve = per_curve(
            scenario, mod, 10.0,
            inr,
            methods=(PerMethod.QUADRATURE, PerMethod.HYBRID),
        )
        assert set(curve.values) == {"quadrature", "hybrid"}
        for row in curve.values.values():
            assert row.shape == inr.shape
            assert np.all((row >= 0.0) & (row <= 1.0))
        # more interference, more loss
        assert np.all(np.diff(curve.values["quadrature"]) > 0.0)

    def test_rejects_empty_grid(self, per_setup):
        scenario, mod = per_setup
        with pytest.raises(ValueError):
            per_curve(scenario, mod, 10.0, [])
