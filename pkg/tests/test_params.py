"""Closed-form scalar layer: identities, frozen oracle values, monotonicity."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rydpol import PhysParams, derive_scales
from rydpol.errors import ConfigError
from rydpol.params import (
    adiabatic_od_bound,
    blockade_radius,
    critical_distance,
    dsp_length_bound,
    eit_window_ok,
    k_from_theta_ratio,
    loss_rate_prefactor,
    pulled_detuning,
    theta_ratio_from_k,
    two_photon_linewidth,
)

FIG3 = PhysParams(g_over_gamma=10.0, omega0_over_gamma=1.0, delta_over_gamma=4.0)


def scales(od_b=7.0, rho0_ab=0.5, p=FIG3):
    return derive_scales(p, od_b=od_b, rho0_ab=rho0_ab)


class TestDeriveScales:
    def test_mixing_angle_round_trip(self):
        d = scales()
        assert math.tan(d.theta) ** 2 * FIG3.omega0_over_gamma**2 == pytest.approx(
            FIG3.g2n, rel=1e-12
        )

    def test_group_velocity_is_cos2(self):
        d = scales()
        assert d.vg == pytest.approx(math.cos(d.theta) ** 2, rel=1e-12)
        assert 0 < d.vg <= 1

    def test_ac_below_ab(self):
        d = scales()
        assert d.a_c <= d.a_B
        # equality only in the g^2 n -> 0 limit
        assert d.a_c / d.a_B == pytest.approx(
            (FIG3.omega0_over_gamma**2 / FIG3.omega_e2) ** (1 / 6), rel=1e-12
        )

    def test_od_b_round_trip(self):
        d = scales(od_b=7.0)
        assert d.a_B / d.L_abs == pytest.approx(7.0, rel=1e-12)
        # |C6| back-solved such that the blockade-radius formula returns a_B
        assert blockade_radius(
            d.c6_mag, FIG3.gamma_complex, FIG3.omega0_over_gamma
        ) == pytest.approx(d.a_B, rel=1e-12)

    def test_theta_ratio_frozen_value(self):
        # independent arbitrary-precision evaluation of
        # (rho0*aB)^4/(4 pi) * (gamma/Delta)^2 * OD_B^2
        # at rho0*aB = 0.5, Delta = 10 gamma, OD_B = 100:
        import mpmath

        mpmath.mp.dps = 40
        expect = mpmath.mpf("0.5") ** 4 / (4 * mpmath.pi) * mpmath.mpf("0.01") * 10**4
        d = derive_scales(
            PhysParams(g_over_gamma=10.0, omega0_over_gamma=1.0, delta_over_gamma=10.0),
            od_b=100.0,
            rho0_ab=0.5,
        )
        assert d.theta_ratio == pytest.approx(float(expect), rel=1e-12)
        assert d.theta_ratio == pytest.approx(0.4973592, rel=1e-6)
        assert d.k_approx == pytest.approx(k_from_theta_ratio(float(expect)), rel=1e-12)

    def test_k_closed_form_anchors(self):
        assert k_from_theta_ratio(0.0) == 1.0
        assert k_from_theta_ratio(45.0 / math.pi**4) == pytest.approx(
            2 ** (-0.5), rel=1e-12
        )

    def test_rejects_omega_zero(self):
        p = PhysParams(g_over_gamma=10.0, omega0_over_gamma=0.0, delta_over_gamma=4.0)
        with pytest.raises(ConfigError):
            derive_scales(p, od_b=7.0, rho0_ab=0.5)

    def test_rejects_attractive_regime(self):
        with pytest.raises(ConfigError):
            PhysParams(g_over_gamma=10.0, omega0_over_gamma=1.0,
                       delta_over_gamma=-4.0, c6_sign=1)
        # negative detuning is fine with matching C6 sign
        PhysParams(g_over_gamma=10.0, omega0_over_gamma=1.0,
                   delta_over_gamma=-4.0, c6_sign=-1)

    def test_mass_sign_follows_detuning(self):
        d = scales()
        assert d.mass > 0
        dm = derive_scales(
            PhysParams(g_over_gamma=10.0, omega0_over_gamma=1.0,
                       delta_over_gamma=-4.0, c6_sign=-1),
            od_b=7.0, rho0_ab=0.5,
        )
        assert dm.mass < 0


class TestWindowAndBounds:
    def test_eit_window_trivial(self):
        d = scales()
        assert eit_window_ok(0.0, d)
        # boundary: c*k = |Gamma_eff| fails at the default factor
        assert not eit_window_ok(abs(d.gamma_eff), d)

    def test_fig3_pulse_fits_in_window(self):
        # Gaussian two-photon input, in-medium sigma = 10 a_B: the vacuum
        # spectral width is vg/(sigma_in) in gamma units.
        d = scales()
        k_spec = 1.0 / (10 * d.a_B / d.vg)  # vacuum wavenumber spread
        assert eit_window_ok(k_spec, d)

    def test_dsp_bound_on_resonance_form(self):
        # Delta -> 0 limit evaluated directly on the formula
        gam = abs(1 + 0j)
        assert gam / FIG3.omega_e2 == pytest.approx(1.0 / 101.0, rel=1e-12)
        d = scales()
        assert dsp_length_bound(d) == pytest.approx(
            abs(FIG3.gamma_complex) / FIG3.omega_e2, rel=1e-12
        )

    def test_dsp_bound_off_resonant_approximation(self):
        p = PhysParams(g_over_gamma=10.0, omega0_over_gamma=1.0, delta_over_gamma=100.0)
        d = derive_scales(p, od_b=7.0, rho0_ab=0.5)
        approx = abs(p.delta_over_gamma) * d.L_abs * (p.g2n / p.omega_e2)
        assert dsp_length_bound(d) == pytest.approx(approx, rel=2e-4)

    def test_dsp_bound_quarters_when_omega_e_doubles(self):
        # doubling Omega_e (4x in Omega_e^2) quarters the bound
        p1 = PhysParams(g_over_gamma=10.0, omega0_over_gamma=1.0, delta_over_gamma=4.0)
        p2 = PhysParams(g_over_gamma=20.0, omega0_over_gamma=2.0, delta_over_gamma=4.0)
        d1 = derive_scales(p1, od_b=7.0, rho0_ab=0.5)
        d2 = derive_scales(p2, od_b=7.0, rho0_ab=0.5)
        assert dsp_length_bound(d2) == pytest.approx(dsp_length_bound(d1) / 4, rel=1e-12)

    def test_loss_prefactor_endpoints(self):
        d = scales()
        # theta = 0 and pi/2 give zero coefficient; check via the raw formula
        for th in (0.0, math.pi / 2):
            val = math.cos(th) ** 2 * math.sin(th) ** 6
            assert val == pytest.approx(0.0, abs=1e-30)
        assert loss_rate_prefactor(d) > 0

    def test_loss_prefactor_maximum_oracle(self):
        # 1D maximization oracle over theta of cos^2 sin^6 at fixed Omega_e
        th = np.linspace(0.0, math.pi / 2, 2_000_001)
        f = np.cos(th) ** 2 * np.sin(th) ** 6
        i = int(np.argmax(f))
        assert math.tan(th[i]) ** 2 == pytest.approx(3.0, rel=1e-5)
        assert f[i] == pytest.approx(0.25 * 27.0 / 64.0, rel=1e-10)

    def test_pulled_detuning(self):
        assert pulled_detuning(2.0, 0.0) == 2.0
        assert pulled_detuning(2.0, math.pi / 2) == pytest.approx(0.0, abs=1e-30)
        th = math.acos(math.sqrt(0.5))
        assert pulled_detuning(2.0, th) == pytest.approx(1.0, rel=1e-12)

    def test_two_photon_linewidth(self):
        p = PhysParams(g_over_gamma=10.0, omega0_over_gamma=1.0, delta_over_gamma=1e-12)
        d = derive_scales(p, od_b=7.0, rho0_ab=0.5)
        assert two_photon_linewidth(d) == pytest.approx(p.omega_e2, rel=1e-9)
        # storage limit Omega -> 0 stays finite at g^2 n/|Gamma| (key claim)
        p_small = PhysParams(g_over_gamma=10.0, omega0_over_gamma=1e-6,
                             delta_over_gamma=4.0)
        d_small = derive_scales(p_small, od_b=7.0, rho0_ab=0.5)
        assert two_photon_linewidth(d_small) == pytest.approx(
            p_small.g2n / abs(p_small.gamma_complex), rel=1e-9
        )

    def test_linewidth_halves_at_double_detuning(self):
        p1 = PhysParams(g_over_gamma=10.0, omega0_over_gamma=1.0, delta_over_gamma=400.0)
        p2 = PhysParams(g_over_gamma=10.0, omega0_over_gamma=1.0, delta_over_gamma=800.0)
        d1 = derive_scales(p1, od_b=7.0, rho0_ab=0.5)
        d2 = derive_scales(p2, od_b=7.0, rho0_ab=0.5)
        assert two_photon_linewidth(d2) == pytest.approx(
            two_photon_linewidth(d1) / 2, rel=5e-6
        )

    def test_adiabatic_od_bound(self):
        # k0 -> 0 with |Gamma| vg/(gamma c) = 1 gives 90/pi^4
        p = PhysParams(g_over_gamma=10.0, omega0_over_gamma=1.0, delta_over_gamma=4.0)
        d = derive_scales(p, od_b=7.0, rho0_ab=0.5)
        val = adiabatic_od_bound(1e-9, d)
        expect = 90.0 * abs(p.gamma_complex) * d.vg / math.pi**4
        assert val == pytest.approx(expect, rel=1e-9)
        assert 90.0 / math.pi**4 == pytest.approx(0.92402, rel=1e-4)
        with pytest.raises(ConfigError):
            adiabatic_od_bound(1.0, d)
        with pytest.raises(ConfigError):
            adiabatic_od_bound(1.5, d)

    def test_adiabatic_od_bound_feasible_regime(self):
        # K0 = 0.8 with |Gamma| vg/(gamma c) near 1 lands at OD of a few
        d = scales()
        ratio = abs(FIG3.gamma_complex) * d.vg
        bound = adiabatic_od_bound(0.8, d)
        assert bound == pytest.approx(90 * ratio / (math.pi**4 * 0.36), rel=1e-12)
        # scaled to |Gamma| vg/(gamma c) = 1 this is the "OD >> 3" regime
        assert 90.0 / (math.pi**4 * 0.36) == pytest.approx(2.57, abs=0.02)


class TestProperties:
    @given(st.floats(min_value=1e-6, max_value=1e6))
    @settings(max_examples=200, deadline=None)
    def test_k_round_trip(self, theta_ratio):
        k = k_from_theta_ratio(theta_ratio)
        assert 0 < k < 1
        assert theta_ratio_from_k(k) == pytest.approx(theta_ratio, rel=1e-9)

    @given(st.floats(min_value=0.0, max_value=1e3),
           st.floats(min_value=1e-3, max_value=1e3))
    @settings(max_examples=200, deadline=None)
    def test_k_strictly_decreasing_in_theta(self, t1, dt):
        assert k_from_theta_ratio(t1 + dt) < k_from_theta_ratio(t1)

    @given(st.floats(min_value=0.1, max_value=10.0),
           st.floats(min_value=1.01, max_value=4.0))
    @settings(max_examples=100, deadline=None)
    def test_ab_decreasing_in_omega(self, om, fac):
        c6 = 1.0
        gam = 1 + 4j
        assert blockade_radius(c6, gam, om * fac) < blockade_radius(c6, gam, om)

    def test_ac_insensitive_to_omega_at_small_omega(self):
        # finite-difference sensitivity d(ln a_c)/d(ln Omega) -> 0 as Omega -> 0
        g2n = 100.0
        gam = 1 + 4j
        c6 = 1.0

        def ac(om):
            return critical_distance(c6, gam, g2n + om**2)

        sens = []
        for om in (1.0, 0.3, 0.1, 0.03):
            h = om * 1e-4
            d_ac = (ac(om + h) - ac(om - h)) / (2 * h)
            sens.append(abs(d_ac * om / ac(om)))
        assert all(s2 < s1 for s1, s2 in zip(sens, sens[1:]))
        assert sens[-1] < 1e-3

    def test_pulled_detuning_monotone_under_storage(self):
        # a monotone storage schedule theta(t): output monotone decreasing
        t = np.linspace(0, 10, 101)
        theta_t = math.pi / 4 + (math.pi / 2 - math.pi / 4) * np.tanh(t / 3)
        out = [pulled_detuning(1.7, th) for th in theta_t]
        assert all(b < a for a, b in zip(out, out[1:]))
