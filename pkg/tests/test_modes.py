"""Transverse-mode potentials: kernel oracle, selection rule, power laws."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from rydpol.errors import ConfigError, NumericsError
from rydpol.modes import (
    LGMode,
    angular_kernel,
    effective_potential,
    fit_power_law,
    lg_mode_eval,
    lg_radial,
    mode_overlap,
    potential_table,
    suppression_report,
)


def oracle_potential_4d(k_indices, l_indices, z, n_ang=48, n_rad=48, w0=1.0):
    """Direct (coarse) quadrature over both azimuthal angles, no selection rule.

    Trapezoid over the periodic angles phi, phi' and Gauss-Legendre radially.
    The radial double integral is precomputed per angle difference, which is
    exactly what the direct 4D sum evaluates, term by term.
    """
    from numpy.polynomial.legendre import leggauss

    k1, k2, k3, k4 = k_indices
    l1, l2, l3, l4 = l_indices
    x, w = leggauss(n_rad)
    r = 3.0 * w0 * (x + 1.0)
    wr = 3.0 * w0 * w
    R14 = lg_radial(LGMode(k1, l1, w0), r) * lg_radial(LGMode(k4, l4, w0), r)
    R23 = lg_radial(LGMode(k2, l2, w0), r) * lg_radial(LGMode(k3, l3, w0), r)
    f1 = wr * r * R14
    f2 = wr * r * R23
    rr, rp = np.meshgrid(r, r, indexing="ij")
    phis = 2 * math.pi * np.arange(n_ang) / n_ang
    # radial integral as a function of the angle difference
    g = np.empty(n_ang)
    for i, psi in enumerate(phis):
        denom = (rr**2 + rp**2 - 2 * rr * rp * math.cos(psi) + z**2) ** 3
        g[i] = f1 @ (1.0 / denom) @ f2
    dphi = 2 * math.pi / n_ang
    acc = 0.0 + 0.0j
    for i, phi in enumerate(phis):
        for j, phip in enumerate(phis):
            acc += (
                np.exp(1j * ((k4 - k1) * phi + (k3 - k2) * phip)) * g[(i - j) % n_ang]
            )
    return acc * dphi**2


class TestModeFunctions:
    def test_fundamental_on_axis(self):
        m = LGMode(0, 0, w0=2.0)
        val = lg_mode_eval(m, 0.0, 0.0)
        assert val == pytest.approx(m.norm_const / 2.0)
        r = np.linspace(0, 8, 400)
        assert np.max(np.abs(lg_mode_eval(m, r, 0.3))) == pytest.approx(
            abs(val), rel=1e-12
        )

    def test_azimuthal_modes_vanish_on_axis(self):
        for k in (1, -1, 2):
            assert lg_mode_eval(LGMode(k, 0), 0.0, 0.0) == 0.0

    def test_orthonormality_matrix(self):
        modes = [LGMode(k, l) for k in (-1, 0, 1) for l in (0, 1, 2)] + [LGMode(2, 0)]
        n = len(modes)
        gram = np.zeros((n, n), dtype=complex)
        for i, a in enumerate(modes):
            for j, b in enumerate(modes):
                gram[i, j] = mode_overlap(a, b)
        assert np.max(np.abs(gram - np.eye(n))) < 1e-8


class TestAngularKernel:
    def test_against_direct_quadrature(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            A = float(rng.uniform(1.05, 6.0))
            B = float(rng.uniform(0.0, 0.97 * A))
            n = int(rng.integers(0, 5))
            direct, _ = quad(
                lambda s: math.cos(n * s) / (A - B * math.cos(s)) ** 3,
                0.0,
                2 * math.pi,
                limit=400,
            )
            assert angular_kernel(A, B, n) == pytest.approx(direct, rel=1e-10)


class TestEffectivePotential:
    def test_far_field_c6_over_z6(self):
        z = 30.0
        v = effective_potential((0, 0, 0, 0), (0, 0, 0, 0), z, c6=2.5)
        assert v == pytest.approx(2.5 / z**6, rel=1e-2)

    def test_near_field_slope_minus_4(self):
        zg = np.geomspace(0.08, 0.7, 24)
        t = potential_table((0, 0, 0, 0), (0, 0, 0, 0), zg)
        f = fit_power_law(t, (0.08, 0.5))
        assert f.exponent == pytest.approx(-4.0, abs=0.5)

    def test_selection_rule_short_circuit(self):
        assert effective_potential((1, 0, 0, 0), (0, 0, 0, 0), 2.0) == 0.0
        assert effective_potential((2, 1, 0, 1), (0, 0, 0, 0), 2.0) == 0.0

    def test_selection_rule_against_4d_oracle(self):
        rng = np.random.default_rng(3)
        fwd = abs(oracle_potential_4d((0, 0, 0, 0), (0, 0, 0, 0), 2.0))
        count = 0
        while count < 50:
            ks = tuple(int(k) for k in rng.integers(-2, 3, size=4))
            if ks[0] - ks[3] == ks[2] - ks[1]:
                continue
            ls = tuple(int(l) for l in rng.integers(0, 2, size=4))
            val = abs(oracle_potential_4d(ks, ls, 2.0, n_ang=32, n_rad=32))
            assert val < 1e-8 * fwd, (ks, ls, val, fwd)
            count += 1

    def test_allowed_tuple_against_4d_oracle(self):
        # a non-forward allowed process agrees with the reduced evaluation
        ks, ls = (1, -1, 0, 0), (0, 0, 0, 0)
        direct = oracle_potential_4d(ks, ls, 1.5)
        assert abs(direct.imag) < 1e-10 * abs(direct.real)
        reduced = effective_potential(ks, ls, 1.5)
        assert reduced == pytest.approx(direct.real, rel=1e-4)

    def test_pair_swap_symmetry(self):
        # simultaneous swap (1<->2, 4<->3) relabels the radial axes
        a = effective_potential((0, 0, 0, 0), (1, 2, 0, 1), 2.3)
        b = effective_potential((0, 0, 0, 0), (2, 1, 1, 0), 2.3)
        assert a == pytest.approx(b, rel=1e-10)

    def test_quadrature_convergence_doubling(self):
        from rydpol.modes import _potential_fixed_nodes

        v1 = _potential_fixed_nodes((0, 0, 0, 0), (1, 1, 0, 0), 1.7, 1.0, 1.0, 256)
        v2 = _potential_fixed_nodes((0, 0, 0, 0), (1, 1, 0, 0), 1.7, 1.0, 1.0, 512)
        assert abs(v2 - v1) < 1e-6 * abs(v2)

    def test_z_zero_rejected(self):
        with pytest.raises(ConfigError):
            effective_potential((0, 0, 0, 0), (0, 0, 0, 0), 0.0)


class TestPowerLawFits:
    def test_synthetic_power_law(self):
        z = np.geomspace(1, 20, 40)
        t = potential_table.__wrapped__ if hasattr(potential_table, "__wrapped__") else None
        from rydpol.modes import EffectivePotentialTable

        tab = EffectivePotentialTable((0,) * 4, (0,) * 4, z, 3.7 * z**-6.0)
        f = fit_power_law(tab, (1, 20))
        assert f.exponent == pytest.approx(-6.0, abs=1e-6)
        assert f.amplitude == pytest.approx(3.7, rel=1e-6)

    def test_sign_change_signaled(self):
        from rydpol.modes import EffectivePotentialTable

        z = np.geomspace(1, 10, 20)
        v = z**-6.0
        v[10] *= -1
        tab = EffectivePotentialTable((0,) * 4, (0,) * 4, z, v)
        with pytest.raises(NumericsError):
            fit_power_law(tab, (1, 10))

    def test_too_few_points_rejected(self):
        from rydpol.modes import EffectivePotentialTable

        z = np.geomspace(1, 10, 20)
        tab = EffectivePotentialTable((0,) * 4, (0,) * 4, z, z**-6.0)
        with pytest.raises(ConfigError):
            fit_power_law(tab, (1.0, 1.2))

    def test_asymptotic_exponents(self):
        zg = np.geomspace(5, 22, 28)
        for (l1, l2), alpha in [((0, 0), -6.0), ((0, 1), -8.0), ((1, 1), -10.0)]:
            t = potential_table((0, 0, 0, 0), (l1, l2, 0, 0), zg)
            f = fit_power_law(t, (6.0, 20.0))
            assert f.exponent == pytest.approx(alpha, abs=0.5), (l1, l2, f.exponent)


class TestSuppression:
    def test_forward_ratio_is_one(self):
        rep = suppression_report(2.0, l_cap=1)
        assert rep[(0, 0)] == pytest.approx(1.0, rel=1e-9)

    def test_higher_modes_suppressed(self):
        # at z = 2 w0 every process changing two radial quanta is below 0.1;
        # the single-quantum (0,1) channel reaches 0.1 only beyond z ~ 3.5 w0
        rep2 = suppression_report(2.0, l_cap=2)
        for (l1, l2), ratio in rep2.items():
            if l1 + l2 >= 2:
                assert abs(ratio) < 0.1, ((l1, l2), ratio)
        rep35 = suppression_report(3.5, l_cap=2)
        for (l1, l2), ratio in rep35.items():
            if (l1, l2) != (0, 0):
                assert abs(ratio) < 0.1, ((l1, l2), ratio)

    def test_ratios_decrease_with_z(self):
        z_list = (1.5, 2.5, 4.0, 8.0)
        reps = [suppression_report(z, l_cap=2) for z in z_list]
        for key in reps[0]:
            if key == (0, 0):
                continue
            seq = [abs(r[key]) for r in reps]
            assert all(b < a for a, b in zip(seq, seq[1:])), (key, seq)
