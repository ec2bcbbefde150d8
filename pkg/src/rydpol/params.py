"""Closed-form scalar relations of the Rydberg slow-light polariton model.

Internal unit system: gamma = 1 (decay rate of the intermediate level) and
c = 1 (vacuum speed of light), so times are in 1/gamma, lengths in c/gamma,
and rates/energies in gamma.  Lengths are additionally reported in units of
the blockade radius ``a_B`` where that is the natural figure scale.

The van der Waals coefficient is never an independent input: its magnitude
is back-solved from the optical depth per blockade ``od_b`` (equivalently
from ``a_B``), which together with ``rho0_ab`` parameterizes every regime
of interest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConfigError

__all__ = [
    "PhysParams",
    "DerivedScales",
    "derive_scales",
    "blockade_radius",
    "critical_distance",
    "k_from_theta_ratio",
    "theta_ratio_from_k",
    "eit_window_ok",
    "dsp_length_bound",
    "loss_rate_prefactor",
    "pulled_detuning",
    "two_photon_linewidth",
    "adiabatic_od_bound",
]

PI4_OVER_45 = math.pi**4 / 45.0


@dataclass(frozen=True)
class PhysParams:
    """Microscopic inputs in units of gamma.

    Attributes
    ----------
    g_over_gamma:
        Single-atom coupling g/gamma.  The collective coupling entering all
        formulas is g*sqrt(n); with the default ``density_scale`` the density
        is folded in, i.e. g^2 n = (g/gamma)^2.
    omega0_over_gamma:
        Control Rabi frequency Omega/gamma.  Zero is only meaningful inside a
        storage schedule, never as a static operating point.
    delta_over_gamma:
        Single-photon detuning Delta/gamma.  Must be nonzero: the effective
        mass is 1/Delta-like and the repulsive-regime check needs its sign.
    c6_sign:
        Sign of C6 (+1 or -1).  The magnitude enters only through derived
        radii.  m*C6 > 0 (repulsive regime) is asserted at construction.
    density_scale:
        Optional override for the dimensionless g^2 n / gamma^2.  Defaults to
        (g/gamma)^2, i.e. n = 1.
    delta2_over_gamma:
        Two-photon detuning delta/gamma (default 0).
    """

    g_over_gamma: float
    omega0_over_gamma: float
    delta_over_gamma: float
    c6_sign: int = 1
    density_scale: float | None = None
    delta2_over_gamma: float = 0.0

    def __post_init__(self):
        if self.g_over_gamma <= 0:
            raise ConfigError("g_over_gamma must be positive")
        if self.omega0_over_gamma < 0:
            raise ConfigError("omega0_over_gamma must be non-negative")
        if self.c6_sign not in (-1, 1):
            raise ConfigError("c6_sign must be +1 or -1")
        if self.density_scale is not None and self.density_scale <= 0:
            raise ConfigError("density_scale must be positive")
        if self.delta_over_gamma == 0.0:
            raise ConfigError(
                "delta_over_gamma must be nonzero (effective mass undefined; "
                "the repulsive-regime assertion m*C6 > 0 needs sign(Delta))"
            )
        # repulsive regime: m has the sign of Delta
        if math.copysign(1.0, self.delta_over_gamma) * self.c6_sign <= 0:
            raise ConfigError(
                "m*C6 must be positive (repulsive regime): "
                "sign(delta_over_gamma) must equal c6_sign"
            )

    @property
    def g2n(self) -> float:
        """Collective coupling squared, g^2 n / gamma^2."""
        if self.density_scale is not None:
            return self.density_scale
        return self.g_over_gamma**2

    @property
    def omega_e2(self) -> float:
        """Collective Rabi frequency squared, Omega_e^2 = g^2 n + Omega^2."""
        return self.g2n + self.omega0_over_gamma**2

    @property
    def gamma_complex(self) -> complex:
        """Complex decay Gamma = gamma + i*Delta, in units of gamma."""
        return 1.0 + 1j * self.delta_over_gamma


@dataclass(frozen=True)
class DerivedScales:
    """Every derived scalar of the model, in gamma = c = 1 units."""

    params: PhysParams
    theta: float          # mixing angle, tan^2(theta) = g^2 n / Omega^2
    vg: float             # group velocity in units of c, cos^2(theta)
    gamma_eff: complex    # Omega_e^2 / Gamma
    mass: float           # signed effective mass
    a_B: float            # EIT blockade radius
    a_c: float            # critical (storage-surviving) distance
    L_abs: float          # resonant absorption length c*gamma/g^2 n
    od_b: float           # optical depth per blockade, a_B / L_abs
    theta_ratio: float    # dimensionless interaction strength Theta
    k_approx: float       # Luttinger parameter from the closed formula
    rho0: float           # excitation line density
    c6_mag: float = field(repr=False, default=0.0)  # back-solved |C6|

    @property
    def omega_e2(self) -> float:
        return self.params.omega_e2

    @property
    def rho0_ab(self) -> float:
        """Density in excitations per blockade radius."""
        return self.rho0 * self.a_B

    def as_dict(self) -> dict:
        """Flat key-value report (lengths in both c/gamma and a_B units)."""
        p = self.params
        return {
            "g_over_gamma": p.g_over_gamma,
            "omega0_over_gamma": p.omega0_over_gamma,
            "delta_over_gamma": p.delta_over_gamma,
            "delta2_over_gamma": p.delta2_over_gamma,
            "c6_sign": p.c6_sign,
            "g2n": p.g2n,
            "omega_e2": p.omega_e2,
            "theta": self.theta,
            "vg": self.vg,
            "gamma_eff_re": self.gamma_eff.real,
            "gamma_eff_im": self.gamma_eff.imag,
            "gamma_eff_abs": abs(self.gamma_eff),
            "mass": self.mass,
            "a_B": self.a_B,
            "a_c": self.a_c,
            "a_c_over_a_B": self.a_c / self.a_B,
            "L_abs": self.L_abs,
            "L_abs_over_a_B": self.L_abs / self.a_B,
            "od_b": self.od_b,
            "c6_mag": self.c6_mag,
            "rho0": self.rho0,
            "rho0_ab": self.rho0_ab,
            "theta_ratio": self.theta_ratio,
            "k_approx": self.k_approx,
        }


def blockade_radius(c6_mag: float, gamma_complex: complex, omega: float) -> float:
    """EIT blockade radius a_B = (|C6 Gamma| / Omega^2)^(1/6)."""
    if omega <= 0:
        raise ConfigError("blockade radius undefined for Omega <= 0")
    return (c6_mag * abs(gamma_complex) / omega**2) ** (1.0 / 6.0)


def critical_distance(c6_mag: float, gamma_complex: complex, omega_e2: float) -> float:
    """Critical distance a_c = (|C6 Gamma| / Omega_e^2)^(1/6).

    Stays finite in the storage limit Omega -> 0, where Omega_e^2 -> g^2 n.
    """
    return (c6_mag * abs(gamma_complex) / omega_e2) ** (1.0 / 6.0)


def k_from_theta_ratio(theta_ratio: float) -> float:
    """Luttinger parameter K = (1 + pi^4/45 * Theta)^(-1/2)."""
    if theta_ratio < 0:
        raise ConfigError("Theta must be non-negative")
    return (1.0 + PI4_OVER_45 * theta_ratio) ** -0.5

def theta_ratio_from_k(k: float) -> float:
    """Inverse of :func:`k_from_theta_ratio` on 0 < K <= 1."""
    if not 0 < k <= 1:
        raise ConfigError("K must lie in (0, 1]")
    return (1.0 / k**2 - 1.0) / PI4_OVER_45


def derive_scales(params: PhysParams, od_b: float, rho0_ab: float) -> DerivedScales:
    """Populate every derived scalar from microscopic inputs.

    Parameters
    ----------
    params:
        Microscopic inputs; Omega > 0 is required (a static mixing angle is
        undefined at Omega = 0 -- storage is handled by schedules).
    od_b:
        Optical depth per blockade a_B/L_abs; fixes |C6|.
    rho0_ab:
        Excitation line density in units of 1/a_B.
    """
    if params.omega0_over_gamma == 0:
        raise ConfigError(
            "Omega = 0 has no static mixing angle; use a storage schedule"
        )
    if od_b <= 0:
        raise ConfigError("od_b must be positive")
    if rho0_ab < 0:
        raise ConfigError("rho0_ab must be non-negative")

    g2n = params.g2n
    omega = params.omega0_over_gamma
    delta = params.delta_over_gamma
    gam = params.gamma_complex

    theta = math.atan2(math.sqrt(g2n), omega)
    vg = math.cos(theta) ** 2
    omega_e2 = params.omega_e2
    gamma_eff = omega_e2 / gam

    L_abs = 1.0 / g2n                      # c*gamma/g^2n with c = gamma = 1
    a_B = od_b * L_abs
    c6_mag = a_B**6 * omega**2 / abs(gam)  # Eq. for a_B inverted
    a_c = critical_distance(c6_mag, gam, omega_e2)

    sin2 = math.sin(theta) ** 2
    inv_mass = 2.0 * vg * delta * sin2 / omega_e2
    mass = 1.0 / inv_mass

    rho0 = rho0_ab / a_B
    theta_ratio = rho0_ab**4 / (4.0 * math.pi) * (1.0 / delta) ** 2 * od_b**2
    k_approx = k_from_theta_ratio(theta_ratio)

    return DerivedScales(
        params=params,
        theta=theta,
        vg=vg,
        gamma_eff=gamma_eff,
        mass=mass,
        a_B=a_B,
        a_c=a_c,
        L_abs=L_abs,
        od_b=od_b,
        theta_ratio=theta_ratio,
        k_approx=k_approx,
        rho0=rho0,
        c6_mag=c6_mag,
    )


def eit_window_ok(k_max: float, d: DerivedScales, safety: float = 10.0) -> bool:
    """Whether c*k_max sits inside the EIT window by the given safety factor.

    True iff safety * c * |k_max| < |Gamma_eff|.
    """
    if k_max < 0:
        raise ConfigError("k_max must be non-negative")
    return safety * k_max < abs(d.gamma_eff)


def dsp_length_bound(d: DerivedScales) -> float:
    """Lower bound c|Gamma|/Omega_e^2 on dark-state polariton features.

    Pulse features must be *longer* than this for the perturbative
    dark/bright separation to hold; off resonance it approaches
    (|Delta|/gamma) * L_abs.
    """
    return abs(d.params.gamma_complex) / d.omega_e2


def loss_rate_prefactor(d: DerivedScales) -> float:
    """Scalar coefficient gamma*cos^2(theta)*sin^6(theta)/Omega_e^2.

    Weights |integral V*rho|^2 in the operator-valued single-particle loss
    rate; used as a diagnostic on simulator snapshots only.
    """
    c2 = math.cos(d.theta) ** 2
    s2 = math.sin(d.theta) ** 2
    return c2 * s2**3 / d.omega_e2


def pulled_detuning(delta0: float, theta_t: float) -> float:
    """Center-frequency pulling during slow-down: delta0 * cos^2(theta(t))."""
    return delta0 * math.cos(theta_t) ** 2


def two_photon_linewidth(d: DerivedScales) -> float:
    """Two-photon linewidth Omega_e^2/|Gamma| (at optical depth 1).

    Finite in the storage limit Omega -> 0, where it is set by the
    collective coupling g^2 n.
    """
    return d.omega_e2 / abs(d.params.gamma_complex)


def adiabatic_od_bound(k0: float, d: DerivedScales) -> float:
    """Total-optical-depth lower bound 90|Gamma|v_g / (pi^4 gamma c (1-K0^2)).

    The storage protocol is adiabatic only if the configured OD exceeds this
    value by a large margin; it diverges for K0 -> 1.
    """
    if not 0 < k0 < 1:
        raise ConfigError("adiabatic OD bound requires 0 < K0 < 1 (diverges at 1)")
    num = 90.0 * abs(d.params.gamma_complex) * d.vg
    return num / (math.pi**4 * (1.0 - k0**2))
