"""Hardcore-boson lattice discretization of the effective polariton Hamiltonian.

    H = sum_i 2J n_i - J sum_i (b^+_i b_{i+1} + h.c.)
        + sum_{i<j} V(|i-j|) n_i n_j,        V(d) = C_eff / (d dz)^6,

with J = 1/(2 m dz^2), so the kinetic term is the three-point Laplacian of
-d_z^2/2m including its diagonal (a single particle at k = 0 has energy 0).
Double occupancy is excluded outright: at the resolutions required to resolve
the blockade, V(dz) >> J and the hardcore constraint is free.

Two routes build a model:

* :func:`build_lattice` from :class:`~rydpol.params.DerivedScales`, carrying
  physical units (gamma = c = 1).
* :func:`lattice_from_theta` from the dimensionless interaction strength
  Theta alone, in lattice units J = 1, dz = 1.  The normalization is fixed by
  Theta = 2 m C_eff rho0^4, the unique choice under which the closed-form
  K(Theta) = (1 + pi^4 Theta/45)^(-1/2) reproduces the classical-crystal
  compressibility at large Theta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from ..params import DerivedScales

__all__ = [
    "LatticeModel",
    "GroundStateResult",
    "build_lattice",
    "lattice_from_theta",
    "theta_dimensionless",
]


@dataclass
class LatticeModel:
    n_sites: int
    n_particles: int
    dz: float
    hopping: float                 # J > 0
    v_table: np.ndarray            # V(d), index d-1, zero beyond the cutoff
    boundary: str                  # "periodic" | "open"
    mass: float
    c_eff: float                   # C6 sin^4(theta) (or dimensionless C)
    theta_conversion: float = 1.0  # Theta_printed / (m C rho0^4); metadata
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.boundary not in ("periodic", "open"):
            raise ConfigError("boundary must be 'periodic' or 'open'")
        if self.hopping <= 0:
            raise ConfigError("hopping J must be positive")
        if np.any(self.v_table < 0):
            raise ConfigError("interaction table must be non-negative")
        if not 0 < self.n_particles < self.n_sites:
            raise ConfigError("need 0 < N < M")
        if self.boundary == "periodic" and len(self.v_table) > self.n_sites // 2:
            raise ConfigError(
                "periodic interactions must be cut off at M/2 (unique minimum image)"
            )

    @property
    def rho0(self) -> float:
        return self.n_particles / (self.n_sites * self.dz)

    @property
    def length(self) -> float:
        return self.n_sites * self.dz

    def pair_distance(self, i: int, j: int) -> int:
        d = abs(i - j)
        if self.boundary == "periodic":
            d = min(d, self.n_sites - d)
        return d

    def v_of(self, d: int) -> float:
        if 1 <= d <= len(self.v_table):
            return float(self.v_table[d - 1])
        return 0.0

    def theta_ratio(self) -> float:
        """Theta reproduced from the lattice parameters (round-trip metadata)."""
        m = 1.0 / (2.0 * self.hopping * self.dz**2)
        c = float(self.v_table[0]) * self.dz**6
        return m * c * self.rho0**4 * self.theta_conversion

    def with_particles(self, n: int) -> "LatticeModel":
        """Same lattice with a different particle number (for compressibility)."""
        return LatticeModel(
            self.n_sites, n, self.dz, self.hopping, self.v_table,
            self.boundary, self.mass, self.c_eff, self.theta_conversion,
            dict(self.meta),
        )


@dataclass
class GroundStateResult:
    energy: float
    density: np.ndarray
    g2: np.ndarray                # <n_0 n_d> averaged over pairs, index d
    g2_separations: np.ndarray
    g1: np.ndarray | None         # <b^+_0 b_d>, same separations (or None)
    k_extracted: float | None
    method: str                   # "ED" | "DMRG"
    convergence: dict

    def g2_sum(self) -> float:
        """sum over ordered pairs of <n_i n_j>; equals N(N-1) exactly."""
        return float(self.convergence.get("g2_pair_sum", np.nan))


def _v_table(c_eff: float, dz: float, r_c_sites: int) -> np.ndarray:
    d = np.arange(1, r_c_sites + 1, dtype=float)
    return c_eff / (d * dz) ** 6


def build_lattice(
    scales: DerivedScales,
    n_sites: int,
    n_particles: int,
    boundary: str = "periodic",
    r_c: float | None = None,
    dz: float | None = None,
) -> LatticeModel:
    """Discretize the effective Hamiltonian at the density carried by scales.

    Preconditions: commensurate density (M dz rho0 = N up to roundoff) and
    dz <= a_B/8 so the blockade hole is resolved.  The interaction range
    cutoff defaults to 10/rho0.
    """
    if dz is None:
        dz = scales.a_B / 8.0
    if dz > scales.a_B / 8.0 + 1e-12:
        raise ConfigError("dz must satisfy dz <= a_B/8 (resolved blockade)")
    n_expected = scales.rho0 * n_sites * dz
    if abs(n_expected - n_particles) > 1e-6:
        raise ConfigError(
            f"incommensurate density: M dz rho0 = {n_expected:.6f}, "
            f"expected the integer N = {n_particles}"
        )
    if r_c is None:
        r_c = 10.0 / scales.rho0
    r_c_sites = int(math.floor(r_c / dz + 1e-9))
    if boundary == "periodic":
        r_c_sites = min(r_c_sites, n_sites // 2)
    else:
        r_c_sites = min(r_c_sites, n_sites - 1)

    m = abs(scales.mass)
    j_hop = 1.0 / (2.0 * m * dz**2)
    s4 = math.sin(scales.theta) ** 4
    c_eff = scales.c6_mag * s4
    # Theta_printed = m*C*rho0^4 * |Gamma| g^2n / (2 pi Delta Omega_e^2)
    p = scales.params
    conv = (
        abs(p.gamma_complex) * p.g2n
        / (2.0 * math.pi * abs(p.delta_over_gamma) * p.omega_e2)
    )
    return LatticeModel(
        n_sites=n_sites,
        n_particles=n_particles,
        dz=dz,
        hopping=j_hop,
        v_table=_v_table(c_eff, dz, r_c_sites),
        boundary=boundary,
        mass=m,
        c_eff=c_eff,
        theta_conversion=conv,
        meta={"a_B": scales.a_B, "source": "scales",
              "theta_printed": scales.theta_ratio},
    )


def theta_dimensionless(mass: float, c_eff: float, rho0: float) -> float:
    """Theta = 2 m C rho0^4 (crystal-limit-consistent normalization)."""
    return 2.0 * mass * c_eff * rho0**4


def lattice_from_theta(
    theta_ratio: float,
    n_sites: int,
    n_particles: int,
    boundary: str = "periodic",
    r_c_sites: int | None = None,
) -> LatticeModel:
    """Dimensionless lattice (J = 1, dz = 1) at interaction strength Theta."""
    if theta_ratio < 0:
        raise ConfigError("Theta must be non-negative")
    nu = n_particles / n_sites
    mass = 0.5
    c_eff = theta_ratio / (2.0 * mass * nu**4) if theta_ratio > 0 else 0.0
    if r_c_sites is None:
        r_c_sites = n_sites // 2 if boundary == "periodic" else n_sites - 1
    table = _v_table(c_eff, 1.0, r_c_sites) if c_eff else np.zeros(max(r_c_sites, 1))
    return LatticeModel(
        n_sites=n_sites,
        n_particles=n_particles,
        dz=1.0,
        hopping=1.0,
        v_table=table,
        boundary=boundary,
        mass=mass,
        c_eff=c_eff,
        theta_conversion=2.0,
        meta={"theta_dimensionless": theta_ratio, "source": "theta"},
    )
