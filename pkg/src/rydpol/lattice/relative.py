"""Two-particle relative-coordinate states on a ring.

For two bosons governed by the effective Hamiltonian, the relative coordinate
r = z1 - z2 obeys

    -(1/m) psi''(r) + V(r) psi(r) = E psi(r),      V(r) = C_eff/|r|^6,

with periodic boundary conditions of the given period and even (bosonic)
symmetry.  The interaction uses the minimum image distance on the ring and is
capped at its value one grid spacing away from coincidence.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import eigh, eigh_tridiagonal

from ..errors import ConfigError, NumericsError

__all__ = ["ring_two_particle_state", "thermal_two_particle_state", "RelativeState"]


def _relative_hamiltonian(mass: float, c_eff: float, period: float, n: int):
    dr = period / n
    r = -period / 2.0 + dr * np.arange(n)
    d_min = np.minimum(np.abs(r), period - np.abs(r))
    d_eff = np.maximum(d_min, dr)      # cap at one grid spacing
    v = c_eff / d_eff**6
    k = 1.0 / (mass * dr**2)
    h = np.zeros((n, n))
    idx = np.arange(n)
    h[idx, idx] = 2.0 * k + v
    h[idx, (idx + 1) % n] = -k
    h[idx, (idx - 1) % n] = -k
    return r, h


def ring_two_particle_state(
    mass: float, c_eff: float, period: float, n_points: int = 512
):
    """Ground eigenfunction and energy of the relative problem on the ring."""
    if n_points < 256:
        raise ConfigError("ring discretization below 256 points rejected")
    if period <= 0:
        raise ConfigError("period must be positive")
    r, h = _relative_hamiltonian(mass, c_eff, period, n_points)
    w, vecs = eigh(h, subset_by_index=(0, 0))
    psi = vecs[:, 0]
    psi /= np.sqrt(np.sum(psi**2) * (period / n_points))
    if psi[np.argmax(np.abs(psi))] < 0:
        psi = -psi
    # bosonic relative wavefunction must be even in r
    asym = np.max(np.abs(psi - _reflect(psi)))
    if asym > 1e-6 * np.max(np.abs(psi)):
        raise NumericsError(f"ground state not even in r (asymmetry {asym:.2e})")
    return RelativeState(r=r, psi=psi, energy=float(w[0]), period=period, mass=mass,
                         c_eff=c_eff)


def _reflect(f: np.ndarray) -> np.ndarray:
    # grid r_k = -P/2 + k dr: reflection r -> -r maps index k -> (n - k) mod n
    n = len(f)
    out = np.empty_like(f)
    out[0] = f[0]
    out[1:] = f[:0:-1]
    return out


class RelativeState:
    def __init__(self, r, psi, energy, period, mass, c_eff):
        self.r = r
        self.psi = psi
        self.energy = energy
        self.period = period
        self.mass = mass
        self.c_eff = c_eff

    @property
    def density(self) -> np.ndarray:
        return self.psi**2

    def dip_profile(self):
        """(r, density) centered on r = 0, for dip-width comparisons."""
        order = np.argsort(self.r)
        return self.r[order], self.density[order]


def thermal_two_particle_state(
    mass: float,
    c_eff: float,
    period: float,
    temperature: float,
    n_points: int = 512,
    tail_tol: float = 1e-6,
):
    """Boltzmann mixture over even relative eigenstates; diagonal density vs r.

    Signals a truncation error when the Boltzmann weight of the highest
    available eigenstate exceeds ``tail_tol`` of the partition sum: the finite
    grid basis cannot represent such a hot state.
    """
    if n_points < 256:
        raise ConfigError("ring discretization below 256 points rejected")
    if temperature <= 0:
        raise ConfigError("temperature must be positive")
    r, h = _relative_hamiltonian(mass, c_eff, period, n_points)
    w, vecs = eigh(h)
    dr = period / n_points
    # keep even states only (bosonic symmetry)
    weights = []
    dens = np.zeros(n_points)
    z = 0.0
    w_shift = w - w[0]
    for k in range(n_points):
        psi = vecs[:, k]
        if np.max(np.abs(psi - _reflect(psi))) > 1e-8:
            continue
        bw = float(np.exp(-w_shift[k] / temperature))
        weights.append((k, bw))
        z += bw
        dens += bw * psi**2 / dr
    tail = float(np.exp(-w_shift[-1] / temperature))
    if tail > tail_tol * z:
        raise NumericsError(
            f"thermal basis truncation: top-state weight {tail:.2e} "
            f"exceeds {tail_tol} of Z = {z:.3e}"
        )
    dens /= z
    order = np.argsort(r)
    return r[order], dens[order]
