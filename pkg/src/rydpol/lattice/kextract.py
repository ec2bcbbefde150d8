"""Luttinger parameter from discrete compressibility.

With chi^-1 = rho0^2 L (E(N+1) + E(N-1) - 2 E(N)) and the Galilean identity
v_s K = pi rho0 / m, the two relations K/v_s = pi rho0^2 chi and v_s K =
pi rho0/m combine to

    K = sqrt(pi^2 rho0^3 chi / m).

(The chemical-potential-fit alternative is noisier and not used.)
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import ConfigError, NumericsError
from .model import LatticeModel

__all__ = ["extract_k", "k_from_energies"]


def k_from_energies(
    e_minus: float, e_zero: float, e_plus: float,
    rho0: float, length: float, mass: float,
) -> float:
    d2 = e_plus + e_minus - 2.0 * e_zero
    if d2 <= 0:
        raise NumericsError(
            f"non-convex energies (second difference {d2:.3e} <= 0): "
            "solver convergence failure or too-small system"
        )
    chi_inv = rho0**2 * length * d2
    return math.sqrt(math.pi**2 * rho0**3 / (mass * chi_inv))


def extract_k(model: LatticeModel, solver, **solver_kw) -> dict:
    """Solve the model at N-1, N, N+1 and return K with the three energies.

    ``solver`` is ed_ground_state or dmrg_ground_state (or a compatible
    callable returning an object with an ``energy`` attribute).
    """
    n = model.n_particles
    if n < 2:
        raise ConfigError("K extraction needs N >= 2")
    energies = {}
    for dn in (-1, 0, 1):
        res = solver(model.with_particles(n + dn), **solver_kw)
        energies[n + dn] = res.energy
    k = k_from_energies(
        energies[n - 1], energies[n], energies[n + 1],
        model.rho0, model.length, model.mass,
    )
    return {"k": k, "energies": energies, "rho0": model.rho0,
            "mass": model.mass, "length": model.length}
