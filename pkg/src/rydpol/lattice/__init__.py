"""Discretized effective polariton Hamiltonian: ED, DMRG, K extraction."""

from .model import LatticeModel, build_lattice, lattice_from_theta, GroundStateResult
from .ed import ed_ground_state
from .dmrg import dmrg_ground_state
from .kextract import extract_k
from .relative import ring_two_particle_state, thermal_two_particle_state

__all__ = [
    "LatticeModel",
    "build_lattice",
    "lattice_from_theta",
    "GroundStateResult",
    "ed_ground_state",
    "dmrg_ground_state",
    "extract_k",
    "ring_two_particle_state",
    "thermal_two_particle_state",
]
