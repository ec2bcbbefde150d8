"""Numerical laboratory for strongly interacting Rydberg dark-state polaritons.

Subpackages
-----------
params   closed-form scalar relations (mixing angle, radii, K formula, bounds)
modes    transverse Laguerre-Gauss modes and effective 1D potentials
mb       one- and two-excitation Maxwell-Bloch propagation and storage
lattice  discretized effective Hamiltonian: ED, DMRG, K extraction
quench   time-dependent Luttinger-liquid storage dynamics
cli      config-driven command line front end
"""

from .params import PhysParams, DerivedScales, derive_scales

__all__ = ["PhysParams", "DerivedScales", "derive_scales"]
__version__ = "0.1.0"
