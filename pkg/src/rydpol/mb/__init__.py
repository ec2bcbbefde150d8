"""One- and two-excitation Maxwell-Bloch propagation, blockade, storage."""

from .medium import Medium, ControlSchedule
from .state import TwoExcState, Snapshot, make_gaussian_two_photon
from .evolve import TwoPhotonRun, evolve, storage_run
from .single import SingleExcitationRun, beer_lambert_transmission, chirp_spectrum
from .analysis import (
    avoided_volume_radius,
    compare_to_two_particle_ground_state,
)

__all__ = [
    "Medium",
    "ControlSchedule",
    "TwoExcState",
    "Snapshot",
    "make_gaussian_two_photon",
    "TwoPhotonRun",
    "evolve",
    "storage_run",
    "SingleExcitationRun",
    "beer_lambert_transmission",
    "chirp_spectrum",
    "avoided_volume_radius",
    "compare_to_two_particle_ground_state",
]
