"""Medium profile, interaction regularization, and control schedules.

Units: gamma = c = 1.  The medium is a step profile g^2 n(z) = g2n for
0 <= z <= length and 0 outside; the step is kept hard because the advection
in the split-step integrator is an exact shift (no grid dispersion to excite)
and the physical edge scale L_abs is below the grid spacing at the target
resolutions anyway.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError

__all__ = ["Medium", "ControlSchedule"]


@dataclass(frozen=True)
class Medium:
    g2n: float                 # collective coupling squared inside the step
    length: float              # medium length (c/gamma units)
    gamma_decay: float         # intermediate-state decay (1 normally, 0 in tests)
    delta: float               # single-photon detuning
    c6_mag: float              # |C6|
    c6_sign: int = 1
    delta2: float = 0.0        # two-photon detuning on the Rydberg level
    r_min_factor: float = 0.1  # cap V below max(dz, a_c * this)
    edge_width: float | None = None  # entry/exit ramp; None = auto per grid

    def __post_init__(self):
        if self.g2n < 0 or self.length <= 0 or self.c6_mag < 0:
            raise ConfigError("invalid medium parameters")

    @property
    def gamma_complex(self) -> complex:
        return self.gamma_decay + 1j * self.delta

    def edge_width_for(self, dz: float) -> float:
        """Entry ramp width: resolved on the grid and wider than L_abs.

        The in-medium field relaxes over L_abs = c gamma / g^2 n, which at
        production resolutions is below one cell; a hard (or sub-grid) edge
        puts unresolvable structure into the conversion layer and the split
        steps then over-absorb.  A smoothstep ramp over >= 12 cells keeps
        every spatial scale of the solution resolved.  Exactly zero coupling
        outside [0, length] preserves the factorized-face property used for
        boundary injection.
        """
        if self.edge_width is not None:
            return self.edge_width
        l_abs = 1.0 / self.g2n if self.g2n > 0 else 0.0
        return max(12.0 * dz, 2.0 * l_abs)

    def g2n_of(self, z: np.ndarray, dz: float | None = None) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if dz is None:
            return np.where((z >= 0.0) & (z <= self.length), self.g2n, 0.0)
        w = self.edge_width_for(dz)
        x_in = np.clip(z / w, 0.0, 1.0)
        x_out = np.clip((self.length - z) / w, 0.0, 1.0)
        ramp_in = x_in * x_in * (3.0 - 2.0 * x_in)
        ramp_out = x_out * x_out * (3.0 - 2.0 * x_out)
        return self.g2n * ramp_in * ramp_out

    def coupling_of(self, z: np.ndarray, dz: float | None = None) -> np.ndarray:
        return np.sqrt(self.g2n_of(z, dz))

    def blockade_radius(self, omega: float) -> float:
        return (self.c6_mag * abs(self.gamma_complex) / omega**2) ** (1.0 / 6.0)

    def critical_distance(self, omega: float) -> float:
        omega_e2 = self.g2n + omega**2
        return (self.c6_mag * abs(self.gamma_complex) / omega_e2) ** (1.0 / 6.0)

    def potential(self, r: np.ndarray, dz: float, omega0: float) -> np.ndarray:
        """Signed van der Waals potential with short-distance cap.

        V(r) = +-|C6|/r^6 capped at its value at r_min = max(dz, a_c/10 by
        default); the doubly excited amplitude is exponentially suppressed
        inside that radius, and the cap is handled exactly (as a phase) by
        the integrator, so its magnitude only needs to stay deep inside the
        blockaded regime.
        """
        r = np.abs(np.asarray(r, dtype=float))
        r_min = max(dz, self.r_min_factor * self.critical_distance(omega0))
        r_eff = np.maximum(r, r_min)
        return self.c6_sign * self.c6_mag / r_eff**6


@dataclass(frozen=True)
class ControlSchedule:
    """Control Rabi frequency Omega(t).

    form "constant": Omega(t) = omega0.
    form "tanh": Omega(t) = omega_final +
        (omega0 - omega_final) * (1 - tanh((t - t0)/tau)) / 2,
    monotone non-increasing for omega_final <= omega0 (plain storage is
    omega_final = 0).
    """

    form: str
    omega0: float
    tau: float = 1.0
    t0: float = 0.0
    omega_final: float = 0.0

    def __post_init__(self):
        if self.form not in ("constant", "tanh"):
            raise ConfigError("schedule form must be 'constant' or 'tanh'")
        if self.omega0 < 0 or self.omega_final < 0:
            raise ConfigError("Rabi frequencies must be non-negative")
        if self.form == "tanh":
            if self.tau <= 0:
                raise ConfigError("tanh schedule needs tau > 0")
            if self.omega_final > self.omega0:
                raise ConfigError("storage schedule must be non-increasing")

    def omega(self, t: float) -> float:
        if self.form == "constant":
            return self.omega0
        step = 0.5 * (1.0 - math.tanh((t - self.t0) / self.tau))
        return self.omega_final + (self.omega0 - self.omega_final) * step

class StaircaseSchedule:
    """Sum of tanh steps for multi-plateau (partial storage) protocols.

    levels = [Omega_0, ..., Omega_n]; step k switches Omega_{k-1} -> Omega_k
    around time t0s[k-1] with timescale taus[k-1].
    """

    def __init__(self, levels, t0s, taus):
        if len(levels) < 2 or len(t0s) != len(levels) - 1 or len(taus) != len(t0s):
            raise ConfigError("need n+1 levels and n switch times/taus")
        if any(b > a for a, b in zip(levels, levels[1:])):
            raise ConfigError("staircase must be non-increasing")
        self.levels = [float(x) for x in levels]
        self.t0s = [float(x) for x in t0s]
        self.taus = [float(x) for x in taus]
        self.form = "staircase"
        self.omega0 = self.levels[0]

    def omega(self, t: float) -> float:
        val = self.levels[-1]
        for k, (t0, tau) in enumerate(zip(self.t0s, self.taus)):
            val += (self.levels[k] - self.levels[k + 1]) * 0.5 * (
                1.0 - math.tanh((t - t0) / tau)
            )
        return val
