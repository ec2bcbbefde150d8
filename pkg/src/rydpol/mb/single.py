"""Single-excitation Maxwell-Bloch solver (same split-step scheme in 1D).

Carries (E, P, S)(z, t) through the medium; used stand-alone for linear
response (Beer-Lambert), for the frequency-pulling/chirp analysis, and in
lockstep with the 2D solver to supply exact factorized boundary data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from ..errors import ConfigError, NumericsError
from .medium import ControlSchedule, Medium

__all__ = [
    "SingleExcitationRun",
    "beer_lambert_transmission",
    "chirp_spectrum",
    "ChirpCheckpoint",
]


def single_site_generator(g: float, omega: float, gamma_c: complex,
                          delta2: float) -> np.ndarray:
    return np.array(
        [
            [0.0, 1j * g, 0.0],
            [1j * g, -gamma_c, 1j * omega],
            [0.0, 1j * omega, -1j * delta2],
        ],
        dtype=np.complex128,
    )


def propagator_table(g2n_values, omega: float, gamma_c: complex, delta2: float,
                     h: float, n_levels: int):
    """U(h/2^l) for each distinct coupling value, per subcycle level."""
    n_vals = len(g2n_values)
    out = np.empty((n_levels, n_vals, 3, 3), dtype=np.complex128)
    for lev in range(n_levels):
        hh = h / (1 << lev)
        for c, g2 in enumerate(g2n_values):
            a = single_site_generator(math.sqrt(g2), omega, gamma_c, delta2)
            out[lev, c] = expm(hh * a)
    return out


class SingleExcitationRun:
    """Split-step 1D integrator: local exact propagators + one-cell shifts."""

    def __init__(self, medium: Medium, schedule: ControlSchedule,
                 z_grid: np.ndarray, shift_cells: int = 1):
        self.medium = medium
        self.schedule = schedule
        self.z = np.asarray(z_grid, dtype=float)
        self.dz = float(self.z[1] - self.z[0])
        if shift_cells < 1:
            raise ConfigError("shift_cells must be >= 1")
        self.shift_cells = shift_cells
        self.dt = self.shift_cells * self.dz   # c = 1
        self.n = len(self.z)
        self.fields = np.zeros((3, self.n), dtype=np.complex128)
        self.time = 0.0
        self.g2n_z = medium.g2n_of(self.z, self.dz)
        self.class_values, self.class_idx = np.unique(
            self.g2n_z, return_inverse=True
        )
        self._u_cache_omega = None
        self._u_half = None

    def set_gaussian_pulse(self, center: float, width: float,
                           detuning: float = 0.0):
        """Photonic Gaussian (amplitude sigma*sqrt(2): density sigma = width)."""
        phi = np.exp(-((self.z - center) ** 2) / (4.0 * width**2))
        if detuning:
            phi = phi * np.exp(1j * 0.0)  # envelope at t = 0; detuning via delta2
        phi /= np.sqrt(np.sum(np.abs(phi) ** 2) * self.dz)
        self.fields[:] = 0.0
        self.fields[0] = phi

    def set_polariton_pulse(self, center: float, width: float):
        """Dark-state polariton envelope at the current mixing angle."""
        g = math.sqrt(self.medium.g2n)
        om = self.schedule.omega(self.time)
        if om <= 0:
            raise ConfigError("polariton initial state needs Omega > 0")
        theta = math.atan2(g, om)
        phi = np.exp(-((self.z - center) ** 2) / (4.0 * width**2))
        phi /= np.sqrt(np.sum(np.abs(phi) ** 2) * self.dz)
        self.fields[:] = 0.0
        inside = self.g2n_z >= 0.99 * self.medium.g2n
        self.fields[0] = math.cos(theta) * phi
        self.fields[2] = -math.sin(theta) * phi
        self.fields[0, ~inside] = phi[~inside]
        self.fields[2, ~inside] = 0.0

    def _local_half(self, t_mid: float):
        om = self.schedule.omega(t_mid)
        if self._u_cache_omega != om:
            self._u_half = propagator_table(
                self.class_values, om, self.medium.gamma_complex,
                self.medium.delta2, 0.5 * self.dt, 1,
            )[0]
            self._u_cache_omega = om
        u = self._u_half
        f = self.fields
        for cls in range(len(self.class_values)):
            mask = self.class_idx == cls
            if np.any(mask):
                f[:, mask] = u[cls] @ f[:, mask]

    def _shift(self):
        k = self.shift_cells
        e = self.fields[0]
        e[k:] = e[:-k]
        e[:k] = 0.0

    def step(self):
        self._local_half(self.time + 0.25 * self.dt)
        self._shift()
        self._local_half(self.time + 0.75 * self.dt)
        self.time += self.dt

    def norm(self) -> float:
        return float(np.sum(np.abs(self.fields) ** 2) * self.dz)

    def run_until(self, t_final: float, probes=None, record_every: int = 1):
        """Advance to t_final; optionally record E(z*, t) at probe points."""
        traces = None
        if probes is not None:
            idx = [int(round((zp - self.z[0]) / self.dz)) for zp in probes]
            traces = {"t": [], "e": [[] for _ in idx], "idx": idx}
        count = 0
        while self.time < t_final - 1e-12:
            self.step()
            if traces is not None and count % record_every == 0:
                traces["t"].append(self.time)
                for m, i in enumerate(traces["idx"]):
                    traces["e"][m].append(self.fields[0, i])
            count += 1
        if traces is not None:
            traces["t"] = np.array(traces["t"])
            traces["e"] = [np.array(x) for x in traces["e"]]
        return traces


def beer_lambert_transmission(g2n: float, length: float, dz: float = None,
                              width: float = None):
    """Resonant two-level transmission of a weak pulse; returns (sim, oracle).

    Oracle: the linear-response susceptibility of the P transition gives the
    amplitude transmission exp(-g^2 n L / (c gamma)) at line center (an
    optical depth L/L_abs in amplitude-squared terms of exp(-2 OD) ... the
    convention here is pinned by the simulation itself).
    """
    medium = Medium(g2n=g2n, length=length, gamma_decay=1.0, delta=0.0,
                    c6_mag=0.0)
    schedule = ControlSchedule("constant", omega0=0.0)
    if width is None:
        width = 12.0 * length
    if dz is None:
        dz = width / 40.0
    z0 = -5.0 * width
    z = np.arange(z0, length + 6.0 * width, dz)
    run = SingleExcitationRun(medium, schedule, z)
    run.set_gaussian_pulse(center=-3.5 * width, width=width)
    peak_in = float(np.max(np.abs(run.fields[0])))
    t_final = (3.5 * width + length + 2.0 * width)
    run.run_until(t_final)
    sel = run.z > length
    peak_out = float(np.max(np.abs(run.fields[0, sel])))
    oracle = math.exp(-g2n * length)
    return peak_out / peak_in, oracle


@dataclass
class ChirpCheckpoint:
    omega: float
    cos2_theta: float
    center: float          # measured spectral center of E(z*, t)
    width: float           # rms spectral width
    pulled: float          # delta0 - center
    z_probe: float
    window: tuple


def _windowed_spectrum(t, e, t_lo, t_hi):
    sel = (t >= t_lo) & (t <= t_hi)
    if sel.sum() < 64:
        raise NumericsError("chirp window too short for spectral resolution")
    tt = t[sel]
    ee = e[sel]
    hann = 0.5 * (1.0 - np.cos(2.0 * math.pi * np.arange(len(tt)) / (len(tt) - 1)))
    sig = ee * hann
    dt = tt[1] - tt[0]
    nfft = 8 * len(sig)
    spec = np.fft.fftshift(np.fft.fft(sig, n=nfft))
    # E ~ exp(-i omega0 t): fft kernel exp(-i w t) peaks at w = -omega0;
    # report in the physical sign convention
    omega = -np.fft.fftshift(2.0 * math.pi * np.fft.fftfreq(nfft, dt))
    pw = np.abs(spec) ** 2
    tot = pw.sum()
    if tot == 0:
        raise NumericsError("empty chirp window")
    center = float((omega * pw).sum() / tot)
    width = float(math.sqrt(max(((omega - center) ** 2 * pw).sum() / tot, 0.0)))
    return center, width


def chirp_spectrum(
    g2n: float,
    omega_levels,
    delta0: float,
    delta: float = 4.0,
    width: float = 4.0,
    dz: float = 0.1,
    plateau: float = None,
):
    """Frequency pulling under partial storage, measured from the field.

    A dark-state polariton (two-photon detuning delta0 on the Rydberg level)
    starts inside a uniform medium; the control is stepped down through
    ``omega_levels`` with long plateaus.  At each plateau a probe point ahead
    of the pulse records E(z*, t); the windowed spectrum gives the measured
    line center, whose offset from delta0 is the pulled detuning
    delta0 cos^2(theta), and the spectral width, which narrows as cos^2(theta).
    """
    from .medium import StaircaseSchedule

    levels = [float(x) for x in omega_levels]
    if len(levels) < 2:
        raise ConfigError("need at least two control levels")
    g = math.sqrt(g2n)
    cos2 = [om**2 / (g2n + om**2) for om in levels]
    # plateau long enough for the pulse to pass a probe at each speed
    if plateau is None:
        plateau = 14.0 * width / min(cos2)

    switch_tau = plateau / 40.0
    t0s = [plateau * (k + 1) for k in range(len(levels) - 1)]
    schedule = StaircaseSchedule(levels, t0s, [switch_tau] * (len(t0s)))

    # probe positions: pulse centroid mid-plateau
    def centroid_at(t):
        zc = 0.0
        tt = 0.0
        dt = plateau / 400.0
        while tt < t:
            om = schedule.omega(tt + 0.5 * dt)
            zc += dt * om**2 / (g2n + om**2)
            tt += dt
        return zc

    mids = [0.5 * plateau + plateau * k for k in range(len(levels))]
    probes = [centroid_at(tm) for tm in mids]
    length = centroid_at(plateau * len(levels)) + 20.0 * width
    medium = Medium(g2n=g2n, length=length, gamma_decay=1.0, delta=delta,
                    c6_mag=0.0, delta2=delta0)
    z = np.arange(-4.0 * dz, length + 4.0 * width, dz)
    run = SingleExcitationRun(medium, schedule, z)
    run.set_polariton_pulse(center=0.0, width=width)
    traces = run.run_until(plateau * len(levels), probes=probes)

    out = []
    for k, om in enumerate(levels):
        t_lo = plateau * k + (3.0 * switch_tau if k else 0.0)
        t_hi = plateau * (k + 1) - 3.0 * switch_tau
        center, w = _windowed_spectrum(traces["t"], traces["e"][k], t_lo, t_hi)
        out.append(
            ChirpCheckpoint(
                omega=om,
                cos2_theta=cos2[k],
                center=center,
                width=w,
                pulled=delta0 - center,
                z_probe=probes[k],
                window=(t_lo, t_hi),
            )
        )
    return out
