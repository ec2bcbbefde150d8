"""Two-excitation state container and initial states.

Nine amplitude planes are stored as fields[3*a + b] with a, b in
{0:E, 1:P, 2:S} (coordinate 1 on axis 0).  Bosonic exchange symmetry -- EE,
PP, SS symmetric and PE = EP^T etc. -- is not hardwired: it is preserved by
the dynamics from symmetric initial data and checked as an invariant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError

__all__ = ["TwoExcState", "Snapshot", "make_gaussian_two_photon", "FIELD_INDEX"]

FIELD_INDEX = {
    "ee": 0, "ep": 1, "es": 2,
    "pe": 3, "pp": 4, "ps": 5,
    "se": 6, "sp": 7, "ss": 8,
}


@dataclass
class TwoExcState:
    z: np.ndarray                  # uniform grid, both coordinates
    fields: np.ndarray             # (9, N, N) complex128
    time: float = 0.0

    def __post_init__(self):
        n = len(self.z)
        if self.fields.shape != (9, n, n):
            raise ConfigError("fields must have shape (9, N, N)")
        dz = np.diff(self.z)
        if not np.allclose(dz, dz[0], rtol=1e-12):
            raise ConfigError("grid must be uniform")

    @property
    def dz(self) -> float:
        return float(self.z[1] - self.z[0])

    def __getattr__(self, name):
        idx = FIELD_INDEX.get(name)
        if idx is None:
            raise AttributeError(name)
        return self.fields[idx]

    def norm(self) -> float:
        return float(np.sum(np.abs(self.fields) ** 2) * self.dz**2)

    def exchange_asymmetry(self) -> float:
        """max |F(z1,z2) - mirror| over all amplitude pairs."""
        worst = 0.0
        f = self.fields
        for a in range(3):
            for b in range(3):
                diff = np.max(np.abs(f[3 * a + b] - f[3 * b + a].T))
                worst = max(worst, float(diff))
        return worst

    def copy(self) -> "TwoExcState":
        return TwoExcState(self.z.copy(), self.fields.copy(), self.time)


@dataclass
class Snapshot:
    """Densities and cuts extracted from a state at one time."""

    time: float
    z: np.ndarray
    ee_density: np.ndarray         # |EE|^2 on the grid
    ss_density: np.ndarray
    diag_ee: np.ndarray            # |EE(z, z)|
    diag_ss: np.ndarray
    cut_r: np.ndarray              # anti-diagonal separations
    cut_ee: np.ndarray             # |EE|^2 along the anti-diagonal at center R
    cut_ss: np.ndarray
    center_r: float
    norm: float
    omega: float

    def __post_init__(self):
        for arr in (self.ee_density, self.ss_density, self.cut_ee, self.cut_ss):
            if np.any(arr < 0):
                raise ConfigError("densities must be non-negative")


def extract_snapshot(state: TwoExcState, omega: float,
                     center_r: float | None = None) -> Snapshot:
    ee = state.fields[FIELD_INDEX["ee"]]
    ss = state.fields[FIELD_INDEX["ss"]]
    ee_d = np.abs(ee) ** 2
    ss_d = np.abs(ss) ** 2
    z = state.z
    n = len(z)
    if center_r is None:
        # center on whichever component dominates
        dom = ee_d if ee_d.sum() >= ss_d.sum() else ss_d
        tot = dom.sum()
        if tot > 0:
            zc = float((dom.sum(axis=1) @ z + dom.sum(axis=0) @ z) / (2 * tot))
        else:
            zc = float(0.5 * (z[0] + z[-1]))
        center_r = zc
    # anti-diagonal cut at z1 + z2 = 2 R: both parities of i + j
    s0 = int(round((2.0 * center_r - 2.0 * z[0]) / state.dz))
    s0 = min(max(s0, 2), 2 * n - 4)
    rs, c_ee, c_ss = [], [], []
    for s in (s0, s0 + 1):
        i_lo = max(0, s - (n - 1))
        i_hi = min(n - 1, s)
        ii = np.arange(i_lo, i_hi + 1)
        jj = s - ii
        rs.append((ii - jj) * state.dz)
        c_ee.append(ee_d[ii, jj])
        c_ss.append(ss_d[ii, jj])
    r = np.concatenate(rs)
    order = np.argsort(r)
    return Snapshot(
        time=state.time,
        z=z,
        ee_density=ee_d,
        ss_density=ss_d,
        diag_ee=np.abs(np.diagonal(ee)),
        diag_ss=np.abs(np.diagonal(ss)),
        cut_r=r[order],
        cut_ee=np.concatenate(c_ee)[order],
        cut_ss=np.concatenate(c_ss)[order],
        center_r=float(z[0] + 0.5 * s0 * state.dz),
        norm=state.norm(),
        omega=omega,
    )


def make_polariton_two_photon(
    center: float,
    width: float,
    z_grid: np.ndarray,
    g2n: float,
    omega: float,
) -> TwoExcState:
    """Product of two dark-state polaritons inside a uniform medium."""
    import math

    z = np.asarray(z_grid, dtype=float)
    dz = z[1] - z[0]
    if width < 8.0 * dz:
        raise ConfigError("pulse width under-resolved (>= 8 points per sigma)")
    theta = math.atan2(math.sqrt(g2n), omega)
    phi = np.exp(-((z - center) ** 2) / (4.0 * width**2))
    phi /= np.sqrt(np.sum(np.abs(phi) ** 2) * dz)
    one = np.zeros((3, len(z)), dtype=np.complex128)
    one[0] = math.cos(theta) * phi
    one[2] = -math.sin(theta) * phi
    n = len(z)
    fields = np.zeros((9, n, n), dtype=np.complex128)
    for a in range(3):
        for b in range(3):
            fields[3 * a + b] = np.outer(one[a], one[b])
    state = TwoExcState(z=z, fields=fields, time=0.0)
    state.fields /= np.sqrt(state.norm())
    return state


def make_gaussian_two_photon(
    center: float,
    width: float,
    z_grid: np.ndarray,
    check_resolution: bool = True,
) -> TwoExcState:
    """Symmetrized product of two identical photonic Gaussians, norm 1.

    ``width`` is the one-photon Gaussian sigma of the amplitude profile.
    Rejects widths below 8 grid points per sigma.
    """
    z = np.asarray(z_grid, dtype=float)
    dz = z[1] - z[0]
    if check_resolution and width < 8.0 * dz:
        raise ConfigError(
            f"pulse width {width} under-resolved: need >= 8 points per sigma "
            f"(dz = {dz})"
        )
    phi = np.exp(-((z - center) ** 2) / (4.0 * width**2))
    phi /= np.sqrt(np.sum(np.abs(phi) ** 2) * dz)
    n = len(z)
    fields = np.zeros((9, n, n), dtype=np.complex128)
    fields[FIELD_INDEX["ee"]] = np.outer(phi, phi)
    state = TwoExcState(z=z, fields=fields, time=0.0)
    nrm = state.norm()
    state.fields /= np.sqrt(nrm)
    return state
