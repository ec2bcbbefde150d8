"""Transverse Laguerre-Gauss modes and effective 1D interaction potentials.

The van der Waals coupling between excitations in transverse modes
(k1,l1)..(k4,l4) at axial separation z reduces, after integrating out both
azimuthal angles, to a two-dimensional radial integral

    V~(z) = C6 * 2*pi * int r dr int r' dr'
            R1(r) R4(r) R2(r') R3(r') * I_n(A, B),

with A = r^2 + r'^2 + z^2, B = 2 r r', n = |k4 - k1|, subject to the
angular momentum selection rule k1 - k4 = k3 - k2.  The angle average

    I_n(A, B) = int_0^{2pi} cos(n psi) / (A - B cos psi)^3 dpsi

has the closed form (obtained by differentiating the standard Poisson-kernel
integral twice with respect to A)

    I_n = pi * t^n * ((n^2 - 1) s^2 + 3 A (n s + A)) / s^5,

where s = sqrt(A^2 - B^2) and t = B / (A + s).  Everything here assumes a
constant beam waist w(z) = w0 (zero beam divergence); Rayleigh-range
flattening beyond z_R is deliberately not modeled.

Lengths are in units of w0 unless stated otherwise; the returned potentials
carry the explicit C6 prefactor (default 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import eval_genlaguerre, gammaln

from .errors import ConfigError, NumericsError

__all__ = [
    "LGMode",
    "lg_mode_eval",
    "lg_radial",
    "mode_overlap",
    "angular_kernel",
    "effective_potential",
    "potential_table",
    "EffectivePotentialTable",
    "PowerLawFit",
    "fit_power_law",
    "suppression_report",
]


@dataclass(frozen=True)
class LGMode:
    """Laguerre-Gauss mode: azimuthal index k, radial index l, waist w0."""

    k: int
    l: int
    w0: float = 1.0

    def __post_init__(self):
        if self.l < 0:
            raise ConfigError("radial index l must be non-negative")
        if self.w0 <= 0:
            raise ConfigError("waist must be positive")

    @property
    def norm_const(self) -> float:
        """C_kl fixing int |u|^2 r dr dphi = 1."""
        k, l = abs(self.k), self.l
        return math.sqrt(2.0 / math.pi) * math.exp(
            0.5 * (gammaln(l + 1) - gammaln(l + k + 1))
        )


def lg_radial(mode: LGMode, r):
    """Real radial profile R_kl(r); u = R_kl(r) exp(i k phi)."""
    r = np.asarray(r, dtype=float)
    x = 2.0 * r**2 / mode.w0**2
    amp = (mode.norm_const / mode.w0) * (np.sqrt(2.0) * r / mode.w0) ** abs(mode.k)
    return amp * np.exp(-(r**2) / mode.w0**2) * eval_genlaguerre(mode.l, abs(mode.k), x)


def lg_mode_eval(mode: LGMode, r, phi):
    """Complex mode amplitude u_kl(r, phi)."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ConfigError("radius must be non-negative")
    return lg_radial(mode, r) * np.exp(1j * mode.k * np.asarray(phi))


def _radial_nodes(w0: float, n: int, rmax_w0: float = 6.0):
    x, w = leggauss(n)
    half = 0.5 * rmax_w0 * w0
    return half * (x + 1.0), half * w


def mode_overlap(a: LGMode, b: LGMode, n_radial: int = 200) -> complex:
    """<u_a|u_b> under the module's quadrature (radial Gauss-Legendre).

    The angular integral is exact: it vanishes unless the azimuthal indices
    match, in which case it contributes 2*pi.
    """
    if a.k != b.k:
        return 0.0
    r, w = _radial_nodes(max(a.w0, b.w0), n_radial)
    return 2.0 * math.pi * float(np.sum(w * r * lg_radial(a, r) * lg_radial(b, r)))


def angular_kernel(A, B, n: int):
    """Closed-form I_n(A,B) = int_0^2pi cos(n psi) dpsi / (A - B cos psi)^3.

    Valid for A > B >= 0.  s^2 = A^2 - B^2 is evaluated in the factored form
    ((r-r')^2+z^2)((r+r')^2+z^2) upstream; here A, B are taken as given.
    """
    n = abs(int(n))
    s2 = (A - B) * (A + B)
    s = np.sqrt(s2)
    t = B / (A + s)
    return math.pi * t**n * ((n * n - 1.0) * s2 + 3.0 * A * (n * s + A)) / (s2 * s2 * s)


def _potential_fixed_nodes(kk, ll, z, w0, c6, n_nodes):
    k1, k2, k3, k4 = kk
    l1, l2, l3, l4 = ll
    n = abs(k4 - k1)
    r, w = _radial_nodes(w0, n_nodes)
    R14 = lg_radial(LGMode(k1, l1, w0), r) * lg_radial(LGMode(k4, l4, w0), r)
    R23 = lg_radial(LGMode(k2, l2, w0), r) * lg_radial(LGMode(k3, l3, w0), r)
    f1 = w * r * R14
    f2 = w * r * R23
    rr, rp = np.meshgrid(r, r, indexing="ij")
    A = rr**2 + rp**2 + z**2
    B = 2.0 * rr * rp
    # s^2 in cancellation-free factored form
    s2 = ((rr - rp) ** 2 + z**2) * ((rr + rp) ** 2 + z**2)
    s = np.sqrt(s2)
    t = B / (A + s)
    kern = math.pi * t**n * ((n * n - 1.0) * s2 + 3.0 * A * (n * s + A)) / (s2 * s2 * s)
    return c6 * 2.0 * math.pi * float(f1 @ kern @ f2)


def effective_potential(
    k_indices,
    l_indices,
    z: float,
    w0: float = 1.0,
    c6: float = 1.0,
    rtol: float = 1e-6,
    n_start: int = 64,
    n_max: int = 4096,
) -> float:
    """Effective 1D potential V~(z) between transverse-mode pairs.

    Returns exactly 0 (no quadrature) when the angular selection rule
    k1 - k4 != k3 - k2 is violated.  Radial node counts are doubled until
    the relative change is below ``rtol``; non-convergence is signaled.
    """
    if z <= 0:
        raise ConfigError("effective_potential requires z > 0")
    k1, k2, k3, k4 = (int(k) for k in k_indices)
    if k1 - k4 != k3 - k2:
        return 0.0
    prev = None
    n = n_start
    while n <= n_max:
        val = _potential_fixed_nodes((k1, k2, k3, k4), tuple(l_indices), z, w0, c6, n)
        if prev is not None:
            scale = max(abs(val), abs(prev))
            if scale == 0.0 or abs(val - prev) <= rtol * scale:
                return val
        prev = val
        n *= 2
    raise NumericsError(
        f"radial quadrature did not converge to rtol={rtol} by {n_max} nodes "
        f"(z={z}, k={k_indices}, l={l_indices})"
    )


@dataclass
class EffectivePotentialTable:
    """Tabulated V~(z) for one index tuple, with optional power-law fit."""

    k_indices: tuple
    l_indices: tuple
    z_grid: np.ndarray        # units of w0
    values: np.ndarray
    w0: float = 1.0
    c6: float = 1.0
    fit: "PowerLawFit | None" = None

    def local_log_slope(self) -> np.ndarray:
        """Centered d ln|V| / d ln z on the table grid."""
        lnz = np.log(self.z_grid)
        lnv = np.log(np.abs(self.values))
        return np.gradient(lnv, lnz)


def potential_table(
    k_indices, l_indices, z_grid, w0: float = 1.0, c6: float = 1.0, **kw
) -> EffectivePotentialTable:
    z_grid = np.asarray(z_grid, dtype=float)
    vals = np.array(
        [effective_potential(k_indices, l_indices, z, w0, c6, **kw) for z in z_grid]
    )
    if not np.all(np.isfinite(vals)):
        raise NumericsError("non-finite potential values in table")
    return EffectivePotentialTable(
        tuple(k_indices), tuple(l_indices), z_grid, vals, w0, c6
    )


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    amplitude: float
    residual_rms: float
    window: tuple
    n_points: int


def fit_power_law(table: EffectivePotentialTable, window) -> PowerLawFit:
    """Least-squares log-log slope of the tabulated potential in a z window."""
    zmin, zmax = window
    sel = (table.z_grid >= zmin) & (table.z_grid <= zmax)
    z = table.z_grid[sel]
    v = table.values[sel]
    if len(z) < 8:
        raise ConfigError(f"need >= 8 grid points in window, have {len(z)}")
    if np.any(v == 0) or np.any(np.sign(v) != np.sign(v[0])):
        raise NumericsError("sign change inside fit window")
    lnz, lnv = np.log(z), np.log(np.abs(v))
    slope, intercept = np.polyfit(lnz, lnv, 1)
    resid = lnv - (slope * lnz + intercept)
    return PowerLawFit(
        exponent=float(slope),
        amplitude=float(np.sign(v[0]) * np.exp(intercept)),
        residual_rms=float(np.sqrt(np.mean(resid**2))),
        window=(float(zmin), float(zmax)),
        n_points=int(len(z)),
    )


def suppression_report(
    z_eval: float, w0: float = 1.0, l_cap: int = 3, c6: float = 1.0
) -> dict:
    """Ratios V~_{l1 l2 0 0} / V~_{0 0 0 0} at one separation (z > w0)."""
    if z_eval <= w0:
        raise ConfigError("suppression report is meaningful for z > w0")
    forward = effective_potential((0, 0, 0, 0), (0, 0, 0, 0), z_eval, w0, c6)
    out = {}
    for l1 in range(l_cap + 1):
        for l2 in range(l_cap + 1):
            v = effective_potential((0, 0, 0, 0), (l1, l2, 0, 0), z_eval, w0, c6)
            out[(l1, l2)] = v / forward
    return out
