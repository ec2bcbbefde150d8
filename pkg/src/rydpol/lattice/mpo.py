"""MPO for the hardcore-boson model with 1/r^6 interactions.

The pair potential is encoded as a sum of exponentials V(d) ~ sum_k c_k l_k^d
fitted on d = 1..d_max by non-negative least squares over a log-spaced grid of
decay rates (the function is completely monotone, so non-negative weights
suffice and keep the automaton stable).  The fit tolerance is relative.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import nnls

from ..errors import NumericsError
from .model import LatticeModel

__all__ = ["fit_exponentials", "build_mpo"]

# hardcore boson site operators
I2 = np.eye(2)
B = np.array([[0.0, 1.0], [0.0, 0.0]])     # <s'|b|s>
BD = B.T.copy()
NUM = np.diag([0.0, 1.0])


def fit_exponentials(dmax: int, rtol: float = 1e-9, amplitude: float = 1.0):
    """Fit amplitude/d^6 on d = 1..dmax by a non-negative exponential sum.

    Returns (lambdas, coefficients, max_relative_error).
    """
    d = np.arange(1, dmax + 1, dtype=float)
    f = d**-6.0
    for n_cand in (22, 26, 32, 44, 60, 90):
        t = np.geomspace(2e-2, 14.0, n_cand)
        lam = np.exp(-t)
        a = lam[None, :] ** d[:, None] / f[:, None]
        try:
            c, _ = nnls(a, np.ones_like(d), maxiter=20000)
        except RuntimeError:
            continue
        err = float(np.max(np.abs(a @ c - 1.0)))
        if err <= rtol:
            keep = c > 0
            return lam[keep], amplitude * c[keep], err
    raise NumericsError(
        f"exponential fit of 1/d^6 on [1,{dmax}] did not reach rtol={rtol}"
    )


def build_mpo(model: LatticeModel, fit_rtol: float = 1e-9,
              number_penalty: float | None = None):
    """Site MPO tensors W[a, b, s', s] for the open-boundary Hamiltonian.

    ``number_penalty`` adds lambda * (N_hat - N)^2, which vanishes identically
    on the target particle-number sector (energies there are unchanged) but
    pins the unsymmetric variational search to that sector.
    """
    if model.boundary != "open":
        raise NumericsError("MPO/DMRG path supports open boundaries")
    m = model.n_sites
    n = model.n_particles
    j_hop = model.hopping
    dmax = len(model.v_table)
    v1 = float(model.v_table[0]) if dmax else 0.0
    if dmax and v1 > 0:
        lam, coef, err = fit_exponentials(dmax, fit_rtol, amplitude=v1)
    else:
        lam, coef, err = np.empty(0), np.empty(0), 0.0
    if number_penalty is None:
        mean_spacing = max(1, round(m / n))
        number_penalty = 10.0 * (j_hop + model.v_of(mean_spacing))
    k = len(lam)
    pen = 3 + k
    dw = pen + 2
    f = dw - 1
    w = np.zeros((dw, dw, 2, 2))
    w[0, 0] = I2
    w[0, 1] = BD
    w[0, 2] = B
    w[0, f] = 2.0 * j_hop * NUM + number_penalty * (
        (1.0 - 2.0 * n) * NUM + (n**2 / m) * I2
    )
    w[1, f] = -j_hop * B
    w[2, f] = -j_hop * BD
    for i in range(k):
        w[0, 3 + i] = NUM
        w[3 + i, 3 + i] = lam[i] * I2
        w[3 + i, f] = coef[i] * lam[i] * NUM
    w[0, pen] = NUM
    w[pen, pen] = I2
    w[pen, f] = 2.0 * number_penalty * NUM
    w[f, f] = I2

    ws = [w.copy() for _ in range(m)]
    ws[0] = w[0:1, :, :, :].copy()
    ws[-1] = ws[-1][:, f : f + 1, :, :].copy()
    return ws, {"n_exp": k, "fit_rel_error": err,
                "number_penalty": number_penalty}
