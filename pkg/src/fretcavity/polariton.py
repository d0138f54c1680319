"""Single-excitation donor-cavity-acceptor polaritons and Hopfield weights."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from typing import NamedTuple

import numpy as np
import pandas as pd
from scipy.optimize import brentq

from .exceptions import NoConvergenceError, ZeroDetuningError
from .models import PolaritonSet
from .operators import eig_hermitian

_LOGGER = logging.getLogger(__name__)

BRANCHES = ("L", "M", "U")
COMPONENTS = ("D", "C", "A")


class BarePolaritons(NamedTuple):
    """Two-mode branches: donor-cavity (E_D) and cavity-acceptor (E_A)."""

    donor_minus: float
    donor_plus: float
    acceptor_minus: float
    acceptor_plus: float


def single_excitation_hamiltonian(
    Delta: float, delta: float, g_D: float, g_A: float
) -> np.ndarray:
    """H in the basis (|D>, |C>, |A>), acceptor frame."""
    return np.array(
        [[Delta, g_D, 0.0], [g_D, delta, g_A], [0.0, g_A, 0.0]], dtype=float
    )


def characteristic_polynomial(
    energy: float, Delta: float, delta: float, g_D: float, g_A: float
) -> float:
    """det(H - E) written out; its roots are the polariton energies."""
    return -(
        g_A**2 * (Delta - energy)
        + energy * (-(g_D**2) + (delta - energy) * (Delta - energy))
    )


def polariton_modes(Delta: float, delta: float, g_D: float, g_A: float) -> PolaritonSet:
    """Energies (ascending) and Hopfield rows |alpha_P{D,C,A}|^2 for P = L, M, U.

    Exact degeneracies are ordered by energy, then lexicographically by
    Hopfield row.
    """
    energies, vectors = eig_hermitian(
        single_excitation_hamiltonian(Delta, delta, g_D, g_A)
    )
    weights = np.abs(vectors.T) ** 2
    order = sorted(
        range(3),
        key=lambda k: (round(float(energies[k]), 12), tuple(weights[k])),
    )
    return PolaritonSet(
        energies=tuple(float(energies[k]) for k in order),
        hopfield=tuple(tuple(float(w) for w in weights[k]) for k in order),
    )


def bare_polaritons(Delta: float, delta: float, g_D: float, g_A: float) -> BarePolaritons:
    """2E_D = Delta + delta -+ sqrt(4 g_D^2 + (Delta - delta)^2), 2E_A = delta -+ sqrt(4 g_A^2 + delta^2)."""
    donor_root = math.sqrt(4.0 * g_D**2 + (Delta - delta) ** 2)
    acceptor_root = math.sqrt(4.0 * g_A**2 + delta**2)
    return BarePolaritons(
        donor_minus=0.5 * (Delta + delta - donor_root),
        donor_plus=0.5 * (Delta + delta + donor_root),
        acceptor_minus=0.5 * (delta - acceptor_root),
        acceptor_plus=0.5 * (delta + acceptor_root),
    )


def optimal_cavity_detuning(Delta: float, g_D: float, g_A: float) -> float:
    """delta_opt = (g_D^2 - g_A^2)/Delta + g_A Delta/(g_A + g_D).

    At Delta = 0 the symmetric case g_D = g_A has the limit 0.

    Raises:
        ZeroDetuningError: Delta = 0 with g_D != g_A
    """
    if Delta == 0.0:
        if g_D == g_A:
            return 0.0
        raise ZeroDetuningError(g_D, g_A)
    return (g_D**2 - g_A**2) / Delta + g_A * Delta / (g_A + g_D)


def _middle_imbalance(delta: float, Delta: float, g_D: float, g_A: float) -> float:
    donor, _, acceptor = polariton_modes(Delta, delta, g_D, g_A).middle
    return donor - acceptor


def hopfield_crossing(
    Delta: float,
    g_D: float,
    g_A: float,
    lo: float | None = None,
    hi: float | None = None,
    points: int = 401,
) -> float:
    """Cavity detuning where the middle polariton has equal donor and acceptor weight.

    Without a bracket the window +-4(|Delta| + |g_D| + |g_A|) is scanned for
    the first sign change, which is then refined with Brent's method.

    Raises:
        NoConvergenceError: no sign change in the window
    """
    span = 4.0 * (abs(Delta) + abs(g_D) + abs(g_A)) + 1.0
    lo = -span if lo is None else lo
    hi = span if hi is None else hi
    grid = np.linspace(lo, hi, points)
    values = np.array([_middle_imbalance(d, Delta, g_D, g_A) for d in grid])
    changes = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) <= 0)[0]
    if changes.size == 0:
        raise NoConvergenceError(
            f"No Hopfield crossing for delta in [{lo:.4g}, {hi:.4g}]"
        )
    k = int(changes[0])
    if values[k] == 0.0:
        return float(grid[k])
    root = brentq(
        _middle_imbalance, grid[k], grid[k + 1], args=(Delta, g_D, g_A), xtol=1e-13
    )
    _LOGGER.debug("Hopfield crossing at delta=%.12g", root)
    return float(root)


def polariton_sweep(
    Delta: float, g_D: float, g_A: float, deltas: Iterable[float]
) -> pd.DataFrame:
    """One row per cavity detuning: energies E_L, E_M, E_U and weights such as M_D."""
    rows = []
    for delta in deltas:
        modes = polariton_modes(Delta, delta, g_D, g_A)
        row = {"delta": float(delta)}
        for branch, energy, weights in zip(BRANCHES, modes.energies, modes.hopfield):
            row[f"E_{branch}"] = energy
            row.update({f"{branch}_{c}": w for c, w in zip(COMPONENTS, weights)})
        rows.append(row)
    return pd.DataFrame(rows)
