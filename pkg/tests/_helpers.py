"""Shared oracles and grids for the test suite.

The numerical gradient here is the independent check for the analytic
gradient: plain central differences of the raw action, kept free of any
code shared with the implementation under test.
"""

from __future__ import annotations

import math

import numpy as np

from choreosym.action import PotentialSpec, action
from choreosym.groups import SymmetryGroupSpec
from choreosym.loops import FourierLoop, constraint_mask, project_coefficients, random_loop


def numerical_gradient(loop: FourierLoop, pot: PotentialSpec, M: int, h: float = 1e-6) -> np.ndarray:
    """Central finite differences of the action in every (Re, Im) coordinate,
    packed the same way as the analytic gradient."""
    base = loop.coeffs
    out = np.zeros(len(base), dtype=complex)
    for idx in range(len(base)):
        for part in (1.0, 1.0j):
            cp = base.copy()
            cm = base.copy()
            cp[idx] += h * part
            cm[idx] -= h * part
            fp = action(FourierLoop(loop.n, loop.R, cp), pot, M)
            fm = action(FourierLoop(loop.n, loop.R, cm), pot, M)
            d = (fp - fm) / (2 * h)
            out[idx] += d if part == 1.0 else 1j * d
    return out


def family_spec(family: str, n: int, k: int | None = None, l: int = 1) -> SymmetryGroupSpec:
    if family in ("C", "D"):
        return SymmetryGroupSpec(family, n, k, l)
    if family == "Dinf":
        return SymmetryGroupSpec("Dinf", n, None, l)
    return SymmetryGroupSpec(family, n)


# one representative spec per family, all valid for odd n
FIVE_FAMILIES = [
    ("C", dict(k=3, l=1)),
    ("D", dict(k=4, l=1)),
    ("Cprime", {}),
    ("Dprime1", {}),
    ("Dprime2", {}),
]


def masked_random_loop(spec: SymmetryGroupSpec, R: int, seed: int) -> FourierLoop:
    rng = np.random.default_rng(seed)
    return random_loop(constraint_mask(spec, R), rng)


def circular(n: int, R: int, radius: float = 1.0, speed: int = 1) -> FourierLoop:
    arr = np.zeros(2 * R + 1, dtype=complex)
    arr[speed + R] = radius
    return FourierLoop(n, R, arr)


CRITICAL_RADIUS_3 = (math.sqrt(3) / (12 * math.pi ** 2)) ** (1.0 / 3.0)


def circular_action_3body(rho: float) -> float:
    """Closed form for the round 3-body loop with Newtonian potential:
    kinetic 6*pi^2*rho^2 plus three pairs at separation rho*sqrt(3)."""
    return 6 * math.pi ** 2 * rho ** 2 + math.sqrt(3) / rho
