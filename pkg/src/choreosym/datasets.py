"""Bundled starting loops for the search command.

"fig8" is a sine-series fit of the classic three-body figure-eight orbit:
x(t) uses odd sine harmonics and y(t) even sine harmonics, which places it
exactly inside the D'(3,2) coefficient constraints.  "circular" is the
one-harmonic round loop.
"""

from __future__ import annotations

import numpy as np

from .groups import SpecError
from .loops import FourierLoop

__all__ = ["FIG8_X_SINES", "FIG8_Y_SINES", "figure_eight_loop", "circular_loop", "builtin_loop"]

FIG8_X_SINES = {1: 1.096, 5: -0.0252, 7: -0.0058}
FIG8_Y_SINES = {2: 0.3373, 4: 0.0557}


def figure_eight_loop(R: int = 7) -> FourierLoop:
    """Figure-eight coefficients for 3 bodies; needs R >= 7 to carry every
    fitted harmonic, smaller R truncates the tail."""
    coeffs = {}
    for r, amp in FIG8_X_SINES.items():
        if r <= R:
            coeffs[r] = coeffs.get(r, 0) + amp / 2j
            coeffs[-r] = coeffs.get(-r, 0) - amp / 2j
    for r, amp in FIG8_Y_SINES.items():
        if r <= R:
            coeffs[r] = coeffs.get(r, 0) + amp / 2
            coeffs[-r] = coeffs.get(-r, 0) - amp / 2
    return FourierLoop.from_coeff_dict(3, R, coeffs)


def circular_loop(n: int, R: int, radius: float = 1.0, speed: int = 1) -> FourierLoop:
    """The round loop zeta_speed = radius (unit circle traversed `speed`
    times per period)."""
    if not 1 <= speed <= R:
        raise SpecError(f"speed {speed} outside 1..R={R}")
    arr = np.zeros(2 * R + 1, dtype=complex)
    arr[speed + R] = radius
    return FourierLoop(n, R, arr)


def builtin_loop(name: str, n: int, R: int) -> FourierLoop:
    if name == "fig8":
        if n != 3:
            raise SpecError(f"the figure-eight dataset is a 3-body loop, got n={n}")
        return figure_eight_loop(R)
    if name == "circular":
        return circular_loop(n, R)
    raise SpecError(f"unknown builtin dataset {name!r} (have: fig8, circular)")
