"""The n-body action on symmetry-constrained Fourier loops, its gradient,
and a projected steepest-descent minimizer.

Unit masses, period 1, unit coupling.  The kinetic part is summed in
closed form from the coefficients; the pairwise potential 1/r^a is
integrated by the uniform trapezoid rule, which is spectrally accurate for
smooth periodic integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .groups import SymmetryGroupSpec
from .loops import (
    ConstraintMask,
    FourierLoop,
    Trajectory,
    constraint_mask,
    mask_violation,
    project_coefficients,
    sample_trajectory,
)

__all__ = [
    "PotentialSpec",
    "MinimizeOptions",
    "MinimizeResult",
    "Diagnostics",
    "CollisionError",
    "MaskViolationError",
    "action",
    "kinetic_energy",
    "gradient",
    "minimize",
    "diagnostics",
    "default_samples",
]

COLLISION_TOL = 1e-9


class CollisionError(RuntimeError):
    """Two particles got within the collision tolerance."""


class MaskViolationError(ValueError):
    """An initial loop does not satisfy its constraint mask."""


@dataclass(frozen=True)
class PotentialSpec:
    """Pairwise potential 1/r^a; a = 1 is Newtonian, a >= 2 strong force.

    weight scales the whole potential term (weight=0 isolates the kinetic
    part for testing)."""

    a: float = 1.0
    weight: float = 1.0

    def __post_init__(self):
        if self.a < 1:
            raise ValueError(f"need exponent a >= 1, got {self.a}")


def default_samples(R: int) -> int:
    return 8 * (2 * R + 1)


@lru_cache(maxsize=16)
def _basis(n: int, R: int, M: int) -> np.ndarray:
    """exp(2*pi*i*r*(t_m + j/n)) with shape (n, M, 2R+1)."""
    t = np.arange(M) / M
    rs = np.arange(-R, R + 1)
    out = np.empty((n, M, 2 * R + 1), dtype=complex)
    for j in range(n):
        out[j] = np.exp(2j * math.pi * np.outer(t + j / n, rs))
    return out


def kinetic_energy(loop: FourierLoop) -> float:
    rs = loop.indices
    return 0.5 * loop.n * float(np.sum((2 * math.pi * rs) ** 2 * np.abs(loop.coeffs) ** 2))


def _pair_terms(loop: FourierLoop, M: int):
    E = _basis(loop.n, loop.R, M)
    pos = E @ loop.coeffs  # (n, M)
    pairs = [(i, j) for i in range(loop.n) for j in range(i + 1, loop.n)]
    seps = np.array([pos[i] - pos[j] for i, j in pairs])  # (npairs, M)
    dists = np.abs(seps)
    return E, pairs, seps, dists


def action(loop: FourierLoop, pot: PotentialSpec, M: int) -> float:
    """Total action of the loop: closed-form kinetic part plus the
    quadrature of the pairwise potential."""
    kin = kinetic_energy(loop)
    if pot.weight == 0.0:
        return kin
    _, _, _, dists = _pair_terms(loop, M)
    dmin = float(dists.min()) if dists.size else math.inf
    if dmin < COLLISION_TOL:
        raise CollisionError(f"pairwise distance {dmin:.3e} below {COLLISION_TOL}")
    return kin + pot.weight * float(np.sum(dists ** -pot.a)) / M


def gradient(loop: FourierLoop, pot: PotentialSpec, mask: ConstraintMask, M: int) -> np.ndarray:
    """Gradient with respect to (Re zeta_r, Im zeta_r), packed as the
    complex array d/dRe + i*d/dIm and projected onto the masked subspace."""
    rs = loop.indices
    grad = loop.n * (2 * math.pi * rs) ** 2 * loop.coeffs  # kinetic part
    if pot.weight != 0.0:
        E, pairs, seps, dists = _pair_terms(loop, M)
        dmin = float(dists.min()) if dists.size else math.inf
        if dmin < COLLISION_TOL:
            raise CollisionError(f"pairwise distance {dmin:.3e} below {COLLISION_TOL}")
        co = np.zeros(2 * loop.R + 1, dtype=complex)
        for (i, j), w, d in zip(pairs, seps, dists):
            factor = (-pot.a) * d ** (-pot.a - 2) * np.conj(w)  # (M,)
            co += factor @ (E[i] - E[j])
        grad = grad + (pot.weight / M) * np.conj(co)
    return project_coefficients(grad, mask)


def grad_norm(g: np.ndarray) -> float:
    return float(np.linalg.norm(g))


@dataclass(frozen=True)
class MinimizeOptions:
    M: Optional[int] = None          # defaults to 8*(2R+1)
    max_iter: int = 20000
    grad_tol: float = 1e-6
    step_init: float = 1e-2
    step_growth: float = 2.0
    step_max: float = 1.0
    step_min: float = 1e-16
    armijo: float = 1e-4
    shrink: float = 0.5
    min_dist_guard: float = 1e-3
    # when set, additionally cap each step so the largest possible particle
    # displacement stays below this fraction of the current minimum pairwise
    # distance; rules out steps that tunnel a pair through a collision
    max_move_fraction: Optional[float] = None
    # opt-in diagonal scaling by the exact kinetic curvature n*(2*pi*r)^2;
    # off by default, plain steepest descent
    precondition: bool = False
    track_history: bool = False


@dataclass(frozen=True)
class MinimizeResult:
    loop: FourierLoop
    action: float
    grad_norm: float
    min_distance: float
    iterations: int
    converged: bool
    history: Optional[tuple] = None  # accepted-step action values, if tracked

    def to_dict(self) -> dict:
        from .loops import loop_to_dict

        return {
            "action": self.action,
            "grad_norm": self.grad_norm,
            "min_distance": self.min_distance,
            "iterations": self.iterations,
            "converged": self.converged,
            "loop": loop_to_dict(self.loop),
        }


def _min_distance(loop: FourierLoop, M: int) -> float:
    _, _, _, dists = _pair_terms(loop, M)
    return float(dists.min()) if dists.size else math.inf


def minimize(init: FourierLoop, spec: SymmetryGroupSpec, pot: PotentialSpec,
             opts: MinimizeOptions = MinimizeOptions()) -> MinimizeResult:
    """Projected steepest descent with Armijo backtracking.

    Every iterate satisfies the mask exactly (re-projected each step); a
    trial step that drops the minimum pairwise distance below the guard is
    rejected and shortened.
    """
    mask = constraint_mask(spec, init.R)
    if not mask.allowed:
        raise MaskViolationError("mask admits no nonzero coefficients at this truncation")
    if mask_violation(init, mask) > 1e-10:
        raise MaskViolationError("initial loop violates the constraint mask")
    M = opts.M if opts.M is not None else default_samples(init.R)

    x = init.with_coeffs(project_coefficients(init.coeffs, mask))
    if _min_distance(x, M) < opts.min_dist_guard:
        raise CollisionError("initial loop violates the minimum-distance guard")

    f = action(x, pot, M)
    step = opts.step_init
    iterations = 0
    history = [f] if opts.track_history else None
    scaling = None
    if opts.precondition:
        rs = np.arange(-init.R, init.R + 1)
        scaling = 1.0 / (1.0 + init.n * (2 * math.pi * rs) ** 2)
    g = gradient(x, pot, mask, M)
    gn = grad_norm(g)
    while iterations < opts.max_iter and gn >= opts.grad_tol:
        iterations += 1
        if scaling is None:
            direction = g
            slope = gn * gn
        else:
            direction = scaling * g
            slope = float(np.sum(scaling * np.abs(g) ** 2))
        accepted = False
        s = step
        if opts.max_move_fraction is not None:
            # |delta z_j(t)| <= sum_r |delta zeta_r| = s * ||direction||_1
            d1 = float(np.sum(np.abs(direction)))
            if d1 > 0:
                cap = opts.max_move_fraction * _min_distance(x, M) / d1
                s = min(s, cap)
        while s >= opts.step_min:
            trial = x.with_coeffs(project_coefficients(x.coeffs - s * direction, mask))
            if _min_distance(trial, M) < opts.min_dist_guard:
                s *= opts.shrink
                continue
            f_trial = action(trial, pot, M)
            # strict decrease guards against no-op acceptance once the
            # Armijo margin underflows the floating-point resolution of f
            if f_trial < f and f_trial <= f - opts.armijo * s * slope:
                x, f = trial, f_trial
                step = min(s * opts.step_growth, opts.step_max)
                accepted = True
                break
            s *= opts.shrink
        if not accepted:
            break  # no admissible decrease left at this resolution
        if history is not None:
            history.append(f)
        g = gradient(x, pot, mask, M)
        gn = grad_norm(g)

    return MinimizeResult(
        loop=x,
        action=f,
        grad_norm=gn,
        min_distance=_min_distance(x, M),
        iterations=iterations,
        converged=bool(gn < opts.grad_tol),
        history=None if history is None else tuple(history),
    )


@dataclass(frozen=True)
class Diagnostics:
    angular_momentum_mean: float
    angular_momentum_max_deviation: float
    min_pairwise_distance: float

    def to_dict(self) -> dict:
        return {
            "angular_momentum_mean": self.angular_momentum_mean,
            "angular_momentum_max_deviation": self.angular_momentum_max_deviation,
            "min_pairwise_distance": self.min_pairwise_distance,
        }


def diagnostics(traj: Trajectory) -> Diagnostics:
    """Planar angular momentum L(t) = sum_j Im(conj(z_j) zdot_j) per sample,
    reported as mean and max deviation, plus the global minimum separation."""
    if traj.velocities is None:
        raise ValueError("trajectory carries no velocities")
    L = np.sum(np.imag(np.conj(traj.positions) * traj.velocities), axis=0)
    mean = float(np.mean(L))
    return Diagnostics(
        angular_momentum_mean=mean,
        angular_momentum_max_deviation=float(np.max(np.abs(L - mean))),
        min_pairwise_distance=traj.min_pairwise_distance(),
    )
