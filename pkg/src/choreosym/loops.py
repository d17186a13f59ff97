"""Truncated Fourier loops, per-symmetry coefficient constraints and
sampled trajectories.

A choreography is stored through the single underlying curve
z(t) = sum_r zeta_r exp(2*pi*i*r*t); particle j follows z(t + (j-1)/n).
Storing the curve only bakes the cyclic choreography symmetry in exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .groups import (
    GroupElement,
    SymmetryGroup,
    SymmetryGroupSpec,
    SpecError,
    invert_perm,
)

__all__ = [
    "FourierLoop",
    "ConstraintMask",
    "Trajectory",
    "MaskError",
    "SchemaError",
    "constraint_mask",
    "project",
    "project_coefficients",
    "mask_dimension",
    "mask_violation",
    "apply_element",
    "reynolds_dimension",
    "evaluate_curve",
    "sample_trajectory",
    "symmetry_residual",
    "element_residual",
    "random_loop",
    "loop_to_dict",
    "loop_from_dict",
    "trajectory_to_dict",
    "trajectory_from_dict",
]

TWO_PI = 2.0 * math.pi


class MaskError(ValueError):
    """Constraint mask cannot be built or applied."""


class SchemaError(ValueError):
    """A JSON document does not match the expected schema."""

    def __init__(self, field: str, message: str):
        super().__init__(f"field {field!r}: {message}")
        self.field = field


class FourierLoop:
    """Complex coefficients zeta_r, |r| <= R, of the underlying curve.

    Harmonics at multiples of n (including r = 0) are zeroed on
    construction; they cannot appear for a curve whose n translates have
    center of mass at the origin.
    """

    __slots__ = ("n", "R", "coeffs")

    def __init__(self, n: int, R: int, coeffs):
        if not isinstance(n, int) or n < 3:
            raise SpecError(f"need n >= 3, got {n}")
        if not isinstance(R, int) or R < 1:
            raise SpecError(f"need truncation R >= 1, got {R}")
        arr = np.asarray(coeffs, dtype=complex).copy()
        if arr.shape != (2 * R + 1,):
            raise SpecError(f"need {2 * R + 1} coefficients for R={R}, got shape {arr.shape}")
        for r in range(-R, R + 1):
            if r % n == 0:
                arr[r + R] = 0.0
        arr.flags.writeable = False
        self.n = n
        self.R = R
        self.coeffs = arr

    @classmethod
    def zeros(cls, n: int, R: int) -> "FourierLoop":
        return cls(n, R, np.zeros(2 * R + 1, dtype=complex))

    @classmethod
    def from_coeff_dict(cls, n: int, R: int, values: dict) -> "FourierLoop":
        arr = np.zeros(2 * R + 1, dtype=complex)
        for r, v in values.items():
            if abs(r) > R:
                raise SpecError(f"harmonic {r} outside truncation R={R}")
            arr[r + R] = v
        return cls(n, R, arr)

    def coeff(self, r: int) -> complex:
        if abs(r) > self.R:
            return 0.0
        return complex(self.coeffs[r + self.R])

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.R, self.R + 1)

    def scaled(self, factor: float) -> "FourierLoop":
        return FourierLoop(self.n, self.R, self.coeffs * factor)

    def with_coeffs(self, coeffs) -> "FourierLoop":
        return FourierLoop(self.n, self.R, coeffs)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __repr__(self) -> str:
        nz = int(np.count_nonzero(self.coeffs))
        return f"FourierLoop(n={self.n}, R={self.R}, {nz} nonzero coeffs)"


# ---------------------------------------------------------------------------
# constraint masks

@dataclass(frozen=True)
class ConstraintMask:
    """Allowed harmonic indices plus the real-linear coupling relations.

    Relation kinds: ("real", r) and ("imag", r) constrain a single
    coefficient; ("negate", r) couples the pair as zeta_{-r} = -zeta_r;
    ("conj_alt", r) couples it as zeta_{-r} = (-1)^r * conj(zeta_r).
    """

    n: int
    R: int
    family: str
    allowed: frozenset
    relations: tuple


def constraint_mask(spec: SymmetryGroupSpec, R: int) -> ConstraintMask:
    spec = spec.canonical()
    spec.validate()
    if spec.family == "Dinf":
        raise MaskError(
            "circular choreographies have no finite mask; parametrize them "
            "directly with a single harmonic"
        )
    if R < 1:
        raise MaskError(f"need R >= 1, got {R}")
    n = spec.n

    def base_ok(r: int) -> bool:
        return r % n != 0

    if spec.family in ("C", "D"):
        allowed = frozenset(
            r for r in range(-R, R + 1) if base_ok(r) and (r - spec.l) % spec.k == 0
        )
    else:
        allowed = frozenset(r for r in range(-R, R + 1) if base_ok(r))

    relations: list[tuple[str, int]] = []
    if spec.family == "D":
        relations += [("real", r) for r in sorted(allowed)]
    elif spec.family == "Cprime":
        relations += [("conj_alt", r) for r in sorted(allowed) if r > 0]
    elif spec.family == "Dprime1":
        relations += [("negate", r) for r in sorted(allowed) if r > 0]
    elif spec.family == "Dprime2":
        relations += [("negate", r) for r in sorted(allowed) if r > 0]
        for r in sorted(allowed):
            relations.append(("real", r) if r % 2 == 0 else ("imag", r))
    return ConstraintMask(n, R, spec.family, allowed, tuple(relations))


def project_coefficients(coeffs: np.ndarray, mask: ConstraintMask) -> np.ndarray:
    """Orthogonal projection of a raw coefficient vector onto the masked
    subspace (real-linear, idempotent, non-expansive)."""
    R = mask.R
    out = np.asarray(coeffs, dtype=complex).copy()
    for r in range(-R, R + 1):
        if r not in mask.allowed:
            out[r + R] = 0.0
    for kind, r in mask.relations:
        if kind == "negate":
            a, b = out[r + R], out[-r + R]
            out[r + R] = (a - b) / 2
            out[-r + R] = (b - a) / 2
        elif kind == "conj_alt":
            eps = -1.0 if r % 2 else 1.0
            a, b = out[r + R], out[-r + R]
            out[r + R] = (a + eps * np.conj(b)) / 2
            out[-r + R] = (b + eps * np.conj(a)) / 2
    for kind, r in mask.relations:
        if kind == "real":
            out[r + R] = out[r + R].real
        elif kind == "imag":
            out[r + R] = 1j * out[r + R].imag
    return out


def project(loop: FourierLoop, mask: ConstraintMask) -> FourierLoop:
    if loop.n != mask.n:
        raise MaskError(f"particle counts differ: {loop.n} vs {mask.n}")
    if loop.R != mask.R:
        raise MaskError(f"truncations differ: {loop.R} vs {mask.R}")
    return loop.with_coeffs(project_coefficients(loop.coeffs, mask))


def mask_violation(loop: FourierLoop, mask: ConstraintMask) -> float:
    """Max-norm distance of a loop from its projection."""
    return float(np.max(np.abs(loop.coeffs - project_coefficients(loop.coeffs, mask))))


def _real_operator(n_coeffs: int, op) -> np.ndarray:
    """Matrix of a real-linear map on C^N in the basis (Re_r, Im_r)."""
    mat = np.zeros((2 * n_coeffs, 2 * n_coeffs))
    for j in range(n_coeffs):
        for part, vec in ((0, 1.0), (1, 1.0j)):
            e = np.zeros(n_coeffs, dtype=complex)
            e[j] = vec
            out = op(e)
            mat[0::2, 2 * j + part] = out.real
            mat[1::2, 2 * j + part] = out.imag
    return mat


def mask_dimension(mask: ConstraintMask) -> int:
    """Real dimension of the masked subspace (trace of the projector)."""
    N = 2 * mask.R + 1
    proj = _real_operator(N, lambda v: project_coefficients(v, mask))
    return int(round(np.trace(proj)))


# ---------------------------------------------------------------------------
# group action on coefficients

def apply_element(g: GroupElement, loop: FourierLoop) -> FourierLoop:
    """Coefficients of the underlying curve of g applied to the loop.

    Exact on the truncated series: each input harmonic maps to a single
    output harmonic of the same absolute order.
    """
    if g.n != loop.n:
        raise SpecError(f"particle counts differ: {g.n} vs {loop.n}")
    n, R = loop.n, loop.R
    eps = -1 if g.rev else 1
    m_hat = Fraction(g.perm.index(0), n)  # curve offset of the new particle 1
    phase0 = np.exp(2j * math.pi * float(g.rot))
    out = np.zeros(2 * R + 1, dtype=complex)
    rs = np.arange(-R, R + 1)
    base = float(m_hat - eps * g.shift)
    if not g.refl:
        phases = phase0 * np.exp(2j * math.pi * rs * base)
        out[(eps * rs) + R] = phases * loop.coeffs
    else:
        phases = phase0 * np.exp(-2j * math.pi * rs * base)
        out[(-eps * rs) + R] = phases * np.conj(loop.coeffs)
    return loop.with_coeffs(out)


def reynolds_dimension(group: SymmetryGroup, R: int) -> int:
    """Dimension of the fixed subspace of the group action on truncated
    coefficient space, via the group-average projector."""
    elements = group.require_finite()
    n = group.n
    N = 2 * R + 1
    template = FourierLoop.zeros(n, R)

    def average(vec: np.ndarray) -> np.ndarray:
        acc = np.zeros(N, dtype=complex)
        probe = template.with_coeffs(vec)
        for g in elements:
            acc += apply_element(g, probe).coeffs
        return acc / len(elements)

    mat = _real_operator(N, average)
    # the average over a finite group is idempotent, so rank = trace
    return int(round(np.trace(mat)))


# ---------------------------------------------------------------------------
# sampling

def evaluate_curve(loop: FourierLoop, times: np.ndarray) -> np.ndarray:
    """z(t) on an arbitrary time array, by direct summation."""
    t = np.asarray(times, dtype=float)
    rs = loop.indices
    return np.exp(2j * math.pi * np.outer(t, rs)) @ loop.coeffs


def evaluate_curve_derivative(loop: FourierLoop, times: np.ndarray) -> np.ndarray:
    t = np.asarray(times, dtype=float)
    rs = loop.indices
    return np.exp(2j * math.pi * np.outer(t, rs)) @ (2j * math.pi * rs * loop.coeffs)


class Trajectory:
    """Positions (and optionally velocities) of all n particles on the
    uniform grid t_m = m/M."""

    __slots__ = ("n", "M", "positions", "velocities")

    def __init__(self, n: int, M: int, positions, velocities=None):
        if not isinstance(n, int) or n < 3:
            raise SpecError(f"need n >= 3, got {n}")
        pos = np.asarray(positions, dtype=complex)
        if pos.shape != (n, M):
            raise SpecError(f"positions must have shape ({n},{M}), got {pos.shape}")
        self.n = n
        self.M = M
        self.positions = pos
        self.velocities = None if velocities is None else np.asarray(velocities, dtype=complex)

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.M) / self.M

    def min_pairwise_distance(self) -> float:
        best = math.inf
        for i in range(self.n):
            for j in range(i + 1, self.n):
                d = np.min(np.abs(self.positions[i] - self.positions[j]))
                best = min(best, float(d))
        return best

    def is_collision_free(self, tol: float = 1e-9) -> bool:
        return self.min_pairwise_distance() > tol

    def with_spectral_velocities(self) -> "Trajectory":
        """Fill velocities by spectral differentiation of the samples."""
        if self.velocities is not None:
            return self
        M = self.M
        freqs = np.fft.fftfreq(M, d=1.0 / M)  # signed integer frequencies
        if M % 2 == 0:
            freqs[M // 2] = 0.0  # drop the unmatched Nyquist bin
        vel = np.fft.ifft(np.fft.fft(self.positions, axis=1) * (2j * math.pi * freqs), axis=1)
        return Trajectory(self.n, M, self.positions, vel)

    def rotated(self, angle: float) -> "Trajectory":
        phase = np.exp(1j * angle)
        vel = None if self.velocities is None else self.velocities * phase
        return Trajectory(self.n, self.M, self.positions * phase, vel)


def sample_trajectory(loop: FourierLoop, M: int) -> Trajectory:
    """Sample all particles on M uniform times; velocities are the exact
    derivatives of the truncated series."""
    if M < 2 * (2 * loop.R + 1):
        raise SpecError(
            f"M={M} is below the sampling margin {2 * (2 * loop.R + 1)} for R={loop.R}"
        )
    n = loop.n
    t = np.arange(M) / M
    pos = np.empty((n, M), dtype=complex)
    vel = np.empty((n, M), dtype=complex)
    for j in range(n):
        shifted = t + j / n
        pos[j] = evaluate_curve(loop, shifted)
        vel[j] = evaluate_curve_derivative(loop, shifted)
    return Trajectory(n, M, pos, vel)


# ---------------------------------------------------------------------------
# symmetry residuals

def _apply_spatial_values(g: GroupElement, values: np.ndarray) -> np.ndarray:
    v = np.conj(values) if g.refl else values
    return np.exp(2j * math.pi * float(g.rot)) * v


def element_residual(loop: FourierLoop, g: GroupElement, M: int) -> float:
    """Max defect of z_{sigma(j)}(tau(t_m)) = rho(g) z_j(t_m) on the grid."""
    if g.n != loop.n:
        raise SpecError(f"particle counts differ: {g.n} vs {loop.n}")
    n = loop.n
    t = np.arange(M) / M
    eps = -1.0 if g.rev else 1.0
    tau_t = float(g.shift) + eps * t
    worst = 0.0
    for j in range(n):
        lhs = evaluate_curve(loop, tau_t + g.perm[j] / n)
        rhs = _apply_spatial_values(g, evaluate_curve(loop, t + j / n))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def symmetry_residual(loop: FourierLoop, group: SymmetryGroup, M: int) -> float:
    elements = group.require_finite()
    return max(element_residual(loop, g, M) for g in elements)


# ---------------------------------------------------------------------------
# random masked loops

def random_loop(mask: ConstraintMask, rng: np.random.Generator,
                target_min_distance: float = 0.5, attempts: int = 20) -> FourierLoop:
    """Random collision-free loop in the masked subspace, scaled so the
    smallest pairwise distance is target_min_distance."""
    if not mask.allowed:
        raise MaskError("mask admits no nonzero coefficients at this truncation")
    n, R = mask.n, mask.R
    M = 4 * (2 * R + 1)
    for _ in range(attempts):
        raw = rng.standard_normal(2 * R + 1) + 1j * rng.standard_normal(2 * R + 1)
        decay = 1.0 / (1.0 + np.arange(-R, R + 1) ** 2)
        coeffs = project_coefficients(raw * decay, mask)
        loop = FourierLoop(n, R, coeffs)
        if loop.norm() < 1e-12:
            continue
        d = sample_trajectory(loop, M).min_pairwise_distance()
        if d <= 1e-9:
            continue
        return loop.scaled(target_min_distance / d)
    raise MaskError("could not draw a collision-free masked loop")


# ---------------------------------------------------------------------------
# JSON round trips

def loop_to_dict(loop: FourierLoop) -> dict:
    return {
        "schema_version": 1,
        "n": loop.n,
        "R": loop.R,
        "coeffs": [[float(c.real), float(c.imag)] for c in loop.coeffs],
    }


def _require(doc: dict, field: str, kind) -> object:
    if field not in doc:
        raise SchemaError(field, "missing")
    value = doc[field]
    if kind is int and (not isinstance(value, int) or isinstance(value, bool)):
        raise SchemaError(field, f"expected an integer, got {type(value).__name__}")
    if kind is list and not isinstance(value, list):
        raise SchemaError(field, f"expected a list, got {type(value).__name__}")
    return value


def loop_from_dict(doc: dict) -> FourierLoop:
    n = _require(doc, "n", int)
    R = _require(doc, "R", int)
    coeffs = _require(doc, "coeffs", list)
    if not isinstance(n, int) or n < 3:
        raise SchemaError("n", f"need n >= 3, got {n}")
    if len(coeffs) != 2 * R + 1:
        raise SchemaError("coeffs", f"expected {2 * R + 1} entries, got {len(coeffs)}")
    arr = np.zeros(2 * R + 1, dtype=complex)
    for idx, pair in enumerate(coeffs):
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError("coeffs", f"entry {idx} is not a [re, im] pair")
        arr[idx] = complex(float(pair[0]), float(pair[1]))
    return FourierLoop(n, R, arr)


def trajectory_to_dict(traj: Trajectory) -> dict:
    return {
        "schema_version": 1,
        "n": traj.n,
        "M": traj.M,
        "positions": [
            [[float(z.real), float(z.imag)] for z in traj.positions[j]]
            for j in range(traj.n)
        ],
    }


def trajectory_from_dict(doc: dict) -> Trajectory:
    n = _require(doc, "n", int)
    M = _require(doc, "M", int)
    rows = _require(doc, "positions", list)
    if not isinstance(n, int) or n < 3:
        raise SchemaError("n", f"need n >= 3, got {n}")
    if len(rows) != n:
        raise SchemaError("positions", f"expected {n} particle rows, got {len(rows)}")
    pos = np.zeros((n, M), dtype=complex)
    for j, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != M:
            raise SchemaError("positions", f"particle {j} must have {M} samples")
        for m, pair in enumerate(row):
            if not isinstance(pair, list) or len(pair) != 2:
                raise SchemaError("positions", f"sample ({j},{m}) is not an [x, y] pair")
            pos[j, m] = complex(float(pair[0]), float(pair[1]))
    return Trajectory(n, M, pos)
