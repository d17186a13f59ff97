"""Topological fingerprints of collision-free trajectories: pairwise
winding profiles, winding about the origin, braid words with exponent sum
and permutation, and the exponent-sum congruences that obstruct adjacency
to larger symmetry types.

Sign convention: a counterclockwise relative rotation of a pair counts as
+1 winding, and the full-period word of the counterclockwise circular
choreography has exponent sum +n(n-1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .groups import SymmetryGroupSpec, SpecError, compose_perms
from .loops import Trajectory

__all__ = [
    "WindingProfile",
    "BraidWord",
    "BraidStats",
    "WindingResolutionError",
    "DegenerateCrossingError",
    "OriginHitError",
    "winding_profile",
    "winding_about_origin",
    "pairwise_winding",
    "extract_braid",
    "generator_word",
    "braid_stats",
    "adjacency_necessary",
]

INTEGRALITY_TOL = 1e-3
ORIGIN_TOL = 1e-9
MAX_BISECTIONS = 40


class WindingResolutionError(RuntimeError):
    """Angle totals failed the integrality check; resample with larger M."""


class DegenerateCrossingError(RuntimeError):
    """Crossing geometry too degenerate to resolve; a small rigid rotation
    of the whole trajectory (invariants are rotation-invariant) fixes it."""


class OriginHitError(RuntimeError):
    """A sample sits on the origin, so the winding there is undefined."""


# ---------------------------------------------------------------------------
# winding numbers

def _closed_winding(values: np.ndarray, what: str) -> int:
    """Winding of a sampled closed planar path around 0, from principal
    angle increments in (-pi, pi]."""
    if np.min(np.abs(values)) < ORIGIN_TOL:
        raise OriginHitError(f"{what} passes through the origin")
    ratios = np.roll(values, -1) / values
    total = float(np.sum(np.angle(ratios))) / (2 * math.pi)
    nearest = round(total)
    if abs(total - nearest) > INTEGRALITY_TOL:
        raise WindingResolutionError(
            f"winding of {what} is {total:.6f}, not an integer; "
            "resample with a larger M"
        )
    return int(nearest)


def pairwise_winding(traj: Trajectory, i: int, j: int) -> int:
    """Winding number of particle j around particle i over one period."""
    rel = traj.positions[j] - traj.positions[i]
    if np.min(np.abs(rel)) < ORIGIN_TOL:
        raise WindingResolutionError(
            f"particles {i + 1} and {j + 1} nearly collide; resample with a larger M"
        )
    return _closed_winding(rel, f"pair ({i + 1},{j + 1})")


@dataclass(frozen=True)
class WindingProfile:
    """Entries w_1..w_{n-1}; w_k is the winding of particle j around
    particle j+k, the same for every j."""

    entries: tuple[int, ...]

    def __iter__(self):
        return iter(self.entries)


def winding_profile(traj: Trajectory) -> WindingProfile:
    n = traj.n
    entries = []
    for k in range(1, n):
        values = {pairwise_winding(traj, j, (j + k) % n) for j in range(n)}
        if len(values) != 1:
            raise WindingResolutionError(
                f"offset-{k} windings disagree across particles: {sorted(values)}; "
                "resample with a larger M"
            )
        entries.append(values.pop())
    return WindingProfile(tuple(entries))


def winding_about_origin(traj: Trajectory) -> int:
    """Winding of particle 1's path about 0 over the full period."""
    return _closed_winding(traj.positions[0], "particle 1")


# ---------------------------------------------------------------------------
# braid words

@dataclass(frozen=True)
class BraidWord:
    """Signed generator letters (i, +-1), i in 1..n-1, with crossing times."""

    n: int
    letters: tuple[tuple[int, int], ...]
    times: tuple[float, ...]

    def __post_init__(self):
        if len(self.letters) != len(self.times):
            raise ValueError("letters and times differ in length")
        for i, s in self.letters:
            if not 1 <= i <= self.n - 1 or s not in (-1, 1):
                raise ValueError(f"bad letter ({i},{s}) for n={self.n}")

    def bar(self) -> "BraidWord":
        """Swap every overcrossing and undercrossing (flip all signs)."""
        return BraidWord(self.n, tuple((i, -s) for i, s in self.letters), self.times)

    def __len__(self) -> int:
        return len(self.letters)


@dataclass(frozen=True)
class BraidStats:
    chi: int
    perm: tuple[int, ...]


def braid_stats(word: BraidWord) -> BraidStats:
    """Exponent sum and the induced permutation under the left-action
    convention perm(b b') = perm(b) o perm(b')."""
    chi = sum(s for _, s in word.letters)
    perm = tuple(range(word.n))
    for i, _ in word.letters:
        tr = list(range(word.n))
        tr[i - 1], tr[i] = tr[i], tr[i - 1]
        perm = compose_perms(perm, tuple(tr))
    return BraidStats(chi, perm)


def generator_word(word: BraidWord, n: int, boundary_tol: float = 1e-9) -> BraidWord:
    """Restrict the full-period crossing record to t in [0, 1/n).

    Crossings within boundary_tol of 1/n count as the next segment's; ones
    within boundary_tol below 1 wrap to t = 0."""
    keep = []
    for lt, t in zip(word.letters, word.times):
        t_eff = t - 1.0 if t > 1.0 - boundary_tol else t
        if t_eff < 1.0 / n - boundary_tol:
            keep.append((lt, t))
    return BraidWord(word.n, tuple(lt for lt, _ in keep), tuple(t for _, t in keep))


# ---------------------------------------------------------------------------
# braid extraction from a trajectory

class _SpectralPaths:
    """Band-limited interpolant of the sampled particle paths."""

    def __init__(self, traj: Trajectory):
        M = traj.M
        self.coeffs = np.fft.fft(traj.positions, axis=1) / M  # (n, M)
        freqs = np.fft.fftfreq(M, d=1.0 / M)
        if M % 2 == 0:
            # split the unmatched Nyquist bin symmetrically
            self.coeffs[:, M // 2] /= 2.0
            self.freqs = np.concatenate([freqs, [-freqs[M // 2]]])
            self.coeffs = np.concatenate(
                [self.coeffs, self.coeffs[:, M // 2 : M // 2 + 1]], axis=1
            )
        else:
            self.freqs = freqs

    def eval(self, j: int, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.exp(2j * math.pi * np.outer(t, self.freqs)) @ self.coeffs[j]


def _bisect_root(f, lo: float, hi: float, f_lo: float) -> float:
    for _ in range(MAX_BISECTIONS + 20):
        mid = 0.5 * (lo + hi)
        val = f(mid)
        if val == 0.0:
            return mid
        if (val > 0) == (f_lo > 0):
            lo, f_lo = mid, val
        else:
            hi = mid
        if hi - lo < 1e-14:
            break
    return 0.5 * (lo + hi)


def extract_braid(traj: Trajectory) -> BraidWord:
    """Track the real-part order of the particles over one period and emit
    one signed letter per transversal crossing.

    Crossing signs come from the imaginary-part comparison at the crossing;
    grid-degenerate events are refined by bisection on the band-limited
    interpolant of the samples.
    """
    if not traj.is_collision_free():
        raise WindingResolutionError("trajectory has a collision; braid undefined")
    n, M = traj.n, traj.M
    paths = _SpectralPaths(traj)
    scale = max(1.0, float(np.max(np.abs(traj.positions))))
    tol = 1e-8 * scale

    fine = 4 * M
    tgrid = np.arange(fine + 1) / fine  # includes the wrap point t=1
    values = np.array([paths.eval(j, tgrid) for j in range(n)])  # (n, fine+1)

    events = []  # (time, i_letter, sign)
    for a in range(n):
        for b in range(a + 1, n):
            f_ab = values[a].real - values[b].real

            def f(t, a=a, b=b):
                return float((paths.eval(a, t) - paths.eval(b, t))[0].real)

            roots = []
            m = 0
            while m < fine:
                lo, hi = f_ab[m], f_ab[m + 1]
                if abs(lo) <= tol * 1e-4:
                    # node sits on (or next to) the crossing: classify by
                    # the signs a quarter-step on either side
                    h = 0.25 / fine
                    before, after = f(tgrid[m] - h), f(tgrid[m] + h)
                    if abs(before) <= tol * 1e-6 or abs(after) <= tol * 1e-6:
                        raise DegenerateCrossingError(
                            f"particles {a + 1},{b + 1} stay vertically aligned near "
                            f"t={tgrid[m]:.6f}; apply a small rigid rotation and retry"
                        )
                    if (before > 0) != (after > 0):
                        roots.append(tgrid[m] % 1.0)
                    m += 1
                    continue
                if (lo > 0) != (hi > 0):
                    roots.append(_bisect_root(f, tgrid[m], tgrid[m + 1], lo) % 1.0)
                m += 1
            # deduplicate roots created on both sides of a grid node
            roots.sort()
            dedup = []
            for t in roots:
                if dedup and (t - dedup[-1] < 1e-10 or (1.0 - t) + dedup[0] < 1e-10):
                    continue
                dedup.append(t)
            for t in dedup:
                h = 0.25 / fine
                va = paths.eval(a, np.array([t - h, t]))
                vb = paths.eval(b, np.array([t - h, t]))
                if va[0].real < vb[0].real:
                    left, right = va, vb
                else:
                    left, right = vb, va
                im = float((right[1] - left[1]).imag)
                if abs(im) < ORIGIN_TOL:
                    raise DegenerateCrossingError(
                        f"particles {a + 1},{b + 1} cross with no vertical separation "
                        f"at t={t:.6f}; apply a small rigid rotation and retry"
                    )
                sign = 1 if im > 0 else -1
                # generator index from the x-order at the crossing time
                here = np.array([paths.eval(j, t)[0] for j in range(n)])
                mid = 0.5 * float(here[a].real + here[b].real)
                below = 0
                for c in range(n):
                    if c in (a, b):
                        continue
                    gap = float(here[c].real) - mid
                    if abs(gap) < tol:
                        raise DegenerateCrossingError(
                            f"particle {c + 1} is vertically aligned with the "
                            f"{a + 1},{b + 1} crossing at t={t:.6f}; apply a small "
                            "rigid rotation and retry"
                        )
                    if gap < 0:
                        below += 1
                events.append((t, below + 1, sign))

    events.sort(key=lambda e: (e[0], e[1]))
    word = BraidWord(
        n,
        tuple((i, s) for _, i, s in events),
        tuple(t for t, _, _ in events),
    )
    if braid_stats(word).perm != tuple(range(n)):
        raise WindingResolutionError(
            "full-period braid is not pure; crossings were missed, "
            "resample with a larger M"
        )
    return word


# ---------------------------------------------------------------------------
# adjacency necessary conditions

def adjacency_necessary(chi: int, n: int, target: SymmetryGroupSpec) -> bool:
    """Exponent-sum congruence that a generator-path braid must satisfy for
    its component to contain a loop of the target symmetry.  False rules the
    target out; True is necessary, not sufficient."""
    target = target.canonical()
    target.validate()
    if target.n != n:
        raise SpecError(f"particle counts differ: {target.n} vs {n}")
    if target.family == "Cprime":
        return chi == 0
    if target.family == "C":
        if math.gcd(n, target.k) != 1:
            raise SpecError(
                f"{target.name()} has a nontrivial core; the congruence only "
                "covers gcd(n,k)=1"
            )
        return (chi + (n - 1) * target.l) % target.k == 0
    raise SpecError(
        f"{target.name()} is time-reversing; no exponent-sum condition is available"
    )
