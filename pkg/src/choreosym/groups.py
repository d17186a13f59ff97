"""Exact algebra of the symmetry groups of planar n-body choreographies.

A group element combines a planar orthogonal transformation, a permutation
of the particles and a rotation or reflection of the time circle.  Angles
and time shifts are rational multiples of a full turn stored as `Fraction`,
so composition, closure, kernels and the subconjugacy lattice are decided
exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

__all__ = [
    "GroupElement",
    "SymmetryGroupSpec",
    "SymmetryGroup",
    "CyclicSubgroup",
    "RccReport",
    "SpecError",
    "GroupNameError",
    "ClosureError",
    "InfiniteGroupError",
    "sigma_1",
    "s_1",
    "sigma_k",
    "compose_perms",
    "invert_perm",
    "perm_cycles",
    "choreography_element",
    "identity_element",
    "compose",
    "inverse",
    "build_group",
    "kernels_and_core",
    "subconjugate",
    "rcc_check",
    "coercivity_check",
    "parse_group_name",
    "catalog_specs",
]

CLOSURE_CAP = 10_000

FAMILIES = ("C", "D", "Cprime", "Dprime1", "Dprime2", "Dinf")
_EXCEPTIONAL = ("Cprime", "Dprime1", "Dprime2")
_EXCEPTIONAL_LABEL = {"Cprime": 2, "Dprime1": 1, "Dprime2": 2}


class SpecError(ValueError):
    """Invalid symmetry-group specification."""


class GroupNameError(SpecError):
    """Malformed group name string."""

    def __init__(self, text: str, pos: int, message: str):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


class ClosureError(RuntimeError):
    """Closure enumeration exceeded the element cap."""


class InfiniteGroupError(RuntimeError):
    """The operation needs an enumerated finite group."""


# ---------------------------------------------------------------------------
# permutations (0-based image tuples)

def sigma_1(n: int) -> tuple[int, ...]:
    """The n-cycle j -> j+1 (1-based: (1 2 ... n))."""
    return tuple((i + 1) % n for i in range(n))


def s_1(n: int) -> tuple[int, ...]:
    """Order-2 reversal fixing particle 1 (1-based: j -> 2-j mod n)."""
    return tuple((-i) % n for i in range(n))


def sigma_k(n: int, k: int) -> tuple[int, ...]:
    """The unique k-th root of sigma_1 in the cyclic group, for gcd(n,k)=1."""
    if math.gcd(n, k) != 1:
        raise SpecError(f"sigma_k needs gcd(n,k)=1, got n={n}, k={k}")
    kp = pow(k % n, -1, n)
    return tuple((i + kp) % n for i in range(n))


def compose_perms(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """p after q, as maps: (p o q)(i) = p(q(i))."""
    return tuple(p[q[i]] for i in range(len(q)))


def invert_perm(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def perm_cycles(p: tuple[int, ...]) -> str:
    """Cycle notation with 1-based labels; identity prints as 'e'."""
    n = len(p)
    seen = [False] * n
    parts = []
    for i in range(n):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = p[j]
        parts.append("(" + " ".join(str(m + 1) for m in cyc) + ")")
    return "".join(parts) if parts else "e"


# ---------------------------------------------------------------------------
# group elements

def _frac_mod1(x) -> Fraction:
    return Fraction(x) % 1


@dataclass(frozen=True)
class GroupElement:
    """One element (A, sigma, tau) with A = R(2*pi*rot) * conj^refl acting on
    the plane, sigma a particle permutation, and tau the time map
    t -> shift + t (rev=False) or t -> shift - t (rev=True)."""

    rot: Fraction
    refl: bool
    perm: tuple[int, ...]
    shift: Fraction
    rev: bool

    def __post_init__(self):
        object.__setattr__(self, "rot", _frac_mod1(self.rot))
        object.__setattr__(self, "shift", _frac_mod1(self.shift))
        object.__setattr__(self, "perm", tuple(self.perm))
        object.__setattr__(self, "refl", bool(self.refl))
        object.__setattr__(self, "rev", bool(self.rev))
        if sorted(self.perm) != list(range(len(self.perm))):
            raise SpecError(f"perm is not a bijection: {self.perm}")

    @property
    def n(self) -> int:
        return len(self.perm)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.n != other.n:
            raise SpecError(f"particle counts differ: {self.n} vs {other.n}")
        rot = self.rot + (-other.rot if self.refl else other.rot)
        shift = self.shift + (-other.shift if self.rev else other.shift)
        return GroupElement(
            rot,
            self.refl ^ other.refl,
            compose_perms(self.perm, other.perm),
            shift,
            self.rev ^ other.rev,
        )

    def inverse(self) -> "GroupElement":
        rot = self.rot if self.refl else -self.rot
        shift = self.shift if self.rev else -self.shift
        return GroupElement(rot, self.refl, invert_perm(self.perm), shift, self.rev)

    def __pow__(self, m: int) -> "GroupElement":
        if m < 0:
            return self.inverse() ** (-m)
        out = identity_element(self.n)
        for _ in range(m):
            out = out * self
        return out

    def is_identity(self) -> bool:
        return (
            self.rot == 0
            and not self.refl
            and not self.rev
            and self.shift == 0
            and self.perm == tuple(range(self.n))
        )

    def order(self, cap: int = CLOSURE_CAP) -> int:
        g = self
        for m in range(1, cap + 1):
            if g.is_identity():
                return m
            g = g * self
        raise ClosureError(f"element order exceeds {cap}")

    def sort_key(self):
        return (self.shift, self.rev, self.rot, self.refl, self.perm)

    def spatial_str(self) -> str:
        if self.rot == 0:
            return "kappa" if self.refl else "I"
        base = f"R({self.rot})"
        return base + "*kappa" if self.refl else base

    def temporal_str(self) -> str:
        s = self.shift if self.shift <= Fraction(1, 2) else self.shift - 1
        return f"bar({s})" if self.rev else f"{s}"

    def __str__(self) -> str:
        return f"({self.spatial_str()}, {perm_cycles(self.perm)}, {self.temporal_str()})"


def identity_element(n: int) -> GroupElement:
    return GroupElement(Fraction(0), False, tuple(range(n)), Fraction(0), False)


def choreography_element(n: int) -> GroupElement:
    """The generator (I, sigma_1, -1/n) of the order-n choreography group."""
    return GroupElement(Fraction(0), False, sigma_1(n), Fraction(-1, n), False)


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    """g*h acts on loops as: first act by h, then by g."""
    return g * h


def inverse(g: GroupElement) -> GroupElement:
    return g.inverse()


# ---------------------------------------------------------------------------
# specs

@dataclass(frozen=True)
class SymmetryGroupSpec:
    """Catalog label: family plus the integers (n, k, l).

    k is None for the exceptional families (their label is carried by l)
    and for Dinf, which stands for k = infinity.
    """

    family: str
    n: int
    k: Optional[int] = None
    l: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise SpecError(f"unknown family {self.family!r}")
        if not isinstance(self.n, int) or self.n < 3:
            raise SpecError(f"need n >= 3, got {self.n}")
        if self.family in ("C", "D"):
            if not isinstance(self.k, int) or self.k < 1:
                raise SpecError(f"family {self.family} needs an integer k >= 1")
            if self.l < 1:
                raise SpecError(f"need l >= 1, got {self.l}")
        elif self.family == "Dinf":
            if self.k is not None:
                raise SpecError("Dinf carries no finite k")
            if self.l < 1:
                raise SpecError(f"need l >= 1, got {self.l}")
        else:
            if self.k is not None:
                raise SpecError(f"family {self.family} carries no k")
            if self.n % 2 == 0:
                raise SpecError(f"family {self.family} needs odd n, got {self.n}")
            # the family determines the printed label
            object.__setattr__(self, "l", _EXCEPTIONAL_LABEL[self.family])

    # -- queries ------------------------------------------------------------

    def is_coprime(self) -> bool:
        if self.family in ("C", "D"):
            return math.gcd(self.k, self.l) == 1
        return True

    def validate(self) -> "SymmetryGroupSpec":
        """Reject labels that do not name a catalog group."""
        if self.family in ("C", "D") and not self.is_coprime():
            raise SpecError(
                f"gcd(k,l) must be 1, got k={self.k}, l={self.l} in {self.name()}"
            )
        return self

    def canonical(self) -> "SymmetryGroupSpec":
        """Reduce l to the conjugacy representative: l ~ k-l mod k, with
        l = 1 for k <= 4 and 1 <= l < k/2 for k >= 5."""
        if self.family not in ("C", "D"):
            return self
        k = self.k
        m = self.l % k
        if m == 0:
            m = k
        m = min(m, k - m) if 0 < k - m else m
        if m == 0:
            m = k
        if k <= 4 and math.gcd(k, m) == 1:
            m = 1
        if m == self.l:
            return self
        return SymmetryGroupSpec(self.family, self.n, k, m)

    def core_order(self) -> int:
        if self.family in ("C", "D"):
            return math.gcd(self.n, self.k)
        if self.family == "Dinf":
            return self.n
        return 1

    def expected_order(self) -> Optional[int]:
        return {
            "C": self.k and self.n * self.k,
            "D": self.k and 2 * self.n * self.k,
            "Cprime": 2 * self.n,
            "Dprime1": 2 * self.n,
            "Dprime2": 4 * self.n,
            "Dinf": None,
        }[self.family]

    def is_reversing(self) -> bool:
        return self.family in ("D", "Dprime1", "Dprime2", "Dinf")

    def name(self) -> str:
        if self.family == "C":
            return f"C({self.n},{self.k})" if self.l == 1 else f"C({self.n},{self.k}/{self.l})"
        if self.family == "D":
            return f"D({self.n},{self.k})" if self.l == 1 else f"D({self.n},{self.k}/{self.l})"
        if self.family == "Dinf":
            return f"D({self.n},inf/{self.l})"
        if self.family == "Cprime":
            return f"C'({self.n},2)"
        if self.family == "Dprime1":
            return f"D'({self.n},1)"
        return f"D'({self.n},2)"

    def __str__(self) -> str:
        return self.name()


def parse_group_name(text: str) -> SymmetryGroupSpec:
    """Parse the grammar C(n,k) | C(n,k/l) | D(n,k) | D(n,k/l) |
    C'(n,2) | D'(n,1) | D'(n,2) | D(n,inf/l)."""
    s = text.strip()
    pos = 0

    def fail(message: str, at: int):
        raise GroupNameError(text, at, message)

    def expect(ch: str):
        nonlocal pos
        if pos >= len(s) or s[pos] != ch:
            fail(f"expected {ch!r}", pos)
        pos += 1

    def read_int() -> int:
        nonlocal pos
        start = pos
        while pos < len(s) and s[pos].isdigit():
            pos += 1
        if pos == start:
            fail("expected an integer", start)
        return int(s[start:pos])

    if pos >= len(s) or s[pos] not in "CD":
        fail("expected family letter C or D", pos)
    letter = s[pos]
    pos += 1
    prime = pos < len(s) and s[pos] == "'"
    if prime:
        pos += 1
    expect("(")
    n = read_int()
    expect(",")
    if not prime and letter == "D" and s[pos : pos + 3] == "inf":
        pos += 3
        expect("/")
        l = read_int()
        expect(")")
        if pos != len(s):
            fail("trailing characters", pos)
        return SymmetryGroupSpec("Dinf", n, None, l)
    label = read_int()
    l = 1
    if pos < len(s) and s[pos] == "/":
        if prime:
            fail("primed families take no /l part", pos)
        pos += 1
        l = read_int()
    expect(")")
    if pos != len(s):
        fail("trailing characters", pos)
    if prime:
        if letter == "C":
            if label != 2:
                fail("the cyclic exceptional family is C'(n,2)", pos - 2)
            return SymmetryGroupSpec("Cprime", n)
        if label == 1:
            return SymmetryGroupSpec("Dprime1", n)
        if label == 2:
            return SymmetryGroupSpec("Dprime2", n)
        fail("primed dihedral label must be 1 or 2", pos - 2)
    return SymmetryGroupSpec(letter, n, label, l)


# ---------------------------------------------------------------------------
# groups

@dataclass(frozen=True)
class SymmetryGroup:
    spec: SymmetryGroupSpec
    generators: tuple[GroupElement, ...]
    elements: Optional[tuple[GroupElement, ...]]
    order: Optional[int]
    continuous_generator: Optional[str] = None

    @property
    def n(self) -> int:
        return self.spec.n

    def is_finite(self) -> bool:
        return self.elements is not None

    def require_finite(self) -> tuple[GroupElement, ...]:
        if self.elements is None:
            raise InfiniteGroupError(f"{self.spec.name()} is an infinite group")
        return self.elements


def _close(generators: Iterable[GroupElement]) -> tuple[GroupElement, ...]:
    gens = list(generators)
    n = gens[0].n
    seen = {identity_element(n)}
    frontier = [identity_element(n)]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                p = g * h
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
                    if len(seen) > CLOSURE_CAP:
                        raise ClosureError(
                            f"closure exceeded {CLOSURE_CAP} elements"
                        )
        frontier = nxt
    return tuple(sorted(seen, key=GroupElement.sort_key))


def build_group(spec: SymmetryGroupSpec) -> SymmetryGroup:
    """Construct the catalog group with its standard generators and, for the
    finite families, the full element set by closure."""
    spec = spec.canonical()
    spec.validate()
    n = spec.n
    c = choreography_element(n)
    refl = GroupElement(Fraction(0), True, s_1(n), Fraction(0), True)

    if spec.family == "C":
        g0 = GroupElement(Fraction(spec.l, spec.k), False, tuple(range(n)), Fraction(1, spec.k), False)
        gens = (c, g0)
    elif spec.family == "D":
        g0 = GroupElement(Fraction(spec.l, spec.k), False, tuple(range(n)), Fraction(1, spec.k), False)
        gens = (c, g0, refl)
    elif spec.family == "Cprime":
        g = GroupElement(Fraction(0), True, sigma_k(n, 2), Fraction(-1, 2 * n), False)
        gens = (g,)
    elif spec.family == "Dprime1":
        r = GroupElement(Fraction(1, 2), False, s_1(n), Fraction(0), True)
        gens = (c, r)
    elif spec.family == "Dprime2":
        # The half-turn reflection R(pi)*kappa (not kappa itself) keeps the
        # coefficient table and the bundled figure-eight data exactly
        # consistent; the kappa version generates the 90-degree-rotated
        # conjugate copy of the same symmetry type.
        g = GroupElement(Fraction(1, 2), True, sigma_k(n, 2), Fraction(-1, 2 * n), False)
        r = GroupElement(Fraction(1, 2), False, s_1(n), Fraction(0), True)
        gens = (g, r)
    else:  # Dinf
        return SymmetryGroup(
            spec,
            (c, refl),
            None,
            None,
            continuous_generator=f"(R(2*pi*{spec.l}*theta), e, theta) for theta in S^1",
        )

    elements = _close(gens)
    return SymmetryGroup(spec, gens, elements, len(elements))


# ---------------------------------------------------------------------------
# kernels and the core

@dataclass(frozen=True)
class CyclicSubgroup:
    generator: GroupElement
    elements: tuple[GroupElement, ...]

    @property
    def order(self) -> int:
        return len(self.elements)


def _as_cyclic(elements: list[GroupElement]) -> CyclicSubgroup:
    target = frozenset(elements)
    for g in sorted(elements, key=GroupElement.sort_key):
        powers = set()
        h = g
        while h not in powers:
            powers.add(h)
            h = h * g
        if powers == target:
            return CyclicSubgroup(g, tuple(sorted(target, key=GroupElement.sort_key)))
    raise ClosureError("subgroup is not cyclic")


def kernels_and_core(group: SymmetryGroup):
    """(ker rho, ker sigma, ker tau); each is cyclic with a verified
    generator.  ker tau is the core."""
    elements = group.require_finite()
    n = group.n
    ident = tuple(range(n))
    ker_rho = [g for g in elements if g.rot == 0 and not g.refl]
    ker_sigma = [g for g in elements if g.perm == ident]
    ker_tau = [g for g in elements if g.shift == 0 and not g.rev]
    return _as_cyclic(ker_rho), _as_cyclic(ker_sigma), _as_cyclic(ker_tau)


# ---------------------------------------------------------------------------
# subconjugacy lattice (decided at the spec level, on canonical forms)

def _congruent_pm(a: int, b: int, mod: int) -> bool:
    return (a - b) % mod == 0 or (a + b) % mod == 0


def subconjugate(h: SymmetryGroupSpec, g: SymmetryGroupSpec) -> bool:
    """True when h is conjugate to a subgroup of g; reflexive and
    transitively closed over the lattice rules."""
    if h.n != g.n:
        raise SpecError(f"particle counts differ: {h.n} vs {g.n}")
    hc, gc = h.canonical(), g.canonical()
    if hc == gc:
        return True
    hf, gf = hc.family, gc.family

    if hf in ("C", "D") and gf in ("C", "D", "Dinf"):
        if hf == "D" and gf == "C":
            return False
        k, l = hc.k, hc.l
        if gf == "Dinf":
            return _congruent_pm(l, gc.l, k) if k > 0 else False
        kp, lp = gc.k, gc.l
        if kp % k != 0:
            return False
        if not _congruent_pm(l, lp, k):
            return False
        # Degenerate targets (gcd(l', k') > 1) are admitted only through a
        # congruence class other than the one carrying the shared factor.
        if math.gcd(lp, kp) > 1 and _congruent_pm(l, lp, kp):
            return False
        return True

    if hf == "C" and hc.k == 1 and gf in _EXCEPTIONAL:
        return True
    if hf == "Cprime" and gf == "Dprime2":
        return True
    if hf == "Dprime1" and gf == "Dprime2":
        return True
    return False


def catalog_specs(n: int, kmax: int, include_dinf: bool = False) -> list[SymmetryGroupSpec]:
    """All canonical catalog specs with the given n and k <= kmax."""
    specs: list[SymmetryGroupSpec] = []
    for family in ("C", "D"):
        for k in range(1, kmax + 1):
            ells = [1] if k <= 4 else [l for l in range(1, (k + 1) // 2) if math.gcd(k, l) == 1]
            for l in ells:
                specs.append(SymmetryGroupSpec(family, n, k, l))
    if n % 2 == 1:
        specs.append(SymmetryGroupSpec("Cprime", n))
        specs.append(SymmetryGroupSpec("Dprime1", n))
        specs.append(SymmetryGroupSpec("Dprime2", n))
    if include_dinf:
        for l in range(1, n // 2 + 1):
            if math.gcd(n, l) == 1:
                specs.append(SymmetryGroupSpec("Dinf", n, None, l))
    return specs


# ---------------------------------------------------------------------------
# rotating circle condition

@dataclass(frozen=True)
class RccReport:
    holds: bool
    witness: Optional[GroupElement]


def _stabilizer_violations(core, reversers, n):
    """Check both conditions for one time stabilizer; return a violating
    element or None."""
    stab = list(core) + list(reversers)
    for g in sorted(stab, key=GroupElement.sort_key):
        if g.refl:
            return g
    bad_indices = []
    for i in range(n):
        for g in sorted(stab, key=GroupElement.sort_key):
            if g.perm[i] == i and (g.rot != 0 or g.refl):
                bad_indices.append((i, g))
                break
    if len(bad_indices) >= 2:
        return bad_indices[0][1]
    return None


def rcc_check(group: SymmetryGroup) -> RccReport:
    """Rotating circle condition: at every time stabilizer, the spatial
    parts are rotations and at most one particle index has a nontrivial
    spatial stabilizer."""
    elements = group.require_finite()
    n = group.n
    core = [g for g in elements if g.shift == 0 and not g.rev]
    reversers = [g for g in elements if g.rev]

    times = set()
    for g in reversers:
        times.add(g.shift / 2)
        times.add((g.shift / 2 + Fraction(1, 2)) % 1)
    for t in sorted(times):
        at_t = [g for g in reversers if (g.shift - 2 * t) % 1 == 0]
        bad = _stabilizer_violations(core, at_t, n)
        if bad is not None:
            return RccReport(False, bad)
    bad = _stabilizer_violations(core, [], n)
    if bad is not None:
        return RccReport(False, bad)
    return RccReport(True, None)


# ---------------------------------------------------------------------------
# coercivity check: common fixed space of the spatial action on centered
# configurations must be trivial

_EXACT_TRIG = {
    Fraction(0): (Fraction(1), Fraction(0)),
    Fraction(1, 4): (Fraction(0), Fraction(1)),
    Fraction(1, 2): (Fraction(-1), Fraction(0)),
    Fraction(3, 4): (Fraction(0), Fraction(-1)),
}


def _apply_spatial(g: GroupElement, vec, cos, sin):
    """Apply (A, sigma) to a configuration [x_0, y_0, ..., x_{n-1}, y_{n-1}]."""
    n = g.n
    inv = invert_perm(g.perm)
    out = [vec[0] * 0 for _ in range(2 * n)]
    sy = -1 if g.refl else 1
    for j in range(n):
        i = inv[j]
        x, y = vec[2 * i], vec[2 * i + 1] * sy
        out[2 * j] = cos * x - sin * y
        out[2 * j + 1] = sin * x + cos * y
    return out


def _nullspace_exact(rows, d):
    """Basis of the nullspace of a matrix with Fraction entries (rows of
    length d), returned as columns."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(d):
        pivot = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][col]
        m[r] = [v / pv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(d) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * d
        v[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            v[pc] = -m[ri][fc]
        basis.append(v)
    return basis


def coercivity_check(group: SymmetryGroup) -> bool:
    """True iff the only configuration (with center of mass zero) fixed by
    the spatial part of every element is the origin."""
    elements = group.require_finite()
    n = group.n
    exact = all(g.rot in _EXACT_TRIG for g in elements)
    if exact:
        return _coercivity_exact(elements, n)
    return _coercivity_float(elements, n)


def _centered_basis_exact(n):
    basis = []
    for j in range(1, n):
        for c in range(2):
            v = [Fraction(0)] * (2 * n)
            v[2 * j + c] = Fraction(1)
            v[c] = Fraction(-1)
            basis.append(v)
    return basis


def _coercivity_exact(elements, n) -> bool:
    basis = _centered_basis_exact(n)
    for g in elements:
        if not basis:
            return True
        cos, sin = _EXACT_TRIG[g.rot]
        rows = []
        for b in basis:
            gb = _apply_spatial(g, b, cos, sin)
            rows.append([gb[i] - b[i] for i in range(2 * n)])
        # restrict (M_g - I) to the current subspace: columns index basis
        cols = [[rows[bi][i] for bi in range(len(basis))] for i in range(2 * n)]
        null = _nullspace_exact(cols, len(basis))
        basis = [
            [sum(coef * basis[bi][i] for bi, coef in enumerate(nv)) for i in range(2 * n)]
            for nv in null
        ]
    return len(basis) == 0


def _coercivity_float(elements, n, tol: float = 1e-9) -> bool:
    basis = np.array(_centered_basis_exact(n), dtype=float).T  # (2n, d)
    for g in elements:
        if basis.shape[1] == 0:
            return True
        cos = math.cos(2 * math.pi * float(g.rot))
        sin = math.sin(2 * math.pi * float(g.rot))
        cols = []
        for bi in range(basis.shape[1]):
            vec = basis[:, bi]
            gb = _apply_spatial(g, list(vec), cos, sin)
            cols.append(np.array(gb) - vec)
        diff = np.array(cols).T  # (2n, d)
        u, s, vt = np.linalg.svd(diff, full_matrices=True)
        rank = int(np.sum(s > tol * max(1.0, s[0] if s.size else 1.0)))
        null = vt[rank:].T  # (d, d - rank)
        basis = basis @ null
    return basis.shape[1] == 0
