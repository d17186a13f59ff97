"""Command-line front end: catalog queries, choreography search, trajectory
analysis, and mask projection.

Exit codes for `search`: 0 converged, 2 finished without convergence
(partial outputs are still written), 3 collision abort.  Other failures
exit 1 with a machine-readable JSON reason on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import datasets, loops, topology
from .action import (
    CollisionError,
    Diagnostics,
    MaskViolationError,
    MinimizeOptions,
    PotentialSpec,
    action as compute_action,
    default_samples,
    diagnostics,
    minimize,
)
from .groups import (
    GroupNameError,
    InfiniteGroupError,
    SpecError,
    SymmetryGroupSpec,
    build_group,
    catalog_specs,
    coercivity_check,
    kernels_and_core,
    parse_group_name,
    rcc_check,
    subconjugate,
)

__all__ = ["main", "SearchConfig", "build_invariant_report"]

SCHEMA_VERSION = 1


def _write_json(path: str, doc: dict) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _fail(kind: str, message: str) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return 1


# ---------------------------------------------------------------------------
# catalog

def _group_summary(spec: SymmetryGroupSpec) -> dict:
    if spec.family == "Dinf":
        return {
            "name": spec.name(),
            "order": "inf",
            "core_order": spec.core_order(),
            "rcc": None,
            "coercive": None,
        }
    group = build_group(spec)
    ker_rho, ker_sigma, core = kernels_and_core(group)
    rcc = rcc_check(group)
    return {
        "name": spec.name(),
        "order": group.order,
        "ker_rho_order": ker_rho.order,
        "ker_sigma_order": ker_sigma.order,
        "core_order": core.order,
        "rcc": rcc.holds,
        "rcc_witness": None if rcc.witness is None else str(rcc.witness),
        "coercive": coercivity_check(group),
    }


def _cmd_catalog_list(args) -> int:
    rows = [_group_summary(s) for s in catalog_specs(args.n, args.kmax, include_dinf=True)]
    if args.json:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "groups": rows}, indent=2, sort_keys=True))
        return 0
    for row in rows:
        rcc = {True: "yes", False: "no", None: "-"}[row["rcc"]]
        coe = {True: "yes", False: "no", None: "-"}[row["coercive"]]
        print(
            f"{row['name']:<14} order={row['order']!s:<5} core={row['core_order']:<2} "
            f"rcc={rcc:<3} coercive={coe}"
        )
    return 0


def _cmd_catalog_describe(args) -> int:
    spec = parse_group_name(args.name).canonical()
    spec.validate()
    group = build_group(spec)
    print(f"{spec.name()}  (family {spec.family}, n={spec.n})")
    if not group.is_finite():
        print("  infinite group")
        print(f"  generators: {', '.join(str(g) for g in group.generators)}")
        print(f"              {group.continuous_generator}")
        print(f"  core order: {spec.core_order()}")
        return 0
    ker_rho, ker_sigma, core = kernels_and_core(group)
    rcc = rcc_check(group)
    print(f"  order: {group.order}")
    print(f"  generators: {', '.join(str(g) for g in group.generators)}")
    print(f"  ker rho order: {ker_rho.order}   generator {ker_rho.generator}")
    print(f"  ker sigma order: {ker_sigma.order}   generator {ker_sigma.generator}")
    print(f"  core order: {core.order}   generator {core.generator}")
    if rcc.holds:
        print("  rotating circle condition: holds")
    else:
        print(f"  rotating circle condition: fails, witness {rcc.witness}")
    print(f"  coercive: {'yes' if coercivity_check(group) else 'no'}")
    return 0


def _cmd_catalog_lattice(args) -> int:
    specs = catalog_specs(args.n, args.kmax, include_dinf=True)
    edges = []
    for h in specs:
        for g in specs:
            if h != g and subconjugate(h, g):
                edges.append((h.name(), g.name()))
    if args.json:
        print(json.dumps(
            {"schema_version": SCHEMA_VERSION, "edges": [list(e) for e in edges]},
            indent=2, sort_keys=True,
        ))
        return 0
    for h, g in edges:
        print(f"{h} < {g}")
    return 0


# ---------------------------------------------------------------------------
# invariant reports

def _adjacency_targets(n: int, kmax: int = 6) -> list[SymmetryGroupSpec]:
    targets = [SymmetryGroupSpec("C", n, 1, 1)]
    for k in range(2, kmax + 1):
        if math.gcd(n, k) != 1:
            continue
        ells = [1] if k <= 4 else [l for l in range(1, (k + 1) // 2) if math.gcd(k, l) == 1]
        for l in ells:
            targets.append(SymmetryGroupSpec("C", n, k, l))
    if n % 2 == 1:
        targets.append(SymmetryGroupSpec("Cprime", n))
    return targets


def _braid_with_fallback(traj: loops.Trajectory):
    """Generic-rotation fallback for degenerate vertical alignments."""
    angle = 0.0
    for attempt in range(3):
        try:
            return topology.extract_braid(traj if angle == 0.0 else traj.rotated(angle)), angle
        except topology.DegenerateCrossingError:
            if attempt == 2:
                raise
            angle += 0.2347719  # arbitrary generic angle, irrational-ish
    raise AssertionError("unreachable")


def build_invariant_report(traj: loops.Trajectory) -> dict:
    """Topology fingerprint of one trajectory, as the report JSON object."""
    n = traj.n
    profile = topology.winding_profile(traj)
    try:
        origin = topology.winding_about_origin(traj)
    except topology.OriginHitError:
        origin = None
    word, used_angle = _braid_with_fallback(traj)
    full = topology.braid_stats(word)
    gen_word = topology.generator_word(word, n)
    gen = topology.braid_stats(gen_word)
    pair_sum = sum(
        topology.pairwise_winding(traj, i, j) for i in range(n) for j in range(i + 1, n)
    )
    if full.chi != 2 * pair_sum:
        raise topology.WindingResolutionError(
            f"exponent sum {full.chi} disagrees with twice the pairwise winding "
            f"sum {pair_sum}; resample with a larger M"
        )
    adjacency = {}
    for target in _adjacency_targets(n):
        try:
            adjacency[target.name()] = topology.adjacency_necessary(gen.chi, n, target)
        except SpecError:
            continue
    return {
        "schema_version": SCHEMA_VERSION,
        "winding_profile": list(profile.entries),
        "winding_origin": origin,
        "chi_full": full.chi,
        "chi_generator": gen.chi,
        "perm_generator": [p + 1 for p in gen.perm],
        "adjacency": adjacency,
        "braid_letters": [[i, s] for i, s in word.letters],
        "rotation_applied": used_angle,
    }


# ---------------------------------------------------------------------------
# search

@dataclass(frozen=True)
class SearchConfig:
    group: str
    R: int = 8
    M: Optional[int] = None
    a: float = 1.0
    seed: int = 0
    init: str = "random"
    max_iter: int = 20000
    grad_tol: float = 1e-6
    step_init: float = 1e-2
    min_dist_guard: float = 1e-3

    def spec(self) -> SymmetryGroupSpec:
        return parse_group_name(self.group).canonical().validate()

    def samples(self) -> int:
        return self.M if self.M is not None else default_samples(self.R)

    def validate(self) -> "SearchConfig":
        if self.R < 1:
            raise SpecError(f"need R >= 1, got {self.R}")
        if self.samples() < 2 * (2 * self.R + 1):
            raise SpecError(
                f"M={self.samples()} is below the sampling margin {2 * (2 * self.R + 1)}"
            )
        self.spec()
        return self

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "R": self.R,
            "M": self.samples(),
            "a": self.a,
            "seed": self.seed,
            "init": self.init,
            "max_iter": self.max_iter,
            "grad_tol": self.grad_tol,
            "step_init": self.step_init,
            "min_dist_guard": self.min_dist_guard,
        }


def _embed_loop(loop: loops.FourierLoop, R: int) -> loops.FourierLoop:
    if loop.R == R:
        return loop
    arr = np.zeros(2 * R + 1, dtype=complex)
    for r in range(-min(R, loop.R), min(R, loop.R) + 1):
        arr[r + R] = loop.coeff(r)
    return loops.FourierLoop(loop.n, R, arr)


def _initial_loop(config: SearchConfig, mask) -> loops.FourierLoop:
    spec = config.spec()
    if config.init == "random":
        rng = np.random.default_rng(config.seed)
        return loops.random_loop(mask, rng)
    if config.init.startswith("builtin:"):
        raw = datasets.builtin_loop(config.init.split(":", 1)[1], spec.n, config.R)
    else:
        with open(config.init) as fh:
            raw = loops.loop_from_dict(json.load(fh))
        if raw.n != spec.n:
            raise SpecError(f"init file has n={raw.n}, group needs n={spec.n}")
    raw = _embed_loop(raw, config.R)
    if loops.mask_violation(raw, mask) > 1e-10:
        raise MaskViolationError(
            f"init {config.init!r} violates the {spec.name()} mask"
        )
    return loops.project(raw, mask)


def run_search(config: SearchConfig, out_prefix: str) -> int:
    config.validate()
    spec = config.spec()
    mask = loops.constraint_mask(spec, config.R)
    init = _initial_loop(config, mask)
    pot = PotentialSpec(a=config.a)
    opts = MinimizeOptions(
        M=config.samples(),
        max_iter=config.max_iter,
        grad_tol=config.grad_tol,
        step_init=config.step_init,
        min_dist_guard=config.min_dist_guard,
    )
    result = minimize(init, spec, pot, opts)
    traj = loops.sample_trajectory(result.loop, config.samples())
    diag = diagnostics(traj)

    result_doc = {
        "schema_version": SCHEMA_VERSION,
        "config": config.to_dict(),
        **result.to_dict(),
        "diagnostics": diag.to_dict(),
    }
    _write_json(f"{out_prefix}_result.json", result_doc)
    _write_json(f"{out_prefix}_traj.json", loops.trajectory_to_dict(traj))
    try:
        report = build_invariant_report(traj)
    except (topology.WindingResolutionError, topology.DegenerateCrossingError) as exc:
        report = {"schema_version": SCHEMA_VERSION, "error": str(exc)}
    _write_json(f"{out_prefix}_invariants.json", report)

    status = "converged" if result.converged else "not converged"
    print(
        f"{spec.name()}: {status} after {result.iterations} iterations, "
        f"action={result.action:.9f}, grad_norm={result.grad_norm:.3e}, "
        f"min_distance={result.min_distance:.4f}"
    )
    return 0 if result.converged else 2


def _cmd_search(args) -> int:
    config = SearchConfig(
        group=args.group,
        R=args.R,
        M=args.M,
        a=args.a,
        seed=args.seed,
        init=args.init,
        max_iter=args.max_iter,
        grad_tol=args.grad_tol,
        step_init=args.step_init,
        min_dist_guard=args.min_dist_guard,
    )
    return run_search(config, args.out)


# ---------------------------------------------------------------------------
# analyze

def _render_svg(traj: loops.Trajectory, path: str, samples: int = 720) -> None:
    """Static plot: the shared curve with particle markers at t = 0."""
    curve = traj.positions[0]
    xs, ys = curve.real, curve.imag
    all_pts = traj.positions
    lo = min(float(all_pts.real.min()), float(all_pts.imag.min())) - 0.2
    hi = max(float(all_pts.real.max()), float(all_pts.imag.max())) + 0.2
    size = 480.0
    scale = size / (hi - lo)

    def sx(x):
        return (x - lo) * scale

    def sy(y):
        return size - (y - lo) * scale

    points = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
    first = f"{sx(xs[0]):.2f},{sy(ys[0]):.2f}"
    markers = "\n".join(
        f'  <circle cx="{sx(traj.positions[j, 0].real):.2f}" '
        f'cy="{sy(traj.positions[j, 0].imag):.2f}" r="5" fill="#c0392b"/>'
        for j in range(traj.n)
    )
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0f}" height="{size:.0f}" '
        f'viewBox="0 0 {size:.0f} {size:.0f}">\n'
        f'  <rect width="100%" height="100%" fill="white"/>\n'
        f'  <polyline points="{points} {first}" fill="none" stroke="#555" stroke-width="1.5"/>\n'
        f"{markers}\n"
        "</svg>\n"
    )
    with open(path, "w") as fh:
        fh.write(svg)


def _cmd_analyze(args) -> int:
    with open(args.trajectory) as fh:
        traj = loops.trajectory_from_dict(json.load(fh))
    report = build_invariant_report(traj)
    diag = diagnostics(traj.with_spectral_velocities())
    report["angular_momentum_mean"] = diag.angular_momentum_mean
    report["angular_momentum_max_deviation"] = diag.angular_momentum_max_deviation
    report["min_distance"] = diag.min_pairwise_distance
    if args.loop:
        with open(args.loop) as fh:
            loop = loops.loop_from_dict(json.load(fh))
        pot = PotentialSpec(a=args.a)
        report["action"] = compute_action(loop, pot, traj.M)
    if args.out:
        _write_json(args.out, report)
    else:
        print(json.dumps(report, indent=2, sort_keys=True))
    if args.svg:
        _render_svg(traj, args.svg)
    return 0


def _cmd_project(args) -> int:
    spec = parse_group_name(args.group).canonical().validate()
    with open(args.infile) as fh:
        loop = loops.loop_from_dict(json.load(fh))
    if loop.n != spec.n:
        raise SpecError(f"loop has n={loop.n}, group needs n={spec.n}")
    mask = loops.constraint_mask(spec, loop.R)
    projected = loops.project(loop, mask)
    doc = loops.loop_to_dict(projected)
    _write_json(args.out, doc)
    print(f"projected onto {spec.name()}; kept {len(mask.allowed)} harmonics")
    return 0


# ---------------------------------------------------------------------------
# entry point

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="choreosym",
        description="Symmetric planar choreographies: catalog, search, analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cat = sub.add_parser("catalog", help="query the symmetry-group catalog")
    catsub = cat.add_subparsers(dest="subcommand", required=True)
    p = catsub.add_parser("list", help="all canonical groups for one n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_catalog_list)
    p = catsub.add_parser("describe", help="generators and checks for one group")
    p.add_argument("name")
    p.set_defaults(func=_cmd_catalog_describe)
    p = catsub.add_parser("lattice", help="subconjugacy edges for one n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_catalog_lattice)

    p = sub.add_parser("search", help="minimize the action in a symmetry class")
    p.add_argument("--group", required=True)
    p.add_argument("--R", type=int, default=8)
    p.add_argument("--M", type=int, default=None)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--init", default="random",
                   help="random, a loop JSON path, builtin:fig8 or builtin:circular")
    p.add_argument("--max-iter", dest="max_iter", type=int, default=20000)
    p.add_argument("--grad-tol", dest="grad_tol", type=float, default=1e-6)
    p.add_argument("--step-init", dest="step_init", type=float, default=1e-2)
    p.add_argument("--min-dist-guard", dest="min_dist_guard", type=float, default=1e-3)
    p.add_argument("--out", default="choreo", help="output file prefix")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("analyze", help="invariants of a trajectory file")
    p.add_argument("trajectory")
    p.add_argument("--loop", default=None, help="matching loop JSON, enables the action")
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--svg", default=None, help="write a static SVG plot")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("project", help="project a loop file onto a group mask")
    p.add_argument("--group", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_project)

    return parser


_ERROR_KINDS = [
    (GroupNameError, "parse"),
    (loops.SchemaError, "schema"),
    (SpecError, "spec"),
    (loops.MaskError, "mask"),
    (MaskViolationError, "mask"),
    (topology.WindingResolutionError, "resolution"),
    (topology.DegenerateCrossingError, "degenerate"),
    (topology.OriginHitError, "origin"),
    (InfiniteGroupError, "infinite-group"),
    (FileNotFoundError, "io"),
]


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CollisionError as exc:
        print(json.dumps({"error": "collision", "message": str(exc)}), file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - map known kinds to exit 1
        for kind, tag in _ERROR_KINDS:
            if isinstance(exc, kind):
                return _fail(tag, str(exc))
        raise


if __name__ == "__main__":
    sys.exit(main())
