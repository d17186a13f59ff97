import math

import numpy as np
import pytest

from choreosym.action import (
    CollisionError,
    MaskViolationError,
    MinimizeOptions,
    PotentialSpec,
    action,
    diagnostics,
    gradient,
    kinetic_energy,
    minimize,
)
from choreosym.datasets import circular_loop, figure_eight_loop
from choreosym.groups import SymmetryGroupSpec, build_group
from choreosym.loops import (
    FourierLoop,
    apply_element,
    constraint_mask,
    project_coefficients,
    sample_trajectory,
)

from _helpers import (
    CRITICAL_RADIUS_3,
    FIVE_FAMILIES,
    circular_action_3body,
    family_spec,
    masked_random_loop,
    numerical_gradient,
)

NEWTON = PotentialSpec(a=1.0)


class TestAction:
    def test_circular_matches_closed_form(self):
        for rho in (0.5, 0.8, 1.3):
            loop = circular_loop(3, 6, radius=rho)
            assert action(loop, NEWTON, 256) == pytest.approx(
                circular_action_3body(rho), abs=1e-12
            )

    def test_zero_weight_leaves_kinetic_parseval(self):
        rng = np.random.default_rng(0)
        loop = FourierLoop(4, 5, rng.standard_normal(11) + 1j * rng.standard_normal(11))
        pot = PotentialSpec(a=1.0, weight=0.0)
        rs = loop.indices
        expect = 2.0 * float(np.sum((2 * math.pi * rs) ** 2 * np.abs(loop.coeffs) ** 2))
        assert action(loop, pot, 128) == pytest.approx(expect, rel=1e-14)
        assert kinetic_energy(loop) == pytest.approx(expect, rel=1e-14)

    def test_quadrature_converged_for_fig8(self):
        loop = figure_eight_loop(7)
        a1 = action(loop, NEWTON, 512)
        a2 = action(loop, NEWTON, 1024)
        assert a1 > 0
        assert abs(a1 - a2) / abs(a1) < 1e-8

    def test_collision_raises(self):
        with pytest.raises(CollisionError):
            action(FourierLoop.zeros(3, 2), NEWTON, 24)

    def test_exponent_below_one_rejected(self):
        with pytest.raises(ValueError):
            PotentialSpec(a=0.5)


class TestGradient:
    def test_kinetic_part_is_diagonal_quadratic(self):
        rng = np.random.default_rng(1)
        spec = SymmetryGroupSpec("C", 4, 1, 1)
        mask = constraint_mask(spec, 5)
        loop = FourierLoop(4, 5, project_coefficients(
            rng.standard_normal(11) + 1j * rng.standard_normal(11), mask))
        pot = PotentialSpec(a=1.0, weight=0.0)
        g = gradient(loop, pot, mask, 128)
        rs = loop.indices
        expect = 4 * (2 * math.pi * rs) ** 2 * loop.coeffs
        assert np.max(np.abs(g - expect)) < 1e-9

    @pytest.mark.parametrize("family,kw", FIVE_FAMILIES, ids=lambda v: str(v))
    def test_matches_finite_differences(self, family, kw):
        spec = family_spec(family, 5, **kw)
        R, M = 4, 8 * 9
        loop = masked_random_loop(spec, R, seed=17)
        mask = constraint_mask(spec, R)
        analytic = gradient(loop, NEWTON, mask, M)
        numeric = project_coefficients(numerical_gradient(loop, NEWTON, M), mask)
        scale = float(np.max(np.abs(analytic)))
        assert np.max(np.abs(analytic - numeric)) / scale < 1e-6

    def test_circular_critical_point(self):
        loop = circular_loop(3, 6, radius=CRITICAL_RADIUS_3)
        for spec in (
            SymmetryGroupSpec("C", 3, 1, 1),
            SymmetryGroupSpec("C", 3, 3, 1),
            SymmetryGroupSpec("C", 3, 6, 1),
        ):
            mask = constraint_mask(spec, 6)
            g = gradient(loop, NEWTON, mask, 256)
            assert float(np.linalg.norm(g)) < 1e-8


class TestMinimize:
    def test_strong_force_self_consistency(self):
        spec = SymmetryGroupSpec("C", 3, 1, 1)
        init = masked_random_loop(spec, 6, seed=42)
        opts = MinimizeOptions(M=256, grad_tol=1e-6, max_iter=20000, track_history=True)
        res1 = minimize(init, spec, PotentialSpec(a=2.0), opts)
        res2 = minimize(init, spec, PotentialSpec(a=2.0), opts)
        assert res1.converged
        assert res1.grad_norm < 1e-6
        assert res1.min_distance > 0.1
        assert res1.action == res2.action  # deterministic restart
        assert np.array_equal(res1.loop.coeffs, res2.loop.coeffs)

    def test_descent_is_monotone(self):
        spec = SymmetryGroupSpec("Dprime2", 3)
        init = figure_eight_loop(6)
        opts = MinimizeOptions(M=256, grad_tol=1e-6, max_iter=3000, track_history=True)
        res = minimize(init, spec, NEWTON, opts)
        hist = np.array(res.history)
        assert np.all(np.diff(hist) <= 0)

    def test_iterates_stay_masked(self):
        spec = SymmetryGroupSpec("Dprime1", 5)
        init = masked_random_loop(spec, 4, seed=5)
        res = minimize(init, spec, PotentialSpec(a=2.0),
                       MinimizeOptions(M=96, grad_tol=1e-5, max_iter=2000))
        mask = constraint_mask(spec, 4)
        assert np.max(np.abs(res.loop.coeffs - project_coefficients(res.loop.coeffs, mask))) == 0.0

    def test_mask_violating_init_rejected(self):
        spec = SymmetryGroupSpec("Dprime1", 3)
        bad = circular_loop(3, 4)  # zeta_1 = 1 breaks the antisymmetry pairing
        with pytest.raises(MaskViolationError):
            minimize(bad, spec, NEWTON)

    def test_colliding_init_rejected(self):
        spec = SymmetryGroupSpec("C", 3, 1, 1)
        with pytest.raises(CollisionError):
            minimize(FourierLoop.zeros(3, 4), spec, NEWTON)

    def test_empty_mask_rejected(self):
        spec = SymmetryGroupSpec("C", 3, 25, 12)
        with pytest.raises(MaskViolationError):
            minimize(FourierLoop.zeros(3, 2), spec, NEWTON)

    def test_action_invariant_under_group(self):
        spec = SymmetryGroupSpec("Dprime2", 5)
        loop = masked_random_loop(spec, 4, seed=3)
        base = action(loop, NEWTON, 128)
        for g in build_group(spec).elements:
            moved = apply_element(g, loop)
            assert action(moved, NEWTON, 128) == pytest.approx(base, abs=1e-9)


class TestDiagnostics:
    def test_circular_angular_momentum(self):
        traj = sample_trajectory(circular_loop(3, 4), 96)
        diag = diagnostics(traj)
        assert diag.angular_momentum_mean == pytest.approx(3 * 2 * math.pi, rel=1e-12)
        assert diag.angular_momentum_max_deviation < 1e-10

    def test_dprime1_masked_loops_have_zero_mean(self):
        for seed in range(5):
            loop = masked_random_loop(SymmetryGroupSpec("Dprime1", 5), 5, seed=seed)
            diag = diagnostics(sample_trajectory(loop, 8 * 11))
            assert abs(diag.angular_momentum_mean) < 1e-10

    def test_converged_fig8_has_zero_mean(self):
        spec = SymmetryGroupSpec("Dprime2", 3)
        res = minimize(figure_eight_loop(8), spec, NEWTON,
                       MinimizeOptions(M=512, grad_tol=1e-6, max_iter=4000))
        assert res.converged
        diag = diagnostics(sample_trajectory(res.loop, 512))
        assert abs(diag.angular_momentum_mean) < 1e-6

    def test_velocities_required(self):
        from choreosym.loops import Trajectory

        traj = sample_trajectory(circular_loop(3, 2), 24)
        bare = Trajectory(3, 24, traj.positions)
        with pytest.raises(ValueError):
            diagnostics(bare)
