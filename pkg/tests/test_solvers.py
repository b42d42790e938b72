import math

import numpy as np
import pytest

from feasib import (
    Ball,
    CondGLimits,
    Ellipsoid,
    ForcingParams,
    ForcingSchedule,
    Halfspace,
    Regime,
    StopCode,
    StoppingConfig,
    acondg1,
    acondg2,
    averaged_projection,
    default_schedule,
    dist_ellipse_halfspace,
    dist_two_bodies,
    exact_alternating,
    schedule_update,
)

from _helpers import containing_body, sample_members

SQRT_202 = math.sqrt(2.02)


def slim_ellipse():
    return Ellipsoid.from_axes([0.0, 0.0], -math.pi / 4.0, (2.0, 0.2))


def second_ellipse(c1):
    return Ellipsoid.from_axes([c1, 0.5], math.pi / 3.0, (2.0, 0.4))


def halfspace_at(beta):
    return Halfspace(normal=[-1.0, 0.0], offset=-beta)


def unit_disk():
    return Ellipsoid(center=np.zeros(2), shape=np.eye(2))


class TestForcingSchedule:
    def test_one_set_conditions_enforced(self):
        with pytest.raises(ValueError):
            ForcingSchedule(ForcingParams(0.3, 0.1, 0.11), regime=Regime.ONE_SET)
        with pytest.raises(ValueError):
            ForcingSchedule(ForcingParams(0.0, 0.5, 0.0), regime=Regime.ONE_SET)
        ForcingSchedule(ForcingParams(0.3, 0.45, 0.09), regime=Regime.ONE_SET)

    def test_two_set_conditions_enforced(self):
        with pytest.raises(ValueError):
            ForcingSchedule(ForcingParams(0.0, 0.25, 0.0), regime=Regime.TWO_SETS)
        with pytest.raises(ValueError):
            ForcingSchedule(ForcingParams(0.3, 0.1, 0.11), regime=Regime.TWO_SETS)
        ForcingSchedule(ForcingParams(0.1, 0.2, 0.19), regime=Regime.TWO_SETS)

    def test_factor_ranges(self):
        with pytest.raises(ValueError):
            ForcingSchedule(ForcingParams(0.0, 0.0, 0.0), tau=1.0)
        with pytest.raises(ValueError):
            ForcingSchedule(ForcingParams(0.0, 0.0, 0.0), delta=0.0)

    def test_progress_keeps_parameters(self):
        s = default_schedule()
        assert schedule_update(s, 1.0, 0.5, 2.0, 2.0) is s

    def test_no_progress_scales_by_delta(self):
        s = ForcingSchedule(ForcingParams(0.09, 0.19, 0.19), tau=0.9, delta=0.1)
        s2 = schedule_update(s, 1.0, 0.95, 1.0, 0.95)
        assert s2.current.gamma == pytest.approx(0.009)
        assert s2.current.theta == pytest.approx(0.019)
        assert s2.current.lam == pytest.approx(0.019)

    def test_zero_violations_count_as_progress(self):
        s = default_schedule()
        assert schedule_update(s, 0.0, 0.0, 1.0, 0.99) is s

    def test_defaults_match_experiment_values(self):
        s = default_schedule(Regime.TWO_SETS)
        assert s.current.gamma == pytest.approx(0.1 - 1e-8)
        assert s.current.theta == pytest.approx(0.2 - 1e-8)
        assert s.current.lam == pytest.approx(0.2 - 1e-8)
        assert s.tau == 0.9 and s.delta == 0.1

    def test_stopping_validation(self):
        with pytest.raises(ValueError):
            StoppingConfig(eps_feas=0.0)
        with pytest.raises(ValueError):
            StoppingConfig(max_outer_iters=0)


class TestACondG1:
    def test_feasible_instance_finds_exact_point(self):
        rep = acondg1(slim_ellipse(), halfspace_at(1.30), [0.0, 0.0])
        assert rep.stop_code is StopCode.CONVERGED_FEASIBLE
        assert rep.min_violation == 0.0
        assert rep.outer_iters <= 50

    def test_infeasible_instance_matches_set_distance(self):
        a, b = slim_ellipse(), halfspace_at(1.50)
        rep = acondg1(a, b, [0.0, 0.0])
        assert rep.stop_code is StopCode.LACK_OF_PROGRESS
        expected = dist_ellipse_halfspace(a, b)
        assert expected == pytest.approx(1.5 - SQRT_202, abs=1e-12)
        assert rep.min_violation == pytest.approx(expected, abs=1e-4)
        gap = float(np.linalg.norm(rep.x_last - rep.y_last))
        assert gap == pytest.approx(expected, abs=1e-4)

    def test_start_already_feasible_stops_at_zero(self):
        rep = acondg1(unit_disk(), Halfspace(normal=[-1.0, 0.0], offset=0.0), [0.5, 0.0])
        assert rep.stop_code is StopCode.CONVERGED_FEASIBLE
        assert rep.outer_iters == 0

    def test_start_outside_first_set_rejected(self):
        with pytest.raises(ValueError):
            acondg1(unit_disk(), halfspace_at(1.0), [2.0, 0.0])

    def test_non_compact_first_set_rejected(self):
        with pytest.raises(ValueError):
            acondg1(halfspace_at(1.0), unit_disk(), [2.0, 0.0])

    def test_iterates_belong_to_their_sets(self):
        a, b = slim_ellipse(), halfspace_at(1.45)
        rep = acondg1(a, b, [0.0, 0.0])
        for x in rep.x_trace:
            assert a.violation(x) <= 1e-10
        for y in rep.y_trace:
            assert b.violation(y) <= 1e-10
        assert len(rep.x_trace) == rep.outer_iters + 1
        assert len(rep.y_trace) == rep.outer_iters
        assert len(rep.violations) == rep.outer_iters + 1
        assert len(rep.schedule_trace) == rep.outer_iters + 1
        assert all(cb >= 0.0 for cb, _ in rep.violations)

    def test_schedule_trace_is_monotone(self):
        rep = acondg1(slim_ellipse(), halfspace_at(1.50), [0.0, 0.0])
        for p, q in zip(rep.schedule_trace, rep.schedule_trace[1:]):
            assert q.gamma <= p.gamma and q.theta <= p.theta and q.lam <= p.lam

    def test_inexact_iterates_enter_the_interior(self):
        # The defining contrast with the exact baseline: on a feasible
        # instance the inexact method leaves the boundary of its set and
        # finishes strictly inside, while exact projections of exterior
        # points always land on the boundary.
        a, b = slim_ellipse(), halfspace_at(1.30)
        rep = acondg1(a, b, [0.0, 0.0])
        quad = [
            float((x - a.center) @ (a.shape @ (x - a.center))) - 1.0
            for x in rep.x_trace
        ]
        assert min(quad) < -1e-3

        ex = exact_alternating(a, b, [0.0, 0.0])
        for x in ex.x_trace[1:]:
            boundary_residual = abs(
                float((x - a.center) @ (a.shape @ (x - a.center))) - 1.0
            )
            assert boundary_residual <= 1e-9

    def test_fejer_monotone_on_feasible_instances(self):
        rng = np.random.default_rng(42)
        done = 0
        while done < 10:
            p = rng.uniform(-2.0, 2.0, 2)
            a = containing_body(rng, p, ("ellipsoid", "ball", "box")[rng.integers(3)])
            b = containing_body(rng, p, ("ball", "box", "halfspace")[rng.integers(3)])
            x0 = sample_members(a, rng, 1)[0]
            rep = acondg1(a, b, x0)
            assert not rep.inner_cap_iters
            dists = [float(np.linalg.norm(x - p)) for x in rep.x_trace]
            for d0, d1 in zip(dists, dists[1:]):
                assert d1 <= d0 + 1e-10
            done += 1


class TestACondG2:
    def test_feasible_pair_finds_exact_point(self):
        rep = acondg2(
            slim_ellipse(), second_ellipse(2.30), [0.0, 0.0], [2.30, 0.5]
        )
        assert rep.stop_code is StopCode.CONVERGED_FEASIBLE
        assert rep.min_violation == 0.0
        assert rep.outer_iters <= 50

    def test_disjoint_pair_matches_limit_violation(self):
        a, b = slim_ellipse(), second_ellipse(2.50)
        rep = acondg2(a, b, [0.0, 0.0], [2.50, 0.5])
        assert rep.stop_code is StopCode.LACK_OF_PROGRESS
        d, xa, yb = dist_two_bodies(a, b)
        limit_violation = min(b.violation(xa), a.violation(yb))
        assert rep.min_violation == pytest.approx(limit_violation, rel=2e-2)
        assert float(np.linalg.norm(rep.x_last - rep.y_last)) == pytest.approx(
            d, abs=1e-3
        )

    def test_start_in_other_set_stops_at_zero(self):
        rep = acondg2(unit_disk(), unit_disk(), [0.0, 0.0], [0.9, 0.0])
        assert rep.stop_code is StopCode.CONVERGED_FEASIBLE
        assert rep.outer_iters == 0

    def test_requires_compact_sets(self):
        with pytest.raises(ValueError):
            acondg2(unit_disk(), halfspace_at(0.0), [0.0, 0.0], [1.0, 0.0])

    def test_lyapunov_decrease_on_feasible_instances(self):
        rng = np.random.default_rng(43)
        done = 0
        while done < 10:
            p = rng.uniform(-2.0, 2.0, 2)
            kinds = ("ellipsoid", "ball", "box")
            a = containing_body(rng, p, kinds[rng.integers(3)])
            b = containing_body(rng, p, kinds[rng.integers(3)])
            x0 = sample_members(a, rng, 1)[0]
            y0 = sample_members(b, rng, 1)[0]
            rep = acondg2(a, b, x0, y0)
            assert not rep.inner_cap_iters
            vals = [
                float((x - p) @ (x - p)) + 0.5 * float((x - y) @ (x - y))
                for x, y in zip(rep.x_trace, rep.y_trace)
            ]
            for v0, v1 in zip(vals, vals[1:]):
                assert v1 <= v0 + 1e-10
            done += 1

    def test_step_size_relation_along_trace(self):
        a, b = slim_ellipse(), second_ellipse(2.40)
        rep = acondg2(a, b, [0.0, 0.0], [2.40, 0.5])
        for k in range(1, rep.outer_iters + 1):
            lhs = float(np.linalg.norm(rep.x_trace[k] - rep.y_trace[k]))
            rhs = float(np.linalg.norm(rep.x_trace[k - 1] - rep.y_trace[k]))
            assert lhs <= 3.0 * rhs + 1e-12

    def test_direction_limit_on_disjoint_disks(self):
        a = Ball(center=[-2.0, 0.0], radius=1.0)
        b = Ball(center=[2.0, 0.0], radius=1.0)
        rep = acondg2(a, b, [-2.0, 0.0], [2.0, 0.0])
        assert rep.stop_code is StopCode.LACK_OF_PROGRESS
        gap = rep.x_last - rep.y_last
        assert np.allclose(gap, [-2.0, 0.0], atol=1e-4)


class TestAveraged:
    def test_midpoint_already_feasible(self):
        rep = averaged_projection(
            unit_disk(), unit_disk(), [1.0, 0.0], [-1.0, 0.0]
        )
        assert rep.stop_code is StopCode.CONVERGED_FEASIBLE
        assert rep.outer_iters == 0

    def test_disjoint_disks_converge_to_midpoint(self):
        a = Ball(center=[-2.0, 0.0], radius=1.0)
        b = Ball(center=[2.0, 0.0], radius=1.0)
        rep = averaged_projection(a, b, [-2.0, 0.0], [2.0, 0.0])
        assert rep.stop_code is StopCode.LACK_OF_PROGRESS

        # Independent oracle: exact averaged projections run to 1e-10.
        z = np.array([0.0, 0.0])
        for _ in range(200_000):
            z_new = 0.5 * (a.project(z) + b.project(z))
            if np.max(np.abs(z_new - z)) <= 1e-10:
                break
            z = z_new
        assert np.allclose(rep.x_last, z, atol=1e-3)
        assert np.allclose(rep.x_last, [0.0, 0.0], atol=1e-3)
        assert np.allclose(rep.anchor_trace[-1], [-1.0, 0.0], atol=1e-3)
        assert np.allclose(rep.y_last, [1.0, 0.0], atol=1e-3)

    def test_feasible_ellipse_pair_converges(self):
        rep = averaged_projection(
            slim_ellipse(), second_ellipse(2.30), [0.0, 0.0], [2.30, 0.5],
            stop=StoppingConfig(max_outer_iters=500),
        )
        assert rep.stop_code is StopCode.CONVERGED_FEASIBLE
        assert rep.outer_iters <= 500
        a, b = slim_ellipse(), second_ellipse(2.30)
        assert a.violation(rep.x_last) <= 1e-8
        assert b.violation(rep.x_last) <= 1e-8

    def test_anchor_traces_stay_feasible(self):
        a, b = slim_ellipse(), second_ellipse(2.50)
        rep = averaged_projection(a, b, [0.0, 0.0], [2.50, 0.5])
        for pa in rep.anchor_trace:
            assert a.violation(pa) <= 1e-10
        for pb in rep.y_trace:
            assert b.violation(pb) <= 1e-10


class TestExactAlternating:
    def test_feasible_instance_stalls_with_positive_violation(self):
        rep = exact_alternating(slim_ellipse(), halfspace_at(1.30), [0.0, 0.0])
        assert rep.stop_code is StopCode.LACK_OF_PROGRESS
        assert 0.0 < rep.min_violation <= 1e-6

    def test_disjoint_disks_reach_set_distance(self):
        a = Ball(center=[-2.0, 0.0], radius=1.0)
        b = Ball(center=[2.0, 0.0], radius=1.0)
        rep = exact_alternating(a, b, [-1.5, 0.0])
        assert rep.stop_code is StopCode.LACK_OF_PROGRESS
        assert float(np.linalg.norm(rep.x_last - rep.y_last)) == pytest.approx(
            2.0, abs=1e-6
        )

    def test_identical_sets_stop_immediately(self):
        rep = exact_alternating(unit_disk(), unit_disk(), [0.3, 0.1])
        assert rep.stop_code is StopCode.CONVERGED_FEASIBLE
        assert rep.outer_iters == 0

    def test_requires_exact_projections(self):
        rep = exact_alternating(unit_disk(), halfspace_at(0.5), [0.0, 0.0])
        assert rep.stop_code in (StopCode.CONVERGED_FEASIBLE, StopCode.LACK_OF_PROGRESS)

    def test_empty_intersection_distance_ellipse_halfspace(self):
        a, b = slim_ellipse(), halfspace_at(1.50)
        rep = exact_alternating(a, b, [0.0, 0.0])
        gap = float(np.linalg.norm(rep.x_last - rep.y_last))
        assert gap == pytest.approx(dist_ellipse_halfspace(a, b), abs=1e-4)

    def test_iteration_cap_code(self):
        a, b = slim_ellipse(), halfspace_at(1.50)
        rep = exact_alternating(a, b, [0.0, 0.0], stop=StoppingConfig(max_outer_iters=3))
        assert rep.stop_code is StopCode.ITERATION_CAP
        assert rep.outer_iters == 3


class TestInnerCapPropagation:
    def test_outer_continues_after_inner_cap(self):
        a, b = slim_ellipse(), halfspace_at(1.50)
        rep = acondg1(
            a, b, [0.0, 0.0],
            limits=CondGLimits(max_inner_iters=2, degenerate_gap_tol=1e-14),
        )
        assert rep.inner_cap_iters
        for x in rep.x_trace:
            assert a.violation(x) <= 1e-10
        assert rep.stop_code in (StopCode.LACK_OF_PROGRESS, StopCode.ITERATION_CAP)
