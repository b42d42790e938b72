"""Outer feasibility solvers over two convex sets.

Four schemes are provided, all producing a :class:`SolveReport`:

* :func:`acondg1` -- exact projection onto B alternated with a
  conditional-gradient inexact projection onto a compact A,
* :func:`acondg2` -- inexact projections onto both compact sets,
* :func:`averaged_projection` -- averages the two inexact projections of a
  single iterate,
* :func:`exact_alternating` -- the exact-projection baseline.

Stopping follows the experiment conventions: a run converges when a computed
iterate violates the *other* set by at most ``eps_feas``; it stops for lack
of progress when both iterate sequences move at most ``eps_lack`` in the
max norm for two consecutive iterations. Forcing parameters follow an
adaptive schedule that shrinks them by a fixed factor whenever neither
violation improved by the progress factor ``tau``.

Check layering per iteration: an iterate that lands *exactly* in the other
set stops the run immediately (the algorithms' own membership stop); the
tolerance-based criteria are evaluated at the end of the iteration, lack of
progress before the ``eps_feas`` declaration, so a stalled run is reported
as stalled even when its final violation happens to dip under the
declaration threshold in the same iteration.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .bodies import ConvexBody, Vector, as_vector
from .condg import CondGLimits, CondGStop, ForcingParams, condg_project

__all__ = [
    "ForcingSchedule",
    "Regime",
    "SolveReport",
    "StopCode",
    "StoppingConfig",
    "acondg1",
    "acondg2",
    "averaged_projection",
    "default_schedule",
    "exact_alternating",
    "schedule_update",
]

_ZERO_PARAMS = ForcingParams(0.0, 0.0, 0.0)


class Regime(enum.Enum):
    """Which forcing-parameter conditions a schedule must maintain."""

    ONE_SET = "one_set"
    TWO_SETS = "two_sets"


@dataclass(frozen=True)
class ForcingSchedule:
    """Adaptive forcing parameters with their update policy.

    ``tau`` is the progress factor: if either feasibility violation shrank
    by at least that factor between consecutive outer iterations the
    parameters are kept, otherwise all three are multiplied by ``delta``.
    Updates never increase any component, so once decreases become permanent
    the parameter sequences are geometric and hence summable.
    """

    current: ForcingParams
    tau: float = 0.9
    delta: float = 0.1
    regime: Regime = Regime.ONE_SET

    def __post_init__(self):
        if not 0.0 < self.tau < 1.0:
            raise ValueError(f"tau must lie in (0, 1), got {self.tau}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        p = self.current
        if self.regime is Regime.ONE_SET:
            if not (p.theta < 0.5 and 2.0 * p.gamma + 4.0 * p.lam < 1.0):
                raise ValueError(
                    "one-set regime requires theta < 1/2 and 2*gamma + 4*lam < 1"
                )
        else:
            ok = (
                p.theta < 0.25
                and 2.0 * p.gamma + 4.0 * p.lam < 1.0
                and 2.0 * (p.gamma + p.theta + p.lam) < 1.0
            )
            if not ok:
                raise ValueError(
                    "two-set regime requires theta < 1/4, 2*gamma + 4*lam < 1 "
                    "and 2*(gamma + theta + lam) < 1"
                )

    def updated(
        self, cb_prev: float, cb_curr: float, ca_prev: float, ca_curr: float
    ) -> "ForcingSchedule":
        """Apply the progress rule; NaN baselines count as no progress."""
        progress = cb_curr <= self.tau * cb_prev or ca_curr <= self.tau * ca_prev
        if progress:
            return self
        return replace(self, current=self.current.scaled(self.delta))


def schedule_update(
    schedule: ForcingSchedule,
    cb_prev: float,
    cb_curr: float,
    ca_prev: float,
    ca_curr: float,
) -> ForcingSchedule:
    """Functional form of :meth:`ForcingSchedule.updated`."""
    return schedule.updated(cb_prev, cb_curr, ca_prev, ca_curr)


def default_schedule(regime: Regime = Regime.ONE_SET) -> ForcingSchedule:
    """Experiment defaults: gamma0 = 0.1 - 1e-8, theta0 = lam0 = 0.2 - 1e-8,
    tau = 0.9, delta = 0.1."""
    eps = 1e-8
    return ForcingSchedule(
        current=ForcingParams(0.1 - eps, 0.2 - eps, 0.2 - eps),
        tau=0.9,
        delta=0.1,
        regime=regime,
    )


@dataclass(frozen=True)
class StoppingConfig:
    eps_feas: float = 1e-8
    eps_lack: float = 1e-8
    max_outer_iters: int = 100_000

    def __post_init__(self):
        if not self.eps_feas > 0.0:
            raise ValueError("eps_feas must be positive")
        if not self.eps_lack > 0.0:
            raise ValueError("eps_lack must be positive")
        if self.max_outer_iters < 1:
            raise ValueError("max_outer_iters must be >= 1")


class StopCode(enum.Enum):
    CONVERGED_FEASIBLE = "converged_feasible"
    LACK_OF_PROGRESS = "lack_of_progress"
    ITERATION_CAP = "iteration_cap"

    @property
    def letter(self) -> str:
        return {"converged_feasible": "C", "lack_of_progress": "L",
                "iteration_cap": "I"}[self.value]


@dataclass(eq=False)
class SolveReport:
    """Outer-loop trace of a feasibility run.

    ``x_trace[k]`` / ``y_trace[k]`` are the iterates after outer iteration
    ``k``; for :func:`acondg1` (and :func:`exact_alternating` without a
    ``y0``) the y-sequence starts at iteration 1, so ``y_trace`` is one entry
    shorter than ``x_trace``. ``violations[k]`` pairs the violation of the
    x-iterate against B with that of the y-iterate against A (``inf`` when
    no y exists yet). For the averaged solver ``x_trace`` holds the averaged
    iterates, ``y_trace`` the B-side anchors, ``anchor_trace`` the A-side
    anchors, and the violation pair measures the averaged iterate against
    B and A.

    ``schedule_trace[k]`` and ``inner_iters_per_k[k]`` record the forcing
    parameters and inner iteration count of the step that produced row ``k``
    (row 0 carries the initial parameters and zero inner iterations).
    ``inner_cap_iters`` lists outer iterations whose inner loop hit its cap.
    """

    x_trace: list[Vector]
    y_trace: list[Vector]
    violations: list[tuple[float, float]]
    stop_code: StopCode
    outer_iters: int
    inner_iter_total: int
    schedule_trace: list[ForcingParams]
    inner_iters_per_k: list[int]
    inner_cap_iters: list[int] = field(default_factory=list)
    anchor_trace: list[Vector] | None = None

    @property
    def min_violation(self) -> float:
        last = self.violations[-1]
        finite = [v for v in last if math.isfinite(v)]
        return min(finite) if finite else math.inf

    @property
    def x_last(self) -> Vector:
        return self.x_trace[-1]

    @property
    def y_last(self) -> Vector:
        return self.y_trace[-1]


def _inf_norm(d: Vector) -> float:
    return float(np.max(np.abs(d)))


class _Trace:
    """Accumulates per-iteration rows shared by all solvers."""

    def __init__(self, params0: ForcingParams):
        self.x: list[Vector] = []
        self.y: list[Vector] = []
        self.violations: list[tuple[float, float]] = []
        self.schedule: list[ForcingParams] = [params0]
        self.inner: list[int] = [0]
        self.inner_total = 0
        self.caps: list[int] = []
        self.lack_streak = 0

    def row(self, params: ForcingParams, inner: int):
        self.schedule.append(params)
        self.inner.append(inner)
        self.inner_total += inner

    def note_caps(self, k: int, *results):
        if any(r.stop_reason is CondGStop.ITERATION_CAP for r in results):
            self.caps.append(k)

    def lack_step(self, small: bool) -> bool:
        """Track consecutive small-step iterations; True when two in a row."""
        self.lack_streak = self.lack_streak + 1 if small else 0
        return self.lack_streak >= 2

    def report(self, code: StopCode, outer: int, **extra) -> SolveReport:
        return SolveReport(
            x_trace=self.x,
            y_trace=self.y,
            violations=self.violations,
            stop_code=code,
            outer_iters=outer,
            inner_iter_total=self.inner_total,
            schedule_trace=self.schedule,
            inner_iters_per_k=self.inner,
            inner_cap_iters=self.caps,
            **extra,
        )


def _check_pair(a: ConvexBody, b: ConvexBody, x0, y0=None):
    if a.dim != b.dim:
        raise ValueError(f"sets have different dimensions: {a.dim} vs {b.dim}")
    x0 = as_vector(x0, a.dim)
    if a.violation(x0) > 1e-10:
        raise ValueError("x0 must belong to the first set (violation <= 1e-10)")
    if y0 is None:
        return x0, None
    y0 = as_vector(y0, a.dim)
    if b.violation(y0) > 1e-10:
        raise ValueError("y0 must belong to the second set (violation <= 1e-10)")
    return x0, y0


def acondg1(
    a: ConvexBody,
    b: ConvexBody,
    x0,
    schedule: ForcingSchedule | None = None,
    stop: StoppingConfig = StoppingConfig(),
    limits: CondGLimits = CondGLimits(),
) -> SolveReport:
    """Alternate the exact projection onto ``b`` with a conditional-gradient
    inexact projection onto the compact set ``a``, starting from ``x0 in a``.
    """
    if not a.is_compact:
        raise ValueError("first set must be compact")
    if not b.has_exact_projection:
        raise ValueError("second set must support exact projection")
    x0, _ = _check_pair(a, b, x0)
    sched = schedule if schedule is not None else default_schedule(Regime.ONE_SET)

    tr = _Trace(sched.current)
    x = x0
    tr.x.append(x)
    tr.violations.append((b.violation(x), math.inf))
    if tr.violations[0][0] <= stop.eps_feas:
        return tr.report(StopCode.CONVERGED_FEASIBLE, 0)

    y_prev: Vector | None = None
    for k in range(1, stop.max_outer_iters + 1):
        params = sched.current
        y_new = b.project(x)
        ca_y = a.violation(y_new)
        if ca_y == 0.0:
            tr.x.append(x)
            tr.y.append(y_new)
            tr.violations.append((tr.violations[-1][0], ca_y))
            tr.row(params, 0)
            return tr.report(StopCode.CONVERGED_FEASIBLE, k)

        res = condg_project(a, params, x, y_new, limits)
        tr.note_caps(k, res)
        x_new = res.w_plus
        cb_x = b.violation(x_new)
        tr.x.append(x_new)
        tr.y.append(y_new)
        tr.violations.append((cb_x, ca_y))
        tr.row(params, res.inner_iters)
        if cb_x == 0.0:
            return tr.report(StopCode.CONVERGED_FEASIBLE, k)

        small = _inf_norm(x_new - x) <= stop.eps_lack and (
            y_prev is not None and _inf_norm(y_new - y_prev) <= stop.eps_lack
        )
        if tr.lack_step(small):
            return tr.report(StopCode.LACK_OF_PROGRESS, k)
        if min(cb_x, ca_y) <= stop.eps_feas:
            return tr.report(StopCode.CONVERGED_FEASIBLE, k)

        cb_prev, ca_prev = tr.violations[-2]
        if not math.isfinite(ca_prev):
            ca_prev = math.nan
        sched = sched.updated(cb_prev, cb_x, ca_prev, ca_y)
        x, y_prev = x_new, y_new

    return tr.report(StopCode.ITERATION_CAP, stop.max_outer_iters)


def acondg2(
    a: ConvexBody,
    b: ConvexBody,
    x0,
    y0,
    schedule: ForcingSchedule | None = None,
    stop: StoppingConfig = StoppingConfig(),
    limits: CondGLimits = CondGLimits(),
) -> SolveReport:
    """Alternate conditional-gradient inexact projections onto both compact
    sets, starting from ``x0 in a`` and ``y0 in b``."""
    if not (a.is_compact and b.is_compact):
        raise ValueError("both sets must be compact")
    x0, y0 = _check_pair(a, b, x0, y0)
    sched = schedule if schedule is not None else default_schedule(Regime.TWO_SETS)

    tr = _Trace(sched.current)
    x, y = x0, y0
    tr.x.append(x)
    tr.y.append(y)
    tr.violations.append((b.violation(x), a.violation(y)))
    if min(tr.violations[0]) <= stop.eps_feas:
        return tr.report(StopCode.CONVERGED_FEASIBLE, 0)

    for k in range(1, stop.max_outer_iters + 1):
        params = sched.current
        res_y = condg_project(b, params, y, x, limits)
        y_new = res_y.w_plus
        ca_y = a.violation(y_new)
        if ca_y == 0.0:
            tr.x.append(x)
            tr.y.append(y_new)
            tr.violations.append((tr.violations[-1][0], ca_y))
            tr.row(params, res_y.inner_iters)
            tr.note_caps(k, res_y)
            return tr.report(StopCode.CONVERGED_FEASIBLE, k)

        res_x = condg_project(a, params, x, y_new, limits)
        x_new = res_x.w_plus
        cb_x = b.violation(x_new)
        tr.note_caps(k, res_y, res_x)
        tr.x.append(x_new)
        tr.y.append(y_new)
        tr.violations.append((cb_x, ca_y))
        tr.row(params, res_y.inner_iters + res_x.inner_iters)
        if cb_x == 0.0:
            return tr.report(StopCode.CONVERGED_FEASIBLE, k)

        small = (
            _inf_norm(x_new - x) <= stop.eps_lack
            and _inf_norm(y_new - y) <= stop.eps_lack
        )
        if tr.lack_step(small):
            return tr.report(StopCode.LACK_OF_PROGRESS, k)
        if min(cb_x, ca_y) <= stop.eps_feas:
            return tr.report(StopCode.CONVERGED_FEASIBLE, k)

        cb_prev, ca_prev = tr.violations[-2]
        sched = sched.updated(cb_prev, cb_x, ca_prev, ca_y)
        x, y = x_new, y_new

    return tr.report(StopCode.ITERATION_CAP, stop.max_outer_iters)


def averaged_projection(
    a: ConvexBody,
    b: ConvexBody,
    x0,
    y0,
    schedule: ForcingSchedule | None = None,
    stop: StoppingConfig = StoppingConfig(),
    limits: CondGLimits = CondGLimits(),
) -> SolveReport:
    """Average the two inexact projections of a single iterate.

    The averaged iterate starts at the midpoint of ``x0`` and ``y0``; each
    iteration projects it inexactly onto both sets, warm-started at the
    previous projection outputs, and averages the results. The run converges
    when the averaged iterate lies in both sets to ``eps_feas``; lack of
    progress watches the averaged iterate only. In the report ``x_trace``
    holds the averaged iterates and ``y_trace`` / ``anchor_trace`` the two
    projection outputs.
    """
    if not (a.is_compact and b.is_compact):
        raise ValueError("both sets must be compact")
    x0, y0 = _check_pair(a, b, x0, y0)
    sched = schedule if schedule is not None else default_schedule(Regime.TWO_SETS)

    tr = _Trace(sched.current)
    anchors_a: list[Vector] = [x0]
    z = 0.5 * (x0 + y0)
    tr.x.append(z)
    tr.y.append(y0)
    tr.violations.append((b.violation(z), a.violation(z)))
    if max(tr.violations[0]) <= stop.eps_feas:
        return tr.report(StopCode.CONVERGED_FEASIBLE, 0, anchor_trace=anchors_a)

    anchor_a, anchor_b = x0, y0
    for k in range(1, stop.max_outer_iters + 1):
        params = sched.current
        res_a = condg_project(a, params, anchor_a, z, limits)
        res_b = condg_project(b, params, anchor_b, z, limits)
        tr.note_caps(k, res_a, res_b)
        anchor_a, anchor_b = res_a.w_plus, res_b.w_plus
        z_new = 0.5 * (anchor_a + anchor_b)
        anchors_a.append(anchor_a)
        tr.x.append(z_new)
        tr.y.append(anchor_b)
        tr.violations.append((b.violation(z_new), a.violation(z_new)))
        tr.row(params, res_a.inner_iters + res_b.inner_iters)
        if max(tr.violations[-1]) == 0.0:
            return tr.report(StopCode.CONVERGED_FEASIBLE, k, anchor_trace=anchors_a)

        if tr.lack_step(_inf_norm(z_new - z) <= stop.eps_lack):
            return tr.report(StopCode.LACK_OF_PROGRESS, k, anchor_trace=anchors_a)
        if max(tr.violations[-1]) <= stop.eps_feas:
            return tr.report(StopCode.CONVERGED_FEASIBLE, k, anchor_trace=anchors_a)

        cb_prev, ca_prev = tr.violations[-2]
        cb_curr, ca_curr = tr.violations[-1]
        sched = sched.updated(cb_prev, cb_curr, ca_prev, ca_curr)
        z = z_new

    return tr.report(
        StopCode.ITERATION_CAP, stop.max_outer_iters, anchor_trace=anchors_a
    )


def exact_alternating(
    a: ConvexBody,
    b: ConvexBody,
    x0,
    stop: StoppingConfig = StoppingConfig(),
    y0=None,
) -> SolveReport:
    """Exact alternating projections: project onto ``b``, then onto ``a``.

    ``y0`` is optional; when given it only seeds the initial feasibility
    check and the first lack-of-progress baseline.

    Exact projections land on set boundaries, so this baseline converges
    only when an iterate is *exactly* feasible for the other set; it does
    not declare success at ``eps_feas``. A run that merely approaches the
    intersection stops for lack of progress, with the report's violations
    showing how close it got.
    """
    if not (a.has_exact_projection and b.has_exact_projection):
        raise ValueError("both sets must support exact projection")
    x0, y0 = _check_pair(a, b, x0, y0)

    tr = _Trace(_ZERO_PARAMS)
    x = x0
    tr.x.append(x)
    ca0 = a.violation(y0) if y0 is not None else math.inf
    if y0 is not None:
        tr.y.append(y0)
    tr.violations.append((b.violation(x), ca0))
    if min(tr.violations[0]) == 0.0:
        return tr.report(StopCode.CONVERGED_FEASIBLE, 0)

    y_prev = y0
    for k in range(1, stop.max_outer_iters + 1):
        y_new = b.project(x)
        ca_y = a.violation(y_new)
        if ca_y == 0.0:
            tr.x.append(x)
            tr.y.append(y_new)
            tr.violations.append((tr.violations[-1][0], ca_y))
            tr.row(_ZERO_PARAMS, 0)
            return tr.report(StopCode.CONVERGED_FEASIBLE, k)

        x_new = a.project(y_new)
        cb_x = b.violation(x_new)
        tr.x.append(x_new)
        tr.y.append(y_new)
        tr.violations.append((cb_x, ca_y))
        tr.row(_ZERO_PARAMS, 0)
        if cb_x == 0.0:
            return tr.report(StopCode.CONVERGED_FEASIBLE, k)

        small = _inf_norm(x_new - x) <= stop.eps_lack and (
            y_prev is not None and _inf_norm(y_new - y_prev) <= stop.eps_lack
        )
        if tr.lack_step(small):
            return tr.report(StopCode.LACK_OF_PROGRESS, k)

        x, y_prev = x_new, y_new

    return tr.report(StopCode.ITERATION_CAP, stop.max_outer_iters)
