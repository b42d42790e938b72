"""Problem-instance configuration: JSON schema, validation, and the built-in
experiment tables.

A config file is a single JSON object with a ``schema`` version field. Body
descriptions are tagged by ``kind``: ``ellipse`` (center / angle /
semi_axes, 2-D), ``halfspace`` (normal / offset), ``ball`` (center /
radius), ``box`` (lower / upper). Validation errors carry the path of the
offending field.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .bodies import Ball, Box, ConvexBody, Ellipsoid, Halfspace
from .condg import ForcingParams
from .solvers import ForcingSchedule, Regime, StoppingConfig

__all__ = [
    "ConfigError",
    "InstanceConfig",
    "SCHEMA_VERSION",
    "SOLVER_NAMES",
    "TABLE1_OFFSETS",
    "TABLE2_CENTERS",
    "build_bodies",
    "build_schedule",
    "build_stopping",
    "load_config",
    "parse_config",
    "save_config",
    "serialize_config",
    "table1_config",
    "table2_config",
    "table_reference",
    "validate_config",
]

SCHEMA_VERSION = 1

SOLVER_NAMES = ("ACondG1", "ACondG2", "Averaged", "ExactAlt1", "ExactAlt2")
_SOLVER_LOOKUP = {n.lower().replace("_", ""): n for n in SOLVER_NAMES}

_EPS = 1e-8
_DEFAULT_SCHEDULE = (0.1 - _EPS, 0.2 - _EPS, 0.2 - _EPS, 0.9, 0.1)
_DEFAULT_STOPPING = (_EPS, _EPS, 100_000)


class ConfigError(ValueError):
    """Invalid instance configuration; ``path`` points at the bad field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class ScheduleSpec:
    gamma0: float = _DEFAULT_SCHEDULE[0]
    theta0: float = _DEFAULT_SCHEDULE[1]
    lambda0: float = _DEFAULT_SCHEDULE[2]
    tau: float = _DEFAULT_SCHEDULE[3]
    delta: float = _DEFAULT_SCHEDULE[4]


@dataclass(frozen=True)
class StoppingSpec:
    eps_feas: float = _DEFAULT_STOPPING[0]
    eps_lack: float = _DEFAULT_STOPPING[1]
    max_outer_iters: int = _DEFAULT_STOPPING[2]


@dataclass(frozen=True)
class BodySpec:
    kind: str
    params: dict = field(hash=False)

    def __eq__(self, other):
        if not isinstance(other, BodySpec):
            return NotImplemented
        return self.kind == other.kind and self.params == other.params


@dataclass(frozen=True)
class InstanceConfig:
    dimension: int
    set_a: BodySpec
    set_b: BodySpec
    x0: tuple[float, ...]
    solver: str
    y0: tuple[float, ...] | None = None
    schedule: ScheduleSpec = ScheduleSpec()
    stopping: StoppingSpec = StoppingSpec()
    seed: int | None = None


def _number(obj, path: str, positive=False) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ConfigError(path, f"expected a number, got {type(obj).__name__}")
    v = float(obj)
    if not math.isfinite(v):
        raise ConfigError(path, "must be finite")
    if positive and v <= 0.0:
        raise ConfigError(path, "must be positive")
    return v


def _integer(obj, path: str, minimum: int | None = None) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise ConfigError(path, f"expected an integer, got {type(obj).__name__}")
    if minimum is not None and obj < minimum:
        raise ConfigError(path, f"must be >= {minimum}")
    return obj


def _vector(obj, path: str, dim: int | None = None) -> tuple[float, ...]:
    if not isinstance(obj, (list, tuple)):
        raise ConfigError(path, "expected a list of numbers")
    v = tuple(_number(x, f"{path}[{i}]") for i, x in enumerate(obj))
    if dim is not None and len(v) != dim:
        raise ConfigError(path, f"expected {dim} entries, got {len(v)}")
    return v


def _parse_body(obj, path: str, dim: int) -> BodySpec:
    if not isinstance(obj, dict):
        raise ConfigError(path, "expected an object")
    kind = obj.get("kind")
    if kind == "ellipse":
        if dim != 2:
            raise ConfigError(f"{path}.kind", "ellipse requires dimension 2")
        params = {
            "center": _vector(obj.get("center"), f"{path}.center", 2),
            "angle": _number(obj.get("angle"), f"{path}.angle"),
            "semi_axes": _vector(obj.get("semi_axes"), f"{path}.semi_axes", 2),
        }
        if min(params["semi_axes"]) <= 0.0:
            raise ConfigError(f"{path}.semi_axes", "must be positive")
    elif kind == "halfspace":
        params = {
            "normal": _vector(obj.get("normal"), f"{path}.normal", dim),
            "offset": _number(obj.get("offset"), f"{path}.offset"),
        }
        if all(c == 0.0 for c in params["normal"]):
            raise ConfigError(f"{path}.normal", "must be nonzero")
    elif kind == "ball":
        params = {
            "center": _vector(obj.get("center"), f"{path}.center", dim),
            "radius": _number(obj.get("radius"), f"{path}.radius", positive=True),
        }
    elif kind == "box":
        params = {
            "lower": _vector(obj.get("lower"), f"{path}.lower", dim),
            "upper": _vector(obj.get("upper"), f"{path}.upper", dim),
        }
        if any(l > u for l, u in zip(params["lower"], params["upper"])):
            raise ConfigError(path, "requires lower <= upper componentwise")
    else:
        raise ConfigError(
            f"{path}.kind", f"unknown body kind {kind!r}; "
            "expected ellipse, halfspace, ball or box"
        )
    return BodySpec(kind=kind, params=params)


def parse_config(obj) -> InstanceConfig:
    """Parse and validate a config dict into an :class:`InstanceConfig`."""
    if not isinstance(obj, dict):
        raise ConfigError("$", "config must be a JSON object")
    schema = obj.get("schema")
    if schema != SCHEMA_VERSION:
        raise ConfigError("schema", f"expected version {SCHEMA_VERSION}, got {schema}")
    dim = _integer(obj.get("dimension"), "dimension", minimum=1)

    solver_raw = obj.get("solver")
    if not isinstance(solver_raw, str):
        raise ConfigError("solver", "expected a string")
    solver = _SOLVER_LOOKUP.get(solver_raw.lower().replace("_", "").replace("-", ""))
    if solver is None:
        raise ConfigError(
            "solver", f"unknown solver {solver_raw!r}; expected one of {SOLVER_NAMES}"
        )

    set_a = _parse_body(obj.get("set_a"), "set_a", dim)
    set_b = _parse_body(obj.get("set_b"), "set_b", dim)
    x0 = _vector(obj.get("x0"), "x0", dim)
    y0 = None if obj.get("y0") is None else _vector(obj.get("y0"), "y0", dim)

    sched_obj = obj.get("schedule", {})
    if not isinstance(sched_obj, dict):
        raise ConfigError("schedule", "expected an object")
    defaults = ScheduleSpec()
    schedule = ScheduleSpec(
        gamma0=_number(sched_obj.get("gamma0", defaults.gamma0), "schedule.gamma0"),
        theta0=_number(sched_obj.get("theta0", defaults.theta0), "schedule.theta0"),
        lambda0=_number(sched_obj.get("lambda0", defaults.lambda0), "schedule.lambda0"),
        tau=_number(sched_obj.get("tau", defaults.tau), "schedule.tau"),
        delta=_number(sched_obj.get("delta", defaults.delta), "schedule.delta"),
    )
    for name in ("gamma0", "theta0", "lambda0"):
        if getattr(schedule, name) < 0.0:
            raise ConfigError(f"schedule.{name}", "must be >= 0")
    for name in ("tau", "delta"):
        if not 0.0 < getattr(schedule, name) < 1.0:
            raise ConfigError(f"schedule.{name}", "must lie in (0, 1)")

    stop_obj = obj.get("stopping", {})
    if not isinstance(stop_obj, dict):
        raise ConfigError("stopping", "expected an object")
    sdef = StoppingSpec()
    stopping = StoppingSpec(
        eps_feas=_number(
            stop_obj.get("eps_feas", sdef.eps_feas), "stopping.eps_feas", positive=True
        ),
        eps_lack=_number(
            stop_obj.get("eps_lack", sdef.eps_lack), "stopping.eps_lack", positive=True
        ),
        max_outer_iters=_integer(
            stop_obj.get("max_outer_iters", sdef.max_outer_iters),
            "stopping.max_outer_iters",
            minimum=1,
        ),
    )

    seed = obj.get("seed")
    if seed is not None:
        seed = _integer(seed, "seed")

    config = InstanceConfig(
        dimension=dim,
        set_a=set_a,
        set_b=set_b,
        x0=x0,
        y0=y0,
        solver=solver,
        schedule=schedule,
        stopping=stopping,
        seed=seed,
    )
    validate_config(config)
    return config


def _build_body(spec: BodySpec) -> ConvexBody:
    p = spec.params
    if spec.kind == "ellipse":
        return Ellipsoid.from_axes(p["center"], p["angle"], p["semi_axes"])
    if spec.kind == "halfspace":
        return Halfspace(normal=p["normal"], offset=p["offset"])
    if spec.kind == "ball":
        return Ball(center=p["center"], radius=p["radius"])
    if spec.kind == "box":
        return Box(lower=p["lower"], upper=p["upper"])
    raise ConfigError("kind", f"unknown body kind {spec.kind!r}")


def build_bodies(config: InstanceConfig) -> tuple[ConvexBody, ConvexBody]:
    return _build_body(config.set_a), _build_body(config.set_b)


def _solver_regime(solver: str) -> Regime | None:
    if solver == "ACondG1":
        return Regime.ONE_SET
    if solver in ("ACondG2", "Averaged"):
        return Regime.TWO_SETS
    return None


def build_schedule(config: InstanceConfig) -> ForcingSchedule | None:
    regime = _solver_regime(config.solver)
    if regime is None:
        return None
    s = config.schedule
    return ForcingSchedule(
        current=ForcingParams(s.gamma0, s.theta0, s.lambda0),
        tau=s.tau,
        delta=s.delta,
        regime=regime,
    )


def build_stopping(config: InstanceConfig) -> StoppingConfig:
    s = config.stopping
    return StoppingConfig(
        eps_feas=s.eps_feas,
        eps_lack=s.eps_lack,
        max_outer_iters=s.max_outer_iters,
    )


def validate_config(config: InstanceConfig) -> None:
    """Cross-field checks: solver/body compatibility, schedule regime
    conditions, and membership of the starting points."""
    a, b = build_bodies(config)
    solver = config.solver

    if solver == "ACondG1":
        if not a.is_compact:
            raise ConfigError("set_a", f"{solver} requires a compact first set")
        if not b.has_exact_projection:
            raise ConfigError(
                "set_b", f"{solver} requires exact projection onto the second set"
            )
    elif solver in ("ACondG2", "Averaged"):
        if not a.is_compact:
            raise ConfigError("set_a", f"{solver} requires a compact first set")
        if not b.is_compact:
            raise ConfigError("set_b", f"{solver} requires a compact second set")
        if config.y0 is None:
            raise ConfigError("y0", f"{solver} requires a starting point in set_b")
    else:
        if not a.has_exact_projection or not b.has_exact_projection:
            raise ConfigError(
                "set_a", f"{solver} requires exact projection onto both sets"
            )

    try:
        build_schedule(config)
    except ValueError as exc:
        raise ConfigError("schedule", str(exc)) from exc

    if a.violation(config.x0) > 1e-10:
        raise ConfigError("x0", "must belong to set_a (violation <= 1e-10)")
    if config.y0 is not None and b.violation(config.y0) > 1e-10:
        raise ConfigError("y0", "must belong to set_b (violation <= 1e-10)")


def serialize_config(config: InstanceConfig) -> dict:
    """Inverse of :func:`parse_config`: a JSON-ready dict."""
    obj = {
        "schema": SCHEMA_VERSION,
        "dimension": config.dimension,
        "set_a": {"kind": config.set_a.kind, **_jsonify(config.set_a.params)},
        "set_b": {"kind": config.set_b.kind, **_jsonify(config.set_b.params)},
        "x0": list(config.x0),
        "solver": config.solver,
        "schedule": {
            "gamma0": config.schedule.gamma0,
            "theta0": config.schedule.theta0,
            "lambda0": config.schedule.lambda0,
            "tau": config.schedule.tau,
            "delta": config.schedule.delta,
        },
        "stopping": {
            "eps_feas": config.stopping.eps_feas,
            "eps_lack": config.stopping.eps_lack,
            "max_outer_iters": config.stopping.max_outer_iters,
        },
    }
    if config.y0 is not None:
        obj["y0"] = list(config.y0)
    if config.seed is not None:
        obj["seed"] = config.seed
    return obj


def _jsonify(params: dict) -> dict:
    return {
        k: list(v) if isinstance(v, tuple) else v for k, v in params.items()
    }


def load_config(path) -> InstanceConfig:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("$", f"invalid JSON: {exc}") from exc
    return parse_config(obj)


def save_config(config: InstanceConfig, path) -> None:
    Path(path).write_text(json.dumps(serialize_config(config), indent=2) + "\n")


# --- built-in experiment tables -------------------------------------------
#
# Table 1: slim rotated ellipse against a moving halfspace x1 >= beta.
# Table 2: the same ellipse against a second rotated ellipse whose center
# slides along the x1 axis. Reference stop codes and final violations are
# transcribed constants the runs are compared against.

TABLE1_OFFSETS = ("1.30", "1.35", "1.40", "1.42", "1.43", "1.45", "1.50", "1.60")
TABLE2_CENTERS = ("2.30", "2.35", "2.357", "2.358", "2.359", "2.36", "2.40", "2.50")

_REFERENCE_TABLE1 = {
    "1.30": {"ACondG1": ("C", "0.00e+00"), "ExactAlt1": ("L", "1.47e-08")},
    "1.35": {"ACondG1": ("C", "0.00e+00"), "ExactAlt1": ("L", "1.44e-08")},
    "1.40": {"ACondG1": ("C", "0.00e+00"), "ExactAlt1": ("L", "2.11e-08")},
    "1.42": {"ACondG1": ("C", "0.00e+00"), "ExactAlt1": ("L", "5.67e-08")},
    "1.43": {"ACondG1": ("L", "8.73e-03"), "ExactAlt1": ("L", "8.73e-03")},
    "1.45": {"ACondG1": ("L", "2.87e-02"), "ExactAlt1": ("L", "2.87e-02")},
    "1.50": {"ACondG1": ("L", "7.87e-02"), "ExactAlt1": ("L", "7.87e-02")},
    "1.60": {"ACondG1": ("L", "1.79e-01"), "ExactAlt1": ("L", "1.79e-01")},
}

_REFERENCE_TABLE2 = {
    "2.30": {"ACondG2": ("C", "0.00e+00"), "ExactAlt2": ("L", "2.71e-08")},
    "2.35": {"ACondG2": ("C", "0.00e+00"), "ExactAlt2": ("L", "4.60e-08")},
    "2.357": {"ACondG2": ("C", "0.00e+00"), "ExactAlt2": ("L", "7.63e-08")},
    "2.358": {"ACondG2": ("C", "0.00e+00"), "ExactAlt2": ("L", "1.06e-07")},
    "2.359": {"ACondG2": ("L", "1.50e-04"), "ExactAlt2": ("L", "7.31e-05")},
    "2.36": {"ACondG2": ("L", "1.01e-03"), "ExactAlt2": ("L", "1.00e-03")},
    "2.40": {"ACondG2": ("L", "4.01e-02"), "ExactAlt2": ("L", "4.01e-02")},
    "2.50": {"ACondG2": ("L", "1.59e-01"), "ExactAlt2": ("L", "1.59e-01")},
}


def _ellipse_a_spec() -> BodySpec:
    return BodySpec(
        kind="ellipse",
        params={
            "center": (0.0, 0.0),
            "angle": -math.pi / 4.0,
            "semi_axes": (2.0, 0.2),
        },
    )


def table1_config(offset: str, solver: str) -> InstanceConfig:
    """Instance of table 1: ellipse vs halfspace ``x1 >= offset``."""
    if offset not in TABLE1_OFFSETS:
        raise ConfigError("instance", f"unknown table-1 offset {offset!r}")
    if solver not in ("ACondG1", "ExactAlt1"):
        raise ConfigError("solver", f"table 1 uses ACondG1/ExactAlt1, got {solver!r}")
    beta = float(offset)
    return InstanceConfig(
        dimension=2,
        set_a=_ellipse_a_spec(),
        set_b=BodySpec(
            kind="halfspace", params={"normal": (-1.0, 0.0), "offset": -beta}
        ),
        x0=(0.0, 0.0),
        solver=solver,
    )


def table2_config(center1: str, solver: str) -> InstanceConfig:
    """Instance of table 2: ellipse vs a second ellipse centered at
    ``(center1, 0.5)`` with angle pi/3 and semi-axes (2, 0.4)."""
    if center1 not in TABLE2_CENTERS:
        raise ConfigError("instance", f"unknown table-2 center {center1!r}")
    if solver not in ("ACondG2", "ExactAlt2"):
        raise ConfigError("solver", f"table 2 uses ACondG2/ExactAlt2, got {solver!r}")
    c1 = float(center1)
    return InstanceConfig(
        dimension=2,
        set_a=_ellipse_a_spec(),
        set_b=BodySpec(
            kind="ellipse",
            params={
                "center": (c1, 0.5),
                "angle": math.pi / 3.0,
                "semi_axes": (2.0, 0.4),
            },
        ),
        x0=(0.0, 0.0),
        y0=(c1, 0.5),
        solver=solver,
    )


def table_reference(which: int) -> dict:
    """Reference (stop code, final violation) per instance and solver."""
    if which == 1:
        return _REFERENCE_TABLE1
    if which == 2:
        return _REFERENCE_TABLE2
    raise ValueError(f"no table {which}; expected 1 or 2")
