"""Closed convex sets with violation measures, linear oracles, and projections.

Every body is an immutable value. The operations exposed per body are:

* ``violation(z)``   -- max over defining constraints of ``max(0, g_i(z))``,
  zero exactly on members,
* ``lo_minimize(c)`` -- linear minimization oracle, compact bodies only,
* ``support(c)``     -- support function ``max_z <c, z>``, compact bodies only,
* ``project(v)``     -- exact Euclidean projection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import ClassVar, TypeAlias

import numpy as np
from numpy.typing import NDArray

Vector: TypeAlias = NDArray[np.float64]

# Points with violation at or below this are treated as members by the
# library itself; experiment-level feasibility uses its own eps_feas.
MEMBER_TOL = 1e-12

__all__ = [
    "Ball",
    "Box",
    "ConvexBody",
    "Ellipsoid",
    "Halfspace",
    "MEMBER_TOL",
    "UnsupportedOracleError",
    "Vector",
    "as_vector",
]


class UnsupportedOracleError(NotImplementedError):
    """Raised when a body does not support the requested oracle."""


def as_vector(x, dim: int | None = None) -> Vector:
    """Validate and convert ``x`` to a finite 1-D float64 array."""
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    if dim is not None and v.shape[0] != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {v.shape[0]}")
    return v


class ConvexBody:
    """Base class for closed convex sets.

    Subclasses set ``is_compact`` / ``has_exact_projection`` and implement
    the geometric operations. All instances are immutable after construction.
    """

    is_compact: ClassVar[bool]
    has_exact_projection: ClassVar[bool]

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def violation(self, z) -> float:
        """Constraint violation ``max(0, g(z))``; zero iff ``z`` is a member."""
        raise NotImplementedError

    def contains(self, z, tol: float = MEMBER_TOL) -> bool:
        return self.violation(z) <= tol

    def lo_minimize(self, c) -> tuple[Vector, float]:
        """Return ``(z_star, value)`` minimizing ``<c, z>`` over the body."""
        raise UnsupportedOracleError(
            f"{type(self).__name__} does not support a linear minimization oracle"
        )

    def support(self, c) -> float:
        """Support function ``max_z <c, z>`` over the body."""
        raise UnsupportedOracleError(
            f"{type(self).__name__} does not support the support function"
        )

    def project(self, v) -> Vector:
        """Exact Euclidean projection of ``v`` onto the body."""
        raise UnsupportedOracleError(
            f"{type(self).__name__} does not support exact projection"
        )


@dataclass(frozen=True, eq=False)
class Halfspace(ConvexBody):
    """Halfspace ``{z : <normal, z> <= offset}``.

    The violation is the raw constraint value ``max(0, <normal, z> - offset)``,
    not the Euclidean distance (they agree for unit normals).
    """

    normal: Vector
    offset: float

    is_compact: ClassVar[bool] = False
    has_exact_projection: ClassVar[bool] = True

    def __post_init__(self):
        a = as_vector(self.normal)
        if not np.any(a != 0.0):
            raise ValueError("halfspace normal must be nonzero")
        object.__setattr__(self, "normal", a)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def dim(self) -> int:
        return self.normal.shape[0]

    def violation(self, z) -> float:
        z = as_vector(z, self.dim)
        return max(0.0, float(self.normal @ z) - self.offset)

    def project(self, v) -> Vector:
        v = as_vector(v, self.dim)
        excess = float(self.normal @ v) - self.offset
        if excess <= 0.0:
            return v.copy()
        return v - (excess / float(self.normal @ self.normal)) * self.normal


@dataclass(frozen=True, eq=False)
class Ball(ConvexBody):
    """Euclidean ball ``{z : ||z - center|| <= radius}``."""

    center: Vector
    radius: float

    is_compact: ClassVar[bool] = True
    has_exact_projection: ClassVar[bool] = True

    def __post_init__(self):
        object.__setattr__(self, "center", as_vector(self.center))
        r = float(self.radius)
        if not (r > 0.0 and math.isfinite(r)):
            raise ValueError(f"radius must be positive, got {self.radius}")
        object.__setattr__(self, "radius", r)

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def violation(self, z) -> float:
        z = as_vector(z, self.dim)
        return max(0.0, float(np.linalg.norm(z - self.center)) - self.radius)

    def lo_minimize(self, c) -> tuple[Vector, float]:
        c = as_vector(c, self.dim)
        nc = float(np.linalg.norm(c))
        if nc == 0.0:
            z = self.center.copy()
        else:
            z = self.center - (self.radius / nc) * c
        return z, float(c @ z)

    def support(self, c) -> float:
        c = as_vector(c, self.dim)
        return float(c @ self.center) + self.radius * float(np.linalg.norm(c))

    def project(self, v) -> Vector:
        v = as_vector(v, self.dim)
        d = v - self.center
        nd = float(np.linalg.norm(d))
        if nd <= self.radius:
            return v.copy()
        return self.center + (self.radius / nd) * d


@dataclass(frozen=True, eq=False)
class Box(ConvexBody):
    """Axis-aligned box ``{z : lower <= z <= upper}`` (componentwise)."""

    lower: Vector
    upper: Vector

    is_compact: ClassVar[bool] = True
    has_exact_projection: ClassVar[bool] = True

    def __post_init__(self):
        lo = as_vector(self.lower)
        hi = as_vector(self.upper, lo.shape[0])
        if np.any(lo > hi):
            raise ValueError("box requires lower <= upper componentwise")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    def violation(self, z) -> float:
        z = as_vector(z, self.dim)
        under = np.max(self.lower - z, initial=0.0)
        over = np.max(z - self.upper, initial=0.0)
        return float(max(0.0, under, over))

    def lo_minimize(self, c) -> tuple[Vector, float]:
        c = as_vector(c, self.dim)
        # c_i > 0 picks the lower bound, c_i < 0 the upper; ties go to lower.
        z = np.where(c < 0.0, self.upper, self.lower)
        return z.astype(np.float64), float(c @ z)

    def support(self, c) -> float:
        c = as_vector(c, self.dim)
        return float(np.sum(np.where(c > 0.0, c * self.upper, c * self.lower)))

    def project(self, v) -> Vector:
        v = as_vector(v, self.dim)
        return np.clip(v, self.lower, self.upper)


@dataclass(frozen=True, eq=False)
class Ellipsoid(ConvexBody):
    """Ellipsoid ``{z : (z - center)^T shape (z - center) <= 1}``.

    ``shape`` must be symmetric positive definite. Its eigendecomposition is
    cached at construction so oracles and projections reduce to scalar work
    in the eigenbasis.
    """

    center: Vector
    shape: NDArray[np.float64]
    _eigvals: Vector = field(init=False, repr=False)
    _eigvecs: NDArray[np.float64] = field(init=False, repr=False)

    is_compact: ClassVar[bool] = True
    has_exact_projection: ClassVar[bool] = True

    SECULAR_TOL: ClassVar[float] = 1e-12
    SECULAR_MAX_ITERS: ClassVar[int] = 200

    def __post_init__(self):
        center = as_vector(self.center)
        q = np.asarray(self.shape, dtype=np.float64)
        n = center.shape[0]
        if q.shape != (n, n):
            raise ValueError(f"shape matrix must be {n}x{n}, got {q.shape}")
        if not np.all(np.isfinite(q)):
            raise ValueError("shape matrix entries must be finite")
        scale = float(np.linalg.norm(q))
        if float(np.linalg.norm(q - q.T)) > 1e-12 * max(scale, 1.0):
            raise ValueError("shape matrix must be symmetric")
        q = 0.5 * (q + q.T)
        vals, vecs = np.linalg.eigh(q)
        if np.any(vals <= 0.0):
            raise ValueError("shape matrix must be positive definite")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "shape", q)
        object.__setattr__(self, "_eigvals", vals)
        object.__setattr__(self, "_eigvecs", vecs)

    @classmethod
    def from_axes(cls, center, angle: float, semi_axes) -> "Ellipsoid":
        """Build a 2-D ellipsoid from semi-axes ``(a, b)`` and a rotation angle.

        The shape matrix is ``R(angle)^T diag(1/a^2, 1/b^2) R(angle)`` with
        ``R = [[cos, sin], [-sin, cos]]``.
        """
        center = as_vector(center, 2)
        a, b = (float(s) for s in semi_axes)
        if a <= 0.0 or b <= 0.0:
            raise ValueError("semi-axes must be positive")
        c, s = math.cos(angle), math.sin(angle)
        rot = np.array([[c, s], [-s, c]])
        diag = np.diag([1.0 / a**2, 1.0 / b**2])
        return cls(center=center, shape=rot.T @ diag @ rot)

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    @property
    def diameter(self) -> float:
        """Euclidean diameter, twice the longest semi-axis."""
        return 2.0 / math.sqrt(float(self._eigvals[0]))

    def violation(self, z) -> float:
        z = as_vector(z, self.dim)
        d = z - self.center
        return max(0.0, float(d @ (self.shape @ d)) - 1.0)

    def inv_quad(self, c) -> float:
        """Quadratic form ``c^T shape^{-1} c``."""
        c = as_vector(c, self.dim)
        b = self._eigvecs.T @ c
        return float(np.sum(b * b / self._eigvals))

    def lo_minimize(self, c) -> tuple[Vector, float]:
        c = as_vector(c, self.dim)
        b = self._eigvecs.T @ c
        if not np.any(b != 0.0):
            z = self.center.copy()
            return z, float(c @ z)
        w = b / self._eigvals
        z = self.center - (self._eigvecs @ w) / math.sqrt(float(np.sum(b * w)))
        return z, float(c @ z)

    def support(self, c) -> float:
        c = as_vector(c, self.dim)
        return float(c @ self.center) + math.sqrt(self.inv_quad(c))

    def boundary_point(self, direction) -> Vector:
        """Boundary point in unit-quadratic coordinates along ``direction``."""
        u = as_vector(direction, self.dim)
        return self.center + self._eigvecs @ (
            (self._eigvecs.T @ u) / np.sqrt(self._eigvals)
        )

    def project(self, v) -> Vector:
        v = as_vector(v, self.dim)
        if self.violation(v) <= MEMBER_TOL:
            return v.copy()
        # In the eigenbasis the projection is z(mu) with coordinates
        # b_i / (1 + mu * lam_i); mu > 0 solves the scalar secular equation
        # sum lam_i b_i^2 / (1 + mu lam_i)^2 = 1, strictly decreasing in mu.
        lam = self._eigvals
        b = self._eigvecs.T @ (v - self.center)

        def residual(mu: float) -> tuple[float, float]:
            denom = 1.0 + mu * lam
            r = float(np.sum(lam * b * b / denom**2)) - 1.0
            dr = float(np.sum(-2.0 * lam**2 * b * b / denom**3))
            return r, dr

        lo, hi = 0.0, 1.0
        while residual(hi)[0] > 0.0:
            lo, hi = hi, 2.0 * hi
        mu = 0.5 * (lo + hi)
        r, dr = residual(mu)
        for _ in range(self.SECULAR_MAX_ITERS):
            if abs(r) <= self.SECULAR_TOL:
                break
            if r > 0.0:
                lo = mu
            else:
                hi = mu
            step = mu - r / dr
            mu = step if lo < step < hi else 0.5 * (lo + hi)
            r, dr = residual(mu)
        return self.center + self._eigvecs @ (b / (1.0 + mu * lam))
