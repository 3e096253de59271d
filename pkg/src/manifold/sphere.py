"""Unit sphere S^{n-1} with the Euclidean metric.

Provides the exponential and logarithmic maps and parallel transport along
minimizing geodesics. Points and tangent vectors are validated on
construction.
"""
from dataclasses import dataclass

import numpy as np

from ..config import EXP_SMALL_NORM, SPHERE_TOL
from ..exceptions import DimensionMismatchError, DomainError, GeometryError
from ..linalg.pencil import DenseVector, as_vector

ANTIPODAL_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SpherePoint:
    """Point with ‖coords‖₂ = 1."""

    coords: DenseVector

    def __post_init__(self):
        v = as_vector(self.coords, name="sphere point")
        if abs(np.linalg.norm(v) - 1.0) > SPHERE_TOL * 10:
            raise DomainError(f"Point is not on the unit sphere (‖x‖ = {np.linalg.norm(v):.15g})")
        object.__setattr__(self, "coords", v)

    @classmethod
    def normalized(cls, x) -> "SpherePoint":
        v = as_vector(x, name="x")
        norm = np.linalg.norm(v)
        if not norm > 0.0:
            raise DomainError("Cannot normalize the zero vector")
        return cls(v / norm)

    @property
    def n(self) -> int:
        return self.coords.shape[0]


@dataclass(frozen=True, eq=False)
class TangentVector:
    """Vector dir with ⟨dir, base⟩ = 0."""

    base: SpherePoint
    dir: DenseVector

    def __post_init__(self):
        d = as_vector(self.dir, self.base.n, "tangent direction")
        if abs(float(d @ self.base.coords)) > SPHERE_TOL * max(np.linalg.norm(d), 1.0):
            raise DomainError("Direction is not tangent to the sphere at its base point")
        object.__setattr__(self, "dir", d)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.dir))


def _check_same_dim(x: SpherePoint, v: DenseVector) -> None:
    if x.n != v.shape[0]:
        raise DimensionMismatchError(x.n, v.shape[0], "tangent vector")


def project_tangent(x: SpherePoint, xi) -> TangentVector:
    """
    Orthogonal projection (I − xxᵀ)ξ onto the tangent space at x.

    Applied twice so the result is tangent to working precision.
    """
    xi = as_vector(xi, x.n, "xi")
    d = xi - (x.coords @ xi) * x.coords
    d -= (x.coords @ d) * x.coords
    return TangentVector(x, d)


def exp_map(x: SpherePoint, v: TangentVector) -> SpherePoint:
    """
    exp_x(v) = cos‖v‖·x + sin‖v‖·v/‖v‖; returns x when ‖v‖ < 1e-14.
    """
    _check_same_dim(x, v.dir)
    norm = v.norm
    if norm < EXP_SMALL_NORM:
        return x
    y = np.cos(norm) * x.coords + np.sin(norm) * (v.dir / norm)
    return SpherePoint(y / np.linalg.norm(y))


def log_map(x: SpherePoint, y: SpherePoint) -> TangentVector:
    """
    log_x(y) = θ·P_x y/‖P_x y‖ with θ the angle between x and y.

    The angle is computed as atan2(‖P_x y‖, xᵀy), which equals arccos of the
    clamped inner product but keeps full accuracy for nearby points.

    Raises:
        GeometryError: If y = −x (the minimizing geodesic is not unique)
    """
    if x.n != y.n:
        raise DimensionMismatchError(x.n, y.n, "sphere point")
    c = float(np.clip(x.coords @ y.coords, -1.0, 1.0))
    perp = y.coords - c * x.coords
    perp -= (x.coords @ perp) * x.coords
    s = float(np.linalg.norm(perp))
    if c < 0.0 and s < ANTIPODAL_TOL:
        raise GeometryError("Logarithm undefined for antipodal points")
    if s == 0.0:
        return TangentVector(x, np.zeros(x.n))
    theta = np.arctan2(s, c)
    return TangentVector(x, (theta / s) * perp)


def distance(x: SpherePoint, y: SpherePoint) -> float:
    """Geodesic distance arccos(xᵀy), computed in atan2 form."""
    c = float(np.clip(x.coords @ y.coords, -1.0, 1.0))
    s = float(np.linalg.norm(y.coords - c * x.coords))
    return float(np.arctan2(s, c))


def parallel_transport(x: SpherePoint, y: SpherePoint, u: TangentVector) -> TangentVector:
    """
    Transport u ∈ T_x along the minimizing geodesic from x to y.

    With v = log_x(y): Γu = u + (cos‖v‖ − 1)·v(vᵀu)/‖v‖² − sin‖v‖·x(vᵀu)/‖v‖.
    Identity when ‖v‖ < 1e-14.

    Raises:
        GeometryError: If x and y are antipodal
    """
    _check_same_dim(x, u.dir)
    v = log_map(x, y)
    norm = v.norm
    if norm < EXP_SMALL_NORM:
        return project_tangent(y, u.dir)
    vu = float(v.dir @ u.dir)
    moved = u.dir + (np.cos(norm) - 1.0) * v.dir * (vu / norm ** 2) - np.sin(norm) * x.coords * (vu / norm)
    return project_tangent(y, moved)


def random_point(rng: np.random.Generator, n: int) -> SpherePoint:
    return SpherePoint.normalized(rng.standard_normal(n))


def random_tangent(rng: np.random.Generator, x: SpherePoint, scale: float = 1.0) -> TangentVector:
    return project_tangent(x, scale * rng.standard_normal(x.n))
