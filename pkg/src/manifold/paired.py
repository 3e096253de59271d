"""Paired vectors on the B-sphere.

A PairedVector carries x together with x̂ = Bx, where B is only available
through its inverse action. B-inner products are read off the pair without
ever applying B, and every linear combination is applied to both halves.
"""
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from ..config import B_NORMALIZED_TOL, B_ORTHONORMAL_TOL
from ..exceptions import ConsistencyError, DimensionMismatchError, GeometryError
from ..linalg.pencil import DenseVector, SpdMatrix, as_vector


@dataclass(frozen=True, eq=False)
class PairedVector:
    """Vector x with its B-twin x̂ = Bx."""

    x: DenseVector
    xhat: DenseVector

    def __post_init__(self):
        x = as_vector(self.x, name="x")
        xhat = as_vector(self.xhat, name="xhat")
        if x.shape != xhat.shape:
            raise DimensionMismatchError(x.shape[0], xhat.shape[0], "paired twin")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "xhat", xhat)

    @classmethod
    def from_matrix(cls, x, b: SpdMatrix) -> "PairedVector":
        """Pair x with Bx for an explicit B."""
        x = as_vector(x, b.n, "x")
        return cls(x, b @ x)

    @classmethod
    def from_twin(cls, xhat, apply_binv: Callable[[DenseVector], DenseVector]) -> "PairedVector":
        """Pair x̂ with x = B⁻¹x̂."""
        xhat = as_vector(xhat, name="xhat")
        return cls(apply_binv(xhat), xhat)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    def b_inner(self, other: "PairedVector") -> float:
        """Symmetrized ⟨self, other⟩_B = (xᵀô + oᵀx̂)/2."""
        return 0.5 * (float(self.x @ other.xhat) + float(other.x @ self.xhat))

    def b_norm_squared(self) -> float:
        return float(self.x @ self.xhat)

    def b_norm(self) -> float:
        return float(np.sqrt(max(self.b_norm_squared(), 0.0)))

    def scale(self, alpha: float) -> "PairedVector":
        return PairedVector(alpha * self.x, alpha * self.xhat)

    def combine(self, alpha: float, other: "PairedVector", beta: float) -> "PairedVector":
        """α·self + β·other, applied to both halves."""
        return PairedVector(alpha * self.x + beta * other.x, alpha * self.xhat + beta * other.xhat)

    def orthogonalize(self, unit: "PairedVector") -> "PairedVector":
        """Remove the B-component along a B-unit vector."""
        return self.combine(1.0, unit, -self.b_inner(unit))


def combine_paired(coefficients, vectors) -> PairedVector:
    """Σ cᵢ·vᵢ applied to both halves."""
    x = sum(c * v.x for c, v in zip(coefficients, vectors))
    xhat = sum(c * v.xhat for c, v in zip(coefficients, vectors))
    return PairedVector(x, xhat)


def paired_normalize(p: PairedVector) -> PairedVector:
    """
    Scale both halves by 1/√⟨x, x̂⟩.

    Raises:
        ConsistencyError: If ⟨x, x̂⟩ ≤ 0 (the pair no longer represents an SPD B)
    """
    inner = p.b_norm_squared()
    if not inner > 0.0:
        raise ConsistencyError(inner)
    return p.scale(1.0 / np.sqrt(inner))


def paired_unit_direction(p: PairedVector) -> Tuple[PairedVector, float]:
    """B-normalized direction and B-norm; a zero pair returns (p, 0)."""
    inner = p.b_norm_squared()
    if not inner > 0.0:
        return p, 0.0
    norm = float(np.sqrt(inner))
    return p.scale(1.0 / norm), norm


def paired_geodesic_step(base: PairedVector, direction: PairedVector, angle: float, check: bool = True) -> PairedVector:
    """
    Move along the B-sphere great circle: cos(angle)·base + sin(angle)·direction.

    The result is B-renormalized.

    Args:
        base: B-unit point
        direction: B-unit direction, B-orthogonal to base
        angle: Step length in radians
        check: Verify the B-orthonormality precondition

    Raises:
        GeometryError: If base and direction are not B-orthonormal within 1e-8
    """
    if check:
        if abs(base.b_norm_squared() - 1.0) > B_ORTHONORMAL_TOL:
            raise GeometryError(f"Base point is not B-normalized (‖x‖²_B = {base.b_norm_squared():.15g})")
        if angle != 0.0 and abs(direction.b_norm_squared() - 1.0) > B_ORTHONORMAL_TOL:
            raise GeometryError("Direction is not B-normalized")
        if abs(base.b_inner(direction)) > B_ORTHONORMAL_TOL:
            raise GeometryError(f"Direction is not B-orthogonal to base (⟨x, d⟩_B = {base.b_inner(direction):.3e})")
    if angle == 0.0:
        return base
    return paired_normalize(base.combine(np.cos(angle), direction, np.sin(angle)))


def paired_angle(x: PairedVector, v: PairedVector) -> Tuple[float, PairedVector]:
    """
    Angle between two B-unit vectors and the B-unit direction from x towards v.

    The angle is atan2(‖w‖_B, ⟨x, v⟩_B) with w = v − ⟨x, v⟩_B·x, equal to the
    arccos of the clamped inner product. A zero w returns a zero direction.
    """
    c = float(np.clip(x.b_inner(v), -1.0, 1.0))
    w = v.combine(1.0, x, -c)
    unit, norm = paired_unit_direction(w)
    return float(np.arctan2(norm, c)), unit


def is_b_normalized(p: PairedVector, tol: float = B_NORMALIZED_TOL) -> bool:
    return abs(p.b_norm_squared() - 1.0) <= tol
