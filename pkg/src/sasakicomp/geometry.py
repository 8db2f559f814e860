"""Covector coordinates and the fixed structural constants of the canonical frame.

The ambient space is a (2n+1)-dimensional Sasakian manifold.  A covector at
the base point is stored as its horizontal part ``h`` (length 2n, expressed in
an orthonormal frame of the contact distribution in which the complex
structure acts as the block rotation ``J = [[0, -I], [I, 0]]``) together with
its vertical (Reeb) component ``z``.

The canonical moving frame along a geodesic orders its 2n+1 slots as
``(E1, E2, E3_1, ..., E3_{2n-1})`` where the single E1 slot is the vertical
direction, E2 is the rotated-velocity direction and the trailing E3 slot is
reserved for the direction ``p_h + z * v0``.  That ordering makes the block
split used throughout the package literal: a 2x2 rotational block, a
(2n-2)-dimensional transverse block and one trailing scalar slot.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Covector",
    "CylCoord",
    "StructuralConstants",
    "CanonicalCurvature",
    "assemble_structural",
    "to_cylindrical",
    "from_cylindrical",
    "constant_curvature_matrix",
]


def _frozen_array(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Covector:
    """Cotangent vector: horizontal components ``h`` (length 2n) and Reeb part ``z``."""

    h: np.ndarray
    z: float

    def __post_init__(self):
        h = _frozen_array(self.h)
        if h.ndim != 1 or h.size == 0 or h.size % 2 != 0:
            raise ValueError(f"horizontal part must be a 1-d vector of even length, got shape {h.shape}")
        if not np.all(np.isfinite(h)) or not np.isfinite(self.z):
            raise ValueError("covector components must be finite")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "z", float(self.z))

    @property
    def n(self) -> int:
        return self.h.size // 2

    @property
    def r(self) -> float:
        """Euclidean norm of the horizontal part."""
        return float(np.linalg.norm(self.h))


@dataclass(frozen=True)
class CylCoord:
    """Cylindrical coordinates (r, z) of a covector plus its horizontal direction.

    ``direction`` is None exactly when r = 0 (pure Reeb covector).
    """

    r: float
    z: float
    direction: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if self.r < 0 or not np.isfinite(self.r) or not np.isfinite(self.z):
            raise ValueError("r must be finite and nonnegative, z finite")
        if self.direction is not None:
            d = _frozen_array(self.direction)
            if abs(np.linalg.norm(d) - 1.0) > 1e-12:
                raise ValueError("direction must have unit norm")
            object.__setattr__(self, "direction", d)


def to_cylindrical(p: Covector) -> CylCoord:
    r = p.r
    if r == 0.0:
        return CylCoord(r=0.0, z=p.z, direction=None)
    return CylCoord(r=r, z=p.z, direction=p.h / r)


def from_cylindrical(c: CylCoord) -> Covector:
    if c.r > 0.0:
        if c.direction is None:
            raise ValueError("direction is required to rebuild a covector with r > 0")
        return Covector(h=c.r * c.direction, z=c.z)
    # pure Reeb covector; dimension of the horizontal slot is unknown, use n=1
    n = 1 if c.direction is None else c.direction.size // 2
    return Covector(h=np.zeros(2 * max(n, 1)), z=c.z)


@dataclass(frozen=True)
class StructuralConstants:
    """Constant matrices C1, C2 of the canonical frame equations, dimension 2n+1.

    C1 carries a single 1 in the (E1, E2) slot; C2 projects onto every slot
    except E1.  They satisfy C1 @ C1 = 0 and C2 @ C2 = C2.
    """

    n: int
    C1: np.ndarray
    C2: np.ndarray

    @property
    def dim(self) -> int:
        return 2 * self.n + 1


def assemble_structural(n: int) -> StructuralConstants:
    if n < 1:
        raise ValueError(f"complex dimension n must be >= 1, got {n}")
    d = 2 * n + 1
    c1 = np.zeros((d, d))
    c1[0, 1] = 1.0
    c2 = np.eye(d)
    c2[0, 0] = 0.0
    return StructuralConstants(n=n, C1=_frozen_array(c1), C2=_frozen_array(c2))


@dataclass(frozen=True)
class CanonicalCurvature:
    """Curvature matrix of a Jacobi system in the canonical block layout (1, 1, 2n-1).

    The (E1, E2) off-diagonal blocks vanish identically; R13/R23 couple the
    two distinguished slots to the transverse block and are zero for every
    model space handled here (they are kept for future non-model profiles).
    """

    n: int
    R11: float = 0.0
    R22: float = 0.0
    R33: np.ndarray | None = None
    R13: np.ndarray | None = None
    R23: np.ndarray | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"complex dimension n must be >= 1, got {self.n}")
        m = 2 * self.n - 1
        r33 = np.zeros((m, m)) if self.R33 is None else np.array(self.R33, dtype=float)
        if r33.shape != (m, m):
            raise ValueError(f"R33 must have shape ({m}, {m}), got {r33.shape}")
        if not np.allclose(r33, r33.T, atol=1e-12):
            raise ValueError("R33 must be symmetric")
        r13 = np.zeros(m) if self.R13 is None else np.array(self.R13, dtype=float)
        r23 = np.zeros(m) if self.R23 is None else np.array(self.R23, dtype=float)
        if r13.shape != (m,) or r23.shape != (m,):
            raise ValueError(f"R13/R23 must have shape ({m},)")
        object.__setattr__(self, "R33", _frozen_array(r33))
        object.__setattr__(self, "R13", _frozen_array(r13))
        object.__setattr__(self, "R23", _frozen_array(r23))

    @property
    def dim(self) -> int:
        return 2 * self.n + 1

    def matrix(self) -> np.ndarray:
        """Assemble the full symmetric (2n+1) x (2n+1) curvature matrix."""
        d = self.dim
        out = np.zeros((d, d))
        out[0, 0] = self.R11
        out[1, 1] = self.R22
        out[2:, 2:] = self.R33
        out[0, 2:] = self.R13
        out[2:, 0] = self.R13
        out[1, 2:] = self.R23
        out[2:, 1] = self.R23
        return out


def constant_curvature_matrix(n: int, k1_eff: float, k2_eff: float) -> CanonicalCurvature:
    """Curvature matrix diag(0, k1_eff, k2_eff * I_{2n-2}, 0) of a synthetic
    constant-curvature Jacobi system.

    The trailing transverse slot (the ``p_h + z*v0`` direction) always carries
    zero curvature; for n = 1 the k2_eff block is empty and only that trailing
    slot remains.
    """
    if n < 1:
        raise ValueError(f"complex dimension n must be >= 1, got {n}")
    m = 2 * n - 1
    r33 = np.zeros((m, m))
    for i in range(m - 1):
        r33[i, i] = k2_eff
    return CanonicalCurvature(n=n, R11=0.0, R22=float(k1_eff), R33=r33)
