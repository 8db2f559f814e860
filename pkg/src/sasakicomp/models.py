"""Closed-form geometry of the model spaces.

Three models are supported:

* ``heisenberg(n)`` -- the flat model: R^{2n+1} with coordinates
  ``(x_1..x_n, y_1..y_n, z)``, horizontal frame
  ``X_i = d/dx_i - y_i/2 d/dz``, ``Y_i = d/dy_i + x_i/2 d/dz`` and Reeb field
  ``d/dz``.  Unit-speed geodesics from the origin are circles lifted to spiral
  in z; the horizontal velocity rotates with angular rate equal to the
  conserved vertical momentum z.

* ``hopf(n)`` -- the positively curved model: the unit sphere in C^{n+1} with
  the contact form dual to twice the Hopf field, transverse curvature
  constants (k1, k2) = (4, 1).  Geodesics are great circles composed with a
  phase rotation.

* ``constant_curvature(n, k1, k2)`` -- a synthetic model carrying user-chosen
  transverse curvature constants; only its Jacobi system is meaningful (there
  is no underlying manifold), so it provides curvature matrices and
  conjugate-time formulas but no point geodesics.

Conventions certified numerically against the cotangent Hamiltonian flows
(see tests): for the sphere the covector with horizontal part ``h`` and Reeb
momentum ``z`` corresponds to the ambient complex vector
``v = v_h + i (z/2) a`` at the start point ``a = (1, 0, .., 0)``, and the
closed-form geodesic is ``(a cos(Wt) + (v/W) sin(Wt)) exp(-i z t / 2)`` with
``W = |v| = sqrt(1 + z^2/4)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .geometry import CanonicalCurvature, Covector, constant_curvature_matrix
from .special import expm1i_over, t_minus_sin_over

__all__ = [
    "ModelKind",
    "ModelSpace",
    "GeodesicSample",
    "DistanceSolverError",
    "heisenberg_geodesic",
    "hopf_geodesic",
    "cut_time",
    "heisenberg_distance",
    "curvature_along",
]

_UNIT_TOL = 1e-12


class ModelKind(enum.Enum):
    HEISENBERG = "heisenberg"
    HOPF = "hopf"
    CONSTANT_CURVATURE = "constant"


@dataclass(frozen=True)
class ModelSpace:
    """Model descriptor: kind, complex dimension n and curvature constants (k1, k2)."""

    kind: ModelKind
    n: int
    k1: float
    k2: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"complex dimension n must be >= 1, got {self.n}")
        if self.kind is ModelKind.HEISENBERG and (self.k1, self.k2) != (0.0, 0.0):
            raise ValueError("the flat model has curvature constants (0, 0)")
        if self.kind is ModelKind.HOPF and (self.k1, self.k2) != (4.0, 1.0):
            raise ValueError("the sphere model has curvature constants (4, 1)")

    @classmethod
    def heisenberg(cls, n: int) -> "ModelSpace":
        return cls(ModelKind.HEISENBERG, n, 0.0, 0.0)

    @classmethod
    def hopf(cls, n: int) -> "ModelSpace":
        return cls(ModelKind.HOPF, n, 4.0, 1.0)

    @classmethod
    def constant_curvature(cls, n: int, k1: float, k2: float) -> "ModelSpace":
        return cls(ModelKind.CONSTANT_CURVATURE, n, float(k1), float(k2))


@dataclass(frozen=True)
class GeodesicSample:
    """One sample of a geodesic: time, point coordinates and (optionally) the
    transported covector."""

    t: float
    x: np.ndarray
    p: Covector | None = None


class DistanceSolverError(RuntimeError):
    """Raised when the distance root-finder fails to converge."""


def _require_unit(p: Covector) -> None:
    if not np.all(np.isfinite(p.h)) or not np.isfinite(p.z):
        raise ValueError("covector must be finite")
    if abs(p.r - 1.0) > _UNIT_TOL:
        raise ValueError(f"covector must have unit horizontal norm, got |h| = {p.r!r}")


def heisenberg_geodesic(p: Covector, T: float, steps: int) -> list[GeodesicSample]:
    """Closed-form unit-speed geodesic of the flat model from the origin.

    The horizontal motion in complex form is
    ``w_j(t) = -i P_j(0) (exp(i t z) - 1)/z`` (straight line in the z = 0
    limit) and the vertical coordinate accumulates half the swept area,
    ``(z t - sin(z t)) / (2 z^2)`` per unit of horizontal momentum squared.
    Returns ``steps`` samples on [0, T] including both endpoints.
    """
    _require_unit(p)
    if steps < 2:
        raise ValueError("steps must be >= 2")
    if not np.isfinite(T) or T < 0:
        raise ValueError("duration T must be finite and nonnegative")
    n = p.n
    P0 = p.h[:n] + 1j * p.h[n:]
    ts = np.linspace(0.0, float(T), steps)

    phase = expm1i_over(p.z, ts)  # (exp(i t z) - 1)/z, shape (steps,)
    w = -1j * np.outer(phase, P0)  # (steps, n)
    zc = float(np.sum(np.abs(P0) ** 2)) * t_minus_sin_over(p.z, ts)
    rot = np.exp(1j * ts * p.z)

    samples = []
    for k, t in enumerate(ts):
        x = np.concatenate([w[k].real, w[k].imag, [zc[k]]])
        Pk = P0 * rot[k]
        pk = Covector(h=np.concatenate([Pk.real, Pk.imag]), z=p.z)
        samples.append(GeodesicSample(t=float(t), x=x, p=pk))
    return samples


def _hopf_state(p: Covector):
    """Ambient complex data (a, v, W, sigma) of a sphere geodesic."""
    n = p.n
    a = np.zeros(n + 1, dtype=complex)
    a[0] = 1.0
    vh = np.zeros(n + 1, dtype=complex)
    vh[1:] = p.h[:n] + 1j * p.h[n:]
    sigma = p.z / 2.0
    v = vh + 1j * sigma * a
    if abs(v[0].real) > _UNIT_TOL:
        raise ValueError("sphere covector violates Re(v_1) = 0")
    W = float(np.sqrt(1.0 + sigma * sigma))
    return a, v, W, sigma


def hopf_geodesic(p: Covector, T: float, steps: int) -> list[GeodesicSample]:
    """Closed-form unit-speed geodesic of the sphere model from ``(1, 0, ..., 0)``.

    Point coordinates are returned as ``(Re z_1..Re z_{n+1}, Im z_1..Im z_{n+1})``
    of the ambient unit sphere in C^{n+1}.
    """
    _require_unit(p)
    if steps < 2:
        raise ValueError("steps must be >= 2")
    if not np.isfinite(T) or T < 0:
        raise ValueError("duration T must be finite and nonnegative")
    a, v, W, sigma = _hopf_state(p)
    ts = np.linspace(0.0, float(T), steps)

    samples = []
    for t in ts:
        g = (a * np.cos(W * t) + (v / W) * np.sin(W * t)) * np.exp(-1j * sigma * t)
        x = np.concatenate([g.real, g.imag])
        samples.append(GeodesicSample(t=float(t), x=x, p=None))
    return samples


def cut_time(model: ModelSpace, p: Covector) -> float:
    """Cut time of the unit-speed geodesic with covector ``p``.

    For both concrete models the cut time coincides with the first conjugate
    time and equals ``2 pi / sqrt(z^2 + k1)`` = ``2 pi / sqrt(z^2 + 4 k2)``
    (the two conjugate-time bounds coincide there).  For the synthetic
    constant-curvature model the same minimum-of-bounds formula is returned;
    it is an upper bound for the conjugate time (exact when n >= 2).
    Returns +inf when neither radicand is positive.
    """
    _require_unit(p)
    z = p.z
    branches = []
    rad1 = z * z + model.k1
    rad2 = z * z + 4.0 * model.k2
    if rad1 > 0:
        branches.append(2.0 * np.pi / np.sqrt(rad1))
    if rad2 > 0:
        branches.append(2.0 * np.pi / np.sqrt(rad2))
    return min(branches) if branches else np.inf


def _theta_ratio(theta: float) -> float:
    # (2 theta - sin 2 theta) / (8 sin^2 theta), monotone (0, pi) -> (0, inf)
    if theta < 1e-3:
        return theta / 6.0 * (1.0 + 2.0 * theta * theta / 15.0)
    s = np.sin(theta)
    return (2.0 * theta - np.sin(2.0 * theta)) / (8.0 * s * s)


def heisenberg_distance(q: np.ndarray) -> float:
    """Carnot-Caratheodory distance from the origin in the flat model.

    ``q`` has layout ``(x_1..x_n, y_1..y_n, z)``.  Inverts the closed-form
    geodesic endpoint map: with ``rho = |w|`` and ``zeta = |z|``, the half
    holonomy angle ``theta in [0, pi)`` solves
    ``(2 theta - sin 2 theta) / (8 sin^2 theta) = zeta / rho^2`` and the
    distance is ``rho * theta / sin(theta)``; points on the vertical axis are
    reached exactly at the cut time, giving ``2 sqrt(pi zeta)``.
    """
    q = np.asarray(q, dtype=float)
    if q.ndim != 1 or q.size < 3 or q.size % 2 == 0:
        raise ValueError(f"point must have odd length >= 3 (x-block, y-block, z), got shape {q.shape}")
    if not np.all(np.isfinite(q)):
        raise ValueError("point coordinates must be finite")
    rho = float(np.linalg.norm(q[:-1]))
    zeta = abs(float(q[-1]))
    if rho == 0.0 and zeta == 0.0:
        raise ValueError("distance to the base point itself is requested; point must differ from the origin")
    if rho == 0.0:
        return 2.0 * np.sqrt(np.pi * zeta)
    if zeta == 0.0:
        return rho
    target = zeta / (rho * rho)
    try:
        theta = brentq(
            lambda th: _theta_ratio(th) - target,
            1e-14,
            np.pi - 1e-12,
            xtol=1e-15,
            rtol=8.9e-16,
            maxiter=200,
        )
    except (ValueError, RuntimeError) as exc:  # pragma: no cover - defensive
        raise DistanceSolverError(
            f"holonomy-angle solve failed for rho={rho!r}, zeta={zeta!r}: {exc}"
        ) from exc
    return float(rho * theta / np.sin(theta))


def curvature_along(model: ModelSpace, p: Covector) -> CanonicalCurvature:
    """Canonical curvature matrix along the geodesic with covector ``p``.

    The two effective curvatures are ``z^2 + k1 r^2`` (rotational block) and
    ``z^2/4 + k2 r^2`` (transverse block).  For both concrete models the
    transverse curvature is constant, so this matrix is exact and constant in
    time, not merely a bound.
    """
    r = p.r
    if r <= 0.0:
        raise ValueError("curvature along a pure Reeb covector is undefined (r = 0)")
    if p.n != model.n:
        raise ValueError(f"covector dimension n={p.n} does not match model n={model.n}")
    z = p.z
    k1_eff = z * z + model.k1 * r * r
    k2_eff = z * z / 4.0 + model.k2 * r * r
    return constant_curvature_matrix(model.n, k1_eff, k2_eff)
