"""Closed-form comparison quantities.

Everything here is an explicit scalar function of the two effective
curvatures

    k1_eff(r, z) = z**2 + k1 * r**2,
    k2_eff(r, z) = z**2 / 4 + k2 * r**2,

built from the analytic kernels in :mod:`sasakicomp.special`:

* conjugate-time bounds ``2 pi / sqrt(k_eff)`` for both Jacobi blocks,
* the trace bound attained by the constant-curvature Riccati solution,
* the sub-Laplacian comparison function ``h`` for the distance function,
* the ball-volume comparison density ``k(r, z)``.

Two variants of the comparison function h are provided.  The primary
``"traced"`` form is derived from the trace bound applied to the
time-reversed Riccati flow of ``f = -d^2/2`` and is certified by finite
differences to be attained with equality on the flat model.  The literature
also circulates a ``"displayed"`` variant whose transverse coefficient is
(2n-1) instead of (2n-2) and whose arguments take (r, z) unscaled; it is an
upper bound as well but is not attained by the flat model (its z = 0 limit is
(2n+3)/r against the attained (2n+2)/r).  Both are exposed so that reports
can show them side by side; numerical certification lives in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .special import cot_sqrt, s_ratio, sinc_sqrt, tcs_ratio

__all__ = [
    "CurvatureBounds",
    "EffectiveCurvature",
    "PoleProximityError",
    "effective_curvature",
    "conjugate_bounds",
    "trace_bound",
    "laplacian_bound",
    "volume_density",
]

_POLE_TOL = 1e-12


class PoleProximityError(ZeroDivisionError):
    """A comparison formula was evaluated too close to a pole of its case."""


@dataclass(frozen=True)
class CurvatureBounds:
    """Transverse curvature lower bounds (k1, k2) at complex dimension n."""

    k1: float
    k2: float
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"complex dimension n must be >= 1, got {self.n}")
        if not (np.isfinite(self.k1) and np.isfinite(self.k2)):
            raise ValueError("curvature bounds must be finite")


@dataclass(frozen=True)
class EffectiveCurvature:
    """The pair (z^2 + k1 r^2, z^2/4 + k2 r^2) controlling the two Riccati blocks."""

    k1: float
    k2: float


def effective_curvature(r: float, z: float, bounds: CurvatureBounds) -> EffectiveCurvature:
    if r < 0:
        raise ValueError("r must be nonnegative")
    return EffectiveCurvature(
        k1=z * z + bounds.k1 * r * r,
        k2=z * z / 4.0 + bounds.k2 * r * r,
    )


def conjugate_bounds(r: float, z: float, bounds: CurvatureBounds) -> tuple[float, float]:
    """The two first-conjugate-time bounds (2 pi / sqrt(z^2 + k1 r^2),
    2 pi / sqrt(z^2 + 4 k2 r^2)); +inf where the radicand is not positive."""
    if r <= 0:
        raise ValueError("r must be positive")
    rad1 = z * z + bounds.k1 * r * r
    rad2 = z * z + 4.0 * bounds.k2 * r * r
    b1 = 2.0 * np.pi / np.sqrt(rad1) if rad1 > 0 else np.inf
    b2 = 2.0 * np.pi / np.sqrt(rad2) if rad2 > 0 else np.inf
    return b1, b2


def _cot_term(coeff: int, u: float) -> float:
    """coeff * sqrt(u) cot(sqrt(u)), guarding the cotangent poles; 0 when coeff is 0."""
    if coeff == 0:
        return 0.0
    c = cot_sqrt(u)
    if not np.isfinite(c) or (u > 0 and abs(np.sin(np.sqrt(u))) < _POLE_TOL):
        raise PoleProximityError(f"transverse-block cotangent pole at u = {u!r}")
    return coeff * c


def trace_bound(t: float, eff: EffectiveCurvature, n: int) -> float:
    """Lower bound for tr(C2 S(t)), attained by the constant-curvature flow.

    Equals ``-(2n-2) sqrt(k2) cot(sqrt(k2) t) - 1/t + sqrt(k1)(sqrt(k1) t
    cos(sqrt(k1) t) - sin(sqrt(k1) t)) / (2 - 2 cos(sqrt(k1) t) - sqrt(k1) t
    sin(sqrt(k1) t))`` with hyperbolic continuation for negative effective
    curvature and series limits at 0.  Identical to the C2-trace of
    :func:`sasakicomp.jacobi.riccati_oracle` by construction of that solution.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    u1 = eff.k1 * t * t
    u2 = eff.k2 * t * t
    sr = s_ratio(u1)
    if not np.isfinite(sr) or abs(sr) < _POLE_TOL:
        raise PoleProximityError(f"rotational-block factor s_ratio({u1!r}) vanishes at t = {t!r}")
    return (-_cot_term(2 * n - 2, u2) - 1.0 + tcs_ratio(u1) / sr) / t


def laplacian_bound(r: float, z: float, bounds: CurvatureBounds, form: str = "traced") -> float:
    """Comparison function h(r, z) bounding the sub-Laplacian of the distance:
    ``Delta_H d <= h(d, v0(d))`` where r is the distance value and z the Reeb
    derivative of the distance at the evaluation point.

    form="traced" (primary): derived from the trace bound at the covector of
    ``-d^2/2``, whose effective curvatures are ``r^2 (z^2 + k1)`` and
    ``r^2 (z^2/4 + k2)``; attained with equality on the flat model.

    form="displayed": the circulating variant with coefficient (2n-1) and
    arguments ``z^2 + k1 r^2``, ``z^2/4 + k2 r^2``; a looser bound whose flat
    z = 0 limit is (2n+3)/r.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    n = bounds.n
    if form == "traced":
        u1 = r * r * (z * z + bounds.k1)
        u2 = r * r * (z * z / 4.0 + bounds.k2)
    elif form == "displayed":
        u1 = z * z + bounds.k1 * r * r
        u2 = z * z / 4.0 + bounds.k2 * r * r
    else:
        raise ValueError(f"unknown form {form!r}; expected 'traced' or 'displayed'")
    sr = s_ratio(u1)
    if not np.isfinite(sr) or abs(sr) < _POLE_TOL:
        raise PoleProximityError(
            f"comparison function evaluated at a rotational-block pole (u1 = {u1!r})"
        )
    coeff = (2 * n - 2) if form == "traced" else (2 * n - 1)
    return (_cot_term(coeff, u2) - tcs_ratio(u1) / sr) / r


def volume_density(r: float, z: float, bounds: CurvatureBounds) -> float:
    """Ball-volume comparison density k(r, z).

    ``k = r^2 * sinc(k2_eff)^{2n-2} * s_ratio(k1_eff)`` with the effective
    curvatures evaluated at (r, z); all four sign cases (trigonometric /
    hyperbolic) are one analytic function, and the zero-curvature limit is
    ``r^2 / 12``.  Nonnegative inside the first conjugate radius.
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    eff = effective_curvature(r, z, bounds)
    n = bounds.n
    return r * r * sinc_sqrt(eff.k2) ** (2 * n - 2) * s_ratio(eff.k1)
