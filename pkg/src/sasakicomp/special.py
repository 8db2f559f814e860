"""Removable-singularity trigonometric kernels.

Every comparison quantity in this package is built from a handful of scalar
functions of ``u = kappa * t**2`` (effective curvature times time squared)
that are analytic across ``u = 0``: the trigonometric expressions for
``u > 0`` continue to their hyperbolic counterparts for ``u < 0`` through one
power series.  Evaluating the closed forms naively near ``u = 0`` loses all
precision to cancellation (``2 - 2*cos(x) - x*sin(x)`` is ``O(x**4)``), so
each kernel switches to a fixed-length Taylor series on ``|u| <= 1`` where the
series is exact to double precision.

All kernels accept scalars or numpy arrays and return matching shapes.
"""

from __future__ import annotations

from math import factorial

import numpy as np

_NTERMS = 14

# sin(sqrt(u))/sqrt(u) = sum (-1)^m u^m / (2m+1)!
_SINC_COEF = np.array([(-1.0) ** m / factorial(2 * m + 1) for m in range(_NTERMS)])

# (1 - cos(sqrt(u)))/u = sum (-1)^m u^m / (2m+2)!
_HALFVERS_COEF = np.array([(-1.0) ** m / factorial(2 * m + 2) for m in range(_NTERMS)])

# (2 - 2 cos(sqrt(u)) - sqrt(u) sin(sqrt(u)))/u^2 = sum (-1)^m (2m+2) u^m / (2m+4)!
_SRATIO_COEF = np.array(
    [(-1.0) ** m * (2 * m + 2) / factorial(2 * m + 4) for m in range(_NTERMS)]
)

# (sqrt(u) cos(sqrt(u)) - sin(sqrt(u))) / u^(3/2) = sum (-1)^(m+1) (2m+2) u^m / (2m+3)!
_TCS_COEF = np.array(
    [(-1.0) ** (m + 1) * (2 * m + 2) / factorial(2 * m + 3) for m in range(_NTERMS)]
)


def _piecewise(u, coef, closed_pos, closed_neg):
    u = np.asarray(u, dtype=float)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    out = np.empty_like(u)

    small = np.abs(u) <= 1.0
    if small.any():
        out[small] = np.polynomial.polynomial.polyval(u[small], coef)
    pos = ~small & (u > 0)
    if pos.any():
        out[pos] = closed_pos(np.sqrt(u[pos]))
    neg = ~small & (u < 0)
    if neg.any():
        out[neg] = closed_neg(np.sqrt(-u[neg]))
    return float(out[0]) if scalar else out


def sinc_sqrt(u):
    """sin(sqrt(u))/sqrt(u); equals sinh(sqrt(-u))/sqrt(-u) for u < 0; -> 1 at 0."""
    return _piecewise(
        u,
        _SINC_COEF,
        lambda r: np.sin(r) / r,
        lambda x: np.sinh(x) / x,
    )


def halfvers_ratio(u):
    """(1 - cos(sqrt(u)))/u; hyperbolic continuation for u < 0; -> 1/2 at 0."""
    return _piecewise(
        u,
        _HALFVERS_COEF,
        lambda r: (1.0 - np.cos(r)) / (r * r),
        lambda x: (np.cosh(x) - 1.0) / (x * x),
    )


def s_ratio(u):
    """(2 - 2 cos(sqrt(u)) - sqrt(u) sin(sqrt(u))) / u**2; -> 1/12 at 0.

    This is the regularised determinant factor of the rotational 2x2 Jacobi
    block: its first positive zero sits at ``u = (2 pi)**2``.  The hyperbolic
    continuation ``(2 - 2 cosh x + x sinh x)/x**4`` is strictly positive.
    """
    return _piecewise(
        u,
        _SRATIO_COEF,
        lambda r: (2.0 - 2.0 * np.cos(r) - r * np.sin(r)) / (r * r) ** 2,
        lambda x: (2.0 - 2.0 * np.cosh(x) + x * np.sinh(x)) / (x * x) ** 2,
    )


def tcs_ratio(u):
    """(sqrt(u) cos(sqrt(u)) - sin(sqrt(u))) / u**(3/2); -> -1/3 at 0.

    Continuation for u < 0 is ``(sinh x - x cosh x)/x**3`` with x = sqrt(-u).
    """
    return _piecewise(
        u,
        _TCS_COEF,
        lambda r: (r * np.cos(r) - np.sin(r)) / (r * r * r),
        lambda x: (np.sinh(x) - x * np.cosh(x)) / (x * x * x),
    )


def cot_sqrt(u):
    """sqrt(u) * cot(sqrt(u)); equals sqrt(-u) * coth(sqrt(-u)) for u < 0; -> 1 at 0.

    Has poles at u = (k pi)**2 for k >= 1; no cancellation occurs away from
    them, so the closed form is used except in a tiny neighbourhood of 0.
    """
    u = np.asarray(u, dtype=float)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    out = np.empty_like(u)

    small = np.abs(u) <= 1e-8
    out[small] = 1.0 - u[small] / 3.0 - u[small] ** 2 / 45.0
    pos = ~small & (u > 0)
    if pos.any():
        r = np.sqrt(u[pos])
        out[pos] = r / np.tan(r)
    neg = ~small & (u < 0)
    if neg.any():
        x = np.sqrt(-u[neg])
        out[neg] = x / np.tanh(x)
    return float(out[0]) if scalar else out


def expm1i_over(z, t):
    """(exp(1j*t*z) - 1)/z for real z, with the analytic limit 1j*t at z = 0.

    Vectorised over ``t``.  Used by the closed-form rotational geodesics,
    where z is the conserved vertical momentum.
    """
    t = np.asarray(t, dtype=float)
    if abs(z) < 1e-4:
        # series in (t*z): it - t^2 z/2 - i t^3 z^2/6 + t^4 z^3/24
        return (
            1j * t
            - t**2 * z / 2.0
            - 1j * t**3 * z**2 / 6.0
            + t**4 * z**3 / 24.0
            + 1j * t**5 * z**4 / 120.0
        )
    return (np.exp(1j * t * z) - 1.0) / z


def t_minus_sin_over(z, t):
    """(z*t - sin(z*t)) / (2 z**2), with the analytic limit z t^3/12 at z = 0.

    Vertical displacement rate of a unit-speed rotational geodesic.
    """
    t = np.asarray(t, dtype=float)
    if abs(z) < 1e-4:
        u = z * t
        return z * t**3 * (1.0 / 12.0 - u * u / 240.0 + u**4 / 10080.0)
    u = z * t
    return (u - np.sin(u)) / (2.0 * z * z)
