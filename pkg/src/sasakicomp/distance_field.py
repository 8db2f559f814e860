"""Finite-difference sub-Laplacian of the flat-model distance function.

The horizontal frame of the flat model has affine integral curves that are
known exactly:

    exp(s X_i)(x, y, z) = (x + s e_i, y, z - y_i s / 2)
    exp(s Y_i)(x, y, z) = (x, y + s e_i, z + x_i s / 2)

so ``X_i(X_i f)`` is a plain second central difference of f along the exact
flow, with no frame interpolation error.  The sub-Laplacian is the sum of
those second derivatives over the 2n horizontal directions, Richardson
extrapolated from steps (s, s/2).

``verify_laplacian_comparison`` samples points away from the origin and the
vertical axis (where the distance is not smooth), evaluates the distance, its
Reeb derivative and its sub-Laplacian by finite differences, and compares
against the closed-form bound: the flat model is the equality case, so the
margin ``bound - laplacian`` must vanish to discretisation accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .comparison import CurvatureBounds, laplacian_bound
from .models import ModelKind, ModelSpace, heisenberg_distance
from .parallel import ordered_map

__all__ = [
    "LaplacianSample",
    "sub_laplacian_fd",
    "horizontal_gradient_norm",
    "reeb_derivative",
    "verify_laplacian_comparison",
]


@dataclass(frozen=True)
class LaplacianSample:
    x: np.ndarray
    d: float
    v0d: float
    lapH: float
    bound: float
    margin: float


def _flow_x(q: np.ndarray, i: int, s: float) -> np.ndarray:
    out = q.copy()
    n = (q.size - 1) // 2
    out[i] += s
    out[-1] -= 0.5 * q[n + i] * s
    return out


def _flow_y(q: np.ndarray, i: int, s: float) -> np.ndarray:
    out = q.copy()
    n = (q.size - 1) // 2
    out[n + i] += s
    out[-1] += 0.5 * q[i] * s
    return out


def _second_diffs(f: Callable[[np.ndarray], float], q: np.ndarray, s: float) -> float:
    n = (q.size - 1) // 2
    f0 = f(q)
    acc = 0.0
    for i in range(n):
        acc += f(_flow_x(q, i, s)) - 2.0 * f0 + f(_flow_x(q, i, -s))
        acc += f(_flow_y(q, i, s)) - 2.0 * f0 + f(_flow_y(q, i, -s))
    return acc / (s * s)


def sub_laplacian_fd(f: Callable[[np.ndarray], float], x, step: float) -> float:
    """Sub-Laplacian of a scalar field at x by exact-flow central differences.

    Second differences along each horizontal integral curve at steps
    (step, step/2), combined by Richardson extrapolation; errors in f
    propagate as O(err / step^2).
    """
    q = np.asarray(x, dtype=float)
    if q.ndim != 1 or q.size < 3 or q.size % 2 == 0:
        raise ValueError(f"point must have odd length >= 3, got shape {q.shape}")
    if step <= 0:
        raise ValueError("step must be positive")
    coarse = _second_diffs(f, q, step)
    fine = _second_diffs(f, q, step / 2.0)
    return (4.0 * fine - coarse) / 3.0


def horizontal_gradient_norm(f: Callable[[np.ndarray], float], x, step: float) -> float:
    """Norm of the horizontal gradient by central differences along the frame flows."""
    q = np.asarray(x, dtype=float)
    n = (q.size - 1) // 2
    acc = 0.0
    for i in range(n):
        gx = (f(_flow_x(q, i, step)) - f(_flow_x(q, i, -step))) / (2.0 * step)
        gy = (f(_flow_y(q, i, step)) - f(_flow_y(q, i, -step))) / (2.0 * step)
        acc += gx * gx + gy * gy
    return float(np.sqrt(acc))


def reeb_derivative(f: Callable[[np.ndarray], float], x, step: float) -> float:
    """Derivative along the Reeb field (the vertical coordinate direction),
    Richardson-extrapolated central differences."""
    q = np.asarray(x, dtype=float)

    def central(s: float) -> float:
        hi = q.copy()
        lo = q.copy()
        hi[-1] += s
        lo[-1] -= s
        return (f(hi) - f(lo)) / (2.0 * s)

    coarse = central(step)
    fine = central(step / 2.0)
    return (4.0 * fine - coarse) / 3.0


_AXIS_EXCLUSION = 0.05  # cylinder radius around the vertical axis (cut locus)


def _sample_point(seed: int, index: int, n: int) -> np.ndarray:
    rng = np.random.default_rng([seed, index])
    while True:
        w = rng.normal(size=2 * n)
        rho = rng.uniform(0.3, 1.8)
        w *= rho / np.linalg.norm(w)
        zc = rng.uniform(-1.5, 1.5)
        if rho > _AXIS_EXCLUSION:
            return np.concatenate([w, [zc]])


def verify_laplacian_comparison(
    model: ModelSpace,
    samples: int,
    seed: int,
    step_scale: float = 1e-4,
    form: str = "traced",
) -> list[LaplacianSample]:
    """Evaluate distance, Reeb derivative, sub-Laplacian and the comparison
    bound at seeded random points of the flat model.

    Point i depends only on (seed, i), so runs are reproducible and
    parallelisable.  Only the flat model is supported: it is the equality
    case, and the only model with an exact distance solver here.
    """
    if model.kind is not ModelKind.HEISENBERG:
        raise ValueError("the Laplacian comparison sweep runs on the flat model only")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    bounds = CurvatureBounds(k1=model.k1, k2=model.k2, n=model.n)

    def evaluate(i: int) -> LaplacianSample:
        q = _sample_point(seed, i, model.n)
        try:
            d = heisenberg_distance(q)
            s = step_scale * d
            lap = sub_laplacian_fd(heisenberg_distance, q, step=s)
            v0d = reeb_derivative(heisenberg_distance, q, step=s)
        except Exception as exc:
            raise RuntimeError(
                f"distance evaluation failed at sample {i}, point {q.tolist()}: {exc}"
            ) from exc
        bound = laplacian_bound(d, v0d, bounds, form=form)
        return LaplacianSample(x=q, d=d, v0d=v0d, lapH=lap, bound=bound, margin=bound - lap)

    return ordered_map(evaluate, range(samples))
