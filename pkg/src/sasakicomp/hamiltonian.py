"""Cotangent-bundle Hamiltonian flows used as independent geodesic oracles.

Both model geodesic families in :mod:`sasakicomp.models` are closed forms.
This module integrates the corresponding sub-Riemannian Hamiltonian systems
numerically (no closed form is used anywhere here), so that closed form and
flow can be cross-checked against each other.

Flat model: ``H = 1/2 sum_i (P_Xi^2 + P_Yi^2)`` with
``P_Xi = p_xi - y_i p_z / 2``, ``P_Yi = p_yi + x_i p_z / 2``.

Sphere model: the Hamiltonian is written on the ambient ``T^* R^{2n+2}`` as
half the squared norm of the momentum projected onto the horizontal space
``{q, Jq}^perp`` (J = multiplication by i).  The flow preserves ``|q|``, the
energy and the vertical momentum ``z = 2 p . Jq``, and restricted to the unit
sphere it is the sub-Riemannian geodesic flow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .geometry import Covector

__all__ = ["FlowResult", "heisenberg_flow", "hopf_flow"]


@dataclass(frozen=True)
class FlowResult:
    """Dense numerically integrated geodesic: ``point_at(t)`` gives coordinates
    in the same layout as the closed-form samples."""

    T: float
    point_at: Callable[[float], np.ndarray]
    invariant_drift: float


def _rotate_half(v: np.ndarray) -> np.ndarray:
    # complex-structure action on (x-block, y-block) stacked vectors
    m = v.size // 2
    return np.concatenate([-v[m:], v[:m]])


def heisenberg_flow(p: Covector, T: float, rtol: float = 1e-12, atol: float = 1e-13) -> FlowResult:
    n = p.n

    def rhs(_t, s):
        x = s[:n]
        y = s[n : 2 * n]
        px = s[2 * n + 1 : 3 * n + 1]
        py = s[3 * n + 1 : 4 * n + 1]
        pz = s[4 * n + 1]
        PX = px - 0.5 * y * pz
        PY = py + 0.5 * x * pz
        zdot = float(np.sum(-0.5 * y * PX + 0.5 * x * PY))
        return np.concatenate([PX, PY, [zdot], -0.5 * PY * pz, 0.5 * PX * pz, [0.0]])

    s0 = np.concatenate([np.zeros(2 * n + 1), p.h, [p.z]])
    sol = solve_ivp(rhs, (0.0, T), s0, method="DOP853", rtol=rtol, atol=atol, dense_output=True)
    if not sol.success:
        raise RuntimeError(f"flat-model Hamiltonian flow failed: {sol.message}")

    def energy(s):
        x, y = s[:n], s[n : 2 * n]
        px, py, pz = s[2 * n + 1 : 3 * n + 1], s[3 * n + 1 : 4 * n + 1], s[4 * n + 1]
        return 0.5 * float(np.sum((px - 0.5 * y * pz) ** 2 + (py + 0.5 * x * pz) ** 2))

    drift = abs(energy(sol.y[:, -1]) - energy(s0))
    return FlowResult(T=T, point_at=lambda t: sol.sol(t)[: 2 * n + 1], invariant_drift=drift)


def hopf_flow(p: Covector, T: float, rtol: float = 1e-12, atol: float = 1e-13) -> FlowResult:
    n = p.n
    m = 2 * (n + 1)

    def rhs(_t, s):
        q, mom = s[:m], s[m:]
        q2 = float(q @ q)
        jq = _rotate_half(q)
        pq = float(mom @ q)
        pjq = float(mom @ jq)
        qdot = mom - (pq * q + pjq * jq) / q2
        jp = _rotate_half(mom)
        pdot = (pq * mom - pq * pq * q / q2 - pjq * jp - pjq * pjq * q / q2) / q2
        return np.concatenate([qdot, pdot])

    # start point (1, 0, ..., 0); horizontal momentum in the complex slots 2..n+1
    q0 = np.zeros(m)
    q0[0] = 1.0
    mom0 = np.zeros(m)
    mom0[1 : n + 1] = p.h[:n]
    mom0[n + 2 :] = p.h[n:]
    mom0 += (p.z / 2.0) * _rotate_half(q0)

    sol = solve_ivp(
        rhs, (0.0, T), np.concatenate([q0, mom0]), method="DOP853", rtol=rtol, atol=atol, dense_output=True
    )
    if not sol.success:
        raise RuntimeError(f"sphere-model Hamiltonian flow failed: {sol.message}")

    qT, pT = sol.y[:m, -1], sol.y[m:, -1]
    drift = max(
        abs(float(qT @ qT) - 1.0),
        abs(2.0 * float(pT @ _rotate_half(qT)) - p.z),
    )
    return FlowResult(T=T, point_at=lambda t: sol.sol(t)[:m], invariant_drift=drift)
