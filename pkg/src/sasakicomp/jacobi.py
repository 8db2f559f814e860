"""Linear Jacobi systems, matrix Riccati flows and conjugate-time detection.

Along a unit-speed geodesic the canonical frame reduces the Jacobi equation
to a linear matrix system

    A'(t) = B(t) R(t) - A(t) C1,      B'(t) = B(t) C1^T - A(t) C2,

with ``A(0) = I``, ``B(0) = 0``; the first conjugate time is the first
positive zero of ``det B``.  The quotient ``S = B^{-1} A`` solves the matrix
Riccati equation

    S'(t) = S C2 S - C1^T S - S C1 + R(t),

whose initial condition at t = 0 is singular (``S ~ -C2/t``); it is realised
numerically by seeding at a small ``t0 > 0`` with the inverse of the power
series of ``U = S^{-1}``.  The linear (A, B) form is preferred for
conjugate-time detection (no blow-up), the Riccati form for trace
comparisons; both are kept and cross-checked against the closed-form
constant-curvature solution :func:`riccati_oracle`.

Conventions: small-t expansions used for seeding and tests are

    B(t) = -C2 t + (C1 - C1^T) t^2 / 2 + (C2 R(0) C2 + C1 C1^T) t^3 / 6 + O(t^4)
    U(t) = -C2 t - (C1 + C1^T) t^2 / 2 - (C1 C1^T + C2 R(0) C2) t^3 / 3 + O(t^4)

(the cubic U coefficient is 1/3, as the exact flat solution
``U_11 = -t^3/3`` forces; see the series recursion in ``_u_series``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq, minimize_scalar

from .geometry import CanonicalCurvature, assemble_structural
from .special import cot_sqrt, halfvers_ratio, s_ratio, sinc_sqrt, tcs_ratio

__all__ = [
    "JacobiSolution",
    "RiccatiState",
    "RiccatiSolution",
    "JacobiIntegrationError",
    "ConjugateIndeterminate",
    "PoleEvaluationError",
    "integrate_jacobi",
    "first_conjugate_time",
    "integrate_riccati",
    "riccati_oracle",
    "constant_conjugate_time",
]

_BLOWUP_NORM = 1e12


class JacobiIntegrationError(RuntimeError):
    """Integrator failure (step-size underflow etc.), with the offending time."""

    def __init__(self, message: str, t: float):
        super().__init__(f"{message} (at t = {t!r})")
        self.t = t


class ConjugateIndeterminate(RuntimeError):
    """det B changes sign while both samples sit below the noise floor."""


class PoleEvaluationError(ZeroDivisionError):
    """Closed-form Riccati solution evaluated at (or too close to) a pole."""


def _curvature_profile(curvature) -> tuple[int, Callable[[float], np.ndarray], bool]:
    """Normalise a CanonicalCurvature or callable t -> CanonicalCurvature."""
    if isinstance(curvature, CanonicalCurvature):
        mat = curvature.matrix()
        return curvature.n, lambda _t: mat, True
    if callable(curvature):
        probe = curvature(0.0)
        if not isinstance(probe, CanonicalCurvature):
            raise TypeError("curvature callable must return CanonicalCurvature")
        return probe.n, lambda t: curvature(t).matrix(), False
    raise TypeError(f"unsupported curvature specification: {type(curvature)!r}")


# ---------------------------------------------------------------------------
# linear (A, B) system
# ---------------------------------------------------------------------------


@dataclass
class JacobiSolution:
    """Solution of the linear system on [0, T] sampled at the accepted steps.

    ``det B`` starts at 0, leaves 0 like ``-t^{2n+3}/12`` and its first
    return to zero is the conjugate time.  ``conjugate_time`` is None when
    det B has no zero on (0, T].
    """

    n: int
    grid: np.ndarray
    A: np.ndarray
    B: np.ndarray
    detB: np.ndarray
    conjugate_time: float | None = None
    conjugate_bracket: tuple[float, float] | None = None
    _dense: Callable[[float], np.ndarray] | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return 2 * self.n + 1

    def ab_at(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        d = self.dim
        y = self._dense(t)
        return y[: d * d].reshape(d, d), y[d * d :].reshape(d, d)

    def det_b_at(self, t: float) -> float:
        return float(np.linalg.det(self.ab_at(t)[1]))


def integrate_jacobi(curvature, T: float, tol: float = 1e-10, method: str = "RK45") -> JacobiSolution:
    """Integrate the linear system with A(0) = I, B(0) = 0 up to horizon T.

    ``curvature`` is a CanonicalCurvature (constant profile) or a callable
    ``t -> CanonicalCurvature``.  det B is recorded at every accepted step and
    the first conjugate time (if any) is located on the dense output.
    """
    if T <= 0:
        raise ValueError("horizon T must be positive")
    n, rmat, _ = _curvature_profile(curvature)
    sc = assemble_structural(n)
    C1, C2 = sc.C1, sc.C2
    d = sc.dim

    def rhs(t, y):
        A = y[: d * d].reshape(d, d)
        B = y[d * d :].reshape(d, d)
        Adot = B @ rmat(t) - A @ C1
        Bdot = B @ C1.T - A @ C2
        return np.concatenate([Adot.ravel(), Bdot.ravel()])

    y0 = np.concatenate([np.eye(d).ravel(), np.zeros(d * d)])
    sol = solve_ivp(rhs, (0.0, float(T)), y0, method=method, rtol=tol, atol=tol * 1e-3,
                    dense_output=True)
    if not sol.success:
        raise JacobiIntegrationError(sol.message, t=float(sol.t[-1]))

    A = sol.y[: d * d].T.reshape(-1, d, d)
    B = sol.y[d * d :].T.reshape(-1, d, d)
    detB = np.linalg.det(B)
    out = JacobiSolution(n=n, grid=sol.t.copy(), A=A, B=B, detB=detB, _dense=sol.sol)
    out.conjugate_time, out.conjugate_bracket = _locate_first_zero(out)
    return out


def _locate_first_zero(sol: JacobiSolution) -> tuple[float | None, tuple[float, float] | None]:
    """First positive zero of det B: sign changes and even-order touches.

    The accepted-step grid is refined 8x through the dense output because an
    even-order zero (transverse block of dimension >= 2) touches 0 without a
    sign change, over a time window the step controller has no reason to
    resolve.
    """
    grid = sol.grid
    if grid.size < 3:
        return None, None
    ts = np.unique(np.concatenate([np.linspace(a, b, 9) for a, b in zip(grid[:-1], grid[1:])]))
    dets = np.array([sol.det_b_at(t) for t in ts])

    scale = np.maximum.accumulate(np.abs(dets))
    floor = np.finfo(float).eps * 1e3 * np.maximum(scale, np.finfo(float).tiny)

    candidates: list[tuple[float, float]] = []
    suspicious: tuple[float, float] | None = None

    # sign changes
    for k in range(1, ts.size - 1):
        a, b = dets[k], dets[k + 1]
        if a == 0.0 and ts[k] > 0.0:
            candidates.append((float(ts[k]), float(ts[k - 1])))
            break
        if a * b >= 0.0:
            continue
        if abs(a) < floor[k] and abs(b) < floor[k + 1]:
            # noise-level flip; remember it, keep scanning for a definite zero
            if suspicious is None:
                suspicious = (float(ts[k]), float(ts[k + 1]))
            continue
        root = brentq(sol.det_b_at, ts[k], ts[k + 1], xtol=1e-15, rtol=8.9e-16, maxiter=200)
        candidates.append((float(root), float(ts[k])))
        break

    # even-order touches: |det B| has a local minimum dipping to ~0 without a
    # sign change; the dip is narrow (width ~ sqrt of the depth), so every
    # sampled local minimum below a loose threshold is polished by bounded
    # minimisation and accepted only if it genuinely reaches the noise floor.
    sign_root = candidates[0][0] if candidates else np.inf
    absd = np.abs(dets)
    for k in range(2, ts.size - 1):
        if ts[k] >= sign_root:
            break
        if not (absd[k] < absd[k - 1] and absd[k] <= absd[k + 1]):
            continue
        if absd[k] > 0.2 * scale[k]:
            continue
        lo_k, hi_k = max(k - 2, 1), min(k + 2, ts.size - 1)
        res = minimize_scalar(
            lambda t: abs(sol.det_b_at(t)),
            bounds=(ts[lo_k], ts[hi_k]),
            method="bounded",
            options={"xatol": 1e-13},
        )
        depth = 1e-7 * max(scale[k], np.finfo(float).tiny)
        if res.fun <= depth and abs(res.x - sign_root) > 1e-6 * (1.0 + abs(res.x)):
            candidates.append((float(res.x), float(ts[lo_k])))
            break

    if not candidates:
        if suspicious is not None:
            raise ConjugateIndeterminate(
                f"det B flips sign between t = {suspicious[0]!r} and {suspicious[1]!r} but both "
                f"samples sit below the noise floor; refine the integration tolerance"
            )
        return None, None
    root, lo = min(candidates)
    return root, (lo, root)


def first_conjugate_time(sol: JacobiSolution) -> float | None:
    """Smallest t > 0 with det B(t) = 0, or None if det B has no zero on (0, T]."""
    return sol.conjugate_time


def constant_conjugate_time(n: int, k1_eff: float, k2_eff: float) -> float:
    """Closed-form first conjugate time of the constant-curvature system.

    det B factorises as ``t^{2n+3} sinc(k2_eff t^2)^{2n-2} sratio(k1_eff t^2)``
    whose first zeros sit at ``2 pi / sqrt(k1_eff)`` (rotational block) and,
    when n >= 2, ``pi / sqrt(k2_eff)`` (transverse block).  +inf if neither
    block ever degenerates.
    """
    branches = []
    if k1_eff > 0:
        branches.append(2.0 * np.pi / np.sqrt(k1_eff))
    if n >= 2 and k2_eff > 0:
        branches.append(np.pi / np.sqrt(k2_eff))
    return min(branches) if branches else np.inf


# ---------------------------------------------------------------------------
# Riccati flow
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RiccatiState:
    """Symmetric Riccati matrix at one time, addressable in the (2, 2n-2, 1) split."""

    t: float
    S: np.ndarray

    @property
    def n(self) -> int:
        return (self.S.shape[0] - 1) // 2

    @property
    def S1(self) -> np.ndarray:
        return self.S[:2, :2]

    @property
    def S2(self) -> np.ndarray:
        return self.S[:2, 2:-1]

    @property
    def S3(self) -> np.ndarray:
        return self.S[:2, -1:]

    @property
    def S4(self) -> np.ndarray:
        return self.S[2:-1, 2:-1]

    @property
    def S5(self) -> np.ndarray:
        return self.S[2:-1, -1:]

    @property
    def S6(self) -> np.ndarray:
        return self.S[-1:, -1:]


@dataclass
class RiccatiSolution:
    """Riccati flow on [t0, T] (or up to blow-up), dense-evaluable via ``at``."""

    n: int
    t0: float
    states: list[RiccatiState]
    blowup_time: float | None = None
    _dense: Callable[[float], np.ndarray] | None = field(default=None, repr=False)

    def __iter__(self) -> Iterator[RiccatiState]:
        return iter(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def __getitem__(self, i) -> RiccatiState:
        return self.states[i]

    @property
    def t_end(self) -> float:
        return self.states[-1].t

    def at(self, t: float) -> RiccatiState:
        if t < self.t0 or t > self.t_end:
            raise ValueError(f"t = {t!r} outside the integrated range [{self.t0!r}, {self.t_end!r}]")
        d = 2 * self.n + 1
        S = self._dense(t).reshape(d, d)
        return RiccatiState(t=float(t), S=0.5 * (S + S.T))


def _u_series(R0: np.ndarray, n: int, order: int = 9) -> list[np.ndarray]:
    """Taylor coefficients U_1..U_order of U = S^{-1} about t = 0.

    Recursion from U' = -C2 + U C1^T + C1 U - U R U with R frozen at R(0):
    ``(k+1) U_{k+1} = U_k C1^T + C1 U_k - sum_{i+j=k} U_i R0 U_j``.
    """
    sc = assemble_structural(n)
    C1, C2 = sc.C1, sc.C2
    U = [np.zeros_like(C2), -C2.copy()]
    for k in range(1, order):
        acc = U[k] @ C1.T + C1 @ U[k]
        for i in range(1, k):
            acc = acc - U[i] @ R0 @ U[k - i]
        U.append(acc / (k + 1))
    return U


def _seed_state(R0: np.ndarray, n: int, t0: float) -> np.ndarray:
    coeffs = _u_series(R0, n)
    Useed = np.zeros_like(R0)
    tp = t0
    for k in range(1, len(coeffs)):
        Useed = Useed + coeffs[k] * tp
        tp *= t0
    try:
        S0 = np.linalg.inv(Useed)
    except np.linalg.LinAlgError as exc:
        raise JacobiIntegrationError(
            f"singular truncated series for the seed (t0 = {t0!r} too small for the numeric rank)",
            t=t0,
        ) from exc
    return 0.5 * (S0 + S0.T)


def integrate_riccati(
    curvature,
    T: float,
    t0: float = 1e-3,
    tol: float = 1e-10,
    method: str = "RK45",
    check_seed: bool = True,
) -> RiccatiSolution:
    """Integrate the Riccati flow from the singular origin up to T (or blow-up).

    The singular initial condition at t = 0 is realised by seeding at ``t0``
    with the inverse of the truncated U-series.  When ``check_seed`` is on,
    the run is repeated from ``t0/2`` and compared at an overlap time; a
    discrepancy above 1e-9 halves ``t0`` and retries (seed-consistency check).
    Blow-up of ``|S|`` beyond 1e12 before T terminates the flow and is
    reported through ``blowup_time`` (the conjugate point seen from the
    Riccati side).
    """
    if T <= t0:
        raise ValueError(f"horizon T = {T!r} must exceed the seeding time t0 = {t0!r}")
    n, rmat, _ = _curvature_profile(curvature)
    sc = assemble_structural(n)
    C1, C2 = sc.C1, sc.C2
    d = sc.dim
    R0 = rmat(0.0)

    def rhs(t, y):
        S = y.reshape(d, d)
        S = 0.5 * (S + S.T)
        dS = S @ C2 @ S - C1.T @ S - S @ C1 + rmat(t)
        return dS.ravel()

    def blowup(t, y):
        return _BLOWUP_NORM - float(np.max(np.abs(y)))

    blowup.terminal = True
    blowup.direction = -1

    def run(t_start: float, t_end: float):
        S0 = _seed_state(R0, n, t_start)
        sol = solve_ivp(
            rhs,
            (t_start, t_end),
            S0.ravel(),
            method=method,
            rtol=tol,
            atol=tol,
            dense_output=True,
            events=blowup,
        )
        if sol.status == -1:
            raise JacobiIntegrationError(sol.message, t=float(sol.t[-1]))
        return sol

    halvings = 0
    while True:
        sol = run(t0, T)
        if not check_seed:
            break
        t_check = min(max(10.0 * t0, 0.05), float(sol.t[-1]))
        ref = run(t0 / 2.0, t_check)
        t_check = min(t_check, float(ref.t[-1]))
        a = sol.sol(t_check)
        b = ref.sol(t_check)
        if np.max(np.abs(a - b)) <= 1e-9 * max(1.0, float(np.max(np.abs(a)))):
            break
        halvings += 1
        if halvings > 8:
            raise JacobiIntegrationError(
                "seed-consistency check keeps failing; curvature profile may be too stiff near 0",
                t=t0,
            )
        t0 = t0 / 2.0

    blowup_time = float(sol.t_events[0][0]) if sol.t_events[0].size else None
    states = [
        RiccatiState(t=float(t), S=0.5 * (y.reshape(d, d) + y.reshape(d, d).T))
        for t, y in zip(sol.t, sol.y.T)
    ]
    return RiccatiSolution(n=n, t0=t0, states=states, blowup_time=blowup_time, _dense=sol.sol)


# ---------------------------------------------------------------------------
# closed-form constant-curvature solution
# ---------------------------------------------------------------------------


def riccati_oracle(n: int, k1_eff: float, k2_eff: float, t: float) -> RiccatiState:
    """Closed-form Riccati solution for the constant profile diag(0, k1_eff, k2_eff I, 0).

    With ``u = k_eff * t^2`` the blocks are (independent reference for the
    numerical flow; negative effective curvature continues hyperbolically and
    u -> 0 limits are taken by series):

        S1 = [[-sinc(u1)/(t^3 sr(u1)),      hv(u1)/(t^2 sr(u1))],
              [ hv(u1)/(t^2 sr(u1)),        tcs(u1)/(t  sr(u1))]]
        S4 = -cot_sqrt(u2)/t * I_{2n-2}
        S6 = -1/t

    where sr = s_ratio, hv = halfvers_ratio, tcs = tcs_ratio.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if t <= 0:
        raise PoleEvaluationError(f"closed-form solution is singular at t = {t!r} <= 0")
    u1 = k1_eff * t * t
    u2 = k2_eff * t * t
    sr = s_ratio(u1)
    if not np.isfinite(sr) or abs(sr) < 1e-13:
        raise PoleEvaluationError(
            f"rotational block pole: s_ratio({u1!r}) = {sr!r} (first conjugate time of the 2x2 block)"
        )
    diag4 = -cot_sqrt(u2) / t
    if not np.isfinite(diag4):
        raise PoleEvaluationError(f"transverse block pole: cot_sqrt({u2!r}) diverges")

    d = 2 * n + 1
    S = np.zeros((d, d))
    S[0, 0] = -sinc_sqrt(u1) / (t**3 * sr)
    S[0, 1] = S[1, 0] = halfvers_ratio(u1) / (t**2 * sr)
    S[1, 1] = tcs_ratio(u1) / (t * sr)
    for i in range(2, d - 1):
        S[i, i] = diag4
    S[-1, -1] = -1.0 / t
    return RiccatiState(t=float(t), S=S)
