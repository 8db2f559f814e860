"""Acceptance suite: every exit criterion of the package as a callable check.

Each criterion returns a :class:`CriterionResult` with a one-line detail
string; the pytest acceptance module and the ``verify`` CLI subcommand both
run these, so the gate exercised in CI is exactly the gate exposed to users.

All tolerances are pinned here, not in the callers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .comparison import CurvatureBounds, EffectiveCurvature, laplacian_bound, trace_bound, volume_density
from .geometry import Covector, assemble_structural, constant_curvature_matrix
from .hamiltonian import heisenberg_flow, hopf_flow
from .jacobi import constant_conjugate_time, integrate_jacobi, integrate_riccati, riccati_oracle
from .models import ModelSpace, cut_time, heisenberg_geodesic, hopf_geodesic
from .volume import ball_volume, bishop_check
from .distance_field import verify_laplacian_comparison

__all__ = ["CriterionResult", "SUITES", "run_suite", "run_all"]


@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: str


def _unit_covector(rng: np.random.Generator, n: int, z: float | None = None) -> Covector:
    h = rng.normal(size=2 * n)
    h /= np.linalg.norm(h)
    return Covector(h=h, z=float(rng.uniform(-2.0, 2.0)) if z is None else z)


# ---------------------------------------------------------------------------
# criterion 1: Riccati flow vs closed-form solution
# ---------------------------------------------------------------------------


def criterion_riccati_oracle() -> CriterionResult:
    """max entrywise |S_numeric - S_oracle| <= 1e-8 on [0.1, 0.9 t_conj]."""
    tol = 1e-8
    worst = 0.0
    worst_case = ""
    for k1, k2 in [(0.0, 0.0), (4.0, 1.0), (-1.0, -1.0), (1.0, -1.0)]:
        for z in (0.0, 1.0, 2.0):
            for n in (1, 2, 3):
                k1e = z * z + k1
                k2e = z * z / 4.0 + k2
                tc = constant_conjugate_time(n, k1e, k2e)
                T = min(0.9 * tc, 6.0)
                sol = integrate_riccati(
                    constant_curvature_matrix(n, k1e, k2e), T=T, t0=1e-3, tol=1e-13, method="DOP853"
                )
                for t in np.linspace(0.1, T, 19):
                    err = float(np.max(np.abs(sol.at(t).S - riccati_oracle(n, k1e, k2e, t).S)))
                    if err > worst:
                        worst, worst_case = err, f"(k1,k2)=({k1},{k2}) z={z} n={n} t={t:.3f}"
    return CriterionResult(
        name="riccati_oracle_equivalence",
        passed=worst <= tol,
        detail=f"max entrywise error {worst:.3e} (tol {tol:.0e}) at {worst_case}",
    )


# ---------------------------------------------------------------------------
# criterion 2: det B small-time asymptotics
# ---------------------------------------------------------------------------


def criterion_detb_asymptotics() -> CriterionResult:
    """log-log slope of |det B| on [1e-3, 1e-2] is 2n+3 +- 0.05, coefficient 1/12 +- 2%."""
    ok = True
    parts = []
    for n in (1, 2, 3):
        sol = integrate_jacobi(constant_curvature_matrix(n, 0.0, 0.0), T=0.02, tol=1e-12)
        ts = np.geomspace(1e-3, 1e-2, 25)
        dets = np.array([abs(sol.det_b_at(t)) for t in ts])
        slope, intercept = np.polyfit(np.log(ts), np.log(dets), 1)
        coeff = float(np.exp(intercept))
        good = abs(slope - (2 * n + 3)) <= 0.05 and abs(coeff - 1.0 / 12.0) <= 0.02 / 12.0
        ok = ok and good
        parts.append(f"n={n}: slope {slope:.6f} (want {2 * n + 3}), coeff {coeff:.8f} (want {1 / 12:.8f})")
    return CriterionResult("detb_asymptotics", ok, "; ".join(parts))


# ---------------------------------------------------------------------------
# criterion 3: conjugate-time equality on the model profiles
# ---------------------------------------------------------------------------


def criterion_conjugate_equality() -> CriterionResult:
    """first_conjugate_time equals min(2 pi/sqrt(z^2+k1), 2 pi/sqrt(z^2+4 k2)) to 1e-8 rel."""
    tol = 1e-8
    worst = 0.0
    detail = []
    ok = True
    for k1, k2, label in [(0.0, 0.0, "flat"), (4.0, 1.0, "sphere")]:
        for z in (0.0, 0.5, 2.0):
            for n in (1, 2):
                b1 = z * z + k1
                b2 = z * z + 4.0 * k2
                expected = min(
                    2 * np.pi / np.sqrt(b1) if b1 > 0 else np.inf,
                    2 * np.pi / np.sqrt(b2) if b2 > 0 else np.inf,
                )
                k1e, k2e = z * z + k1, z * z / 4.0 + k2
                horizon = 8.0 if not np.isfinite(expected) else 1.3 * expected
                sol = integrate_jacobi(
                    constant_curvature_matrix(n, k1e, k2e), T=horizon, tol=1e-12, method="DOP853"
                )
                if not np.isfinite(expected):
                    if sol.conjugate_time is not None:
                        ok = False
                        detail.append(f"{label} z={z} n={n}: spurious conjugate time {sol.conjugate_time}")
                    continue
                if sol.conjugate_time is None:
                    ok = False
                    detail.append(f"{label} z={z} n={n}: missed conjugate time {expected:.6f}")
                    continue
                rel = abs(sol.conjugate_time - expected) / expected
                worst = max(worst, rel)
                if rel > tol:
                    ok = False
                    detail.append(f"{label} z={z} n={n}: rel err {rel:.2e}")
    msg = f"worst relative error {worst:.3e} (tol {tol:.0e})"
    if detail:
        msg += "; " + "; ".join(detail)
    return CriterionResult("conjugate_time_equality", ok, msg)


# ---------------------------------------------------------------------------
# criterion 4: closed-form geodesics vs Hamiltonian flows
# ---------------------------------------------------------------------------


def criterion_geodesics_vs_flow(samples: int = 100) -> CriterionResult:
    """closed forms match cotangent Hamiltonian integration to 1e-8 sup norm on [0, 2 pi]."""
    tol = 1e-8
    rng = np.random.default_rng(2024)
    T = 2 * np.pi
    nt = 25
    worst_h = worst_s = 0.0
    for _ in range(samples):
        p = _unit_covector(rng, 1)
        flow = heisenberg_flow(p, T)
        closed = heisenberg_geodesic(p, T, nt)
        worst_h = max(
            worst_h,
            max(float(np.max(np.abs(flow.point_at(s.t) - s.x))) for s in closed),
        )
    for _ in range(samples):
        p = _unit_covector(rng, 1)
        flow = hopf_flow(p, T)
        closed = hopf_geodesic(p, T, nt)
        worst_s = max(
            worst_s,
            max(float(np.max(np.abs(flow.point_at(s.t) - s.x))) for s in closed),
        )
    ok = worst_h <= tol and worst_s <= tol
    return CriterionResult(
        "geodesic_closed_form_vs_flow",
        ok,
        f"sup errors: flat {worst_h:.3e}, sphere {worst_s:.3e} (tol {tol:.0e}, {samples} covectors each)",
    )


# ---------------------------------------------------------------------------
# criterion 5: cut-point coincidence
# ---------------------------------------------------------------------------


def criterion_cut_point_coincidence() -> CriterionResult:
    """geodesics with equal z refocus at the cut time: flat 1e-10, sphere 1e-8."""
    rng = np.random.default_rng(7)
    z = 1.0
    p1 = _unit_covector(rng, 1, z=z)
    p2 = _unit_covector(rng, 1, z=z)

    T_flat = 2 * np.pi / z
    e1 = heisenberg_geodesic(p1, T_flat, 3)[-1].x
    e2 = heisenberg_geodesic(p2, T_flat, 3)[-1].x
    gap_flat = float(np.max(np.abs(e1 - e2)))

    T_sphere = 2 * np.pi / np.sqrt(z * z + 4.0)
    s1 = hopf_geodesic(p1, T_sphere, 3)[-1].x
    s2 = hopf_geodesic(p2, T_sphere, 3)[-1].x
    gap_sphere = float(np.max(np.abs(s1 - s2)))

    ok = gap_flat <= 1e-10 and gap_sphere <= 1e-8
    return CriterionResult(
        "cut_point_coincidence",
        ok,
        f"endpoint gaps: flat {gap_flat:.3e} (tol 1e-10), sphere {gap_sphere:.3e} (tol 1e-8)",
    )


# ---------------------------------------------------------------------------
# criterion 6: volume comparison and dilation scaling
# ---------------------------------------------------------------------------


def criterion_bishop() -> CriterionResult:
    """sphere/flat volume ratios <= 1 + 1e-3; self-ratios 1 +- 1e-3; dilation 2^{2n+2} +- 0.5%."""
    tol_ratio = 1e-3
    heis = ModelSpace.heisenberg(1)
    hopf = ModelSpace.hopf(1)
    rows = bishop_check(hopf, [0.5, 1.0, 2.0, 3.0], reference=heis, tol=tol_ratio)
    max_ratio = max(r["ratio"] for r in rows)

    self_dev = 0.0
    for model in (heis, hopf):
        for R in (0.8, 1.6):
            rr = bishop_check(model, [R], reference=model, tol=tol_ratio)
            self_dev = max(self_dev, abs(rr[0]["ratio"] - 1.0))

    dil_dev = 0.0
    for n in (1, 2):
        m = ModelSpace.heisenberg(n)
        v1 = ball_volume(m, 0.8).value
        v2 = ball_volume(m, 1.6).value
        target = 2.0 ** (2 * n + 2)
        dil_dev = max(dil_dev, abs(v2 / v1 - target) / target)

    ok = max_ratio <= 1.0 + tol_ratio and self_dev <= tol_ratio and dil_dev <= 5e-3
    return CriterionResult(
        "bishop_volume_comparison",
        ok,
        f"max sphere/flat ratio {max_ratio:.6f} (<= 1+{tol_ratio}), self-ratio dev {self_dev:.2e}, "
        f"dilation dev {dil_dev:.2e} (tol 5e-3)",
    )


# ---------------------------------------------------------------------------
# criterion 7: Laplacian comparison on the equality model
# ---------------------------------------------------------------------------


def criterion_laplacian() -> CriterionResult:
    """200 seeded samples: margin >= -1e-4 and max |margin| <= 1e-3; displayed z=0 limit (2n+3)/r to 1e-6."""
    model = ModelSpace.heisenberg(1)
    out = verify_laplacian_comparison(model, samples=200, seed=42)
    margins = np.array([s.margin for s in out])
    min_margin = float(margins.min())
    max_abs = float(np.max(np.abs(margins)))

    bounds = CurvatureBounds(0.0, 0.0, 1)
    limit_dev = max(
        abs(laplacian_bound(r, 0.0, bounds, form="displayed") - 5.0 / r) for r in (0.5, 1.0, 2.0)
    )

    ok = min_margin >= -1e-4 and max_abs <= 1e-3 and limit_dev <= 1e-6
    return CriterionResult(
        "laplacian_comparison",
        ok,
        f"min margin {min_margin:.3e} (>= -1e-4), max |margin| {max_abs:.3e} (<= 1e-3), "
        f"displayed z=0 limit deviation {limit_dev:.3e} (<= 1e-6)",
    )


# ---------------------------------------------------------------------------
# criterion 8: comparison-function cross-checks
# ---------------------------------------------------------------------------


def criterion_crosschecks() -> CriterionResult:
    """trace bound == C2-trace of the oracle (1e-10); volume density == r^2 |det B(1)| (1e-6);
    trig/hyperbolic continuity across zero effective curvature (1e-9)."""
    rng = np.random.default_rng(11)
    sc_n = {n: assemble_structural(n) for n in (1, 2, 3)}

    worst_trace = 0.0
    count = 0
    while count < 1000:
        n = int(rng.integers(1, 4))
        k1e = float(rng.uniform(-4.0, 9.0))
        k2e = float(rng.uniform(-4.0, 9.0))
        t = float(rng.uniform(0.05, 3.0))
        try:
            tb = trace_bound(t, EffectiveCurvature(k1e, k2e), n)
            st = riccati_oracle(n, k1e, k2e, t)
        except ZeroDivisionError:
            continue
        if abs(tb) > 1e6:
            continue  # next to a pole; both sides blow up, comparison meaningless
        tr = float(np.trace(sc_n[n].C2 @ st.S))
        worst_trace = max(worst_trace, abs(tb - tr) / max(1.0, abs(tb)))
        count += 1

    worst_det = 0.0
    for n, r, z, k1, k2 in [(1, 0.8, 0.5, 0.0, 0.0), (2, 1.0, 1.0, 4.0, 1.0), (2, 1.2, 0.0, -1.0, -1.0)]:
        bounds = CurvatureBounds(k1, k2, n)
        k1e = z * z + k1 * r * r
        k2e = z * z / 4.0 + k2 * r * r
        sol = integrate_jacobi(constant_curvature_matrix(n, k1e, k2e), T=1.0, tol=1e-12, method="DOP853")
        det1 = abs(sol.det_b_at(1.0))
        dev = abs(volume_density(r, z, bounds) - r * r * det1) / max(1e-30, r * r * det1)
        worst_det = max(worst_det, dev)

    worst_cont = 0.0
    eps = 1e-10
    for n in (1, 2):
        bounds_hi = CurvatureBounds(-1.0 + eps, -0.25 + eps, n)
        bounds_lo = CurvatureBounds(-1.0 - eps, -0.25 - eps, n)
        for r, z in [(1.0, 1.0), (0.7, 1.0)]:
            # effective curvatures straddle 0 when z^2 = r^2 = ... pick z = r so z^2 + k1 r^2 = r^2(1+k1)
            zz = r  # makes k1_eff = r^2 (1 + k1), k2_eff = r^2 (1/4 + k2)
            for fn in (
                lambda b: volume_density(r, zz, b),
                lambda b: laplacian_bound(r, zz, b, form="traced"),
            ):
                worst_cont = max(worst_cont, abs(fn(bounds_hi) - fn(bounds_lo)))

    ok = worst_trace <= 1e-10 and worst_det <= 1e-6 and worst_cont <= 1e-9
    return CriterionResult(
        "comparison_crosschecks",
        ok,
        f"trace-bound vs oracle {worst_trace:.3e} (<= 1e-10), volume density vs |det B(1)| "
        f"{worst_det:.3e} (<= 1e-6), branch continuity {worst_cont:.3e} (<= 1e-9)",
    )


SUITES = {
    "riccati": [criterion_riccati_oracle],
    "detb": [criterion_detb_asymptotics],
    "conjugate": [criterion_conjugate_equality],
    "geodesic": [criterion_geodesics_vs_flow],
    "cutpoint": [criterion_cut_point_coincidence],
    "bishop": [criterion_bishop],
    "laplacian": [criterion_laplacian],
    "crosscheck": [criterion_crosschecks],
}


def run_suite(name: str) -> list[CriterionResult]:
    if name == "all":
        return run_all()
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return [fn() for fn in SUITES[name]]


def run_all() -> list[CriterionResult]:
    return [fn() for fns in SUITES.values() for fn in fns]
