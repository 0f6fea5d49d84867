"""Self-check suites behind the `verify` CLI subcommand.

Each suite exercises one of the cross-checks that tie the closed-form side
of the package to the numerical side: the determinant convention, the
inverse-kinematics round trip, the residual identities between the surface
thresholds and the polynomial surface candidates, the classification flips
across each separating surface, the non-separating candidates, the
surfaces/oracle agreement on random geometries, and the two-region
structure of the joint-space torus.  All randomness is seeded, so a report
is reproducible from (seed, n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .classify import classify_by_surfaces, classify_numeric
from .kinematics import (
    Geometry,
    JointConfig,
    forward_kinematics,
    inverse_kinematics,
    jacobian_det_closed,
    jacobian_det_numeric,
)
from .surfaces import (
    AuxAB,
    SurfaceId,
    cr_residual_scaled,
    eq7_d4_roots,
    surface_value,
)
from .tracing import aspect_count

SurfaceFn = Callable[[SurfaceId, float, float], float]


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str


def _random_geometries(rng: np.random.Generator, k: int) -> list[Geometry]:
    out = []
    while len(out) < k:
        d3, d4, r2 = rng.uniform(0.1, 3.0, 3)
        out.append(Geometry(d3=float(d3), d4=float(d4), r2=float(r2)))
    return out


def suite_determinant_ratio(rng: np.random.Generator, n: int) -> SuiteResult:
    worst = 0.0
    geoms = _random_geometries(rng, max(4, n // 50))
    per_geom = max(1, n // len(geoms))
    for geom in geoms:
        for _ in range(per_geom):
            q = JointConfig(*rng.uniform(-math.pi, math.pi, 3))
            closed = jacobian_det_closed(geom, q)
            scale = (geom.d3 + geom.d4) * (geom.d2 + geom.d3 + geom.r2)
            if abs(closed) < 1e-2 * scale:
                continue
            ratio = jacobian_det_numeric(geom, q) / (geom.d4 * closed)
            worst = max(worst, abs(ratio - 1.0))
    return SuiteResult("determinant_ratio", worst < 1e-5,
                       f"max relative deviation {worst:.3e} (bound 1e-5)")


def suite_ik_roundtrip(rng: np.random.Generator, n: int) -> SuiteResult:
    bad = 0
    worst = 0.0
    for _ in range(n):
        geom = _random_geometries(rng, 1)[0]
        q = JointConfig(*rng.uniform(-math.pi, math.pi, 3))
        scale = (geom.d3 + geom.d4) * (geom.d2 + geom.d3 + geom.r2)
        if abs(jacobian_det_closed(geom, q)) < 1e-3 * scale:
            continue
        sols = inverse_kinematics(geom, forward_kinematics(geom, q))
        if len(sols) not in (2, 4):
            bad += 1
            continue
        err = min(max(abs(s.theta1 - q.theta1), abs(s.theta2 - q.theta2),
                      abs(s.theta3 - q.theta3)) for s in sols)
        worst = max(worst, err)
        if err > 1e-6:
            bad += 1
    return SuiteResult("ik_roundtrip", bad == 0,
                       f"{bad} failures, worst recovery error {worst:.3e}")


def suite_surface_residuals(rng: np.random.Generator, n: int,
                            surface_fn: SurfaceFn = surface_value) -> SuiteResult:
    worst = 0.0
    worst_ab = 0.0
    for _ in range(n):
        d3, r2 = rng.uniform(0.05, 4.0, 2)
        d3, r2 = float(d3), float(r2)
        pairs = [(9, surface_fn(SurfaceId.C2, d3, r2)),
                 (7, surface_fn(SurfaceId.C1, d3, r2))]
        if d3 > 1.0:
            pairs.append((8, surface_fn(SurfaceId.C3, d3, r2)))
        elif d3 < 1.0:
            pairs.append((8, surface_fn(SurfaceId.C4, d3, r2)))
        for k, d4 in pairs:
            worst = max(worst, abs(cr_residual_scaled(k, d3, d4, r2)))
        ab = AuxAB.of(d3, r2)
        ident = (d3 * d3 + r2 * r2 + 1.0) ** 2 - 4.0 * d3 * d3
        worst_ab = max(worst_ab, abs(ab.product_sq - ident) / ident)
    ok = worst < 1e-9 and worst_ab < 1e-12
    return SuiteResult("surface_residuals", ok,
                       f"max scaled residual {worst:.3e} (bound 1e-9), "
                       f"A^2B^2 identity {worst_ab:.3e} (bound 1e-12)")


def suite_transition_flips(surface_fn: SurfaceFn = surface_value) -> SuiteResult:
    """Surfaces-mode class must change across every applicable threshold."""
    failures = []
    for d3 in (0.5, 2.0):
        r2 = 1.0
        ids = [SurfaceId.C1, SurfaceId.C2, SurfaceId.E1, SurfaceId.E2,
               SurfaceId.E3]
        ids.append(SurfaceId.C3 if d3 > 1.0 else SurfaceId.C4)
        for sid in ids:
            d4 = surface_fn(sid, d3, r2)
            lo = classify_by_surfaces(Geometry(d3=d3, d4=d4 * (1 - 1e-3), r2=r2))
            hi = classify_by_surfaces(Geometry(d3=d3, d4=d4 * (1 + 1e-3), r2=r2))
            if (lo.domain, lo.wt) == (hi.domain, hi.wt):
                failures.append(f"{sid.value}@d3={d3}")
    return SuiteResult("transition_flips", not failures,
                       "all surfaces separate" if not failures
                       else "no flip across " + ", ".join(failures))


def _off_band(d3: float, d4: float, r2: float, band: float) -> bool:
    from .surfaces import all_surface_values
    return all(abs(d4 - v) >= band for v in all_surface_values(d3, r2).values())


def suite_nonseparating(rng: np.random.Generator, n_points: int,
                        n_samples: int = 800,
                        delta: float = 1e-2) -> SuiteResult:
    """Straddle test: classes match on both sides of each non-separating
    candidate branch (candidates 5, 6 and the larger branch of 7)."""
    checked = 0
    failures = []
    attempts = 0
    while checked < 3 * n_points and attempts < 400:
        attempts += 1
        d3 = float(rng.uniform(0.3, 3.0))
        r2 = float(rng.uniform(0.3, 2.0))
        for tag, d4 in (("cand5", d3 / (1.0 + r2 * r2)),
                        ("cand6", math.hypot(d3, r2)),
                        ("cand7hi", eq7_d4_roots(d3, r2)[1])):
            if checked >= 3 * n_points:
                break
            lo_d4, hi_d4 = d4 * (1 - delta), d4 * (1 + delta)
            if not (_off_band(d3, lo_d4, r2, 0.05) and _off_band(d3, hi_d4, r2, 0.05)):
                continue
            lo = classify_numeric(Geometry(d3=d3, d4=lo_d4, r2=r2), n_samples)
            hi = classify_numeric(Geometry(d3=d3, d4=hi_d4, r2=r2), n_samples)
            checked += 1
            if (lo.domain, lo.wt) != (hi.domain, hi.wt):
                failures.append(f"{tag}@({d3:.3f},{r2:.3f})")
    return SuiteResult("nonseparating_candidates", not failures and checked > 0,
                       f"{checked} straddles checked"
                       + ("" if not failures else ", class changed at "
                          + ", ".join(failures)))


def suite_oracle_agreement(rng: np.random.Generator, k: int,
                           n_samples: int = 1200) -> SuiteResult:
    agree = 0
    total = 0
    mism = []
    while total < k:
        d3 = float(rng.uniform(0.05, 3.0))
        d4 = float(rng.uniform(0.05, 3.0))
        r2 = float(rng.choice([0.5, 1.0, 2.0]))
        if not _off_band(d3, d4, r2, 1e-2):
            continue
        total += 1
        geom = Geometry(d3=d3, d4=d4, r2=r2)
        s = classify_by_surfaces(geom)
        m = classify_numeric(geom, n_samples)
        if (s.domain, s.wt) == (m.domain, m.wt):
            agree += 1
        else:
            mism.append(f"({d3:.3f},{d4:.3f},{r2}) {s.wt}!={m.wt}")
    ok = agree >= math.ceil(0.99 * total)
    return SuiteResult("oracle_agreement", ok,
                       f"{agree}/{total} agree"
                       + ("" if not mism else "; " + "; ".join(mism[:4])))


def suite_aspects(rng: np.random.Generator, k: int = 4) -> SuiteResult:
    bad = []
    for _ in range(k):
        d4 = float(rng.uniform(0.1, 2.0))
        d3 = d4 + float(rng.uniform(0.1, 1.5))
        r2 = float(rng.uniform(0.2, 2.0))
        geom = Geometry(d3=d3, d4=d4, r2=r2)
        n = aspect_count(geom, 256)
        if n != 2:
            bad.append(f"({d3:.3f},{d4:.3f},{r2:.3f})->{n}")
    return SuiteResult("aspect_count", not bad,
                       "d3 > d4 geometries all have 2 aspects"
                       if not bad else "unexpected counts: " + ", ".join(bad))


def run_all(seed: int = 0, n: int = 200,
            tamper_surface: str | None = None) -> list[SuiteResult]:
    """Run every suite; `tamper_surface` offsets one surface threshold by
    1e-3 inside the residual/flip suites (a mutation hook proving the
    verifier actually bites)."""
    surface_fn: SurfaceFn = surface_value
    if tamper_surface:
        target = SurfaceId(tamper_surface)

        def surface_fn(sid, d3, r2, _base=surface_value):
            v = _base(sid, d3, r2)
            return v + 1e-3 if sid is target else v

    results = []
    rng = np.random.default_rng(seed)
    results.append(suite_determinant_ratio(rng, n))
    rng = np.random.default_rng(seed + 1)
    results.append(suite_ik_roundtrip(rng, n))
    rng = np.random.default_rng(seed + 2)
    results.append(suite_surface_residuals(rng, n, surface_fn))
    results.append(suite_transition_flips(surface_fn))
    rng = np.random.default_rng(seed + 3)
    results.append(suite_nonseparating(rng, max(2, n // 40)))
    rng = np.random.default_rng(seed + 4)
    results.append(suite_oracle_agreement(rng, max(4, n // 25)))
    rng = np.random.default_rng(seed + 5)
    results.append(suite_aspects(rng))
    return results
