"""Decision procedure mapping a geometry to its workspace topology class.

Two independent routes produce the verdict:

* `classify_by_surfaces` cuts the d4 axis at fixed (d3, r2) with the
  closed-form thresholds.  Domain by cusp count: 1 below C1, 2 between C1
  and C2, 3 between C2 and C3 (d3 > 1) or C4 (d3 < 1), 4 above C3, 5 above
  C4.  Topology within a domain by the node thresholds: E1 and E2 split
  domain 2 into WT2/WT3/WT4, E3 splits domain 3 into WT5/WT6 and domain 5
  into WT8/WT9; domain 1 is WT1 and domain 4 is WT7.

* `classify_numeric` measures cusps and nodes with the tracer and infers
  the class from observables only: cusp count fixes the domain (with the
  isolated singular points splitting 0 cusps into domains 1 and 5), nodes
  at isolated points mark WT4 against WT2, and a crossing between internal
  and external boundary marks WT6 against WT5 and WT9 against WT8.

`classify(mode="both")` runs the two and reports agreement; a disagreement
away from the separating surfaces is a defect worth the attached
diagnostics, never silently resolved.

The expected feature counts per class; the node counts of WT5/WT6/WT8/WT9
are pinned by the numerical oracle (their transition structure only fixes
the cusp counts and the +2 node jump across E3):

    WT1 (0,0)   WT2 (4,2)   WT3 (4,0)   WT4 (4,2)   WT5 (2,1)
    WT6 (2,3)   WT7 (4,4)   WT8 (0,0)   WT9 (0,2)

WT4's two nodes coincide with the isolated singular points (flagged on the
NodePoint); they are included in n_nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from .kinematics import Geometry
from .surfaces import SurfaceId, all_surface_values
from .tracing import (
    FeatureReport,
    feature_details,
    isolated_singular_points,
    region_probe,
)

DOMAIN_CUSPS = {1: 0, 2: 4, 3: 2, 4: 4, 5: 0}

WT_FEATURE_TABLE: dict[str, tuple[int, int]] = {
    "WT1": (0, 0),
    "WT2": (4, 2),
    "WT3": (4, 0),
    "WT4": (4, 2),
    "WT5": (2, 1),
    "WT6": (2, 3),
    "WT7": (4, 4),
    "WT8": (0, 0),
    "WT9": (0, 2),
}

WT_DOMAIN = {"WT1": 1, "WT2": 2, "WT3": 2, "WT4": 2, "WT5": 3,
             "WT6": 3, "WT7": 4, "WT8": 5, "WT9": 5}


@dataclass(frozen=True)
class Classification:
    """Verdict for one geometry."""

    domain: int
    wt: str
    n_cusps: int
    n_nodes: int
    method: str                      # "surfaces" | "numeric" | "both"
    boundary_flag: bool = False
    agreement: str = "n/a"           # "agree" | "disagree" | "n/a"
    diagnostics: dict[str, Any] = field(default_factory=dict, compare=False)


def nearest_boundary_distance(geom: Geometry) -> tuple[SurfaceId, float]:
    """Closest separating surface and its |d4 - threshold| distance."""
    d3, d4, r2 = _norm_params(geom)
    best_id, best = None, math.inf
    for sid, value in all_surface_values(d3, r2).items():
        dist = abs(d4 - value)
        if dist < best:
            best_id, best = sid, dist
    return best_id, best


def _norm_params(geom: Geometry) -> tuple[float, float, float]:
    g = geom.normalized()
    return g.d3, g.d4, g.r2


def classify_by_surfaces(geom: Geometry, eps: float = 1e-6) -> Classification:
    """Closed-form classification; boundary_flag marks |d4 - surface| < eps.

    On a surface the verdict of the nearest open cell (by the comparison
    conventions below) is still returned, flagged.  d3 = 1 with d4 above C2
    sits on the common asymptote of C3 and C4 and is flagged as well.
    """
    d3, d4, r2 = _norm_params(geom)
    vals = all_surface_values(d3, r2)
    boundary = any(abs(d4 - v) < eps for v in vals.values())

    c1 = vals[SurfaceId.C1]
    c2 = vals[SurfaceId.C2]
    e1 = vals[SurfaceId.E1]
    e2 = vals[SurfaceId.E2]
    e3 = vals[SurfaceId.E3]

    if d4 < c1:
        domain, wt = 1, "WT1"
    elif d4 < c2:
        domain = 2
        wt = "WT2" if d4 < e1 else ("WT3" if d4 < e2 else "WT4")
    else:
        upper = vals.get(SurfaceId.C3, vals.get(SurfaceId.C4))
        if upper is None or d4 < upper:
            domain = 3
            wt = "WT5" if d4 < e3 else "WT6"
            if upper is None:
                boundary = True  # d3 = 1: C3/C4 asymptote
        elif SurfaceId.C3 in vals:
            domain, wt = 4, "WT7"
        else:
            domain = 5
            wt = "WT8" if d4 < e3 else "WT9"

    n_cusps, n_nodes = WT_FEATURE_TABLE[wt]
    return Classification(domain=domain, wt=wt, n_cusps=n_cusps,
                          n_nodes=n_nodes, method="surfaces",
                          boundary_flag=boundary,
                          diagnostics={"surface_values": {k.value: v for k, v in vals.items()}})


def classify_numeric(geom: Geometry, n_samples: int = 2000,
                     report: FeatureReport | None = None) -> Classification:
    """Oracle classification from measured cusp/node counts.

    The hole test (inverse-kinematic solution count inside the internal
    boundary: 0 for the binary class, 4 otherwise) backs the 0-cusp split
    and lands in the diagnostics.
    """
    if report is None:
        report = feature_details(geom, n_samples)
    nc, nn = report.count.as_tuple()
    iso = isolated_singular_points(geom)
    iso_nodes = any(n.at_isolated_point for n in report.nodes)
    cross = report.has_cross_nodes
    boundary = False
    diag: dict[str, Any] = {
        "n_cusps": nc, "n_nodes": nn,
        "n_isolated_points": len(iso),
        "nodes_at_isolated_points": iso_nodes,
        "cross_boundary_nodes": cross,
        "unconfirmed_cusps": len(report.unconfirmed_cusps),
    }

    if nc == 4:
        if nn >= 4:
            domain, wt = 4, "WT7"
        elif nn == 0:
            domain, wt = 2, "WT3"
        else:
            domain = 2
            wt = "WT4" if (iso_nodes or iso) else "WT2"
        if nn not in (0, 2, 4):
            boundary = True
    elif nc == 2:
        domain = 3
        wt = "WT6" if cross else "WT5"
    elif nc == 0:
        if iso:
            domain = 5
            wt = "WT9" if cross else "WT8"
        else:
            domain, wt = 1, "WT1"
            probe = region_probe(geom, report.curves)
            diag["inner_iks"] = probe.inner_iks
            if probe.inner_iks not in (0, None):
                boundary = True
    else:
        # odd cusp count: sampling artefact right on a transition
        boundary = True
        domain = min(DOMAIN_CUSPS, key=lambda d: abs(DOMAIN_CUSPS[d] - nc))
        wt = {1: "WT1", 2: "WT3", 3: "WT5", 4: "WT7", 5: "WT8"}[domain]

    expected = WT_FEATURE_TABLE[wt]
    if (nc, nn) != expected:
        boundary = True
        diag["expected_counts"] = expected
    return Classification(domain=domain, wt=wt, n_cusps=nc, n_nodes=nn,
                          method="numeric", boundary_flag=boundary,
                          diagnostics=diag)


def classify(geom: Geometry, mode: str = "surfaces", eps: float = 1e-6,
             n_samples: int = 2000) -> Classification:
    """Classify via the surfaces, the numerical oracle, or both cross-checked."""
    if mode == "surfaces":
        return classify_by_surfaces(geom, eps)
    if mode == "numeric":
        return classify_numeric(geom, n_samples)
    if mode != "both":
        raise ValueError(f"mode must be surfaces|numeric|both, got {mode!r}")

    surf = classify_by_surfaces(geom, eps)
    num = classify_numeric(geom, n_samples)
    agree = (surf.domain, surf.wt) == (num.domain, num.wt)
    diag = {
        "surfaces": {"domain": surf.domain, "wt": surf.wt,
                     "n_cusps": surf.n_cusps, "n_nodes": surf.n_nodes},
        "numeric": num.diagnostics,
        "nearest_boundary": nearest_boundary_distance(geom)[0].value,
    }
    # surfaces verdict is primary; counts are the measured ones
    return Classification(domain=surf.domain, wt=surf.wt,
                          n_cusps=num.n_cusps, n_nodes=num.n_nodes,
                          method="both",
                          boundary_flag=surf.boundary_flag or num.boundary_flag,
                          agreement="agree" if agree else "disagree",
                          diagnostics=diag)


def surface_thresholds(geom: Geometry) -> dict[str, float]:
    """All applicable surface thresholds at the geometry's (d3, r2) column."""
    d3, _, r2 = _norm_params(geom)
    return {sid.value: v for sid, v in all_surface_values(d3, r2).items()}
