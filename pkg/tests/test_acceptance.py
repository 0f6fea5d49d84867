"""Acceptance criteria, one test per criterion.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
PASS lines and timings.  Tolerances are pinned here, nothing is deferred:

  1  reference-geometry anchor (class, counts, region IKS), < 5 s
  2  numeric/closed determinant ratio d4, rel 1e-5, 1000 configs, < 5 s
  3  IK round trip, 1e-6 per joint, 1000 samples, < 10 s
  4  residual identities (1e-9 scaled, 1000 draws) + non-separating
     straddles (50 points per candidate)
  5  surfaces/oracle agreement >= 99% on 500 off-band geometries, < 10 min
  6  transition semantics across C1 / E3 / E2 on the d3 in {0.5, 2} columns
  7  300x300 partition raster: all nine classes, adjacency consistent, < 1 min
  8  area trends in r2 and the vanishing WT4 share
  9  two aspects for every d3 > d4 geometry, grid-refinement stable
"""

import math
import time

import numpy as np
import pytest

from cuspidal import (
    Geometry,
    JointConfig,
    SurfaceId,
    aspect_count,
    classify,
    classify_by_surfaces,
    classify_numeric,
    count_features,
    cr_residual_scaled,
    forward_kinematics,
    inverse_kinematics,
    isolated_singular_points,
    jacobian_det_closed,
    jacobian_det_numeric,
    region_stats,
    surface_value,
    sweep,
    wrap_angle,
)
from cuspidal.surfaces import all_surface_values, eq7_d4_roots
from cuspidal.tracing import region_probe


def _off_band(d3, d4, r2, band):
    return all(abs(d4 - v) >= band for v in all_surface_values(d3, r2).values())


def _det_scale(g):
    return (g.d3 + g.d4) * (g.d2 + g.d3 + g.r2)


def test_criterion_1_reference_anchor():
    t0 = time.monotonic()
    geom = Geometry(d3=2.0, d4=1.5, r2=1.0)
    res = classify(geom, mode="both")
    assert (res.domain, res.wt) == (2, "WT3")
    assert res.agreement == "agree"
    assert (res.n_cusps, res.n_nodes) == (4, 0)
    probe = region_probe(geom)
    assert probe.inner_iks == 4
    assert probe.annulus_iks == 2
    elapsed = time.monotonic() - t0
    assert elapsed < 5.0
    print(f"\nPASS criterion 1: domain 2 / WT3, 4 cusps 0 nodes, "
          f"inner 4 IKS / outer 2 IKS [{elapsed:.2f}s < 5s]")


def test_criterion_2_determinant_convention():
    t0 = time.monotonic()
    rng = np.random.default_rng(101)
    worst = 0.0
    checked = 0
    for _ in range(20):
        g = Geometry(*(float(v) for v in rng.uniform(0.1, 3.0, 3)))
        for _ in range(50):
            q = JointConfig(*rng.uniform(-math.pi, math.pi, 3))
            closed = jacobian_det_closed(g, q)
            if abs(closed) < 1e-2 * _det_scale(g):
                continue
            checked += 1
            ratio = jacobian_det_numeric(g, q) / (g.d4 * closed)
            worst = max(worst, abs(ratio - 1.0))
    assert checked > 800
    assert worst < 1e-5
    elapsed = time.monotonic() - t0
    assert elapsed < 5.0
    print(f"\nPASS criterion 2: det ratio constant d4, worst rel dev "
          f"{worst:.2e} over {checked} configs [{elapsed:.2f}s < 5s]")


def test_criterion_3_ik_round_trip():
    t0 = time.monotonic()
    rng = np.random.default_rng(102)
    done = 0
    worst = 0.0
    while done < 1000:
        g = Geometry(*(float(v) for v in rng.uniform(0.1, 3.0, 3)))
        q = JointConfig(*rng.uniform(-math.pi, math.pi, 3))
        if abs(jacobian_det_closed(g, q)) <= 1e-3 * _det_scale(g):
            continue
        done += 1
        sols = inverse_kinematics(g, forward_kinematics(g, q))
        assert len(sols) in (2, 4)
        err = min(max(abs(wrap_angle(s.theta1 - q.theta1)),
                      abs(wrap_angle(s.theta2 - q.theta2)),
                      abs(wrap_angle(s.theta3 - q.theta3))) for s in sols)
        worst = max(worst, err)
        assert err < 1e-6
    elapsed = time.monotonic() - t0
    assert elapsed < 10.0
    print(f"\nPASS criterion 3: 1000 round trips recovered, worst error "
          f"{worst:.2e} < 1e-6 [{elapsed:.2f}s < 10s]")


def test_criterion_4_branch_equivalences():
    t0 = time.monotonic()
    rng = np.random.default_rng(103)
    worst = 0.0
    for _ in range(1000):
        d3, r2 = (float(v) for v in rng.uniform(0.05, 4.0, 2))
        worst = max(worst, abs(cr_residual_scaled(
            9, d3, surface_value(SurfaceId.C2, d3, r2), r2)))
        worst = max(worst, abs(cr_residual_scaled(
            7, d3, surface_value(SurfaceId.C1, d3, r2), r2)))
        if d3 > 1.0:
            worst = max(worst, abs(cr_residual_scaled(
                8, d3, surface_value(SurfaceId.C3, d3, r2), r2)))
        elif d3 < 1.0:
            worst = max(worst, abs(cr_residual_scaled(
                8, d3, surface_value(SurfaceId.C4, d3, r2), r2)))
    assert worst < 1e-9

    def second_eq7_root(d3, r2):
        lo, hi = eq7_d4_roots(d3, r2)
        c1 = surface_value(SurfaceId.C1, d3, r2)
        return hi if abs(lo - c1) <= abs(hi - c1) else lo

    candidates = {
        "eq5": lambda d3, r2: d3 / (1.0 + r2 * r2),
        "eq6": lambda d3, r2: math.hypot(d3, r2),
        "eq7_second_root": second_eq7_root,
    }
    checked = {name: 0 for name in candidates}
    delta = 1e-2
    rng = np.random.default_rng(104)
    while min(checked.values()) < 50:
        d3 = float(rng.uniform(0.3, 3.0))
        r2 = float(rng.uniform(0.3, 2.0))
        for name, fn in candidates.items():
            if checked[name] >= 50:
                continue
            d4 = fn(d3, r2)
            lo_d4, hi_d4 = d4 * (1 - delta), d4 * (1 + delta)
            if not (_off_band(d3, lo_d4, r2, 0.05)
                    and _off_band(d3, hi_d4, r2, 0.05)):
                continue
            lo = classify_numeric(Geometry(d3=d3, d4=lo_d4, r2=r2), 1000)
            hi = classify_numeric(Geometry(d3=d3, d4=hi_d4, r2=r2), 1000)
            assert (lo.domain, lo.wt) == (hi.domain, hi.wt), \
                f"{name} separated classes at ({d3}, {r2})"
            checked[name] += 1
    elapsed = time.monotonic() - t0
    print(f"\nPASS criterion 4: threshold residuals worst {worst:.2e} < 1e-9; "
          f"non-separating straddles {dict(checked)} [{elapsed:.1f}s]")


def test_criterion_5_oracle_agreement():
    t0 = time.monotonic()
    rng = np.random.default_rng(105)
    total = agree = 0
    disagreements = []
    while total < 500:
        d3 = float(rng.uniform(0.05, 3.0))
        d4 = float(rng.uniform(0.05, 3.0))
        r2 = float(rng.choice([0.5, 1.0, 2.0]))
        if not _off_band(d3, d4, r2, 1e-2):
            continue
        total += 1
        geom = Geometry(d3=d3, d4=d4, r2=r2)
        s = classify_by_surfaces(geom)
        m = classify_numeric(geom)
        if (s.domain, s.wt) == (m.domain, m.wt):
            agree += 1
        else:
            disagreements.append(((round(d3, 4), round(d4, 4), r2),
                                  s.wt, m.wt, m.diagnostics))
    for item in disagreements:
        print(f"\nDISAGREEMENT {item}")
    elapsed = time.monotonic() - t0
    assert elapsed < 600.0
    assert agree >= math.ceil(0.99 * total)
    print(f"\nPASS criterion 5: {agree}/{total} agreement "
          f"({100.0 * agree / total:.1f}% >= 99%), "
          f"{len(disagreements)} disagreements logged [{elapsed:.0f}s < 600s]")


def test_criterion_6_transition_semantics():
    t0 = time.monotonic()
    for d3 in (0.5, 2.0):
        c1 = surface_value(SurfaceId.C1, d3, 1.0)
        below = count_features(Geometry(d3=d3, d4=c1 * (1 - 1e-3), r2=1.0))
        above = count_features(Geometry(d3=d3, d4=c1 * (1 + 1e-3), r2=1.0))
        assert (below.n_cusps, above.n_cusps) == (0, 4)

        e3 = surface_value(SurfaceId.E3, d3, 1.0)
        below = count_features(Geometry(d3=d3, d4=e3 * (1 - 1e-3), r2=1.0))
        above = count_features(Geometry(d3=d3, d4=e3 * (1 + 1e-3), r2=1.0))
        assert above.n_nodes - below.n_nodes == 2

        assert isolated_singular_points(
            Geometry(d3=d3, d4=d3 * (1 - 1e-3), r2=1.0)) == ()
        assert len(isolated_singular_points(
            Geometry(d3=d3, d4=d3 * (1 + 1e-3), r2=1.0))) == 2
        assert len(isolated_singular_points(
            Geometry(d3=d3, d4=d3, r2=1.0))) == 1
    elapsed = time.monotonic() - t0
    print(f"\nPASS criterion 6: cusps flip 0<->4 at C1, nodes jump by 2 at E3, "
          f"isolated points appear exactly at d4 >= d3 [{elapsed:.1f}s]")


def test_criterion_7_partition_reproduction():
    t0 = time.monotonic()
    raster = sweep(1.0, (0.02, 3.0), (0.02, 3.0), 300, mode="surfaces")
    assert set(np.unique(raster.wt)) == set(range(1, 10))

    overlays = {i: all_surface_values(float(d3), 1.0)
                for i, d3 in enumerate(raster.d3_centers)}
    d4s = raster.d4_centers
    violations = []
    wt, bnd = raster.wt, raster.boundary
    diff_h = (wt[1:, :] != wt[:-1, :]) & ~bnd[1:, :] & ~bnd[:-1, :]
    diff_v = (wt[:, 1:] != wt[:, :-1]) & ~bnd[:, 1:] & ~bnd[:, :-1]
    for i, j in np.argwhere(diff_h):
        if not _pair_crossed(overlays[i], overlays[i + 1], d4s[j], d4s[j]):
            violations.append(((i, j), (i + 1, j)))
    for i, j in np.argwhere(diff_v):
        if not _pair_crossed(overlays[i], overlays[i], d4s[j], d4s[j + 1]):
            violations.append(((i, j), (i, j + 1)))
    assert violations == []
    elapsed = time.monotonic() - t0
    assert elapsed < 60.0
    print(f"\nPASS criterion 7: 300x300 raster holds all nine classes, "
          f"labels change only across separating curves [{elapsed:.1f}s < 60s]")


def _pair_crossed(vals_a, vals_b, d4a, d4b):
    for sid, va in vals_a.items():
        vb = vals_b.get(sid)
        if vb is None:
            continue
        if (float(d4a) - va) * (float(d4b) - vb) <= 0.0:
            return True
    return False


def test_criterion_8_area_trends():
    t0 = time.monotonic()
    lo = region_stats(sweep(0.5, (0.02, 3.0), (0.02, 3.0), 300))
    hi = region_stats(sweep(1.0, (0.02, 3.0), (0.02, 3.0), 300))
    for wt in ("WT1", "WT2", "WT7", "WT9"):
        assert lo.fraction(wt) > hi.fraction(wt), f"{wt} should grow as r2 shrinks"
    for wt in ("WT3", "WT4", "WT5", "WT6"):
        assert lo.fraction(wt) < hi.fraction(wt), f"{wt} should shrink as r2 shrinks"
    tiny = region_stats(sweep(0.05, (0.02, 3.0), (0.02, 3.0), 300))
    dom2 = sum(tiny.counts_off_boundary[w] for w in ("WT2", "WT3", "WT4"))
    share = tiny.counts_off_boundary["WT4"] / max(dom2, 1)
    assert share < 0.001
    elapsed = time.monotonic() - t0
    print(f"\nPASS criterion 8: r2 trends hold, WT4 share at r2=0.05 is "
          f"{share:.4%} < 0.1% of domain-2 cells [{elapsed:.1f}s]")


def test_criterion_9_aspect_count():
    t0 = time.monotonic()
    rng = np.random.default_rng(106)
    geoms = [Geometry(d3=2.0, d4=1.5, r2=1.0)]
    for _ in range(7):
        d4 = float(rng.uniform(0.1, 2.0))
        geoms.append(Geometry(d3=d4 + float(rng.uniform(0.05, 1.5)),
                              d4=d4, r2=float(rng.uniform(0.2, 2.0))))
    for g in geoms:
        assert g.d3 > g.d4
        assert aspect_count(g, 512) == 2
        assert aspect_count(g, 1024) == 2
    elapsed = time.monotonic() - t0
    print(f"\nPASS criterion 9: {len(geoms)} geometries with d3 > d4 all have "
          f"exactly 2 aspects at 512 and 1024 grids [{elapsed:.1f}s]")
