"""Grid sweeps over (d3, d4) at fixed r2: partition rasters and overlays.

Cells are classified at their centres.  In surfaces mode a whole raster
costs milliseconds because every threshold depends on the column's d3 only;
numeric mode runs the full tracer per cell and is meant for coarse grids
and spot checks.  A cell is boundary-flagged when some separating surface
passes within a cell diagonal of its centre (in d4 units).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .classify import classify_numeric
from .kinematics import Geometry
from .surfaces import SurfaceId, applicable_surfaces, surface_value

WT_NAMES = tuple(f"WT{i}" for i in range(1, 10))


def _centers(lo: float, hi: float, n: int) -> np.ndarray:
    return lo + (np.arange(n) + 0.5) * (hi - lo) / n


@dataclass
class PartitionRaster:
    """Classification of every cell of a (d3, d4) grid at fixed r2.

    Arrays are indexed [i_d3, j_d4]; canonical (row-major) order is d3 outer,
    d4 inner, matching the CSV the CLI emits.
    """

    r2: float
    d3_range: tuple[float, float]
    d4_range: tuple[float, float]
    resolution: tuple[int, int]
    mode: str
    domain: np.ndarray
    wt: np.ndarray              # 1..9
    boundary: np.ndarray
    eps: float
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def d3_centers(self) -> np.ndarray:
        return _centers(*self.d3_range, self.resolution[0])

    @property
    def d4_centers(self) -> np.ndarray:
        return _centers(*self.d4_range, self.resolution[1])

    @property
    def cell_diagonal(self) -> float:
        w = (self.d3_range[1] - self.d3_range[0]) / self.resolution[0]
        h = (self.d4_range[1] - self.d4_range[0]) / self.resolution[1]
        return math.hypot(w, h)

    def wt_name(self, i: int, j: int) -> str:
        return f"WT{self.wt[i, j]}"

    def rows(self):
        """Yield (d3, d4, domain, wt_name, boundary) in canonical order."""
        d3s, d4s = self.d3_centers, self.d4_centers
        for i in range(self.resolution[0]):
            for j in range(self.resolution[1]):
                yield (float(d3s[i]), float(d4s[j]), int(self.domain[i, j]),
                       f"WT{self.wt[i, j]}", bool(self.boundary[i, j]))


def _classify_column(d3: float, r2: float, d4s: np.ndarray, diag: float):
    """Vectorized surfaces-mode classification of one d3 column."""
    vals = {sid: surface_value(sid, d3, r2) for sid in applicable_surfaces(d3)}
    c1, c2 = vals[SurfaceId.C1], vals[SurfaceId.C2]
    e1, e2, e3 = vals[SurfaceId.E1], vals[SurfaceId.E2], vals[SurfaceId.E3]
    upper = vals.get(SurfaceId.C3, vals.get(SurfaceId.C4, math.inf))
    above_is_dom4 = SurfaceId.C3 in vals

    wt = np.empty(len(d4s), dtype=np.int8)
    wt[d4s < c1] = 1
    in2 = (d4s >= c1) & (d4s < c2)
    wt[in2 & (d4s < e1)] = 2
    wt[in2 & (d4s >= e1) & (d4s < e2)] = 3
    wt[in2 & (d4s >= e2)] = 4
    in3 = (d4s >= c2) & (d4s < upper)
    wt[in3 & (d4s < e3)] = 5
    wt[in3 & (d4s >= e3)] = 6
    above = d4s >= upper
    if above_is_dom4:
        wt[above] = 7
    else:
        wt[above & (d4s < e3)] = 8
        wt[above & (d4s >= e3)] = 9

    domain = np.array([WT_DOMAIN_BY_INT[w] for w in wt], dtype=np.int8)
    dist = np.full(len(d4s), np.inf)
    for v in vals.values():
        np.minimum(dist, np.abs(d4s - v), out=dist)
    return domain, wt, dist < diag


WT_DOMAIN_BY_INT = {1: 1, 2: 2, 3: 2, 4: 2, 5: 3, 6: 3, 7: 4, 8: 5, 9: 5}


def sweep(r2: float, d3_range: tuple[float, float] = (0.02, 3.0),
          d4_range: tuple[float, float] = (0.02, 3.0),
          resolution: int | tuple[int, int] = 300,
          mode: str = "surfaces",
          eps: float = 1e-6,
          numeric_samples: int = 600,
          spot_check_fraction: float = 0.0,
          spot_check_seed: int = 0) -> PartitionRaster:
    """Classify a cell-centred grid over (d3, d4] ranges at fixed r2.

    `spot_check_fraction` re-classifies a deterministic subsample of the
    cells with the numerical oracle in surfaces mode and records
    off-boundary disagreements in the raster metadata.
    """
    if isinstance(resolution, int):
        resolution = (resolution, resolution)
    if resolution[0] < 1 or resolution[1] < 1:
        # full rasters want >= 16 per axis; 1x1 point queries are also valid
        raise ValueError("resolution must be >= 1 per axis")
    if d3_range[0] <= 0 or d4_range[0] <= 0 or r2 <= 0:
        raise ValueError("ranges and r2 must be positive")
    if d3_range[1] < d3_range[0] or d4_range[1] < d4_range[0]:
        raise ValueError("ranges must be increasing")
    if mode not in ("surfaces", "numeric"):
        raise ValueError(f"mode must be surfaces|numeric, got {mode!r}")

    n3, n4 = resolution
    d3s = _centers(*d3_range, n3)
    d4s = _centers(*d4_range, n4)
    w = (d3_range[1] - d3_range[0]) / n3
    h = (d4_range[1] - d4_range[0]) / n4
    diag = math.hypot(w, h)

    domain = np.empty((n3, n4), dtype=np.int8)
    wt = np.empty((n3, n4), dtype=np.int8)
    boundary = np.empty((n3, n4), dtype=bool)
    metadata: dict[str, Any] = {"numeric_samples": numeric_samples}

    if mode == "surfaces":
        for i, d3 in enumerate(d3s):
            domain[i], wt[i], boundary[i] = _classify_column(
                float(d3), r2, d4s, diag)
        if spot_check_fraction > 0.0:
            metadata["spot_check"] = _spot_check(
                r2, d3s, d4s, domain, wt, boundary, spot_check_fraction,
                numeric_samples, spot_check_seed)
    else:
        from .classify import nearest_boundary_distance

        for i, d3 in enumerate(d3s):
            for j, d4 in enumerate(d4s):
                geom = Geometry(d3=float(d3), d4=float(d4), r2=r2)
                res = classify_numeric(geom, n_samples=numeric_samples)
                domain[i, j] = res.domain
                wt[i, j] = int(res.wt[2])
                boundary[i, j] = (res.boundary_flag
                                  or nearest_boundary_distance(geom)[1] < diag)

    return PartitionRaster(r2=r2, d3_range=tuple(d3_range),
                           d4_range=tuple(d4_range), resolution=(n3, n4),
                           mode=mode, domain=domain, wt=wt, boundary=boundary,
                           eps=eps, metadata=metadata)


def _spot_check(r2, d3s, d4s, domain, wt, boundary, fraction, n_samples, seed):
    n3, n4 = len(d3s), len(d4s)
    total = n3 * n4
    k = max(1, round(fraction * total))
    rng = np.random.default_rng(seed)
    flat = rng.choice(total, size=k, replace=False)
    flat.sort()
    mismatches = []
    checked = 0
    for f in flat:
        i, j = divmod(int(f), n4)
        if boundary[i, j]:
            continue
        checked += 1
        geom = Geometry(d3=float(d3s[i]), d4=float(d4s[j]), r2=r2)
        res = classify_numeric(geom, n_samples=n_samples)
        if res.boundary_flag:
            continue
        if (res.domain, res.wt) != (int(domain[i, j]), f"WT{wt[i, j]}"):
            mismatches.append({"d3": float(d3s[i]), "d4": float(d4s[j]),
                               "surfaces": f"WT{wt[i, j]}", "numeric": res.wt})
    return {"checked": checked, "mismatches": mismatches}


@dataclass(frozen=True)
class RegionStats:
    """Cell counts and area fractions per workspace-topology class.

    Fractions count non-boundary cells against the full grid, so they sum
    to at most 1; boundary cells are excluded from the numerators.
    """

    counts: dict[str, int]
    counts_off_boundary: dict[str, int]
    total_cells: int

    def fraction(self, wt: str) -> float:
        return self.counts_off_boundary.get(wt, 0) / self.total_cells


def region_stats(raster: PartitionRaster) -> RegionStats:
    counts = {}
    counts_off = {}
    for k in range(1, 10):
        name = f"WT{k}"
        sel = raster.wt == k
        counts[name] = int(np.count_nonzero(sel))
        counts_off[name] = int(np.count_nonzero(sel & ~raster.boundary))
    return RegionStats(counts=counts, counts_off_boundary=counts_off,
                       total_cells=int(raster.wt.size))


def boundary_overlay(r2: float, d3_range: tuple[float, float] = (0.02, 3.0),
                     n: int = 400) -> list[tuple[SurfaceId, np.ndarray]]:
    """Sampled separating curves d4(d3) at fixed r2, domain limits honoured.

    C3 exists only for d3 > 1 and C4 only for d3 < 1; both blow up at the
    shared asymptote, so their polylines start a hair away from it.
    """
    if n < 50:
        raise ValueError("n must be >= 50")
    if r2 <= 0 or d3_range[0] <= 0 or d3_range[1] < d3_range[0]:
        raise ValueError("invalid range")
    lo, hi = d3_range
    out: list[tuple[SurfaceId, np.ndarray]] = []
    for sid in (SurfaceId.C1, SurfaceId.C2, SurfaceId.E1, SurfaceId.E2,
                SurfaceId.E3):
        d3s = np.linspace(lo, hi, n)
        vals = [surface_value(sid, float(d), r2) for d in d3s]
        out.append((sid, np.column_stack([d3s, vals])))
    gap = 1e-4
    if hi > 1.0:
        d3s = np.linspace(max(lo, 1.0 + gap), hi, n)
        vals = [surface_value(SurfaceId.C3, float(d), r2) for d in d3s]
        out.append((SurfaceId.C3, np.column_stack([d3s, vals])))
    if lo < 1.0:
        d3s = np.linspace(lo, min(hi, 1.0 - gap), n)
        vals = [surface_value(SurfaceId.C4, float(d), r2) for d in d3s]
        out.append((SurfaceId.C4, np.column_stack([d3s, vals])))
    return out
