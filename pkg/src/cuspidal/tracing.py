"""Singular-curve tracing and numerical cusp/node detection.

The singular set det(J) = 0 splits into the zeros of the two factors
(d3 + c3*d4) and (s3*d2 + c2*(s3*d3 - c3*r2)).  The second factor vanishes
where cos(theta2) equals

    c2(theta3) = s3*d2 / (c3*r2 - s3*d3)

which is pi-periodic in theta3, so the curve part of the singular set always
consists of two closed loops on the joint-space torus, one per maximal
theta3 arc where |c2| <= 1 (the arcs around the poles of c2 are excluded).
Each loop is parametrized here by tau in [0, 1): theta3 sweeps the arc
forward on the cosine schedule theta3span * (1 - cos(2*pi*tau)) / 2 while
theta2 = +arccos(c2) for tau < 1/2 and -arccos(c2) after, which closes the
loop through the |c2| = 1 folds and keeps the workspace image smooth in tau
there (the square-root fold behaviour composes with the quadratic ends of
the cosine schedule to something linear).

The first factor vanishes only when d3 <= d4, on the horizontal lines
theta3 = +/- arccos(-d3/d4); their workspace images collapse to isolated
points on the rho axis because the operation point then sits on the second
joint axis.

Cusps of the image curves are found as tangent reversals of the traced
polyline, refined by bisection on the image velocity and confirmed by a
multiplicity >= 3 root of the inverse-kinematics quartic.  Nodes are
polyline self- and cross-intersections refined by a two-parameter Newton
iteration on the exact parametrizations; intersections that land on an
isolated singular point are flagged, and intersections that collapse onto a
cusp are dropped.  These detectors are the numerical oracle the closed-form
classifier is validated against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .kinematics import (
    CartesianPoint,
    Geometry,
    HalfSectionPoint,
    fk_half_section,
    ik_multiplicity,
    inverse_kinematics,
    jacobian_det_closed_grid,
    wrap_angle,
)

TWO_PI = 2.0 * math.pi

S1 = "S1"
S2 = "S2"
LINE_PLUS = "LINE_PLUS"
LINE_MINUS = "LINE_MINUS"


def _c2_of(geom: Geometry, theta3):
    """cos(theta2) on the singular curves, as a function of theta3.

    Returns +/-inf near the poles c3*r2 = s3*d3; callers treat any value of
    magnitude > 1 as "no singular theta2 here".
    """
    theta3 = np.asarray(theta3, dtype=float)
    c3, s3 = np.cos(theta3), np.sin(theta3)
    den = c3 * geom.r2 - s3 * geom.d3
    with np.errstate(divide="ignore", invalid="ignore"):
        return s3 * geom.d2 / den


def singular_theta2(geom: Geometry, theta3: float) -> tuple[float, ...]:
    """The 0-2 values of theta2 putting (theta2, theta3) on a singular curve."""
    c2 = float(_c2_of(geom, theta3))
    if not math.isfinite(c2) or abs(c2) > 1.0:
        return ()
    a = math.acos(max(-1.0, min(1.0, c2)))
    vals = sorted({wrap_angle(a), wrap_angle(-a)})
    return tuple(vals)


@dataclass
class SingularCurve:
    """One connected branch of the singular set with its workspace image.

    S branches store the theta3 arc (start, span in unwrapped radians) and
    evaluate exactly at any loop parameter tau in [0, 1); LINE branches have
    fixed theta3 and tau parametrizes theta2.  `joint` and `image` are the
    ordered samples at the stored tau grid.
    """

    label: str
    geom: Geometry
    tau: np.ndarray
    joint: np.ndarray
    image: np.ndarray
    arc: tuple[float, float] | None = None
    line_theta3: float | None = None

    @property
    def is_line(self) -> bool:
        return self.line_theta3 is not None

    def joint_at(self, tau):
        tau = np.asarray(tau, dtype=float) % 1.0
        if self.is_line:
            theta2 = -math.pi + TWO_PI * tau
            theta3 = np.full_like(theta2, self.line_theta3)
            return theta2, theta3
        start, span = self.arc
        theta3 = start + span * 0.5 * (1.0 - np.cos(TWO_PI * tau))
        c2 = np.clip(_c2_of(self.geom, theta3), -1.0, 1.0)
        sign = np.where(tau < 0.5, 1.0, -1.0)
        theta2 = sign * np.arccos(c2)
        return theta2, theta3

    def image_at(self, tau):
        theta2, theta3 = self.joint_at(tau)
        rho, z = fk_half_section(self.geom, theta2, theta3)
        return np.stack(np.broadcast_arrays(rho, z), axis=-1)

    def max_rho(self) -> float:
        return float(np.max(self.image[:, 0]))


def _fold_angles(geom: Geometry, n_scan: int = 8192) -> list[float]:
    """Roots of |c2(theta3)| = 1, located by bisection on a dense scan."""
    grid = -math.pi + TWO_PI * np.arange(n_scan) / n_scan
    ok = np.abs(_c2_of(geom, grid)) <= 1.0
    folds = []
    step = TWO_PI / n_scan

    def g(theta):
        return abs(float(_c2_of(geom, theta))) - 1.0

    for i in range(n_scan):
        j = (i + 1) % n_scan
        if ok[i] == ok[j]:
            continue
        a, b = grid[i], grid[i] + step
        ga = g(a)
        for _ in range(80):
            m = 0.5 * (a + b)
            gm = g(m)
            if (gm <= 0.0) == (ga <= 0.0):
                a, ga = m, gm
            else:
                b = m
            if b - a < 1e-15:
                break
        folds.append(0.5 * (a + b))
    return sorted(folds)


def _allowed_arcs(geom: Geometry) -> list[tuple[float, float]]:
    """Maximal theta3 arcs with |c2| <= 1, as (start, span) pairs."""
    folds = _fold_angles(geom)
    if not folds:
        # cannot happen for this family (the poles of c2 are always excluded)
        # but keep the degenerate whole-circle case well defined
        if np.all(np.abs(_c2_of(geom, np.linspace(-3.0, 3.0, 7))) <= 1.0):
            return [(-math.pi, TWO_PI)]
        return []
    arcs = []
    m = len(folds)
    for i in range(m):
        a = folds[i]
        b = folds[(i + 1) % m]
        if i == m - 1:
            b += TWO_PI
        mid = 0.5 * (a + b)
        c2m = float(_c2_of(geom, wrap_angle(mid)))
        if math.isfinite(c2m) and abs(c2m) <= 1.0 and b - a > 1e-9:
            arcs.append((a, b - a))
    return arcs


def line_theta3(geom: Geometry) -> float | None:
    """theta3 of the singular lines, or None when d3 > d4."""
    if geom.d3 > geom.d4:
        return None
    return math.acos(max(-1.0, min(1.0, -geom.d3 / geom.d4)))


def trace_singular_set(geom: Geometry, n_samples: int = 2000) -> list[SingularCurve]:
    """Sample every branch of the singular set, images included.

    Returns the two S loops (labelled S1/S2, the branch of larger radial
    extent being S2 since the external boundary carries the full-extension
    point) followed by the singular lines when d3 <= d4.  Every joint sample
    satisfies |det(J)| <= 1e-9 by construction.
    """
    if n_samples < 100:
        raise ValueError("n_samples must be >= 100")
    tau = np.arange(n_samples) / n_samples

    branches = []
    for arc in _allowed_arcs(geom):
        curve = SingularCurve(label=S1, geom=geom, tau=tau,
                              joint=np.empty(0), image=np.empty(0), arc=arc)
        theta2, theta3 = curve.joint_at(tau)
        curve.joint = np.column_stack([
            np.vectorize(wrap_angle)(theta2), np.vectorize(wrap_angle)(theta3)])
        curve.image = curve.image_at(tau)
        branches.append(curve)

    branches.sort(key=lambda c: c.max_rho())
    if branches:
        branches[-1].label = S2

    lines: list[SingularCurve] = []
    t3l = line_theta3(geom)
    if t3l is not None:
        signs = (1.0,) if t3l >= math.pi - 1e-12 else (1.0, -1.0)
        for s in signs:
            curve = SingularCurve(label=LINE_PLUS if s > 0 else LINE_MINUS,
                                  geom=geom, tau=tau, joint=np.empty(0),
                                  image=np.empty(0), line_theta3=s * t3l)
            theta2, theta3 = curve.joint_at(tau)
            curve.joint = np.column_stack([theta2, theta3])
            curve.image = curve.image_at(tau)
            lines.append(curve)
    return branches + lines


def workspace_image(geom: Geometry, curve: SingularCurve) -> np.ndarray:
    """(rho, z) polyline of a traced branch, theta1 = 0 projection."""
    rho, z = fk_half_section(geom, curve.joint[:, 0], curve.joint[:, 1])
    return np.column_stack([rho, z])


def isolated_singular_points(geom: Geometry) -> tuple[HalfSectionPoint, ...]:
    """Workspace points where the operation point meets the second joint axis.

    Empty for d3 > d4; the single point at theta3 = pi for d3 = d4; a pair
    otherwise (one per singular line), all on the rho axis at
    rho = sqrt(d2^2 + G^2) with G = s3*d4 + r2, s3 = +/-sqrt(1 - (d3/d4)^2).
    """
    if geom.d3 > geom.d4:
        return ()
    if abs(geom.d3 - geom.d4) <= 1e-12 * (geom.d3 + geom.d4):
        return (HalfSectionPoint(math.hypot(geom.d2, geom.r2), 0.0),)
    s3 = math.sqrt(max(0.0, 1.0 - (geom.d3 / geom.d4) ** 2))
    pts = []
    for sign in (1.0, -1.0):
        g = sign * s3 * geom.d4 + geom.r2
        pts.append(HalfSectionPoint(math.hypot(geom.d2, g), 0.0))
    pts.sort(key=lambda p: p.rho)
    return tuple(pts)


@dataclass(frozen=True)
class CuspPoint:
    """Confirmed cusp: image point, joint preimage and the root multiplicity."""

    point: HalfSectionPoint
    joint: tuple[float, float]
    branch: str
    root_multiplicity: int


@dataclass(frozen=True)
class NodePoint:
    """Confirmed node: two distinct preimages mapping to one image point."""

    point: HalfSectionPoint
    preimages: tuple[tuple[float, float], tuple[float, float]]
    branches: tuple[str, str]
    at_isolated_point: bool = False


@dataclass(frozen=True)
class FeatureCount:
    n_cusps: int
    n_nodes: int

    def as_tuple(self) -> tuple[int, int]:
        return (self.n_cusps, self.n_nodes)


def _velocity(curve: SingularCurve, tau: float, h: float = 1e-7) -> np.ndarray:
    return (curve.image_at(tau + h) - curve.image_at(tau - h)) / (2.0 * h)


def _refine_reversal(curve: SingularCurve, ta: float, tb: float) -> float | None:
    """Bisect the sign change of one image-velocity component inside [ta, tb]."""
    va, vb = _velocity(curve, ta), _velocity(curve, tb)
    best_k, best_mag = -1, 0.0
    for k in (0, 1):
        if va[k] * vb[k] < 0.0:
            mag = min(abs(va[k]), abs(vb[k]))
            if mag > best_mag:
                best_k, best_mag = k, mag
    if best_k < 0:
        return None
    k = best_k
    a, b, sa = ta, tb, va[k] < 0.0
    for _ in range(100):
        m = 0.5 * (a + b)
        if (_velocity(curve, m)[k] < 0.0) == sa:
            a = m
        else:
            b = m
        if b - a < 1e-13:
            break
    return 0.5 * (a + b)


def _merge_brackets(brackets: list[tuple[float, float]]) -> list[tuple[float, float]]:
    brackets = sorted(brackets)
    out: list[tuple[float, float]] = []
    for a, b in brackets:
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


def detect_cusps_detailed(geom: Geometry, curves: list[SingularCurve],
                          tol: float = 1e-3):
    """(confirmed cusps, unconfirmed reversal diagnostics).

    A candidate is a tangent reversal of the image polyline (consecutive or
    skip-one unit tangents with dot product < -0.5); it is confirmed only if
    the inverse-kinematics quartic at the refined point has a root of
    multiplicity >= 3 within the clustering tolerance `tol`.
    """
    confirmed: list[CuspPoint] = []
    unconfirmed: list[dict] = []
    for curve in curves:
        if curve.is_line:
            continue
        pts = curve.image
        n = len(pts)
        seg = np.roll(pts, -1, axis=0) - pts
        lengths = np.hypot(seg[:, 0], seg[:, 1])
        good = lengths > 0.0
        unit = np.zeros_like(seg)
        unit[good] = seg[good] / lengths[good, None]

        brackets: list[tuple[float, float]] = []
        dstep = 1.0 / n
        for i in range(n):
            j1, j2 = (i + 1) % n, (i + 2) % n
            if good[i] and good[j1] and float(np.dot(unit[i], unit[j1])) < -0.5:
                brackets.append((i * dstep, (i + 2) * dstep))
            elif good[i] and good[j2] and float(np.dot(unit[i], unit[j2])) < -0.5:
                brackets.append((i * dstep, (i + 3) * dstep))
        for a, b in _merge_brackets(brackets):
            tau_c = _refine_reversal(curve, a, b)
            if tau_c is None:
                continue
            p = curve.image_at(tau_c)
            rho, z = float(p[0]), float(p[1])
            mult = ik_multiplicity(geom, rho * rho, z, tol)
            theta2, theta3 = curve.joint_at(tau_c)
            entry = CuspPoint(
                point=HalfSectionPoint(rho, z),
                joint=(wrap_angle(float(theta2)), wrap_angle(float(theta3))),
                branch=curve.label,
                root_multiplicity=mult,
            )
            if entry.root_multiplicity >= 3:
                confirmed.append(entry)
            else:
                unconfirmed.append({"tau": tau_c, "point": (rho, z),
                                    "branch": curve.label,
                                    "multiplicity": mult})

    confirmed = _dedup_cusps(confirmed, 1e-6)
    confirmed.sort(key=lambda c: (c.point.rho, c.point.z))
    return confirmed, unconfirmed


def _dedup_cusps(cusps: list[CuspPoint], radius: float) -> list[CuspPoint]:
    out: list[CuspPoint] = []
    for c in cusps:
        if all(math.hypot(c.point.rho - o.point.rho, c.point.z - o.point.z) > radius
               for o in out):
            out.append(c)
    return out


def detect_cusps(geom: Geometry, curves: list[SingularCurve],
                 tol: float = 1e-3) -> list[CuspPoint]:
    """Confirmed cusps of the singular-curve images, sorted by (rho, z)."""
    return detect_cusps_detailed(geom, curves, tol)[0]


def _segment_candidates(pa: np.ndarray, pb: np.ndarray,
                        same: bool) -> np.ndarray:
    """Index pairs (i, j) of possibly intersecting closed-polyline segments."""
    a0, a1 = pa, np.roll(pa, -1, axis=0)
    b0, b1 = pb, np.roll(pb, -1, axis=0)
    eps = 1e-12 * (1.0 + float(np.max(np.abs(pa))))
    aminx = np.minimum(a0[:, 0], a1[:, 0]) - eps
    amaxx = np.maximum(a0[:, 0], a1[:, 0]) + eps
    aminy = np.minimum(a0[:, 1], a1[:, 1]) - eps
    amaxy = np.maximum(a0[:, 1], a1[:, 1]) + eps
    bminx = np.minimum(b0[:, 0], b1[:, 0])
    bmaxx = np.maximum(b0[:, 0], b1[:, 0])
    bminy = np.minimum(b0[:, 1], b1[:, 1])
    bmaxy = np.maximum(b0[:, 1], b1[:, 1])
    mask = ((aminx[:, None] <= bmaxx[None, :]) & (amaxx[:, None] >= bminx[None, :])
            & (aminy[:, None] <= bmaxy[None, :]) & (amaxy[:, None] >= bminy[None, :]))
    if same:
        n = len(pa)
        idx = np.arange(n)
        diff = (idx[None, :] - idx[:, None]) % n
        mask &= (diff >= 2) & (diff <= n - 2)
        mask &= idx[:, None] < idx[None, :]
    return np.argwhere(mask)


def _seg_intersect(p0, p1, q0, q1):
    """Intersection parameters (s, t) of two segments, or None."""
    r = p1 - p0
    s = q1 - q0
    denom = r[0] * s[1] - r[1] * s[0]
    span = math.hypot(*r) * math.hypot(*s)
    if span == 0.0 or abs(denom) < 1e-14 * span:
        return None
    d = q0 - p0
    ss = (d[0] * s[1] - d[1] * s[0]) / denom
    tt = (d[0] * r[1] - d[1] * r[0]) / denom
    if -1e-9 <= ss <= 1.0 + 1e-9 and -1e-9 <= tt <= 1.0 + 1e-9:
        return ss, tt
    return None


def _refine_intersection(ca: SingularCurve, cb: SingularCurve,
                         ta: float, tb: float, scale: float):
    """Newton on image_a(ta) = image_b(tb); returns (ta, tb, point) or None."""
    h = 1e-7
    for _ in range(60):
        fa = ca.image_at(ta)
        fb = cb.image_at(tb)
        resid = fa - fb
        if math.hypot(resid[0], resid[1]) < 1e-12 * scale:
            break
        ja = _velocity(ca, ta, h)
        jb = _velocity(cb, tb, h)
        jac = np.column_stack([ja, -jb])
        try:
            step = np.linalg.solve(jac, -resid)
        except np.linalg.LinAlgError:
            return None
        biggest = float(np.max(np.abs(step)))
        if biggest > 0.02:
            step *= 0.02 / biggest
        ta = (ta + step[0]) % 1.0
        tb = (tb + step[1]) % 1.0
    fa = ca.image_at(ta)
    fb = cb.image_at(tb)
    if math.hypot(*(fa - fb)) > 1e-10 * scale:
        return None
    mid = 0.5 * (fa + fb)
    return ta, tb, (float(mid[0]), float(mid[1]))


def detect_nodes(geom: Geometry, curves: list[SingularCurve],
                 tol: float = 1e-6,
                 cusps: list[CuspPoint] | None = None) -> list[NodePoint]:
    """Self- and cross-intersections of the singular-curve images.

    Candidates come from exact segment tests on the polylines (bounding-box
    prefiltered), are refined on the exact parametrizations to 1e-10, merged
    within radius max(tol, 1e-6), snapped onto isolated singular points when
    coincident, and dropped when they collapse onto a cusp or onto a single
    curve parameter (the spurious chord crossings next to a cusp do).
    """
    s_curves = [c for c in curves if not c.is_line]
    if cusps is None:
        cusps = detect_cusps(geom, s_curves)
    radius = max(tol, 1e-6)
    scale = geom.reach

    raw: list[tuple[SingularCurve, SingularCurve, float, float, tuple[float, float]]] = []
    pairs = [(a, a) for a in s_curves]
    pairs += [(s_curves[i], s_curves[j]) for i in range(len(s_curves))
              for j in range(i + 1, len(s_curves))]
    for ca, cb in pairs:
        same = ca is cb
        na, nb = len(ca.image), len(cb.image)
        for i, j in _segment_candidates(ca.image, cb.image, same):
            hit = _seg_intersect(ca.image[i], ca.image[(i + 1) % na],
                                 cb.image[j], cb.image[(j + 1) % nb])
            if hit is None:
                continue
            refined = _refine_intersection(ca, cb, (i + hit[0]) / na,
                                           (j + hit[1]) / nb, scale)
            if refined is None:
                continue
            ta, tb, pt = refined
            if same:
                dt = abs(ta - tb)
                if min(dt, 1.0 - dt) < 1e-5:
                    continue
            raw.append((ca, cb, ta, tb, pt))

    iso = isolated_singular_points(geom)
    nodes: list[NodePoint] = []
    for ca, cb, ta, tb, pt in raw:
        if any(math.hypot(pt[0] - c.point.rho, pt[1] - c.point.z) < radius
               for c in cusps):
            continue
        if any(math.hypot(pt[0] - n.point.rho, pt[1] - n.point.z) < radius
               for n in nodes):
            continue
        at_iso = False
        rho, z = pt
        for p in iso:
            if math.hypot(pt[0] - p.rho, pt[1] - p.z) < radius:
                rho, z, at_iso = p.rho, p.z, True
                break
        t2a, t3a = ca.joint_at(ta)
        t2b, t3b = cb.joint_at(tb)
        nodes.append(NodePoint(
            point=HalfSectionPoint(rho, z),
            preimages=((wrap_angle(float(t2a)), wrap_angle(float(t3a))),
                       (wrap_angle(float(t2b)), wrap_angle(float(t3b)))),
            branches=(ca.label, cb.label),
            at_isolated_point=at_iso,
        ))
    nodes.sort(key=lambda nd: (nd.point.rho, nd.point.z))
    return nodes


@dataclass
class FeatureReport:
    """Everything the numerical oracle measures for one geometry."""

    curves: list[SingularCurve]
    cusps: list[CuspPoint]
    nodes: list[NodePoint]
    unconfirmed_cusps: list[dict] = field(default_factory=list)

    @property
    def count(self) -> FeatureCount:
        return FeatureCount(len(self.cusps), len(self.nodes))

    @property
    def has_cross_nodes(self) -> bool:
        return any(set(n.branches) == {S1, S2} for n in self.nodes)


def feature_details(geom: Geometry, n_samples: int = 2000,
                    cusp_tol: float = 1e-3,
                    node_tol: float = 1e-6) -> FeatureReport:
    curves = trace_singular_set(geom, n_samples)
    cusps, unconfirmed = detect_cusps_detailed(geom, curves, cusp_tol)
    nodes = detect_nodes(geom, curves, node_tol, cusps=cusps)
    return FeatureReport(curves=curves, cusps=cusps, nodes=nodes,
                         unconfirmed_cusps=unconfirmed)


def count_features(geom: Geometry, n_samples: int = 2000) -> FeatureCount:
    """Numerically counted (cusps, nodes) in the (rho >= 0, z) half-plane."""
    return feature_details(geom, n_samples).count


def aspect_count(geom: Geometry, grid_n: int = 512) -> int:
    """Number of singularity-free connected regions of the joint-space torus.

    Flood fill on the sign of det(J) over a cell-centred grid, with
    wraparound in both angles; crossing any singular branch flips the sign
    of exactly one determinant factor, so equal-sign adjacency is the right
    connectivity at generic geometries.
    """
    if grid_n < 64:
        raise ValueError("grid_n must be >= 64")
    centers = -math.pi + (np.arange(grid_n) + 0.5) * TWO_PI / grid_n
    det = jacobian_det_closed_grid(geom, centers[:, None], centers[None, :])
    pos = det > 0.0
    structure = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])
    lab_pos, n_pos = ndimage.label(pos, structure)
    lab_neg, _ = ndimage.label(~pos, structure)
    labels = np.where(pos, lab_pos, lab_neg + n_pos)

    parent: dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for i in range(grid_n):
        if pos[i, 0] == pos[i, -1]:
            union(int(labels[i, 0]), int(labels[i, -1]))
        if pos[0, i] == pos[-1, i]:
            union(int(labels[0, i]), int(labels[-1, i]))
    roots = {find(int(v)) for v in np.unique(labels)}
    return len(roots)


def _point_in_polygon(x: float, y: float, poly: np.ndarray) -> bool:
    """Even-odd rule with a horizontal ray towards +x."""
    xs, ys = poly[:, 0], poly[:, 1]
    x2, y2 = np.roll(xs, -1), np.roll(ys, -1)
    cross = (ys > y) != (y2 > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xi = xs + (y - ys) * (x2 - xs) / (y2 - ys)
    hits = cross & (x < xi)
    return bool(np.count_nonzero(hits) % 2)


@dataclass(frozen=True)
class RegionProbe:
    """IKS counts at well-separated probe points of the workspace section."""

    inner_point: HalfSectionPoint | None
    inner_iks: int | None
    annulus_point: HalfSectionPoint | None
    annulus_iks: int | None


def _best_probe(geom: Geometry, include: np.ndarray,
                exclude: np.ndarray | None,
                obstacles: list[np.ndarray], grid: int = 36):
    xmin, xmax = float(np.min(include[:, 0])), float(np.max(include[:, 0]))
    ymin, ymax = float(np.min(include[:, 1])), float(np.max(include[:, 1]))
    best, best_clear = None, 0.0
    # thin only the dense polylines; single-point obstacles must survive
    verts = np.vstack([o[::3] if len(o) > 8 else o for o in obstacles])
    for gx in np.linspace(xmin, xmax, grid + 2)[1:-1]:
        if gx < 0.0:
            continue
        for gy in np.linspace(ymin, ymax, grid + 2)[1:-1]:
            if not _point_in_polygon(gx, gy, include):
                continue
            if exclude is not None and _point_in_polygon(gx, gy, exclude):
                continue
            clear = float(np.min(np.hypot(verts[:, 0] - gx, verts[:, 1] - gy)))
            if clear > best_clear:
                best, best_clear = (gx, gy), clear
    if best is None:
        return None
    return HalfSectionPoint(best[0], best[1])


def region_probe(geom: Geometry, curves: list[SingularCurve] | None = None) -> RegionProbe:
    """Probe the region inside the internal boundary and the annulus between
    the boundaries, counting inverse-kinematic solutions at each probe.

    The region bounded by the internal boundary distinguishes a hole (0
    solutions) from a four-solution core; the annulus generically has 2.
    """
    if curves is None:
        curves = trace_singular_set(geom)
    ws1 = next((c.image for c in curves if c.label == S1), None)
    ws2 = next((c.image for c in curves if c.label == S2), None)
    obstacles = [c.image for c in curves if not c.is_line]
    for p in isolated_singular_points(geom):
        obstacles.append(np.array([[p.rho, p.z]]))

    inner_pt = inner_n = annulus_pt = annulus_n = None
    if ws1 is not None:
        inner_pt = _best_probe(geom, ws1, None, obstacles)
        if inner_pt is not None:
            inner_n = len(inverse_kinematics(
                geom, CartesianPoint(inner_pt.rho, 0.0, inner_pt.z)))
    if ws1 is not None and ws2 is not None:
        annulus_pt = _best_probe(geom, ws2, ws1, obstacles)
        if annulus_pt is not None:
            annulus_n = len(inverse_kinematics(
                geom, CartesianPoint(annulus_pt.rho, 0.0, annulus_pt.z)))
    return RegionProbe(inner_pt, inner_n, annulus_pt, annulus_n)
