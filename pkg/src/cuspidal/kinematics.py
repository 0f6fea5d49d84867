"""Kinematics of 3R orthogonal positioning manipulators with zero last offset.

The family is parametrized by four lengths: the link lengths d2, d3, d4 and
the second-joint offset r2.  The twist angles are fixed at -90 and +90
degrees and the third-joint offset is zero, so a member of the family is
fully described by a :class:`Geometry`.

With F = d3 + cos(t3)*d4 and G = sin(t3)*d4 + r2 the position of the
operation point is

    x = cos(t1)*(d2 + cos(t2)*F) - sin(t1)*G
    y = sin(t1)*(d2 + cos(t2)*F) + cos(t1)*G
    z = -sin(t2)*F

Everything downstream (singularity tracing, workspace classification) builds
on this convention; the factor-d4 relation between the numeric Jacobian
determinant and :func:`jacobian_det_closed` pins it down and is enforced by
the test suite.

Inverse kinematics reduces to a degree-4 polynomial in t = tan(t3/2): with
R = x^2 + y^2, a point is reachable at angle t3 exactly when

    (F^2 + G^2 - d2^2 - z^2 - R)^2 - 4*d2^2*(R - G^2) = 0

which, cleared by (1 + t^2)^2, is the quartic built by :func:`ik_quartic`.
Real roots of that quartic (with multiplicities) drive the whole cusp/node
analysis, so root extraction is tolerance-explicit: see :func:`solve_roots`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


def wrap_angle(a: float) -> float:
    """Wrap an angle to the canonical interval [-pi, pi)."""
    w = (a + math.pi) % TWO_PI - math.pi
    # modulo can return +pi for inputs a hair under an odd multiple of pi
    return -math.pi if w >= math.pi else w


@dataclass(frozen=True)
class Geometry:
    """Length parameters of one manipulator, all strictly positive.

    Lengths are dimensionless: the classification only depends on ratios, so
    callers normally work with the normalized form d2 = 1.
    """

    d3: float
    d4: float
    r2: float
    d2: float = 1.0

    def __post_init__(self) -> None:
        for name in ("d2", "d3", "d4", "r2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be finite and > 0, got {v!r}")

    def normalized(self) -> "Geometry":
        """Return the scale-equivalent geometry with d2 = 1."""
        if self.d2 == 1.0:
            return self
        s = 1.0 / self.d2
        return Geometry(d3=self.d3 * s, d4=self.d4 * s, r2=self.r2 * s, d2=1.0)

    def scaled(self, factor: float) -> "Geometry":
        return Geometry(self.d3 * factor, self.d4 * factor,
                        self.r2 * factor, self.d2 * factor)

    @property
    def reach(self) -> float:
        """Upper bound on the radial distance of any reachable point."""
        return self.d2 + self.d4 + math.hypot(self.d3, self.r2)


@dataclass(frozen=True)
class JointConfig:
    """Joint angles in radians, each wrapped to [-pi, pi)."""

    theta1: float
    theta2: float
    theta3: float

    def wrapped(self) -> "JointConfig":
        return JointConfig(wrap_angle(self.theta1), wrap_angle(self.theta2),
                           wrap_angle(self.theta3))

    def as_array(self) -> np.ndarray:
        return np.array([self.theta1, self.theta2, self.theta3])


@dataclass(frozen=True)
class CartesianPoint:
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def rho(self) -> float:
        """Radial distance from the first joint axis."""
        return math.hypot(self.x, self.y)


@dataclass(frozen=True)
class HalfSectionPoint:
    """Point of the (rho, z) half cross-section, rho >= 0."""

    rho: float
    z: float

    def to_cartesian(self) -> CartesianPoint:
        return CartesianPoint(self.rho, 0.0, self.z)


def _fg(geom: Geometry, theta3: float) -> tuple[float, float]:
    c3, s3 = math.cos(theta3), math.sin(theta3)
    return geom.d3 + c3 * geom.d4, s3 * geom.d4 + geom.r2


def forward_kinematics(geom: Geometry, q: JointConfig) -> CartesianPoint:
    """Operation-point position for joint angles q.

    The zero configuration maps to (d2 + d3 + d4, r2, 0).
    """
    c1, s1 = math.cos(q.theta1), math.sin(q.theta1)
    c2, s2 = math.cos(q.theta2), math.sin(q.theta2)
    f, g = _fg(geom, q.theta3)
    radial = geom.d2 + c2 * f
    return CartesianPoint(c1 * radial - s1 * g, s1 * radial + c1 * g, -s2 * f)


def fk_half_section(geom: Geometry, theta2, theta3):
    """Vectorized (rho, z) image of configurations, theta1 irrelevant.

    Accepts scalars or arrays; returns (rho, z) arrays of the broadcast shape.
    """
    theta2 = np.asarray(theta2, dtype=float)
    theta3 = np.asarray(theta3, dtype=float)
    c3, s3 = np.cos(theta3), np.sin(theta3)
    f = geom.d3 + c3 * geom.d4
    g = s3 * geom.d4 + geom.r2
    rho = np.hypot(geom.d2 + np.cos(theta2) * f, g)
    z = -np.sin(theta2) * f
    return rho, z


def jacobian_det_closed(geom: Geometry, q: JointConfig) -> float:
    """Closed-form Jacobian determinant (d3 + c3*d4)(s3*d2 + c2*(s3*d3 - c3*r2)).

    This is the determinant up to the constant positive factor d4: see
    :func:`jacobian_det_numeric`.  Zeros (the singularities) are identical.
    """
    c2 = math.cos(q.theta2)
    c3, s3 = math.cos(q.theta3), math.sin(q.theta3)
    return (geom.d3 + c3 * geom.d4) * (s3 * geom.d2 + c2 * (s3 * geom.d3 - c3 * geom.r2))


def jacobian_det_closed_grid(geom: Geometry, theta2, theta3):
    """Vectorized closed-form determinant over angle arrays."""
    theta2 = np.asarray(theta2, dtype=float)
    theta3 = np.asarray(theta3, dtype=float)
    c3, s3 = np.cos(theta3), np.sin(theta3)
    return (geom.d3 + c3 * geom.d4) * (
        s3 * geom.d2 + np.cos(theta2) * (s3 * geom.d3 - c3 * geom.r2))


def jacobian_det_numeric(geom: Geometry, q: JointConfig, step: float = 1e-6) -> float:
    """Determinant of the central-difference Jacobian of forward_kinematics.

    Equals d4 * jacobian_det_closed up to truncation error; used as the
    convention-independent oracle.
    """
    if step <= 0.0:
        raise ValueError("step must be > 0")
    qa = q.as_array()
    cols = []
    for i in range(3):
        qp, qm = qa.copy(), qa.copy()
        qp[i] += step
        qm[i] -= step
        pp = forward_kinematics(geom, JointConfig(*qp)).as_array()
        pm = forward_kinematics(geom, JointConfig(*qm)).as_array()
        cols.append((pp - pm) / (2.0 * step))
    return float(np.linalg.det(np.column_stack(cols)))


@dataclass(frozen=True)
class QuarticPoly:
    """Degree <= 4 polynomial in t = tan(theta3/2), highest coefficient first.

    A vanishing leading coefficient signals a root at infinity, i.e. a
    candidate solution at theta3 = pi.
    """

    coeffs: tuple[float, float, float, float, float]

    def __post_init__(self) -> None:
        if len(self.coeffs) != 5 or not all(math.isfinite(c) for c in self.coeffs):
            raise ValueError("need 5 finite coefficients a4..a0")

    def __call__(self, t: float) -> float:
        return float(np.polyval(self.coeffs, t))

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=float)


def ik_quartic(geom: Geometry, R: float, z: float) -> QuarticPoly:
    """Inverse-kinematics quartic at squared radial distance R and height z.

    Every real root t corresponds to a candidate theta3 = 2*atan(t); a root
    at theta3 = pi shows up as a degree drop.  Multiple roots are boundary
    points: multiplicity 2 on a singular image, 3 at a cusp, 4 at the
    degenerate points where the cusp-count transitions happen.
    """
    if R < 0.0:
        raise ValueError("R is a squared distance and must be >= 0")
    d2, d3, d4, r2 = geom.d2, geom.d3, geom.d4, geom.r2
    a = 2.0 * d3 * d4
    b = 2.0 * d4 * r2
    e = d3 * d3 + d4 * d4 + r2 * r2 - d2 * d2 - z * z - R
    qk = np.array([e - a, 2.0 * b, e + a])
    qg = np.array([r2, 2.0 * d4, r2])
    one_plus_t2_sq = np.array([1.0, 0.0, 2.0, 0.0, 1.0])
    p = np.convolve(qk, qk) - 4.0 * d2 * d2 * (R * one_plus_t2_sq - np.convolve(qg, qg))
    return QuarticPoly(tuple(float(c) for c in p))


def ik_quartic_shifted(geom: Geometry, R: float, z: float) -> QuarticPoly:
    """The IK polynomial in the shifted half-angle t' = tan((theta3 - pi)/2).

    Roots map by t' = -1/t, so this recovers solutions near theta3 = pi
    (where the plain quartic drops degree or places roots far out) with
    well-conditioned small roots.
    """
    if R < 0.0:
        raise ValueError("R is a squared distance and must be >= 0")
    d2, d3, d4, r2 = geom.d2, geom.d3, geom.d4, geom.r2
    a = 2.0 * d3 * d4
    b = 2.0 * d4 * r2
    e = d3 * d3 + d4 * d4 + r2 * r2 - d2 * d2 - z * z - R
    qk = np.array([e + a, -2.0 * b, e - a])
    qg = np.array([r2, -2.0 * d4, r2])
    one_plus_t2_sq = np.array([1.0, 0.0, 2.0, 0.0, 1.0])
    p = np.convolve(qk, qk) - 4.0 * d2 * d2 * (R * one_plus_t2_sq - np.convolve(qg, qg))
    return QuarticPoly(tuple(float(c) for c in p))


def ik_multiplicity(geom: Geometry, R: float, z: float, tol: float = 1e-7) -> int:
    """Largest root multiplicity of the IK polynomial at (R, z).

    Solves both half-angle forms and takes the larger evidence, so roots
    near theta3 = pi are judged where they are well conditioned.
    """
    m = solve_roots(ik_quartic(geom, R, z), tol).max_multiplicity
    m_shift = solve_roots(ik_quartic_shifted(geom, R, z), tol).max_multiplicity
    return max(m, m_shift)


def ik_residual_theta3(geom: Geometry, R: float, z: float, theta3: float) -> float:
    """Trigonometric form of the IK constraint, zero at solution angles.

    Same zero set as :func:`ik_quartic` (the quartic equals this residual
    times (1 + t^2)^2); well conditioned near theta3 = pi where t blows up.
    """
    f, g = _fg(geom, theta3)
    k = f * f + g * g - geom.d2 ** 2 - z * z - R
    return k * k - 4.0 * geom.d2 ** 2 * (R - g * g)


@dataclass(frozen=True)
class RootPattern:
    """Real roots with multiplicities, plus degree-drop bookkeeping.

    roots: ascending (value, multiplicity) pairs, pairwise separated by more
    than the clustering tolerance.  n_at_infinity counts leading-coefficient
    drops (candidate theta3 = pi roots).  identically_zero marks the
    all-zero polynomial (a continuum of solutions, left to the caller).
    """

    roots: tuple[tuple[float, int], ...]
    n_at_infinity: int = 0
    identically_zero: bool = False
    tol: float = 1e-7

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.roots)

    @property
    def max_multiplicity(self) -> int:
        return max((m for _, m in self.roots), default=0)

    def multiplicities(self) -> tuple[int, ...]:
        return tuple(sorted((m for _, m in self.roots), reverse=True))


def _poly_derivatives(c: np.ndarray, upto: int) -> list[np.ndarray]:
    ds = [c]
    for _ in range(upto):
        ds.append(np.polyder(ds[-1]))
    return ds


def _eval_with_bound(c: np.ndarray, t: complex) -> tuple[complex, float]:
    """Horner evaluation plus a running magnitude bound for error scaling."""
    v = 0.0 + 0.0j
    bound = 0.0
    at = abs(t)
    for coef in c:
        v = v * t + coef
        bound = bound * at + abs(coef)
    return v, bound


def _newton_polish(c: np.ndarray, t0: complex, iters: int = 30) -> complex:
    d = np.polyder(c)
    t = t0
    for _ in range(iters):
        fv = np.polyval(c, t)
        dv = np.polyval(d, t)
        if dv == 0:
            break
        step = fv / dv
        t = t - step
        if abs(step) <= 1e-16 * (1.0 + abs(t)):
            break
    return t


def _cluster_indices(vals: np.ndarray, tol: float) -> list[list[int]]:
    """Union-find clustering: i ~ j when |v_i - v_j| <= tol*(1+|v_i|)."""
    n = len(vals)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(vals[i] - vals[j]) <= tol * (1.0 + abs(vals[i])):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _confirm_multiplicity(c: np.ndarray, t: complex, m: int) -> bool:
    """Residual test: p and its first m-1 derivatives vanish at t within a
    floating-point forward-error bound."""
    ds = _poly_derivatives(c, m - 1)
    for j in range(m):
        v, bound = _eval_with_bound(ds[j], t)
        if abs(v) > 1e-10 * bound + 1e-300:
            return False
    return True


def solve_roots(poly: QuarticPoly, tol: float = 1e-7) -> RootPattern:
    """All real roots of the quartic with multiplicities.

    Roots closer than tol*(1+|t|) are one root with summed multiplicity.
    Exact multiple roots scattered by eigenvalue noise beyond tol are
    recovered by a residual-confirmed merge: candidate clusters are polished
    with Newton on the matching derivative and merged only when the
    polynomial and its lower derivatives genuinely vanish there.
    """
    if tol <= 0.0:
        raise ValueError("tol must be > 0")
    c = poly.as_array()
    scale = float(np.max(np.abs(c)))
    if scale == 0.0:
        return RootPattern(roots=(), identically_zero=True, tol=tol)

    lead_tol = tol * scale
    k = 0
    while k < len(c) - 1 and abs(c[k]) <= lead_tol:
        k += 1
    n_inf = k
    cc = c[k:]
    if len(cc) == 1:
        return RootPattern(roots=(), n_at_infinity=n_inf, tol=tol)

    z = np.roots(cc)

    # contract-level clustering at the caller tolerance
    clusters = [[complex(np.mean(z[g])), len(g)] for g in _cluster_indices(z, tol)]

    # residual-confirmed merge of clusters an eigensolver scattered apart;
    # quadruple roots scatter by eps^(1/4) ~ 1e-4 relative, hence the floor
    loose = max(tol, 5e-4)
    merged = True
    while merged and len(clusters) > 1:
        merged = False
        vals = np.array([c0 for c0, _ in clusters])
        for g in _cluster_indices(vals, loose):
            if len(g) < 2:
                continue
            m = sum(clusters[i][1] for i in g)
            center = sum(clusters[i][0] * clusters[i][1] for i in g) / m
            cand = _newton_polish(np.polyder(cc, m - 1), center) if m > 1 else center
            if _confirm_multiplicity(cc, cand, m):
                clusters = [clusters[i] for i in range(len(clusters)) if i not in g]
                clusters.append([cand, m])
                merged = True
                break

    out = []
    for center, m in clusters:
        if m == 1:
            center = _newton_polish(cc, center)
        elif not _confirm_multiplicity(cc, center, m):
            # tolerance-level cluster of nearly-equal roots: keep the mean
            pass
        else:
            center = _newton_polish(np.polyder(cc, m - 1), center)
        if abs(center.imag) <= tol * (1.0 + abs(center.real)):
            out.append((float(center.real), int(m)))
    out.sort()
    return RootPattern(roots=tuple(out), n_at_infinity=n_inf, tol=tol)


@dataclass(frozen=True)
class IKOutcome:
    """Solutions plus diagnostics from one inverse-kinematics query."""

    solutions: tuple[JointConfig, ...]
    on_joint2_axis: bool = False        # F ~ 0 at a root: continuum of theta2
    continuum: bool = False             # identically-zero polynomial
    n_rejected: int = 0
    root_pattern: RootPattern | None = None


def _recover_config(geom: Geometry, p: CartesianPoint, R: float,
                    theta3: float, tol: float) -> JointConfig | None:
    """Back out (theta1, theta2) for a candidate theta3, or None if spurious."""
    d2 = geom.d2
    f, g = _fg(geom, theta3)
    x_cap = R - g * g
    if x_cap < -tol * (1.0 + R):
        return None
    sqrt_x = math.sqrt(max(x_cap, 0.0))
    k = f * f + g * g - d2 * d2 - p.z * p.z - R
    if abs(k) > 1e-9 * (1.0 + abs(R)):
        sigmas = (-math.copysign(1.0, k),)
    else:
        sigmas = (1.0, -1.0)  # tangency: keep whichever respects c2^2+s2^2=1
    best = None
    best_err = math.inf
    for sigma in sigmas:
        c2 = (sigma * sqrt_x - d2) / f
        s2 = -p.z / f
        err = abs(c2 * c2 + s2 * s2 - 1.0)
        if err < best_err:
            best_err = err
            best = (c2, s2)
    if best is None or best_err > max(1e-6, 100.0 * tol):
        return None
    c2, s2 = best
    if abs(c2) > 1.0 + tol:
        return None
    theta2 = math.atan2(s2, c2)
    theta1 = math.atan2(p.y, p.x) - math.atan2(g, d2 + c2 * f)
    return JointConfig(wrap_angle(theta1), wrap_angle(theta2), wrap_angle(theta3))


def ik_details(geom: Geometry, p: CartesianPoint, tol: float = 1e-7) -> IKOutcome:
    """Inverse kinematics with diagnostics.

    Simple roots are polished on the trigonometric residual so recovered
    angles are accurate even for roots the half-angle map sends far out.
    """
    R = p.x * p.x + p.y * p.y
    pattern = solve_roots(ik_quartic(geom, R, p.z), tol)
    if pattern.identically_zero:
        return IKOutcome((), continuum=True, root_pattern=pattern)

    len_scale = geom.d3 + geom.d4
    candidates: list[float] = []
    for t, m in pattern.roots:
        theta3 = 2.0 * math.atan(t)
        if m == 1:
            theta3 = _polish_theta3(geom, R, p.z, theta3)
        candidates.append(theta3)
    if pattern.n_at_infinity:
        candidates.append(_polish_theta3(geom, R, p.z, math.pi))

    solutions: list[JointConfig] = []
    seen: list[float] = []
    on_axis = False
    rejected = 0
    for theta3 in candidates:
        if any(abs(wrap_angle(theta3 - s)) < 1e-9 for s in seen):
            continue
        seen.append(theta3)
        f, _ = _fg(geom, theta3)
        if abs(f) < 1e-9 * len_scale:
            on_axis = True
            continue
        cfg = _recover_config(geom, p, R, theta3, tol)
        if cfg is None:
            rejected += 1
        else:
            solutions.append(cfg)
    solutions.sort(key=lambda c: (c.theta3, c.theta2, c.theta1))
    return IKOutcome(tuple(solutions), on_joint2_axis=on_axis,
                     n_rejected=rejected, root_pattern=pattern)


def _polish_theta3(geom: Geometry, R: float, z: float, theta3: float,
                   iters: int = 12) -> float:
    """Newton refinement of the IK constraint directly in theta3."""
    h = 1e-7
    t = theta3
    for _ in range(iters):
        fv = ik_residual_theta3(geom, R, z, t)
        dv = (ik_residual_theta3(geom, R, z, t + h)
              - ik_residual_theta3(geom, R, z, t - h)) / (2.0 * h)
        if dv == 0.0:
            break
        step = fv / dv
        if abs(step) > 0.1:
            step = math.copysign(0.1, step)
        t -= step
        if abs(step) < 1e-14:
            break
    return t


def inverse_kinematics(geom: Geometry, p: CartesianPoint,
                       tol: float = 1e-7) -> list[JointConfig]:
    """All inverse-kinematic solutions reaching p (generically 0, 2 or 4)."""
    return list(ik_details(geom, p, tol).solutions)
