"""Closed-form separating surfaces of the workspace-topology partition.

In normalized lengths (d2 = 1) the partition of the (d3, d4, r2) parameter
space is cut by seven surfaces, each given as a d4 threshold at fixed
(d3, r2):

    cusp-count transitions      C1, C2, C3 (d3 > 1 only), C4 (d3 < 1 only)
    node-count transitions      E1, E2, E3

with the shorthand A = sqrt((d3+1)^2 + r2^2), B = sqrt((d3-1)^2 + r2^2):

    C1 = sqrt(((d3^2+r2^2) - ((d3^2+r2^2)^2 - d3^2 + r2^2)/(A*B)) / 2)
    C2 = d3*A/(1+d3)        C3 = d3*B/(d3-1)        C4 = d3*B/(1-d3)
    E1 = (A-B)/2            E2 = d3                 E3 = (A+B)/2

C1 marks the birth of points with four coinciding inverse-kinematic
solutions, C2/C3/C4 mark tangencies between the singular lines and the
singular curves, E1/E3 mark tangencies between boundary segments, and E2
(d4 = d3) marks the appearance of the isolated singular points.

The module also evaluates, in residual form, the five polynomial surface
candidates (indexed 5..9) that an earlier computer-algebra study of the same
family produced, and reports numerically which of their branches coincide
with the C surfaces; candidates 5, 6 and the larger branch of 7 do not
separate distinct workspace topologies.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .kinematics import Geometry


class SurfaceId(enum.Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"
    E1 = "E1"
    E2 = "E2"
    E3 = "E3"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


CUSP_SURFACES = (SurfaceId.C1, SurfaceId.C2, SurfaceId.C3, SurfaceId.C4)
NODE_SURFACES = (SurfaceId.E1, SurfaceId.E2, SurfaceId.E3)


@dataclass(frozen=True)
class AuxAB:
    """The two auxiliary lengths A, B entering every surface expression."""

    A: float
    B: float

    @classmethod
    def of(cls, d3: float, r2: float) -> "AuxAB":
        return cls(A=math.hypot(d3 + 1.0, r2), B=math.hypot(d3 - 1.0, r2))

    @property
    def product_sq(self) -> float:
        """A^2 B^2, identically (d3^2 + r2^2 + 1)^2 - 4 d3^2."""
        return (self.A * self.B) ** 2


def _check_params(d3: float, r2: float) -> None:
    if not (math.isfinite(d3) and d3 > 0.0):
        raise ValueError(f"d3 must be finite and > 0, got {d3!r}")
    if not (math.isfinite(r2) and r2 > 0.0):
        raise ValueError(f"r2 must be finite and > 0, got {r2!r}")


def surface_value(surface: SurfaceId, d3: float, r2: float) -> float:
    """The d4 threshold of one separating surface at fixed (d3, r2).

    C3 is only defined for d3 > 1 and C4 only for d3 < 1 (both blow up at
    the d3 = 1 asymptote); asking outside the domain raises ValueError.
    """
    _check_params(d3, r2)
    ab = AuxAB.of(d3, r2)
    if surface is SurfaceId.C1:
        s = d3 * d3 + r2 * r2
        inner = s - (s * s - d3 * d3 + r2 * r2) / (ab.A * ab.B)
        if inner < 0.0:
            raise ArithmeticError(f"negative radicand {inner} for C1 at {(d3, r2)}")
        return math.sqrt(0.5 * inner)
    if surface is SurfaceId.C2:
        return d3 * ab.A / (1.0 + d3)
    if surface is SurfaceId.C3:
        if d3 <= 1.0:
            raise ValueError("C3 is defined only for d3 > 1")
        return d3 * ab.B / (d3 - 1.0)
    if surface is SurfaceId.C4:
        if d3 >= 1.0:
            raise ValueError("C4 is defined only for d3 < 1")
        return d3 * ab.B / (1.0 - d3)
    if surface is SurfaceId.E1:
        return 0.5 * (ab.A - ab.B)
    if surface is SurfaceId.E2:
        return d3
    if surface is SurfaceId.E3:
        return 0.5 * (ab.A + ab.B)
    raise ValueError(f"unknown surface {surface!r}")


def applicable_surfaces(d3: float) -> tuple[SurfaceId, ...]:
    """The surfaces defined at this d3 (C3/C4 swap across d3 = 1)."""
    ids = [SurfaceId.C1, SurfaceId.C2]
    if d3 > 1.0:
        ids.append(SurfaceId.C3)
    elif d3 < 1.0:
        ids.append(SurfaceId.C4)
    ids.extend(NODE_SURFACES)
    return tuple(ids)


def all_surface_values(d3: float, r2: float) -> dict[SurfaceId, float]:
    return {sid: surface_value(sid, d3, r2) for sid in applicable_surfaces(d3)}


def _cr_terms(k: int, d3: float, d4: float, r2: float) -> list[float]:
    """Signed monomial terms of polynomial surface candidate k, as printed."""
    p, q, s = d3 * d3, d4 * d4, r2 * r2
    if k == 5:
        return [-d3, d4 * s, d4]
    if k == 6:
        return [p, -q, s]
    if k == 7:
        return [
            q * p ** 3, -(q ** 2) * p ** 2, 3.0 * q * p ** 2 * s,
            -2.0 * q * p ** 2, 2.0 * q ** 2 * p, -2.0 * q ** 2 * p * s,
            q * p, 3.0 * q * p * s ** 2, -p * s, -2.0 * q ** 2 * s,
            -(q ** 2) * s ** 2, -(q ** 2), q * s ** 3, q * s, 2.0 * q * s ** 2,
        ]
    if k == 8:
        return [p * s, p, -2.0 * d3 ** 3, p * p, -q, 2.0 * d3 * q, -p * q]
    if k == 9:
        return [p * s, p, 2.0 * d3 ** 3, p * p, -q, -2.0 * d3 * q, -p * q]
    raise ValueError(f"candidate index must be in 5..9, got {k!r}")


def cr_residual(k: int, d3: float, d4: float, r2: float) -> float:
    """Left-hand-side value of polynomial surface candidate k in {5,...,9}."""
    return math.fsum(_cr_terms(k, d3, d4, r2))


def cr_residual_scaled(k: int, d3: float, d4: float, r2: float) -> float:
    """Residual of candidate k divided by the sum of its term magnitudes.

    This is the scale used by the branch-equivalence checks: a surface point
    has scaled residual at rounding level regardless of parameter size.
    """
    terms = _cr_terms(k, d3, d4, r2)
    scale = math.fsum(abs(t) for t in terms)
    if scale == 0.0:
        return 0.0
    return math.fsum(terms) / scale


@dataclass(frozen=True)
class BranchEntry:
    """One d4 branch of a polynomial candidate, matched against C surfaces."""

    candidate: int
    description: str
    d4: float
    matches: SurfaceId | None
    separating: bool


@dataclass(frozen=True)
class BranchReport:
    d3: float
    r2: float
    entries: tuple[BranchEntry, ...]

    def entry(self, candidate: int, separating: bool | None = None) -> tuple[BranchEntry, ...]:
        out = [e for e in self.entries if e.candidate == candidate
               and (separating is None or e.separating == separating)]
        return tuple(out)


def eq7_d4_roots(d3: float, r2: float) -> tuple[float, float]:
    """Both positive d4 roots of candidate 7 (a quadratic in d4^2), ascending.

    One of them is the four-coinciding-solutions surface C1, namely the
    branch d4^2 = (S - D/(AB))/2 with D = S^2 - d3^2 + r2^2: the smaller
    root where D > 0 but the larger one in the small-(d3, r2) corner where
    D < 0 (verified against the cusp-count oracle).  The other root does
    not separate distinct workspace topologies.
    """
    _check_params(d3, r2)
    ab = AuxAB.of(d3, r2)
    s = d3 * d3 + r2 * r2
    disc = abs(s * s - d3 * d3 + r2 * r2) / (ab.A * ab.B)
    lo = 0.5 * (s - disc)
    hi = 0.5 * (s + disc)
    if lo < 0.0:
        raise ArithmeticError(f"negative d4^2 root {lo} at {(d3, r2)}")
    return math.sqrt(lo), math.sqrt(hi)


def branch_report(d3: float, r2: float) -> BranchReport:
    """Numerical branch decomposition of the five polynomial candidates.

    Each candidate is solved for positive d4 at the given (d3, r2); branches
    are marked with the C surface they coincide with, if any, and with
    whether they separate distinct workspace topologies.
    """
    _check_params(d3, r2)
    entries: list[BranchEntry] = []

    # candidate 5: linear in d4
    entries.append(BranchEntry(5, "d4 = d3/(1 + r2^2)",
                               d3 / (1.0 + r2 * r2), None, False))
    # candidate 6: d4^2 = d3^2 + r2^2
    entries.append(BranchEntry(6, "d4 = sqrt(d3^2 + r2^2)",
                               math.hypot(d3, r2), None, False))
    # candidate 7: quadratic in d4^2, the branch matching C1 separates
    lo, hi = eq7_d4_roots(d3, r2)
    c1 = surface_value(SurfaceId.C1, d3, r2)
    sep_is_lo = abs(lo - c1) <= abs(hi - c1)
    entries.append(BranchEntry(7, "smaller d4^2 root", lo,
                               SurfaceId.C1 if sep_is_lo else None, sep_is_lo))
    entries.append(BranchEntry(7, "larger d4^2 root", hi,
                               None if sep_is_lo else SurfaceId.C1, not sep_is_lo))
    # candidate 8: d4^2 (1-d3)^2 = d3^2 B^2, branch depends on the d3 side
    if d3 > 1.0:
        entries.append(BranchEntry(8, "branch valid for d3 > 1",
                                   surface_value(SurfaceId.C3, d3, r2),
                                   SurfaceId.C3, True))
    elif d3 < 1.0:
        entries.append(BranchEntry(8, "branch valid for d3 < 1",
                                   surface_value(SurfaceId.C4, d3, r2),
                                   SurfaceId.C4, True))
    # candidate 9: d4^2 (1+d3)^2 = d3^2 A^2
    entries.append(BranchEntry(9, "single positive branch",
                               surface_value(SurfaceId.C2, d3, r2),
                               SurfaceId.C2, True))
    return BranchReport(d3=d3, r2=r2, entries=tuple(entries))


def normalized_params(geom: Geometry) -> tuple[float, float, float]:
    """(d3, d4, r2) of the d2 = 1 normalized geometry."""
    g = geom.normalized()
    return g.d3, g.d4, g.r2
