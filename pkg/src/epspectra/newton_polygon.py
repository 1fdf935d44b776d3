"""Puiseux-Newton diagram analysis of eigenvalue unfolding.

From the exact characteristic polynomial chi(lambda, c) each nonzero monic
coefficient contributes a diagram point (k, a_k): lambda-degree against the
lowest parameter exponent of that coefficient. The lower convex hull of
these points fixes the dominant fractional exponents mu = -slope of the
branch expansions lambda = e1 c^mu + o(c^mu); the points on one hull
segment assemble a reduced polynomial whose nonzero roots are the leading
coefficients e1. Roots of common modulus with phases spaced 2 pi / size
form eigenvalue rings.

A (k+1)-Hessenberg perturbation of a full Jordan block splits the
degenerate eigenvalue into floor((N+1)/(k+1)) rings of size k+1 with the
remaining branches grouped into smaller rings or singles; the quadratic
model's triplets are the k = 2 case of this law.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._roots import polynomial_roots
from .exact_poly import CharPoly, GaussianRational, ParamPoly, Rational

__all__ = [
    "DiagramPoint",
    "HullSegment",
    "UnfoldingBranch",
    "RingPrediction",
    "UnfoldingAnalysis",
    "DegenerateDiagramError",
    "build_points",
    "lower_hull",
    "reduced_polynomial",
    "solve_leading_coefficients",
    "group_rings",
    "predict_ring_counts",
    "analyze_unfolding",
]


class DegenerateDiagramError(ValueError):
    """Too few diagram points for a hull (fully degenerate polynomial)."""


@dataclass(frozen=True)
class DiagramPoint:
    """(lambda-degree k, lowest parameter exponent a, its coefficient f)."""

    k: int
    a: int
    f: GaussianRational

    @property
    def xy(self):
        return (self.k, self.a)


@dataclass(frozen=True)
class HullSegment:
    """One lower-hull segment; mu = -slope is the unfolding exponent."""

    slope: object
    points: tuple

    @property
    def mu(self):
        return -self.slope

    @property
    def k_left(self) -> int:
        return self.points[0].k

    @property
    def k_right(self) -> int:
        return self.points[-1].k

    @property
    def extent(self) -> int:
        return self.k_right - self.k_left


@dataclass(frozen=True)
class UnfoldingBranch:
    """Leading-order branch lambda ~ e1 c^mu with its ring assignment."""

    mu: float
    e1: complex
    ring_id: int
    ring_size: int
    irregular: bool = False


@dataclass(frozen=True)
class RingPrediction:
    ring_count: int
    ring_size: int
    remainder: int


def build_points(charpoly: CharPoly) -> list:
    """Diagram points from the monic coefficients, skipping absent ones."""
    pts = []
    for k, coeff in enumerate(charpoly.monic_coefficients()):
        if not coeff:
            continue
        a, f = coeff.lowest_power()
        pts.append(DiagramPoint(k=k, a=a, f=f))
    return pts


def lower_hull(points) -> list:
    """Lower convex hull segments in the (k, a) plane, exact arithmetic.

    Each segment carries every diagram point incident on it (interior
    collinear points contribute to the reduced polynomial). Slopes strictly
    increase left to right.
    """
    pts = sorted(points, key=lambda p: p.k)
    if len(pts) < 2:
        raise DegenerateDiagramError("need at least two diagram points")
    if len({p.k for p in pts}) != len(pts):
        raise ValueError("duplicate lambda-degrees in diagram")
    hull = [pts[0]]
    for p in pts[1:]:
        while len(hull) >= 2:
            q1, q2 = hull[-2], hull[-1]
            # keep q2 only if it is strictly below the chord q1->p
            cross = (q2.k - q1.k) * (p.a - q1.a) - (p.k - q1.k) * (q2.a - q1.a)
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    segments = []
    for left, right in zip(hull[:-1], hull[1:]):
        dk = right.k - left.k
        da = right.a - left.a
        slope = Rational(da) / Rational(dk)
        on = tuple(
            p
            for p in pts
            if left.k <= p.k <= right.k
            and Rational(p.a - left.a) * dk == Rational(p.k - left.k) * da
        )
        segments.append(HullSegment(slope=slope, points=on))
    return segments


def hull_supports_all_points(points, segments) -> bool:
    """Every diagram point lies on or above every segment's supporting line."""
    for seg in segments:
        p0 = seg.points[0]
        dk = seg.points[-1].k - p0.k
        da = seg.points[-1].a - p0.a
        for q in points:
            # (q.a - line(q.k)) * dk >= 0 with line through p0 of the segment slope
            if Rational(q.a - p0.a) * dk < Rational(q.k - p0.k) * da:
                return False
    return True


def reduced_polynomial(segment: HullSegment, charpoly: CharPoly = None) -> ParamPoly:
    """Sum of f_k e^k over the segment's points, with e^{k_min} removed.

    The surviving polynomial has a nonzero constant term; its roots are the
    leading coefficients e1 for the segment's exponent mu. The monic-sign
    convention of the coefficients is inherited from build_points.
    """
    k0 = segment.k_left
    out = ParamPoly()
    for p in segment.points:
        out = out + ParamPoly.monomial(p.k - k0, p.f)
    return out


def solve_leading_coefficients(poly: ParamPoly) -> np.ndarray:
    """All nonzero complex roots of a reduced polynomial, to ~1e-10 relative.

    Companion-matrix eigenvalues polished by Newton iteration; roots at
    e = 0 are excluded (they belong to other hull segments).
    """
    if not poly:
        raise ValueError("zero reduced polynomial")
    degree = poly.degree
    coeffs = np.zeros(degree + 1, dtype=complex)
    for e, g in poly.coeffs.items():
        coeffs[e] = complex(g)
    roots = polynomial_roots(coeffs)
    return roots[roots != 0]


def group_rings(coefficients, mu, modulus_rtol: float = 1e-6, phase_tol: float = 1e-9) -> list:
    """Partition leading coefficients into eigenvalue rings.

    Coefficients are grouped by modulus (relative tolerance); a group is a
    ring when its phases are spaced by 2 pi / size. A same-modulus group
    with irregular phases is split into singles and flagged, not treated as
    a ring (this is how e.g. a conjugate pair of independent linear branches
    with accidentally equal moduli is reported).
    """
    roots = np.asarray(coefficients, dtype=complex)
    if roots.size == 0:
        return []
    mu_f = float(mu)
    order = np.argsort(np.abs(roots))
    groups = []
    for idx in order:
        r = roots[idx]
        if groups and abs(abs(r) - abs(groups[-1][-1])) <= modulus_rtol * max(abs(r), abs(groups[-1][-1])):
            groups[-1].append(r)
        else:
            groups.append([r])
    branches = []
    ring_id = 0
    for grp in groups:
        size = len(grp)
        regular = True
        if size > 1:
            phases = np.sort(np.angle(np.array(grp)))
            gaps = np.diff(np.concatenate([phases, [phases[0] + 2 * np.pi]]))
            regular = bool(np.all(np.abs(gaps - 2 * np.pi / size) <= phase_tol + 1e-12 * size))
        if regular:
            for r in grp:
                branches.append(UnfoldingBranch(mu=mu_f, e1=r, ring_id=ring_id, ring_size=size))
            ring_id += 1
        else:
            for r in grp:
                branches.append(
                    UnfoldingBranch(mu=mu_f, e1=r, ring_id=ring_id, ring_size=1, irregular=True)
                )
                ring_id += 1
    return branches


def predict_ring_counts(N: int, k: int) -> RingPrediction:
    """Ring law for a (k+1)-Hessenberg perturbation of the order-(N+1) EP.

    For k <= N-1: floor((N+1)/(k+1)) rings of size k+1 and a remainder of
    (N+1) - p(k+1) branches in smaller groups. For k >= N the bottom-left
    corner of the perturbation is populated and a single (N+1)-ring forms.
    """
    if k < 1:
        raise ValueError("perturbation power must be >= 1")
    if k >= N:
        return RingPrediction(ring_count=1, ring_size=N + 1, remainder=0)
    p = (N + 1) // (k + 1)
    return RingPrediction(ring_count=p, ring_size=k + 1, remainder=(N + 1) - p * (k + 1))


@dataclass
class UnfoldingAnalysis:
    """Full Newton-diagram unfolding of one characteristic polynomial."""

    charpoly: CharPoly
    points: list
    segments: list
    reduced: list
    branches: list
    zero_branch_count: int
    dim: int

    def ring_sizes(self) -> list:
        """Ring sizes including identically-zero branches as singles."""
        sizes = []
        seen = set()
        for b in self.branches:
            key = (b.mu, b.ring_id)
            if key not in seen:
                seen.add(key)
                sizes.append(b.ring_size)
        sizes.extend([1] * self.zero_branch_count)
        return sorted(sizes)

    def branch_count(self) -> int:
        return len(self.branches) + self.zero_branch_count


def analyze_unfolding(charpoly: CharPoly, modulus_rtol: float = 1e-6,
                      phase_tol: float = 1e-9) -> UnfoldingAnalysis:
    """Diagram, hull, reduced polynomials, leading coefficients, rings.

    Branch accounting is verified: hull-segment extents plus the
    identically-zero branches (the leftmost hull abscissa) must exhaust all
    N+1 eigenvalue branches.
    """
    points = build_points(charpoly)
    M = charpoly.dim
    if len(points) == 1:
        # chi = +-lambda^M: fully degenerate, nothing unfolds
        return UnfoldingAnalysis(
            charpoly=charpoly,
            points=points,
            segments=[],
            reduced=[],
            branches=[],
            zero_branch_count=points[0].k,
            dim=M,
        )
    segments = lower_hull(points)
    if not hull_supports_all_points(points, segments):
        raise AssertionError("hull consistency violated")
    zero_branches = min(p.k for p in points)
    reduced = []
    branches = []
    ring_offset = 0
    for seg in segments:
        poly = reduced_polynomial(seg)
        reduced.append(poly)
        roots = solve_leading_coefficients(poly)
        if len(roots) != seg.extent:
            raise AssertionError(
                f"segment accounts for {seg.extent} branches but produced {len(roots)} roots"
            )
        ring = group_rings(roots, seg.mu, modulus_rtol, phase_tol)
        for b in ring:
            branches.append(
                UnfoldingBranch(
                    mu=b.mu,
                    e1=b.e1,
                    ring_id=b.ring_id + ring_offset,
                    ring_size=b.ring_size,
                    irregular=b.irregular,
                )
            )
        if ring:
            ring_offset = max(b.ring_id for b in branches) + 1
    total = zero_branches + sum(seg.extent for seg in segments)
    if total != M:
        raise AssertionError(f"branch accounting: {total} != {M}")
    return UnfoldingAnalysis(
        charpoly=charpoly,
        points=points,
        segments=segments,
        reduced=reduced,
        branches=branches,
        zero_branch_count=zero_branches,
        dim=M,
    )
