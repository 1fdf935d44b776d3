"""Floating-point spectra, parameter sweeps, branch matching, classification.

Two eigenvalue routes are kept deliberately independent:

* dense LAPACK (Hessenberg + shifted QR) on the floating matrix, and
* exact characteristic polynomial -> companion matrix -> Newton polish.

The first is fast and backward stable; the second stays accurate even at
strongly non-normal points (near higher-order degeneracies the dense solver
loses up to half the digits per Jordan order, while polynomial roots from
exact coefficients do not). Each serves as the other's oracle in the tests.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import linear_sum_assignment

from ._roots import polynomial_roots
from .exact_poly import charpoly_of_tridiagonal, faddeev_leverrier
from .operators import ModelParams, OperatorMatrix, build_generalized_hamiltonian

__all__ = [
    "SpectralError",
    "ClassificationError",
    "Spectrum",
    "Trajectory",
    "Classification",
    "eigenvalues",
    "eigenvalues_from_charpoly",
    "exact_spectrum",
    "analytic_c0_spectrum",
    "sweep",
    "match_branches",
    "matched_sweep",
    "classify",
    "optimal_match_distance",
]


class SpectralError(RuntimeError):
    """Eigensolver failure, carrying the offending parameters."""


class ClassificationError(RuntimeError):
    """Krein pairing violated: an unpaired non-real eigenvalue."""


def _sorted_eigs(vals: np.ndarray) -> np.ndarray:
    order = np.lexsort((vals.imag, vals.real))
    return vals[order]


def eigenvalues(matrix, context: str = "") -> np.ndarray:
    """All eigenvalues, deterministically ordered by (Re, Im).

    Floating matrices go through the dense LAPACK solver. Exact
    parameter-free matrices go through the exact characteristic polynomial
    and polished companion roots, which is the accurate route at and near
    exceptional points.
    """
    if isinstance(matrix, OperatorMatrix) and matrix.entry_kind == "exact":
        return exact_spectrum(matrix, context=context)
    arr = matrix.array if isinstance(matrix, OperatorMatrix) else np.asarray(matrix, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise SpectralError(f"matrix is not square {context}")
    if not np.all(np.isfinite(arr)):
        raise SpectralError(f"matrix has non-finite entries {context}")
    try:
        vals = np.linalg.eigvals(arr)
    except np.linalg.LinAlgError as exc:
        raise SpectralError(f"eigensolver did not converge {context}: {exc}") from exc
    return _sorted_eigs(vals)


def eigenvalues_from_charpoly(charpoly, value=0) -> np.ndarray:
    """Roots of the exact characteristic polynomial at a parameter value."""
    coeffs = np.array(charpoly.monic_at(value))
    return _sorted_eigs(polynomial_roots(coeffs))


def exact_spectrum(matrix: OperatorMatrix, value=None, context: str = "") -> np.ndarray:
    """Eigenvalues of an exact matrix via its exact characteristic polynomial."""
    if matrix.entry_kind != "exact":
        raise TypeError("exact_spectrum needs an exact matrix")
    work = matrix if value is None else matrix.substitute(value)
    if work.is_tridiagonal():
        cp = charpoly_of_tridiagonal(work)
    else:
        cp = faddeev_leverrier(work)
    return eigenvalues_from_charpoly(cp, 0)


def analytic_c0_spectrum(params: ModelParams) -> np.ndarray:
    """Closed-form spectrum at c = 0: lambda_n = n sqrt(v^2 - gamma^2).

    n runs over -N, -N+2, ..., N. The root is real for |gamma| <= |v| and
    positive imaginary beyond the breaking point.
    """
    if params.c is None or float(params.c) != 0.0:
        raise ValueError("analytic spectrum requires c = 0")
    g, v = float(params.gamma), float(params.v)
    disc = v * v - g * g
    s = np.sqrt(disc) if disc >= 0 else 1j * np.sqrt(-disc)
    N = params.particles
    vals = np.array([n * s for n in range(-N, N + 1, 2)], dtype=complex)
    return _sorted_eigs(vals)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues at one parameter point, sorted by (Re, Im)."""

    params: ModelParams
    eigenvalues: np.ndarray
    scale: float = 1.0

    @property
    def count(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class Trajectory:
    """One branch of an eigenvalue sweep: (parameter, eigenvalue) pairs."""

    branch: int
    parameters: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class Classification:
    real_count: int
    conjugate_pair_count: int
    imag_tolerance: float


def _spectrum_at(params: ModelParams) -> Spectrum:
    H = build_generalized_hamiltonian(params, "orthonormal")
    vals = eigenvalues(H, context=f"(N={params.particles}, gamma={float(params.gamma)}, "
                                   f"v={float(params.v)}, c={float(params.c)})")
    return Spectrum(params=params, eigenvalues=vals, scale=max(1.0, H.max_abs()))


def sweep(params: ModelParams, vary: str, grid) -> list:
    """One Spectrum per grid point of gamma or c; points are independent.

    EPSPECTRA_THREADS > 1 evaluates grid points concurrently; assembly is
    ordered, so results are identical at any thread count.
    """
    if vary not in ("gamma", "c"):
        raise ValueError("vary must be 'gamma' or 'c'")
    pts = [replace(params, **{vary: float(x)}) for x in grid]
    threads = int(os.environ.get("EPSPECTRA_THREADS", "1") or "1")
    if threads > 1 and len(pts) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_spectrum_at, pts))
    return [_spectrum_at(p) for p in pts]


def optimal_match_distance(a, b) -> float:
    """Max pair distance under the optimal assignment of two eigenvalue sets."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def match_branches(spectra, vary: str = "gamma", jump_ratio: float = 10.0):
    """Pair eigenvalues across a sweep by minimum-total-distance assignment.

    Returns (trajectories, flagged_steps). A step is flagged when its
    largest matched jump exceeds ``jump_ratio`` times the median jump of
    that step, which indicates the grid is too coarse there (typically near
    an exceptional point).
    """
    if len(spectra) < 2:
        raise ValueError("branch matching needs at least two grid points")
    n = spectra[0].count
    params = [float(getattr(s.params, vary)) for s in spectra]
    rows = [spectra[0].eigenvalues.copy()]
    flagged = []
    for i in range(len(spectra) - 1):
        prev, cur = rows[-1], spectra[i + 1].eigenvalues
        cost = np.abs(prev[:, None] - cur[None, :])
        r, c = linear_sum_assignment(cost)
        ordered = np.empty(n, dtype=complex)
        ordered[r] = cur[c]
        jumps = np.abs(ordered - prev)
        med = np.median(jumps)
        floor = 1e-14 * max(1.0, np.abs(cur).max())
        if jumps.max() > jump_ratio * max(med, floor):
            flagged.append(i)
        rows.append(ordered)
    table = np.array(rows)  # (points, branches)
    trajectories = [
        Trajectory(branch=b, parameters=np.array(params), values=table[:, b].copy())
        for b in range(n)
    ]
    return trajectories, flagged


def matched_sweep(params: ModelParams, vary: str, grid, max_levels: int = 12,
                  evaluate=None):
    """Sweep with automatic dyadic refinement of flagged steps.

    Midpoints are inserted into flagged steps until the flag clears or the
    step has been halved ``max_levels`` times. A genuine branch-point
    crossing never clears: its square-root jump shrinks slower than the
    step, so the ratio grows under refinement. What refinement buys is
    localization: the offending interval is narrowed to 2^-max_levels of
    the original step and reported as unresolved, ready to hand to the EP
    locator.

    ``evaluate`` maps a parameter value to a Spectrum and defaults to the
    model Hamiltonian at ``params`` with ``vary`` replaced.

    Returns (trajectories, unresolved_intervals).
    """
    if evaluate is None:
        evaluate = lambda x: _spectrum_at(replace(params, **{vary: x}))
    grid = sorted(float(g) for g in grid)
    if len(grid) < 2:
        raise ValueError("refinement needs at least two grid points")
    min_width = {i: (grid[i + 1] - grid[i]) / 2**max_levels for i in range(len(grid) - 1)}
    cache = {g: evaluate(g) for g in grid}

    def floor_for(x):
        # refinement floor inherited from the original enclosing step
        for i in range(len(grid) - 1):
            if grid[i] <= x < grid[i + 1]:
                return min_width[i]
        return min_width[len(grid) - 2]

    points = list(grid)
    while True:
        spectra = [cache[g] for g in points]
        trajectories, flagged = match_branches(spectra, vary)
        to_insert = []
        for i in flagged:
            lo, hi = points[i], points[i + 1]
            if hi - lo <= floor_for(lo):
                continue
            to_insert.append((lo + hi) / 2.0)
        if not to_insert:
            unresolved = [
                (points[i], points[i + 1])
                for i in flagged
                if points[i + 1] - points[i] <= floor_for(points[i]) * (1 + 1e-9)
            ]
            return trajectories, unresolved
        for mid in to_insert:
            cache[mid] = evaluate(mid)
        points = sorted(set(points) | set(to_insert))


def classify(spectrum, imag_tol=None, pair_tol=None) -> Classification:
    """Split a PT-symmetric spectrum into real values and conjugate pairs.

    Eigenvalues with |Im| <= imag_tol count as real (default tolerance
    1e-9 * scale); the rest must pair under conjugation, else the Krein
    symmetry is numerically violated and an error is raised. ``pair_tol``
    bounds the pairing residual; callers bisecting toward an exceptional
    point pass a looser value because dense-solver noise there grows like
    sqrt(eps) / (distance to the EP)^(1/4).
    """
    if isinstance(spectrum, Spectrum):
        vals = spectrum.eigenvalues
        scale = spectrum.scale
    else:
        vals = np.asarray(spectrum, dtype=complex)
        scale = max(1.0, float(np.abs(vals).max()) if vals.size else 1.0)
    if imag_tol is None:
        imag_tol = 1e-9 * scale
    real_mask = np.abs(vals.imag) <= imag_tol
    upper = vals[~real_mask & (vals.imag > 0)]
    lower = vals[~real_mask & (vals.imag < 0)]
    if len(upper) != len(lower):
        raise ClassificationError(
            f"unpaired non-real eigenvalues: {len(upper)} above vs {len(lower)} below axis"
        )
    if len(upper):
        cost = np.abs(upper[:, None] - np.conj(lower)[None, :])
        r, c = linear_sum_assignment(cost)
        residual = cost[r, c].max()
        if pair_tol is None:
            pair_tol = max(4.0 * imag_tol, 1e-10 * scale)
        if residual > pair_tol:
            raise ClassificationError(
                f"conjugate pairing residual {residual:.3e} exceeds {pair_tol:.3e}"
            )
    return Classification(
        real_count=int(real_mask.sum()),
        conjugate_pair_count=len(upper),
        imag_tolerance=float(imag_tol),
    )
