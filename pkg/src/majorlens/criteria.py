"""Entanglement detection criteria.

* disorder (majorization) check: partial sums of the full spectrum against a
  subsystem's, any violated index certifies entanglement;
* Peres check: smallest partial-transpose eigenvalue;
* entropic detectors with bounded parameter search over the Tsallis q and
  the peaked-family (alpha, t), including the constructive alpha
  recommendation alpha = p_j of the reduced state at the first violated
  index j.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bipartite import BipartiteDensity, partial_trace, partial_transpose
from .entropy import EntropicFamily, conditional_from_spectra
from .hermitian import Spectrum, eigenvalues

MAJORIZATION_TOL = 1e-10
DETECTION_THRESHOLD = -1e-12
ALPHA_JITTER = 1e-3
DEFAULT_Q_BOUNDS = (1e-2, 1e3)
DEFAULT_Q_POINTS = 96
DEFAULT_T_SCHEDULE = (1e1, 1e2, 1e3, 1e4)

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def default_q_grid() -> np.ndarray:
    """96 log-spaced q values in [1e-2, 1e3].

    The lower bound is pragmatic: detection regions collapse onto the outer
    positivity border as q -> 0+.
    """
    return np.geomspace(DEFAULT_Q_BOUNDS[0], DEFAULT_Q_BOUNDS[1], DEFAULT_Q_POINTS)


@dataclass(frozen=True)
class MajorizationReport:
    """Per-index comparison of leading partial sums against one subsystem."""

    side: str
    cumsum_rho: np.ndarray
    cumsum_reduced: np.ndarray
    violated_indices: tuple[int, ...]
    first_violation: int | None
    tol: float = MAJORIZATION_TOL

    @property
    def is_violated(self) -> bool:
        return bool(self.violated_indices)


@dataclass(frozen=True)
class DetectionVerdict:
    """Outcome of a bounded detector sweep.

    ``detected`` means the most negative conditional difference found is
    below DETECTION_THRESHOLD; it is a bounded-search statement, not a proof
    over the whole parameter range. ``witness`` always records the deepest
    point sampled.
    """

    detected: bool
    witness: dict | None
    margin: float


def majorization_compare(
    full: Spectrum, reduced: Spectrum, side: str = "A", tol: float = MAJORIZATION_TOL
) -> MajorizationReport:
    """Compare the first k partial sums (k = reduced dimension)."""
    k = reduced.dim
    cs_rho = full.cumsums[:k].copy()
    cs_red = reduced.cumsums.copy()
    violated = tuple(int(i) + 1 for i in np.nonzero(cs_rho > cs_red + tol)[0])
    first = violated[0] if violated else None
    return MajorizationReport(side, cs_rho, cs_red, violated, first, tol)


def disorder_check(
    rho: BipartiteDensity, tol: float = MAJORIZATION_TOL
) -> tuple[MajorizationReport, MajorizationReport]:
    """Majorization reports against both subsystems; any violation certifies
    entanglement."""
    full = eigenvalues(rho.op)
    rep_a = majorization_compare(full, eigenvalues(partial_trace(rho, "A")), "A", tol)
    rep_b = majorization_compare(full, eigenvalues(partial_trace(rho, "B")), "B", tol)
    return rep_a, rep_b


def peres_check(rho: BipartiteDensity) -> float:
    """Smallest eigenvalue of the partial transpose; negative certifies
    entanglement."""
    return float(np.linalg.eigvalsh(partial_transpose(rho).mat)[0])


def _golden_min(fn, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Golden-section minimum of fn on [lo, hi] to bracket width tol."""
    a, b = lo, hi
    c, d = b - _INVPHI * (b - a), a + _INVPHI * (b - a)
    fc, fd = fn(c), fn(d)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fn(d)
    mid = 0.5 * (a + b)
    return mid, fn(mid)


def tsallis_sweep_spectra(
    full: Spectrum,
    reduced: Spectrum,
    side: str = "A",
    q_grid: np.ndarray | None = None,
    refine_tol: float = 1e-6,
    threshold: float = DETECTION_THRESHOLD,
) -> DetectionVerdict:
    """Minimize the Tsallis conditional difference over q.

    Samples the grid, then golden-refines around every sampled local minimum
    (dips narrower than the grid spacing would otherwise be missed near
    detection onsets) and reports the deepest point found.
    """
    qs = default_q_grid() if q_grid is None else np.asarray(q_grid, dtype=float)

    def diff_at(q: float) -> float:
        fam = EntropicFamily.tsallis(q)
        return conditional_from_spectra(fam, full, reduced, side).difference

    vals = np.array([diff_at(q) for q in qs])
    best_q, best_v = float(qs[np.argmin(vals)]), float(np.min(vals))
    log_qs = np.log(qs)
    for i in range(qs.size):
        left = vals[i - 1] if i > 0 else np.inf
        right = vals[i + 1] if i < qs.size - 1 else np.inf
        if vals[i] <= left and vals[i] <= right:
            lo = log_qs[max(0, i - 1)]
            hi = log_qs[min(qs.size - 1, i + 1)]
            qm, vm = _golden_min(lambda lq: diff_at(math.exp(lq)), lo, hi, refine_tol)
            if vm < best_v:
                best_q, best_v = math.exp(qm), vm
    return DetectionVerdict(best_v < threshold, {"q": best_q}, best_v)


def tsallis_sweep(
    rho: BipartiteDensity,
    side: str = "A",
    q_grid: np.ndarray | None = None,
    refine_tol: float = 1e-6,
    threshold: float = DETECTION_THRESHOLD,
) -> DetectionVerdict:
    full = eigenvalues(rho.op)
    reduced = eigenvalues(partial_trace(rho, keep=side))
    return tsallis_sweep_spectra(full, reduced, side, q_grid, refine_tol, threshold)


def recommend_alpha_from_spectrum(reduced: Spectrum, j: int) -> float:
    """p_j of the reduced spectrum (1-based, descending): the constructive
    peak location for detecting a first violation at index j."""
    if not 1 <= j <= reduced.dim:
        raise IndexError(f"index {j} outside 1..{reduced.dim}")
    return float(reduced.values[j - 1])


def recommend_alpha(rho: BipartiteDensity, side: str, j: int) -> float:
    return recommend_alpha_from_spectrum(eigenvalues(partial_trace(rho, keep=side)), j)


def recommended_alphas(reduced: Spectrum, jitter: float = ALPHA_JITTER) -> tuple[float, ...]:
    """Jittered peak recommendations for every index of the reduced spectrum.

    The exact eigenvalue sits on the kink of the sharp-peak limit, so each
    p_j is bracketed by p_j +- jitter (clipped to (0, 1), deduplicated).
    """
    alphas: list[float] = []
    for value in reduced.values:
        for a in (value - jitter, value, value + jitter):
            if 0.0 < a < 1.0 and a not in alphas:
                alphas.append(a)
    return tuple(alphas)


def peaked_search_spectra(
    full: Spectrum,
    reduced: Spectrum,
    alphas,
    ts=None,
    side: str = "A",
    threshold: float = DETECTION_THRESHOLD,
) -> DetectionVerdict:
    """Evaluate the peaked conditional difference over the (alpha, t) lattice.

    The witness is the first cell below threshold in (alpha-major, t-minor)
    order; the margin is the most negative value over the whole lattice.
    """
    ts = DEFAULT_T_SCHEDULE if ts is None else tuple(ts)
    witness = None
    margin = np.inf
    margin_cell = None
    for a in alphas:
        for t in ts:
            fam = EntropicFamily.peaked(a, t)
            diff = conditional_from_spectra(fam, full, reduced, side).difference
            if diff < margin:
                margin, margin_cell = diff, {"alpha": float(a), "t": float(t)}
            if witness is None and diff < threshold:
                witness = {"alpha": float(a), "t": float(t)}
    detected = margin < threshold
    return DetectionVerdict(detected, witness if detected else margin_cell, float(margin))


def peaked_search(
    rho: BipartiteDensity,
    side: str = "A",
    alphas=None,
    ts=None,
    threshold: float = DETECTION_THRESHOLD,
) -> DetectionVerdict:
    """Peaked-family detector; by default tries the recommended alphas for
    every index of the reduced spectrum."""
    full = eigenvalues(rho.op)
    reduced = eigenvalues(partial_trace(rho, keep=side))
    if alphas is None:
        alphas = recommended_alphas(reduced)
    return peaked_search_spectra(full, reduced, alphas, ts, side, threshold)
