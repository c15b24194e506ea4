"""Trace-form entropies S_f(rho) = sum_i f(p_i) for concave f with f(0)=f(1)=0.

Four families are implemented:

* ``von_neumann``   f(p) = -p ln p
* ``tsallis``       f(p) = (p - p^q)/(q - 1), concave for every q > 0
* ``peaked``        f(p) = K_t(p - a) - (1-p) K_t(-a) - p K_t(1-a) built from
  the log-cosh kernel K_t(x) = -ln(cosh(t x))/(2 t); its maximum sits near an
  adjustable point a in (0, 1) and sharpens as t grows
* ``peaked_limit``  the t -> infinity form, f(p) = p(1-a) for p <= a and
  a(1-p) for p >= a

A negative conditional difference S_f(rho) - S_f(rho_reduced) certifies
entanglement for any such f.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bipartite import BipartiteDensity, partial_trace
from .hermitian import Spectrum, eigenvalues

LN2 = float(np.log(2.0))
DOMAIN_TOL = 1e-12
SUM_TOL = 1e-8

_KINDS = ("von_neumann", "tsallis", "peaked", "peaked_limit")


def _log_cosh(z: np.ndarray) -> np.ndarray:
    """ln cosh(z), stable for any magnitude of z.

    For small |z| uses log1p(2 sinh^2(z/2)) which has no cancellation; for
    large |z| uses |z| - ln 2 + log1p(exp(-2|z|)) to avoid cosh overflow.
    """
    az = np.abs(np.asarray(z, dtype=float))
    big = az > 30.0
    safe = np.where(big, 0.0, az)
    small_branch = np.log1p(2.0 * np.sinh(safe / 2.0) ** 2)
    capped = np.where(big, az, 3.0)
    big_branch = capped - LN2 + np.log1p(np.exp(-2.0 * np.minimum(capped, 360.0)))
    return np.where(big, big_branch, small_branch)


def log_cosh_kernel(x, t: float) -> np.ndarray:
    """K_t(x) = -ln(cosh(t x)) / (2 t); smooth, concave, -> -|x|/2 as t grows."""
    return -_log_cosh(t * np.asarray(x, dtype=float)) / (2.0 * t)


@dataclass(frozen=True)
class EntropicFamily:
    """Descriptor of one concave f. Use the classmethod constructors."""

    kind: str
    q: float | None = None
    alpha: float | None = None
    t: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown entropy kind {self.kind!r}")
        if self.kind == "tsallis":
            if self.q is None or self.q <= 0:
                raise ValueError("tsallis requires q > 0")
        if self.kind in ("peaked", "peaked_limit"):
            if self.alpha is None or not 0.0 <= self.alpha <= 1.0:
                raise ValueError("peaked families require 0 <= alpha <= 1")
        if self.kind == "peaked":
            if self.t is None or self.t <= 0:
                raise ValueError("peaked requires t > 0")

    @classmethod
    def von_neumann(cls) -> "EntropicFamily":
        return cls("von_neumann")

    @classmethod
    def tsallis(cls, q: float) -> "EntropicFamily":
        return cls("tsallis", q=float(q))

    @classmethod
    def peaked(cls, alpha: float, t: float) -> "EntropicFamily":
        return cls("peaked", alpha=float(alpha), t=float(t))

    @classmethod
    def peaked_limit(cls, alpha: float) -> "EntropicFamily":
        return cls("peaked_limit", alpha=float(alpha))

    @property
    def label(self) -> str:
        if self.kind == "von_neumann":
            return "von-neumann"
        if self.kind == "tsallis":
            return f"tsallis[q={self.q:g}]"
        if self.kind == "peaked":
            return f"peaked[alpha={self.alpha:g},t={self.t:g}]"
        return f"peaked-limit[alpha={self.alpha:g}]"


def f_eval(family: EntropicFamily, p):
    """Evaluate f on probabilities p (scalar or array) in [0, 1].

    Values outside [0, 1] by more than DOMAIN_TOL raise; values inside the
    tolerance band are clipped. f(0) = f(1) = 0 holds exactly for every
    family (by continuous extension where needed).
    """
    arr = np.asarray(p, dtype=float)
    if np.any(arr < -DOMAIN_TOL) or np.any(arr > 1.0 + DOMAIN_TOL):
        bad = arr[(arr < -DOMAIN_TOL) | (arr > 1.0 + DOMAIN_TOL)]
        raise ValueError(f"probability outside [0,1]: {bad.flat[0]!r}")
    arr = np.clip(arr, 0.0, 1.0)
    out = _f_eval_clipped(family, arr)
    if np.ndim(p) == 0:
        return float(out)
    return out


def _f_eval_clipped(family: EntropicFamily, arr: np.ndarray) -> np.ndarray:
    if family.kind == "von_neumann":
        safe = np.where(arr > 0.0, arr, 1.0)
        return -safe * np.log(safe) * (arr > 0.0)
    if family.kind == "tsallis":
        q = family.q
        if q == 1.0:
            return _f_eval_clipped(EntropicFamily.von_neumann(), arr)
        if abs(q - 1.0) < 1e-6:
            # p - p^q cancels near q = 1; rewrite via expm1((q-1) ln p)
            safe = np.where(arr > 0.0, arr, 1.0)
            return -safe * np.expm1((q - 1.0) * np.log(safe)) / (q - 1.0) * (arr > 0.0)
        return (arr - arr**q) / (q - 1.0)
    if family.kind == "peaked":
        a, t = family.alpha, family.t
        return (
            log_cosh_kernel(arr - a, t)
            - (1.0 - arr) * log_cosh_kernel(-a, t)
            - arr * log_cosh_kernel(1.0 - a, t)
        )
    # peaked_limit: collapses to 0 identically at alpha in {0, 1}
    a = family.alpha
    if a == 0.0 or a == 1.0:
        return np.zeros_like(arr)
    return np.where(arr <= a, arr * (1.0 - a), a * (1.0 - arr))


def entropy(family: EntropicFamily, spectrum: Spectrum) -> float:
    """S_f = sum_i f(p_i) over a density spectrum (zero eigenvalues allowed)."""
    values = spectrum.values
    if abs(spectrum.trace - 1.0) > SUM_TOL:
        raise ValueError(f"spectrum sums to {spectrum.trace!r}, expected 1")
    if values[-1] < -SUM_TOL:
        raise ValueError(f"spectrum has negative weight {values[-1]!r}")
    values = np.clip(values, 0.0, 1.0)
    return float(np.sum(_f_eval_clipped(family, values)))


@dataclass(frozen=True)
class ConditionalReport:
    """S_f of the full state against one subsystem, with the sign-preserving
    normalized variant used for plotting."""

    s_rho: float
    s_reduced: float
    difference: float
    normalized: float
    family: EntropicFamily
    side: str


def _normalizer(family: EntropicFamily, full: Spectrum, reduced: Spectrum) -> float:
    if family.kind == "tsallis":
        vals = np.clip(reduced.values, 0.0, 1.0)
        return float(np.sum(vals**family.q))
    if family.kind == "peaked":
        # |trace of the log-cosh kernel shifted to alpha| over the full state;
        # strictly positive except for the exactly uniform spectrum at alpha = 1/D
        return abs(float(np.sum(log_cosh_kernel(full.values - family.alpha, family.t))))
    return 1.0


def conditional_from_spectra(
    family: EntropicFamily, full: Spectrum, reduced: Spectrum, side: str = "A"
) -> ConditionalReport:
    """Conditional difference S_f(full) - S_f(reduced) from known spectra."""
    s_rho = entropy(family, full)
    s_red = entropy(family, reduced)
    diff = s_rho - s_red
    norm = _normalizer(family, full, reduced)
    normalized = diff / norm if norm > 0.0 else 0.0
    return ConditionalReport(s_rho, s_red, diff, normalized, family, side)


def conditional(family: EntropicFamily, rho: BipartiteDensity, side: str = "A") -> ConditionalReport:
    """Conditional difference for a density operator; negative certifies
    entanglement."""
    full = eigenvalues(rho.op)
    reduced = eigenvalues(partial_trace(rho, keep=side))
    return conditional_from_spectra(family, full, reduced, side)


def tsallis_q2_limit_check(rho: BipartiteDensity, t_small: float, alpha: float = 0.5) -> float:
    """Max deviation of S_peaked(alpha, t)/(t/4) from the q=2 Tsallis entropy
    over the full state and its A-reduction.

    As t -> 0 the peaked family becomes alpha-independent and proportional to
    the q = 2 Tsallis form; the deviation shrinks as O(t^2).
    """
    if t_small > 1e-2:
        raise ValueError(f"t_small must be <= 1e-2, got {t_small}")
    peaked = EntropicFamily.peaked(alpha, t_small)
    q2 = EntropicFamily.tsallis(2.0)
    full = eigenvalues(rho.op)
    reduced = eigenvalues(partial_trace(rho, keep="A"))
    worst = 0.0
    for spec in (full, reduced):
        dev = abs(entropy(peaked, spec) / (t_small / 4.0) - entropy(q2, spec))
        worst = max(worst, dev)
    return worst
