"""Spectral predictions and desk-scale diagnostics: predicted interval
unions, eigenvalue fill metrics, outlier counts, counting-function
comparisons, and Schatten-decay verdicts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError
from .specfun import check_alpha, pi_alpha

__all__ = [
    "SpectralInterval",
    "PredictedSpectrum",
    "SpectralReport",
    "predict",
    "analyze",
    "CountRow",
    "counting_compare",
    "SchattenDiagnostic",
    "schatten_diagnostic",
]

DEFAULT_DELTA_FACTOR = 0.05
DEFAULT_MARGIN_FACTOR = 0.1


@dataclass(frozen=True)
class SpectralInterval:
    lo: float
    hi: float
    multiplicity: int
    origin: str  # "zero_end", "infinity_end" or "both"

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack

    def distance(self, x: float) -> float:
        return max(self.lo - x, x - self.hi, 0.0)


@dataclass(frozen=True)
class PredictedSpectrum:
    """Union of closed intervals, each with 0 as one endpoint (an interval
    with negative endpoint c is stored as [c, 0])."""

    intervals: Tuple[SpectralInterval, ...]

    @property
    def max_endpoint(self) -> float:
        return max((max(abs(i.lo), abs(i.hi)) for i in self.intervals), default=0.0)

    def distance(self, x: float) -> float:
        if not self.intervals:
            return abs(x)
        return min(i.distance(x) for i in self.intervals)

    def as_dict(self):
        return [
            {"lo": i.lo, "hi": i.hi, "multiplicity": i.multiplicity}
            for i in self.intervals
        ]


def predict(alpha, a0, a_inf, b0, b_inf) -> PredictedSpectrum:
    """Predicted a.c. spectrum of the weighted Hankel operator:
    [0, pi_alpha a0 b0^2] union [0, pi_alpha a_inf b_inf^2].

    Degenerate intervals (zero endpoint) are dropped; a negative endpoint
    orients the interval as [c, 0]; coinciding intervals merge with
    multiplicity two (the exactly diagonalisable case).
    """
    a = check_alpha(alpha)
    pa = pi_alpha(a)
    ends = [
        (pa * float(a0) * float(b0) ** 2, "zero_end"),
        (pa * float(a_inf) * float(b_inf) ** 2, "infinity_end"),
    ]
    ends = [(c, origin) for c, origin in ends if c != 0.0]
    intervals: List[SpectralInterval] = []
    if len(ends) == 2 and math.isclose(ends[0][0], ends[1][0], rel_tol=1e-12, abs_tol=0.0):
        c = ends[0][0]
        intervals.append(
            SpectralInterval(lo=min(0.0, c), hi=max(0.0, c), multiplicity=2, origin="both")
        )
    else:
        for c, origin in ends:
            intervals.append(
                SpectralInterval(lo=min(0.0, c), hi=max(0.0, c), multiplicity=1, origin=origin)
            )
    return PredictedSpectrum(intervals=tuple(intervals))


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: np.ndarray  # ascending
    predicted: PredictedSpectrum
    fill_max_gap: float
    outliers: Tuple[float, ...]
    hausdorff: float
    counting_table: Tuple[Tuple[float, int, Tuple[bool, ...]], ...]
    delta: float
    interior_margin: float

    def as_dict(self):
        return {
            "predicted": self.predicted.as_dict(),
            "max_gap": self.fill_max_gap,
            "outliers": list(self.outliers),
            "hausdorff": self.hausdorff,
            "delta": self.delta,
            "interior_margin": self.interior_margin,
        }


def _interval_fill_gap(eigs: np.ndarray, lo: float, hi: float) -> float:
    inside = eigs[(eigs >= lo) & (eigs <= hi)]
    if inside.size == 0:
        return hi - lo
    if inside.size == 1:
        return 0.0
    return float(np.diff(inside).max())


def _interval_hausdorff(eigs: np.ndarray, lo: float, hi: float) -> float:
    """sup over the interval of the distance to the eigenvalue set."""
    if eigs.size == 0:
        return hi - lo
    candidates = [lo, hi]
    inside = eigs[(eigs > lo) & (eigs < hi)]
    pts = np.concatenate([[lo], inside, [hi]])
    candidates.extend(0.5 * (pts[1:] + pts[:-1]))
    worst = 0.0
    for c in candidates:
        c = min(max(c, lo), hi)
        worst = max(worst, float(np.abs(eigs - c).min()))
    return worst


def analyze(
    eigs: Sequence[float],
    predicted: PredictedSpectrum,
    delta: Optional[float] = None,
    interior_margin: Optional[float] = None,
    counting_points: int = 21,
) -> SpectralReport:
    """Compare an eigenvalue list against a predicted interval union.

    Outliers are eigenvalues farther than ``delta`` from the union;
    ``fill_max_gap`` is the largest gap between consecutive eigenvalues inside
    each interval shrunk by ``interior_margin`` at both ends (the full shrunk
    length when it holds no eigenvalue); ``hausdorff`` is the one-sided
    Hausdorff distance from the shrunk union to the eigenvalue set.  Defaults:
    delta = 0.05 and margin = 0.1 times the largest endpoint magnitude.
    """
    eigs = np.sort(np.asarray(eigs, dtype=float))
    if eigs.size == 0:
        raise DomainError("analyze requires a non-empty eigenvalue list")
    scale = predicted.max_endpoint
    if delta is None:
        delta = DEFAULT_DELTA_FACTOR * scale
    if interior_margin is None:
        interior_margin = DEFAULT_MARGIN_FACTOR * scale
    if not (delta > 0.0 and interior_margin > 0.0):
        raise DomainError("delta and interior_margin must be positive")

    outliers = tuple(float(e) for e in eigs if predicted.distance(float(e)) > delta)

    max_gap = 0.0
    hausdorff = 0.0
    for iv in predicted.intervals:
        slo, shi = iv.lo + interior_margin, iv.hi - interior_margin
        if shi <= slo:
            continue
        max_gap = max(max_gap, _interval_fill_gap(eigs, slo, shi))
        hausdorff = max(hausdorff, _interval_hausdorff(eigs, slo, shi))

    lo = min((iv.lo for iv in predicted.intervals), default=0.0)
    hi = max((iv.hi for iv in predicted.intervals), default=0.0)
    lam_grid = np.linspace(lo, hi, counting_points)
    table = tuple(
        (
            float(lam),
            int((eigs > lam).sum()),
            tuple(iv.contains(float(lam)) for iv in predicted.intervals),
        )
        for lam in lam_grid
    )
    return SpectralReport(
        eigenvalues=eigs,
        predicted=predicted,
        fill_max_gap=float(max_gap),
        outliers=outliers,
        hausdorff=float(hausdorff),
        counting_table=table,
        delta=float(delta),
        interior_margin=float(interior_margin),
    )


@dataclass(frozen=True)
class CountRow:
    lam: float
    n_full: int
    n_zero: int
    n_infinity: int

    @property
    def discrepancy(self) -> int:
        return abs(self.n_full - self.n_zero - self.n_infinity)


def counting_compare(full, block0, block_inf, lam_grid) -> List[CountRow]:
    """Counting functions N(lam) = #{eigenvalues > lam} of the full operator
    and its two diagonal blocks; the discrepancy exhibits the two-block split
    of the spectrum (a trace-class coupling moves O(1) eigenvalues per
    window)."""
    full = np.asarray(full, dtype=float)
    b0 = np.asarray(block0, dtype=float)
    bi = np.asarray(block_inf, dtype=float)
    rows = []
    for lam in np.asarray(lam_grid, dtype=float):
        rows.append(
            CountRow(
                lam=float(lam),
                n_full=int((full > lam).sum()),
                n_zero=int((b0 > lam).sum()),
                n_infinity=int((bi > lam).sum()),
            )
        )
    return rows


@dataclass(frozen=True)
class SchattenDiagnostic:
    p_fit: float
    nuclear_partial: Tuple[float, ...]
    verdict: str
    n_used: int
    half_slopes: Tuple[float, float]


def _slope(logk: np.ndarray, logs: np.ndarray) -> float:
    return float(np.polyfit(logk, logs, 1)[0])


def schatten_diagnostic(sigma, floor: float) -> SchattenDiagnostic:
    """Classify singular-value decay above ``floor``.

    Verdicts: ``super_polynomial`` when the log-log slope steepens (or
    flattens into the noise floor) by more than 1 between the first and second
    half of the data, ``non_summable_suspect`` when the overall slope is
    >= -1, ``polynomial`` otherwise, ``insufficient_data`` with fewer than 5
    usable values.
    """
    sigma = np.asarray(sigma, dtype=float)
    if np.any(np.diff(sigma) > 0.0):
        raise DomainError("singular values must be non-increasing")
    used = sigma[sigma > max(floor, 0.0)]
    partial = tuple(float(s) for s in np.cumsum(sigma))
    if used.size < 5:
        return SchattenDiagnostic(
            p_fit=float("nan"),
            nuclear_partial=partial,
            verdict="insufficient_data",
            n_used=int(used.size),
            half_slopes=(float("nan"), float("nan")),
        )
    k = np.arange(1, used.size + 1, dtype=float)
    logk, logs = np.log(k), np.log(used)
    p_fit = _slope(logk, logs)
    mid = used.size // 2
    s1 = _slope(logk[:mid], logs[:mid]) if mid >= 2 else p_fit
    s2 = _slope(logk[mid:], logs[mid:])
    if abs(s1 - s2) > 1.0:
        verdict = "super_polynomial"
    elif p_fit >= -1.0:
        verdict = "non_summable_suspect"
    else:
        verdict = "polynomial"
    return SchattenDiagnostic(
        p_fit=p_fit,
        nuclear_partial=partial,
        verdict=verdict,
        n_used=int(used.size),
        half_slopes=(s1, s2),
    )
