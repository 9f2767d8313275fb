"""Cohort-level robustness statistics.

Accuracy numbers on a handful of sequences say little about how often a
tracking system fails. This module aggregates per-sequence metric
records into the distribution-level views that make robustness visible:

- per-sequence medians over repeated runs (tracking front ends are
  randomized, so single runs are noisy),
- cumulative distributions of the medians over a threshold grid,
- sorted per-sequence values for bar plots,
- detection of the failure gap: the large multiplicative jump that
  separates sequences the system handled from sequences it broke on,
- a success rate based on how much of each sequence stayed tracked,
- rank correlations between motion attributes and metric values.

Sequences where association produced nothing (total tracking failure)
carry NaN metrics and tracked_fraction 0; they are excluded from the
metric distributions but still count as failures in the success rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import UndefinedCorrelationError, ValidationError
from .trajstats import SequenceStats

__all__ = [
    "MetricRecord",
    "SequenceResult",
    "CohortSummary",
    "Gap",
    "METRIC_FIELDS",
    "ATTRIBUTE_FIELDS",
    "aggregate_runs",
    "cdf",
    "default_thresholds",
    "detect_gap",
    "success_rate",
    "spearman",
    "summarize",
]

METRIC_FIELDS = ("ate_rmse", "rpe_trans", "rpe_rot")
ATTRIBUTE_FIELDS = ("mean_vel_per_frame", "mean_ang_vel_per_frame", "frame_count", "path_length")

DEFAULT_MIN_TRACKED = 0.9
DEFAULT_GAP_RATIO_MIN = 5.0
CDF_GRID_POINTS = 50


@dataclass(frozen=True)
class MetricRecord:
    """Metric values of one evaluation run; NaN marks an unavailable value."""

    ate_rmse: float
    rpe_trans: float
    rpe_rot: float
    tracked_fraction: float

    def __post_init__(self):
        tf = self.tracked_fraction
        if not (math.isnan(tf) or 0.0 <= tf <= 1.0):
            raise ValidationError(f"tracked_fraction must lie in [0, 1], got {tf}")


@dataclass(frozen=True)
class SequenceResult:
    """All runs of one sequence plus their per-field median and attributes."""

    sequence_id: str
    runs: tuple[MetricRecord, ...]
    median_record: MetricRecord
    stats: SequenceStats

    @classmethod
    def from_runs(
        cls, sequence_id: str, runs: Sequence[MetricRecord], stats: SequenceStats
    ) -> "SequenceResult":
        return cls(sequence_id, tuple(runs), aggregate_runs(runs), stats)


class Gap(NamedTuple):
    threshold: float
    ratio: float


@dataclass(frozen=True)
class CohortSummary:
    """Everything the robustness protocol derives from a cohort."""

    results: tuple[SequenceResult, ...]
    cdf_tables: dict[str, tuple[tuple[float, float], ...]]
    sorted_bars: dict[str, tuple[float, ...]]
    gap: dict[str, Gap | None]
    success_rate: float
    correlations: tuple[tuple[str, str, float], ...]
    excluded: tuple[str, ...]


def _median(values: Sequence[float]) -> float:
    """Median over the finite values; even counts average the central two."""
    finite = sorted(v for v in values if not math.isnan(v))
    if not finite:
        return math.nan
    k = len(finite)
    mid = k // 2
    if k % 2 == 1:
        return finite[mid]
    return 0.5 * (finite[mid - 1] + finite[mid])


def aggregate_runs(runs: Sequence[MetricRecord]) -> MetricRecord:
    """Per-field median over repeated runs of one sequence.

    Fields aggregate independently; NaN entries (runs where a value was
    unavailable) are left out of that field's median.
    """
    if not runs:
        raise ValidationError("aggregate_runs needs at least one run")
    return MetricRecord(
        ate_rmse=_median([r.ate_rmse for r in runs]),
        rpe_trans=_median([r.rpe_trans for r in runs]),
        rpe_rot=_median([r.rpe_rot for r in runs]),
        tracked_fraction=_median([r.tracked_fraction for r in runs]),
    )


def cdf(
    values: Sequence[float], thresholds: Sequence[float]
) -> tuple[tuple[float, float], ...]:
    """Fraction of values <= threshold, for each threshold.

    Thresholds must be ascending. The fractions are non-decreasing and
    reach 1.0 once the largest value is covered.
    """
    vals = [float(v) for v in values]
    if not vals:
        raise ValidationError("cdf needs at least one value")
    thr = [float(t) for t in thresholds]
    if any(b < a for a, b in zip(thr, thr[1:])):
        raise ValidationError("thresholds must be ascending")
    svals = sorted(vals)
    n = len(svals)
    out = []
    for t in thr:
        # rightmost position where value <= t
        k = np.searchsorted(svals, t, side="right")
        out.append((t, float(k) / n))
    return tuple(out)


def default_thresholds(values: Sequence[float], points: int = CDF_GRID_POINTS) -> tuple[float, ...]:
    """Log-spaced grid from min(values)/2 to 2*max(values).

    Cumulative plots of tracking error read best on a log axis. Zeros
    in the input (perfect runs) cannot anchor a log grid, so the lower
    end falls back to half the smallest positive value, and an all-zero
    input degenerates to the single threshold 0.0.
    """
    vals = [float(v) for v in values]
    if not vals:
        raise ValidationError("default_thresholds needs at least one value")
    if any(v < 0 for v in vals):
        raise ValidationError("threshold grid expects non-negative values")
    top = max(vals)
    if top == 0.0:
        return (0.0,)
    positive = [v for v in vals if v > 0.0]
    lo = min(positive) / 2.0
    hi = 2.0 * top
    if lo == hi:
        return (hi,)
    return tuple(float(t) for t in np.geomspace(lo, hi, points))


def detect_gap(
    values: Sequence[float], gap_ratio_min: float = DEFAULT_GAP_RATIO_MIN
) -> Gap | None:
    """Find the failure gap in a set of positive metric values.

    Sorts ascending and takes the largest ratio between consecutive
    values. A ratio of at least gap_ratio_min marks a gap; the reported
    threshold is the geometric mean of the two values around it (the
    midpoint on a log axis). Returns None when no gap qualifies or when
    fewer than 4 values are given.
    """
    vals = [float(v) for v in values]
    if any(v <= 0.0 for v in vals):
        raise ValidationError("gap detection needs strictly positive values (log scale)")
    if len(vals) < 4:
        return None
    vals.sort()
    best_ratio = 0.0
    best_i = -1
    for i in range(len(vals) - 1):
        ratio = vals[i + 1] / vals[i]
        if ratio > best_ratio:
            best_ratio = ratio
            best_i = i
    if best_ratio < gap_ratio_min:
        return None
    threshold = math.sqrt(vals[best_i] * vals[best_i + 1])
    return Gap(threshold, best_ratio)


def success_rate(
    results: Sequence[SequenceResult], min_tracked: float = DEFAULT_MIN_TRACKED
) -> float:
    """Fraction of sequences whose median tracked_fraction reaches min_tracked.

    The boundary is inclusive: a sequence tracked exactly min_tracked
    of its frames counts as a success.
    """
    if not results:
        raise ValidationError("success_rate needs at least one sequence result")
    ok = sum(1 for r in results if r.median_record.tracked_fraction >= min_tracked)
    return ok / len(results)


def _ranks(values: Sequence[float]) -> np.ndarray:
    """Ranks 1..n with ties receiving the average of their positions."""
    a = np.asarray(values, dtype=float)
    order = np.argsort(a, kind="stable")
    ranks = np.empty(len(a))
    i = 0
    while i < len(a):
        j = i
        while j + 1 < len(a) and a[order[j + 1]] == a[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rank correlation with average ranks for ties.

    Tie-free inputs use the exact rank-difference formula
    1 - 6 sum(d^2) / (n (n^2 - 1)); ties fall back to the Pearson
    correlation of the rank vectors. Raises ValidationError on length
    mismatch or fewer than 3 points, UndefinedCorrelationError when an
    input has zero rank variance (all values equal).
    """
    if len(xs) != len(ys):
        raise ValidationError(f"length mismatch: {len(xs)} vs {len(ys)}")
    n = len(xs)
    if n < 3:
        raise ValidationError(f"spearman needs at least 3 points, got {n}")
    rx = _ranks(xs)
    ry = _ranks(ys)
    if np.all(rx == rx[0]) or np.all(ry == ry[0]):
        raise UndefinedCorrelationError("an input has no rank variance")

    ties = len(np.unique(rx)) < n or len(np.unique(ry)) < n
    if not ties:
        d = rx - ry
        return 1.0 - 6.0 * float(np.dot(d, d)) / (n * (n * n - 1))
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    return float(np.dot(dx, dy) / math.sqrt(np.dot(dx, dx) * np.dot(dy, dy)))


def summarize(
    results: Sequence[SequenceResult],
    min_tracked: float = DEFAULT_MIN_TRACKED,
    gap_ratio_min: float = DEFAULT_GAP_RATIO_MIN,
) -> CohortSummary:
    """Build the full cohort summary from per-sequence results.

    Per metric, sequences with a finite median contribute to the CDF,
    bar, and gap views; totally failed sequences are excluded there
    (and listed) but count against the success rate. Gap detection runs
    only when every contributing value is positive, since an exact zero
    breaks the log-scale ratio test. Correlations pair every attribute
    with every metric over the sequence medians; pairs whose rank
    correlation is undefined are omitted.
    """
    if not results:
        raise ValidationError("summarize needs at least one sequence result")
    results = tuple(results)

    excluded = tuple(
        r.sequence_id
        for r in results
        if all(math.isnan(getattr(r.median_record, m)) for m in METRIC_FIELDS)
    )

    cdf_tables: dict[str, tuple[tuple[float, float], ...]] = {}
    sorted_bars: dict[str, tuple[float, ...]] = {}
    gaps: dict[str, Gap | None] = {}
    for metric in METRIC_FIELDS:
        vals = [
            getattr(r.median_record, metric)
            for r in results
            if not math.isnan(getattr(r.median_record, metric))
        ]
        if not vals:
            cdf_tables[metric] = ()
            sorted_bars[metric] = ()
            gaps[metric] = None
            continue
        sorted_bars[metric] = tuple(sorted(vals))
        cdf_tables[metric] = cdf(vals, default_thresholds(vals))
        if len(vals) >= 4 and all(v > 0.0 for v in vals):
            gaps[metric] = detect_gap(vals, gap_ratio_min)
        else:
            gaps[metric] = None

    correlations: list[tuple[str, str, float]] = []
    for attribute in ATTRIBUTE_FIELDS:
        for metric in METRIC_FIELDS:
            points = [
                (getattr(r.stats, attribute), getattr(r.median_record, metric))
                for r in results
                if not math.isnan(getattr(r.median_record, metric))
            ]
            if len(points) < 3:
                continue
            xs = [p[0] for p in points]
            ys = [p[1] for p in points]
            try:
                rho = spearman(xs, ys)
            except UndefinedCorrelationError:
                continue
            correlations.append((attribute, metric, rho))

    return CohortSummary(
        results=results,
        cdf_tables=cdf_tables,
        sorted_bars=sorted_bars,
        gap=gaps,
        success_rate=success_rate(results, min_tracked),
        correlations=tuple(correlations),
        excluded=excluded,
    )
