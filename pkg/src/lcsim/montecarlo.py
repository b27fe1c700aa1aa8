"""Replicated Monte-Carlo estimation of LCS length statistics.

Replicate ``i`` of an experiment always draws from RNG stream
``base + i``, and results are aggregated in replicate order, so every
estimate is a pure function of the master seed no matter how many worker
threads execute it.  The LCS kernels release the GIL, which is where the
time goes, so plain threads parallelize well.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import lcs_wmmm
from .errors import ValidationError
from .generate import RngHandle

__all__ = [
    "SampleStats",
    "RegressionFit",
    "estimate_stats",
    "variance_scan",
    "fit_power_law",
    "histogram",
    "SCAN_CSV_HEADER",
]

SCAN_CSV_HEADER = "n,reps,mean,variance,stderr"
SCAN_CSV_SCHEMA = "lcsim.scan/1"


@dataclass(frozen=True)
class SampleStats:
    """Summary of one replicated LCS-length sample."""

    n: int
    reps: int
    mean: float
    variance: float
    std_error_mean: float
    histogram: tuple | None = None

    def csv_row(self) -> str:
        return f"{self.n},{self.reps},{self.mean!r},{self.variance!r},{self.std_error_mean!r}"


@dataclass(frozen=True)
class RegressionFit:
    """Power law ``variance ~ coeff * n**slope`` fitted on log-log scale."""

    slope: float
    intercept_coeff: float
    r_squared: float
    points_used: int

    def summary(self) -> str:
        return (
            f"fit: variance ~ {self.intercept_coeff:.6g} * n^{self.slope:.6g} "
            f"(r_squared={self.r_squared:.6f}, points={self.points_used})"
        )


def _default_threads() -> int:
    return min(32, os.cpu_count() or 1)


def _replicate_lengths(gen, reps: int, rng: RngHandle, threads: int | None) -> np.ndarray:
    """LCS length of one fresh pair per replicate; slot i uses stream base+i."""
    if not isinstance(rng, RngHandle):
        raise ValidationError("replicated estimation requires an RngHandle (seedable streams)")
    workers = _default_threads() if threads is None else max(1, int(threads))
    out = np.empty(reps, dtype=np.int64)

    def one(i: int) -> None:
        x, y = gen.sample(rng.stream(i).generator())
        out[i] = lcs_wmmm(x, y)

    if workers == 1 or reps == 1:
        for i in range(reps):
            one(i)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(one, range(reps)))
    return out


def summarize(n: int, lengths: np.ndarray, histogram_bins: int | None = None) -> SampleStats:
    """Two-pass mean/variance summary of raw replicate lengths."""
    reps = int(lengths.shape[0])
    if reps < 2:
        raise ValidationError(f"need at least 2 replicates, got {reps}")
    values = lengths.astype(np.float64)
    mean = float(values.mean())
    variance = float(np.sum((values - mean) ** 2) / (reps - 1))
    hist = None
    if histogram_bins is not None:
        counts, edges = histogram(values, histogram_bins)
        hist = (tuple(int(c) for c in counts), tuple(float(e) for e in edges))
    return SampleStats(
        n=n,
        reps=reps,
        mean=mean,
        variance=variance,
        std_error_mean=float(np.sqrt(variance / reps)),
        histogram=hist,
    )


def estimate_stats(gen, reps: int, rng: RngHandle, threads: int | None = None,
                   histogram_bins: int | None = None) -> SampleStats:
    """Estimate E and Var of the LCS length of pairs drawn from ``gen``.

    ``gen`` is any pair source: an object with a nominal length ``n`` and
    a ``sample(rng) -> (Sequence, Sequence)`` method.  Deterministic in
    the master seed and independent of ``threads``.
    """
    if reps < 2:
        raise ValidationError(f"need at least 2 replicates, got {reps}")
    lengths = _replicate_lengths(gen, reps, rng, threads)
    return summarize(gen.n, lengths, histogram_bins)


def variance_scan(n_grid, dist, reps: int, rng: RngHandle, threads: int | None = None,
                  csv_path=None):
    """Per-length LCS statistics for i.i.d. pairs over an increasing grid.

    Returns ``[(n, SampleStats), ...]``.  When ``csv_path`` is given the
    rows are appended progressively (header first) so long scans leave a
    usable partial file.  Grid point ``g`` owns streams
    ``[g * reps, (g + 1) * reps)``.
    """
    from .generate import IidPairSource

    grid = [int(n) for n in n_grid]
    if not grid:
        raise ValidationError("n_grid must be nonempty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValidationError(f"n_grid must be strictly increasing, got {grid}")
    sink = None
    if csv_path is not None:
        sink = open(csv_path, "w", encoding="utf-8")
        sink.write(f"# schema={SCAN_CSV_SCHEMA}\n{SCAN_CSV_HEADER}\n")
        sink.flush()
    rows = []
    try:
        for g, n in enumerate(grid):
            source = IidPairSource(n, dist)
            lengths = _replicate_lengths(source, reps, rng.stream(g * reps), threads)
            stats = summarize(n, lengths)
            rows.append((n, stats))
            if sink is not None:
                sink.write(stats.csv_row() + "\n")
                sink.flush()
    finally:
        if sink is not None:
            sink.close()
    return rows


def fit_power_law(points) -> RegressionFit:
    """Least-squares fit of ``log(variance) = log(coeff) + slope*log(n)``.

    ``points`` is an iterable of ``(n, variance)`` with all values
    positive.  Multiplying every variance by a constant scales ``coeff``
    and leaves the slope untouched.
    """
    pts = [(float(n), float(v)) for n, v in points]
    if len(pts) < 2:
        raise ValidationError(f"need at least 2 points to fit, got {len(pts)}")
    if any(n <= 0 or v <= 0 for n, v in pts):
        raise ValidationError("power-law fit requires positive lengths and variances")
    x = np.log([n for n, _ in pts])
    y = np.log([v for _, v in pts])
    if np.ptp(x) == 0:
        raise ValidationError("need at least two distinct n values")
    xm = x.mean()
    ym = y.mean()
    slope = float(np.sum((x - xm) * (y - ym)) / np.sum((x - xm) ** 2))
    intercept = ym - slope * xm
    resid = y - (intercept + slope * x)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - ym) ** 2))
    r_squared = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return RegressionFit(
        slope=slope,
        intercept_coeff=float(np.exp(intercept)),
        r_squared=r_squared,
        points_used=len(pts),
    )


def histogram(samples, bin_count: int):
    """Equal-width binned counts spanning [min, max] of ``samples``.

    Returns ``(counts, edges)`` with ``len(counts) == bin_count`` and
    ``counts.sum() == len(samples)``.
    """
    values = np.asarray(list(samples) if not isinstance(samples, np.ndarray) else samples,
                        dtype=np.float64)
    if values.size == 0:
        raise ValidationError("cannot histogram an empty sample")
    if bin_count < 1:
        raise ValidationError(f"bin_count must be >= 1, got {bin_count}")
    counts, edges = np.histogram(values, bins=bin_count)
    return counts, edges
