"""Accuracy and speed figures of merit: NMSE%, D_VT statistics, speed-up ratio."""
from dataclasses import asdict, dataclass
import csv
import io
from pathlib import Path
from typing import List, Sequence

import numpy as np

from .errors import DataError, MeasurementError

NORMALIZATIONS = ("energy", "variance")
AGGREGATIONS = ("median", "min", "mean")


def _pair(a, b, min_len=1):
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.shape != b.shape:
        raise DataError(f"length mismatch: {a.size} vs {b.size}")
    if a.size < min_len:
        raise DataError(f"need at least {min_len} samples, got {a.size}")
    return a, b


def nmse_percent(z_ref, z_pred, normalization: str = "energy") -> float:
    """100 * sum((ref - pred)^2) / sum(ref^2).

    ``normalization="variance"`` divides by sum((ref - mean(ref))^2) instead.
    """
    z_ref, z_pred = _pair(z_ref, z_pred)
    if normalization == "energy":
        denom = float(z_ref @ z_ref)
    elif normalization == "variance":
        c = z_ref - z_ref.mean()
        denom = float(c @ c)
    else:
        raise DataError(f"unknown NMSE normalization {normalization!r}")
    if denom <= 0:
        raise DataError("reference signal has zero energy; NMSE is undefined")
    d = z_ref - z_pred
    return 100.0 * float(d @ d) / denom


@dataclass
class Histogram:
    edges: List[float]
    mass: List[float]

    @property
    def centers(self) -> List[float]:
        e = np.asarray(self.edges)
        return list(0.5 * (e[:-1] + e[1:]))

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bin_center", "normalized_count"])
        for c, p in zip(self.centers, self.mass):
            w.writerow([repr(float(c)), repr(float(p))])
        return buf.getvalue()


@dataclass
class EvalReport:
    nmse_percent: float
    dvt_mean: float
    dvt_abs_mean: float
    dvt_std: float
    histogram: Histogram
    n: int

    def to_dict(self) -> dict:
        return asdict(self)


def dvt_stats(vt_ref, vt_pred, bins: int = 30) -> dict:
    """D_VT = ref - pred: mean, |mean|, sample std (n-1) and a normalized histogram.

    Bins are equal width over [min, max], right-open except the last. A sample
    whose spread is at rounding level is binned over [min - 0.5, max + 0.5].
    """
    vt_ref, vt_pred = _pair(vt_ref, vt_pred, min_len=2)
    if bins < 1:
        raise DataError(f"bins must be >= 1, got {bins}")
    d = vt_ref - vt_pred
    lo, hi = float(d.min()), float(d.max())
    if hi - lo <= 4 * bins * np.finfo(float).eps * max(abs(lo), abs(hi)):
        # zero or rounding-level spread: widen like numpy does for a constant sample
        lo, hi = lo - 0.5, hi + 0.5
    try:
        counts, edges = np.histogram(d, bins=bins, range=(lo, hi))
    except ValueError:
        # subnormal spread: edges collapse
        counts, edges = np.histogram(d, bins=bins, range=(lo - 0.5, hi + 0.5))
    mean = float(d.mean())
    return {
        "dvt_mean": mean,
        "dvt_abs_mean": abs(mean),
        "dvt_std": float(d.std(ddof=1)),
        "histogram": Histogram(list(map(float, edges)), list(map(float, counts / d.size))),
        "n": int(d.size),
    }


def evaluate(vt_ref, vt_pred, bins: int = 30, normalization: str = "energy") -> EvalReport:
    return EvalReport(nmse_percent=nmse_percent(vt_ref, vt_pred, normalization),
                      **dvt_stats(vt_ref, vt_pred, bins))


@dataclass
class TimingReport:
    rt_ref: float
    rt_pred: float
    sur: float
    repetitions: int = 1
    warmups: int = 0
    aggregation: str = "median"

    def to_dict(self) -> dict:
        return asdict(self)


def speedup_ratio(rt_ref: float, rt_pred: float, repetitions: int = 1, warmups: int = 0,
                  aggregation: str = "median") -> TimingReport:
    """SUR = reference runtime / surrogate runtime."""
    if not rt_ref > 0 or not rt_pred > 0:
        raise MeasurementError(f"runtimes must be positive, got rt_ref={rt_ref}, rt_pred={rt_pred}")
    if aggregation not in AGGREGATIONS:
        raise DataError(f"unknown aggregation {aggregation!r}")
    return TimingReport(float(rt_ref), float(rt_pred), rt_ref / rt_pred, repetitions, warmups, aggregation)


def mean_sur(reports: Sequence[TimingReport]) -> float:
    """Arithmetic mean of per-signal SURs (not the ratio of mean runtimes)."""
    if not reports:
        raise DataError("no timing reports")
    return float(np.mean([r.sur for r in reports]))


def write_histogram_csv(hist: Histogram, path) -> None:
    Path(path).write_text(hist.to_csv_text(), encoding="utf-8", newline="")
